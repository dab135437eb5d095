//! Mixed-radix packing and exact digit/logarithm helpers.
//!
//! Everything here is exact integer arithmetic; no floating point is used
//! anywhere in parameter derivation or coding paths.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Pack `values` with per-position `radices`, `values[0]` least significant:
/// `v_0 + v_1 r_0 + v_2 r_0 r_1 + ..`.
pub fn mixed_radix_pack(values: &[u64], radices: &[u64]) -> Result<BigUint> {
    if values.len() != radices.len() {
        return Err(Error::LengthMismatch {
            expected: radices.len(),
            got: values.len(),
        });
    }
    for (index, (&v, &r)) in values.iter().zip(radices).enumerate() {
        if r == 0 || v >= r {
            return Err(Error::RadixValueRange {
                value: v,
                radix: r,
                index,
            });
        }
    }
    let mut acc = BigUint::zero();
    for (&v, &r) in values.iter().zip(radices).rev() {
        acc = acc * r + v;
    }
    Ok(acc)
}

/// Inverse of [`mixed_radix_pack`]; fails if `value` is not below the radix
/// product.
pub fn mixed_radix_unpack(value: &BigUint, radices: &[u64]) -> Result<Vec<u64>> {
    let mut rest = value.clone();
    let mut out = Vec::with_capacity(radices.len());
    for (index, &r) in radices.iter().enumerate() {
        if r == 0 {
            return Err(Error::RadixValueRange {
                value: 0,
                radix: r,
                index,
            });
        }
        let big_r = BigUint::from(r);
        let digit = &rest % &big_r;
        rest /= big_r;
        out.push(u64::try_from(&digit).expect("digit < r fits u64"));
    }
    if !rest.is_zero() {
        return Err(Error::PackedValueRange);
    }
    Ok(out)
}

/// Exactly `width` base-`q` digits, most significant first.
pub fn int_to_digits(value: &BigUint, q: u32, width: usize) -> Result<Vec<u8>> {
    debug_assert!((2..=256).contains(&q));
    let raw = value.to_radix_be(q);
    let raw = if value.is_zero() { Vec::new() } else { raw };
    if raw.len() > width {
        return Err(Error::DigitOverflow { width, q });
    }
    let mut out = vec![0u8; width - raw.len()];
    out.extend_from_slice(&raw);
    Ok(out)
}

/// Interpret most-significant-first base-`q` digits as an integer.
pub fn digits_to_int(digits: &[u8], q: u32) -> Result<BigUint> {
    debug_assert!((2..=256).contains(&q));
    for &d in digits {
        if u32::from(d) >= q {
            return Err(Error::SymbolOutOfRange {
                symbol: u32::from(d),
                q,
            });
        }
    }
    if digits.is_empty() {
        return Ok(BigUint::zero());
    }
    Ok(BigUint::from_radix_be(digits, q).expect("digits validated"))
}

/// Smallest `k` with `base^k >= x` (0 for `x <= 1`). Exact.
pub fn ceil_log_big(base: u64, x: &BigUint) -> usize {
    debug_assert!(base >= 2);
    let mut k = 0usize;
    let mut pow = BigUint::one();
    while pow < *x {
        pow *= base;
        k += 1;
    }
    k
}

pub fn ceil_log(base: u64, x: u64) -> usize {
    ceil_log_big(base, &BigUint::from(x))
}

/// `base^exp` as a big integer.
pub fn big_pow(base: u64, exp: usize) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}
