//! Fixed-width compressor for marker-free windows.
//!
//! A window that contains no occurrence of the marker `0^t 1^t` cannot use
//! the marker itself as any aligned `2t`-symbol block, so each block ranges
//! over only `q^{2t} - 1` values. Ranking blocks against that reduced
//! alphabet and packing the ranks yields an image strictly shorter than the
//! window, which is what frees up room for the bookkeeping fields spliced in
//! around it.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::pattern::occurrences;
use crate::radix::{digits_to_int, int_to_digits, mixed_radix_pack, mixed_radix_unpack};

/// Rank of the marker among all `2t`-symbol blocks in lexicographic order.
fn marker_value(q: u32, t: usize) -> u64 {
    // 0^t 1^t reads as sum_{i=0}^{t-1} q^i
    let mut val = 0u64;
    let mut pow = 1u64;
    for _ in 0..t {
        val += pow;
        pow *= u64::from(q);
    }
    val
}

fn block_radix(q: u32, t: usize) -> Result<u64> {
    let full = u128::from(q).checked_pow(2 * t as u32);
    match full {
        Some(f) if f - 1 <= u128::from(u64::MAX) => Ok((f - 1) as u64),
        _ => Err(Error::Infeasible(format!(
            "block alphabet q^(2t) with q={q}, t={t} exceeds 64 bits"
        ))),
    }
}

/// Dense rank of a marker-free block `b` of length `2t`: its position in the
/// lexicographic order of all `2t`-symbol blocks with the marker removed.
/// The result is a bijection onto `[0, q^{2t} - 2]`.
pub fn block_rank(b: &[u8], q: u32, t: usize) -> Result<u64> {
    if b.len() != 2 * t {
        return Err(Error::LengthMismatch {
            expected: 2 * t,
            got: b.len(),
        });
    }
    let mut val = 0u64;
    for &s in b {
        if u32::from(s) >= q {
            return Err(Error::SymbolOutOfRange {
                symbol: u32::from(s),
                q,
            });
        }
        val = val * u64::from(q) + u64::from(s);
    }
    let skip = marker_value(q, t);
    match val.cmp(&skip) {
        std::cmp::Ordering::Less => Ok(val),
        std::cmp::Ordering::Equal => Err(Error::PatternFound),
        std::cmp::Ordering::Greater => Ok(val - 1),
    }
}

/// Inverse of [`block_rank`].
pub fn rank_to_block(rank: u64, q: u32, t: usize) -> Result<Vec<u8>> {
    let max = block_radix(q, t)? - 1;
    if rank > max {
        return Err(Error::BlockRankRange { rank, max });
    }
    let skip = marker_value(q, t);
    let val = if rank >= skip { rank + 1 } else { rank };
    let mut out = vec![0u8; 2 * t];
    let mut rest = val;
    for slot in out.iter_mut().rev() {
        *slot = (rest % u64::from(q)) as u8;
        rest /= u64::from(q);
    }
    Ok(out)
}

/// Compress a marker-free window `s` (length a multiple of `2t`) into exactly
/// `width` base-`q` digits, most significant first.
///
/// Fails with [`Error::PatternFound`] if any marker occurrence is present
/// (aligned or not) and with [`Error::CompressorCapacity`] if this particular
/// input does not fit in `width` digits. The caller is responsible for the
/// global capacity inequality; this routine only enforces it per input.
pub fn g_compress(s: &[u8], q: u32, t: usize, width: usize) -> Result<Vec<u8>> {
    if t == 0 || !s.len().is_multiple_of(2 * t) {
        return Err(Error::LengthMismatch {
            expected: 2 * t.max(1),
            got: s.len(),
        });
    }
    if !occurrences(s, t).is_empty() {
        return Err(Error::PatternFound);
    }
    let radix = block_radix(q, t)?;
    let ranks = s
        .chunks_exact(2 * t)
        .map(|b| block_rank(b, q, t))
        .collect::<Result<Vec<u64>>>()?;
    let radices = vec![radix; ranks.len()];
    let packed = mixed_radix_pack(&ranks, &radices)?;
    int_to_digits(&packed, q, width).map_err(|e| match e {
        Error::DigitOverflow { .. } => Error::CompressorCapacity { width },
        other => other,
    })
}

/// Inverse of [`g_compress`]: expand `d` back into `blocks` marker-free
/// blocks of length `2t` each. Fails if the packed integer is out of range
/// for the given block count.
pub fn g_decompress(d: &[u8], q: u32, t: usize, blocks: usize) -> Result<Vec<u8>> {
    let radix = block_radix(q, t)?;
    let value = digits_to_int(d, q)?;
    let ranks = mixed_radix_unpack(&value, &vec![radix; blocks])?;
    let mut out = Vec::with_capacity(2 * t * blocks);
    for rank in ranks {
        out.extend(rank_to_block(rank, q, t)?);
    }
    Ok(out)
}

/// Upper bound on the packed image: `(q^{2t} - 1)^{blocks}`.
pub fn image_bound(q: u32, t: usize, blocks: usize) -> Result<BigUint> {
    Ok(BigUint::from(block_radix(q, t)?).pow(blocks as u32))
}
