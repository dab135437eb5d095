//! End-to-end codeword construction and burst-deletion decoding.
//!
//! A codeword is `(x, 0^t 1, s)` where `x` is the marker-dense image of the
//! message, `0^t 1` is a guard separating payload from metadata, and `s` is
//! the base-q serialization of the sketch of `x`. On receipt of a word with
//! up to `t` symbols deleted in one burst, the guard pins down which region
//! the burst hit; a burst inside `x` is undone with the locator plus a
//! single window recovery, and anything else leaves `x` intact.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::dense::{dec_den, enc_den};
use crate::error::{Error, Result};
use crate::locator::locate;
use crate::params::Params;
use crate::sketch::{
    deserialize_sketch, f_sketch, recover_window, serialize_sketch, SketchCache,
};
use crate::word::Word;

/// Encode message `u` (length `n - 1`) into a codeword of length `n + r`.
pub fn encode(u: &Word, params: &Params) -> Result<Word> {
    encode_with_cache(u, params, &mut SketchCache::new())
}

/// [`encode`] reusing a window-sketch cache across calls.
pub fn encode_with_cache(u: &Word, params: &Params, cache: &mut SketchCache) -> Result<Word> {
    let x = enc_den(u, params)?;
    let sk = f_sketch(&x, params, cache)?;
    let digits = serialize_sketch(&sk, params)?;
    let mut z = Vec::with_capacity(params.codeword_len());
    z.extend_from_slice(x.symbols());
    z.extend(std::iter::repeat_n(0u8, params.t));
    z.push(1);
    z.extend_from_slice(&digits);
    debug_assert_eq!(z.len(), params.codeword_len());
    Ok(Word::new_unchecked(params.q, z))
}

/// Decode a received word with a single burst of at most `t` deletions,
/// returning the original message.
pub fn decode(yz: &Word, params: &Params) -> Result<Word> {
    decode_with_cache(yz, params, &mut SketchCache::new())
}

/// [`decode`] reusing a window-sketch cache across calls.
pub fn decode_with_cache(yz: &Word, params: &Params, cache: &mut SketchCache) -> Result<Word> {
    if yz.q() != params.q {
        return Err(Error::AlphabetMismatch {
            left: yz.q(),
            right: params.q,
        });
    }
    let total = params.codeword_len();
    let (n, t) = (params.n, params.t);
    let got = yz.len();
    if got > total || got + t < total {
        return Err(Error::ReceivedLengthRange {
            got,
            min: total - t,
            max: total,
        });
    }
    let t_prime = total - got;
    let y = yz.symbols();
    if t_prime == 0 {
        return dec_den(&Word::new_unchecked(params.q, y[..n].to_vec()), params);
    }

    // where the separator 1 of the guard would land for each burst region
    let sketch_at = n + t + 1 - t_prime;
    let x = match y[n + t - t_prime] {
        1 => {
            if is_guard(&y[n - t_prime..=n + t - t_prime], t) {
                // full guard visible: the burst hit the payload
                recover_body(&y[..n - t_prime], &y[sketch_at..], t_prime, params, cache)?
            } else if let Some(t2) = (1..t_prime).find(|&t2| {
                is_guard(&y[n - t_prime + t2..=n + t - t_prime], t - t2)
                    && y[n - t + t2 - 1] != 0
            }) {
                // burst straddles the payload end and t2 guard zeros
                recover_body(
                    &y[..n - t_prime + t2],
                    &y[sketch_at..],
                    t_prime - t2,
                    params,
                    cache,
                )?
            } else if is_guard(&y[n..=n + t - t_prime], t - t_prime) && y[n - 1] != 0 {
                // burst entirely inside the guard zeros
                Word::new_unchecked(params.q, y[..n].to_vec())
            } else {
                return Err(Error::CaseAnalysisFailed);
            }
        }
        // separator gone: the burst started at or right of it, payload intact
        0 => Word::new_unchecked(params.q, y[..n].to_vec()),
        _ => return Err(Error::CaseAnalysisFailed),
    };
    dec_den(&x, params)
}

fn is_guard(slice: &[u8], zeros: usize) -> bool {
    slice.len() == zeros + 1 && slice[..zeros].iter().all(|&s| s == 0) && slice[zeros] == 1
}

/// Undo a burst of `t_b` deletions inside the payload: locate it, subtract
/// the untouched same-parity window values from the transmitted sum, and
/// rebuild the corrupted window from its recovered sketch value.
fn recover_body(
    y_body: &[u8],
    digits: &[u8],
    t_b: usize,
    params: &Params,
    cache: &mut SketchCache,
) -> Result<Word> {
    debug_assert!(t_b >= 1 && t_b <= params.t);
    let sk = deserialize_sketch(digits, params)?;
    let n = params.n;
    let loc = locate(y_body, params.t, n, sk.a0_mod4, sk.a1_mod2n, t_b)?;
    let windows = params.window_intervals()?;
    let j0 = windows
        .iter()
        .position(|&(lo, hi)| lo <= loc.lo && loc.hi <= hi)
        .map(|idx| idx + 1)
        .ok_or_else(|| {
            Error::LocatorNoCase(format!(
                "interval [{}, {}] fits no sketch window",
                loc.lo, loc.hi
            ))
        })?;
    let (lam, lam_p) = windows[j0 - 1];

    let modulus = params.sketch_modulus();
    let mut sum_others = BigUint::zero();
    for (idx, &(lo, hi)) in windows.iter().enumerate() {
        let j = idx + 1;
        if j == j0 || j % 2 != j0 % 2 {
            continue;
        }
        // same-parity windows are disjoint from window j0: left of it they
        // precede the burst, right of it they are shifted left by t_b
        let content = if j < j0 {
            &y_body[lo - 1..hi]
        } else {
            &y_body[lo - 1 - t_b..hi - t_b]
        };
        sum_others += cache.window(content, params)?.value(params);
    }
    let h_parity = if j0 % 2 == 0 { &sk.h0 } else { &sk.h1 };
    let target = (h_parity + &modulus - sum_others % &modulus) % &modulus;

    let win = recover_window(&y_body[lam - 1..lam_p - t_b], &target, t_b, params)?;
    let mut x = Vec::with_capacity(n);
    x.extend_from_slice(&y_body[..lam - 1]);
    x.extend_from_slice(&win);
    x.extend_from_slice(&y_body[lam_p - t_b..]);
    debug_assert_eq!(x.len(), n);
    Ok(Word::new_unchecked(params.q, x))
}
