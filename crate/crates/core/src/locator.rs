//! Burst localization from marker statistics.
//!
//! A word that is marker-dense splits into short marker-free segments
//! separated by `0^t 1^t` markers. Deleting a burst of `t' <= t` symbols
//! changes the marker count by `delta0 in {-1, 0, 1, 2}` and shifts the
//! position-weighted marker sum in a way that pins down which segment the
//! burst hit. Given the original word's marker count mod 4 and weighted sum
//! mod 2n, `locate` returns an interval of the original coordinates that is
//! guaranteed to contain the deleted positions, of length at most 3·delta
//! whenever the original word really was dense.

use crate::error::{Error, Result};
use crate::pattern::IndicatorProfile;

/// Outcome of burst localization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocatorResult {
    /// Net change in marker count caused by the burst.
    pub delta0: i8,
    /// Index of the segment of the received word the burst was traced to.
    pub i_d: usize,
    /// Inclusive interval `[lo, hi]` of original positions covering the burst.
    pub lo: usize,
    pub hi: usize,
}

/// Locate a burst of `t_prime` deletions inside `y`, the received word of
/// length `n - t_prime`. `a0_mod4` and `a1_mod2n` are the transmitted marker
/// count mod 4 and weighted marker sum mod `2n` of the original word.
pub fn locate(
    y: &[u8],
    t: usize,
    n: usize,
    a0_mod4: u8,
    a1_mod2n: u64,
    t_prime: usize,
) -> Result<LocatorResult> {
    if t_prime == 0 || t_prime > t {
        return Err(Error::LocatorNoCase(format!(
            "burst length {t_prime} outside [1, {t}]"
        )));
    }
    if y.len() + t_prime != n {
        return Err(Error::LengthMismatch {
            expected: n - t_prime,
            got: y.len(),
        });
    }
    let profile = IndicatorProfile::new(y, t);
    let mp = profile.a0; // marker count of y
    let (u, v) = (&profile.u, &profile.v);
    let two_n = 2 * n as u64;
    let tp = t_prime as u64;

    // representative of a1(x) - a1(y) in [0, 2n)
    let mu = (i128::from(a1_mod2n) - i128::from(profile.a1 % two_n)).rem_euclid(two_n as i128)
        as u64;
    let delta0 = match (i16::from(a0_mod4) - (mp % 4) as i16).rem_euclid(4) {
        3 => -1i8,
        d => d as i8,
    };

    let (i_d, lo, hi) = match delta0 {
        2 => {
            // two markers destroyed: the weighted sum grew by two marker
            // positions plus t' per marker right of the burst, so the
            // candidate values are strictly increasing in the segment index
            let xi = |i: usize| 2 * (u[i] as u64 + 1) + (mp - i) as u64 * tp;
            let i_d = largest_at_most(mp, mu, xi)?;
            (i_d, u[i_d] + 1, v[i_d] + t_prime)
        }
        1 => {
            let xi = |i: usize| (u[i] as u64 + 1) + (mp - i) as u64 * tp;
            let i_d = largest_at_most(mp, mu, xi)?;
            (i_d, u[i_d] + 1, v[i_d] + t_prime)
        }
        0 => {
            // marker count unchanged: the sum grew by t' per marker right of
            // the burst, a strictly decreasing candidate sequence. A marker
            // re-formed right of a destroyed one can shrink the sum, so a
            // residue just below 2n reads as a small negative shift.
            let mu = if mu >= two_n - 2 * t as u64 {
                i128::from(mu) - i128::from(two_n)
            } else {
                i128::from(mu)
            };
            let xi = |i: usize| i128::from((mp - i) as u64 * tp);
            let mut i_d = None;
            for i in 0..=mp {
                if xi(i) >= mu {
                    i_d = Some(i);
                } else {
                    break;
                }
            }
            // a re-formed marker left of a destroyed first marker pushes the
            // shift just past xi(0): the burst sits at the word head
            if i_d.is_none() && mu <= xi(0) + (2 * t + t_prime) as i128 {
                i_d = Some(0);
            }
            let i_d = i_d.ok_or_else(|| {
                Error::LocatorNoCase(format!("no segment matches shift {mu} with {mp} markers"))
            })?;
            // a burst can destroy a marker while an overlapping occurrence
            // re-forms a few positions away; the shifted weighted sum then
            // selects a neighbouring segment. Padding the interval by the
            // marker span on the left and one segment on the right absorbs
            // every such shift while keeping the length within 2*delta + O(t).
            let lo = (u[i_d] + 1).saturating_sub(2 * t + t_prime);
            let hi = v[(i_d + 1).min(mp)] + 2 * t + t_prime;
            (i_d, lo, hi)
        }
        -1 => {
            // a marker was created by the deletion: exact-match search
            let mut found = None;
            for (i, &vi) in v.iter().enumerate().take(mp) {
                let s = (i128::from((mp - 1 - i) as u64 * tp) - i128::from(vi as u64 + 1))
                    .rem_euclid(two_n as i128) as u64;
                if s == mu {
                    found = Some(i);
                    break;
                }
            }
            let i_d = found.ok_or_else(|| {
                Error::LocatorNoCase(format!("no merge point matches shift {mu}"))
            })?;
            (i_d, v[i_d] + 1, v[i_d] + 2 * t + t_prime)
        }
        _ => unreachable!("delta0 is one of -1, 0, 1, 2"),
    };

    let lo = lo.max(1);
    let hi = hi.min(n);
    if lo > hi {
        return Err(Error::LocatorNoCase(format!(
            "empty interval [{lo}, {hi}] for delta0={delta0}"
        )));
    }
    Ok(LocatorResult { delta0, i_d, lo, hi })
}

/// Largest `i in [0, bound]` with `xi(i) <= mu`, for strictly increasing `xi`.
fn largest_at_most(bound: usize, mu: u64, xi: impl Fn(usize) -> u64) -> Result<usize> {
    let mut i_d = None;
    for i in 0..=bound {
        if xi(i) <= mu {
            i_d = Some(i);
        } else {
            break;
        }
    }
    i_d.ok_or_else(|| Error::LocatorNoCase(format!("no segment below shift {mu}")))
}
