//! The marker pattern `0^t 1^t`, its occurrence profile, and density.
//!
//! A word is `delta`-dense when every length-`delta` window contains a full
//! occurrence of the pattern. Three routes are provided: the definitional
//! window scan, a gap test over occurrence positions, and a segment-length
//! test; they agree everywhere and the tests cross-check them.

use crate::word::Word;

/// The marker `0^t 1^t`.
pub fn marker(t: usize) -> Vec<u8> {
    let mut p = vec![0u8; t];
    p.extend(std::iter::repeat_n(1u8, t));
    p
}

/// 1-based start positions of full marker occurrences. Occurrences can
/// never overlap: a second start inside `[i, i + 2t)` would force some
/// position to be both 0 and 1.
pub fn occurrences(x: &[u8], t: usize) -> Vec<usize> {
    let p = marker(t);
    if x.len() < p.len() {
        return Vec::new();
    }
    x.windows(p.len())
        .enumerate()
        .filter(|(_, w)| *w == p.as_slice())
        .map(|(i, _)| i + 1)
        .collect()
}

/// Occurrence bookkeeping shared by the locator and the sketch.
///
/// With occurrences `o_1 < .. < o_m` in a word of length `n`:
/// `u_0 = 0`, `u_i = o_i + 2t - 1` (end of the i-th occurrence), and
/// `v_i = o_{i+1} - 1` for `i < m`, `v_m = n`. So `[u_i + 1, v_i]` is the
/// marker-start-free stretch following the i-th occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorProfile {
    /// 1 at each occurrence start, length `n`.
    pub indicator: Vec<u8>,
    pub occurrences: Vec<usize>,
    /// Number of occurrences.
    pub a0: usize,
    /// Sum of occurrence start positions.
    pub a1: u64,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
}

impl IndicatorProfile {
    pub fn new(x: &[u8], t: usize) -> Self {
        let occ = occurrences(x, t);
        let a0 = occ.len();
        let n = x.len();
        let a1 = occ.iter().map(|&o| o as u64).sum();
        let mut indicator = vec![0u8; n];
        for &o in &occ {
            indicator[o - 1] = 1;
        }
        let mut u = Vec::with_capacity(a0 + 1);
        u.push(0);
        u.extend(occ.iter().map(|&o| o + 2 * t - 1));
        // v_i = o_{i+1} - 1 for i in [0, m-1], then v_m = n
        let mut v: Vec<usize> = occ.iter().map(|&o| o - 1).collect();
        v.push(n);
        IndicatorProfile {
            indicator,
            occurrences: occ,
            a0,
            a1,
            u,
            v,
        }
    }

    pub fn of_word(x: &Word, t: usize) -> Self {
        Self::new(x.symbols(), t)
    }
}

/// Definitional density check: every length-`delta` window contains a full
/// marker occurrence. Words shorter than `delta` have no windows and count
/// as dense. Quadratic; the reference the fast routes are tested against.
pub fn is_dense_literal(x: &[u8], t: usize, delta: usize) -> bool {
    debug_assert!(delta >= 2 * t);
    if x.len() < delta {
        return true;
    }
    let p = marker(t);
    x.windows(delta)
        .all(|win| win.windows(p.len()).any(|w| w == p.as_slice()))
}

/// Gap-based density check, O(n).
///
/// A window `[w, w + delta - 1]` contains a full occurrence iff some start
/// lies in `[w, w + delta - 2t]`, so density is exactly: the first start is
/// at most `delta - 2t + 1`, consecutive starts are at most
/// `delta - 2t + 1` apart, and the last start is at least `n - delta + 1`.
pub fn is_dense(x: &[u8], t: usize, delta: usize) -> bool {
    debug_assert!(delta >= 2 * t);
    let n = x.len();
    if n < delta {
        return true;
    }
    let occ = occurrences(x, t);
    let Some((&first, &last)) = occ.first().zip(occ.last()) else {
        return false;
    };
    let reach = delta + 1 - 2 * t; // delta >= 2t for any usable parameters
    first <= reach
        && occ.windows(2).all(|w| w[1] - w[0] <= reach)
        && last + delta > n
}

/// Segment-length density check: the stretch before the first occurrence
/// has length at most `delta - 2t`, the stretch between two consecutive
/// occurrences at most `delta + 1 - 4t`, and the stretch after the last at
/// most `delta - 2t`. Equivalent to [`is_dense`] (same convention below
/// `delta`), stated over the profile's segment lengths instead of gaps.
pub fn is_dense_segments(x: &[u8], t: usize, delta: usize) -> bool {
    let n = x.len();
    if n < delta {
        return true;
    }
    let prof = IndicatorProfile::new(x, t);
    if prof.a0 == 0 {
        return false;
    }
    let head = prof.occurrences[0] - 1;
    if head + 2 * t > delta {
        return false;
    }
    for w in prof.occurrences.windows(2) {
        let between = w[1] - (w[0] + 2 * t);
        if between + 4 * t > delta + 1 {
            return false;
        }
    }
    let tail = n - (prof.occurrences[prof.a0 - 1] + 2 * t - 1);
    tail + 2 * t <= delta
}
