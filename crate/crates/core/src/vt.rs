//! Varshamov–Tenengolts syndromes and the Tenengolts single-deletion tag.
//!
//! The tag of a q-ary word `x` of length `n` is the pair
//! `(vt, sum)` where `sum` is the symbol sum mod `q` and `vt` is the
//! position-weighted sum of the ascent indicator, taken mod `n + 1`:
//! the indicator `phi(x)` has `phi_1 = 0` and `phi_i = [x_i >= x_{i-1}]`,
//! and `vt = sum_{i=1}^{n-1} i * phi_{i+1} (mod n+1)`.
//!
//! Decoding here deliberately filters the full insertion ball against the
//! tag instead of running a position-arithmetic shortcut: the filter form
//! is the correctness statement itself, and the sizes this crate feeds it
//! (interleaved tracks, short windows) keep it cheap.

use crate::error::{Error, Result};
use crate::word::Word;

/// `sum_{i=1..n} i * c_i mod (n + 1)` over a binary word.
pub fn vt_syndrome(c: &[u8]) -> Result<u64> {
    let modulus = c.len() as u64 + 1;
    let mut acc = 0u64;
    for (i, &s) in c.iter().enumerate() {
        if s > 1 {
            return Err(Error::SymbolOutOfRange {
                symbol: u32::from(s),
                q: 2,
            });
        }
        if s == 1 {
            acc = (acc + i as u64 + 1) % modulus;
        }
    }
    Ok(acc)
}

/// Ascent indicator: `phi_1 = 0`, `phi_i = 1` iff `x_i >= x_{i-1}`.
pub fn signature(x: &[u8]) -> Result<Vec<u8>> {
    if x.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut phi = Vec::with_capacity(x.len());
    phi.push(0);
    for w in x.windows(2) {
        phi.push(u8::from(w[1] >= w[0]));
    }
    Ok(phi)
}

/// Single-deletion tag: the VT syndrome of the shifted signature, the
/// symbol sum, and the original length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TenengoltsTag {
    /// `sum_{i=1}^{n-1} i * phi(x)_{i+1} mod (n+1)`. The modulus is `n + 1`
    /// (not the signature-suffix length plus one) so the packing radix
    /// downstream is `n + 1`.
    pub vt: u64,
    /// Symbol sum mod q.
    pub sum: u64,
    /// Length of the tagged word.
    pub n: usize,
}

pub fn tenengolts_tag(x: &[u8], q: u32) -> TenengoltsTag {
    let n = x.len() as u64;
    let mut vt = 0u64;
    for (i, w) in x.windows(2).enumerate() {
        if w[1] >= w[0] {
            vt = (vt + i as u64 + 1) % (n + 1);
        }
    }
    let mut sum = 0u64;
    for &s in x {
        sum = (sum + u64::from(s)) % u64::from(q);
    }
    TenengoltsTag {
        vt,
        sum,
        n: x.len(),
    }
}

/// Recover the word with the given tag from `y`, a copy with one symbol
/// deleted. The sum component fixes the deleted value outright; prefix sums
/// over the weighted signature then give the syndrome of every insertion
/// position in O(1), so the decode is linear in `|y|`.
pub fn tenengolts_decode(y: &Word, tag: &TenengoltsTag) -> Result<Word> {
    if y.len() + 1 != tag.n {
        return Err(Error::LengthMismatch {
            expected: tag.n.saturating_sub(1),
            got: y.len(),
        });
    }
    let ys = y.symbols();
    let l = ys.len();
    let q = u64::from(y.q());
    let m = tag.n as u64 + 1;
    let ysum = ys.iter().map(|&s| u64::from(s)).sum::<u64>() % q;
    let sigma = ((tag.sum + q - ysum) % q) as u8;

    // phi_j = [y_{j+1} >= y_j]; w[k] = sum_{j<=k} j*phi_j mod m, c[k] counts.
    // The extra slot at index l mirrors l-1 so the append position reads a
    // zero-length shifted tail.
    let mut w = vec![0u64; l + 1];
    let mut c = vec![0u64; l + 1];
    for j in 1..l {
        let phi = u64::from(ys[j] >= ys[j - 1]);
        w[j] = (w[j - 1] + j as u64 * phi) % m;
        c[j] = c[j - 1] + phi;
    }
    if l > 0 {
        w[l] = w[l - 1];
        c[l] = c[l - 1];
    }
    let (w_last, c_last) = (w[l], c[l]);

    // vt of y with sigma inserted at i: untouched head comparisons, the two
    // junction comparisons, and the tail comparisons shifted up one weight
    let vt_at = |i: usize| -> u64 {
        let mut vt = if i >= 2 { w[i - 2] } else { 0 };
        if i >= 2 && sigma >= ys[i - 2] {
            vt = (vt + i as u64 - 1) % m;
        }
        if i <= l && ys[i - 1] >= sigma {
            vt = (vt + i as u64) % m;
        }
        let shifted = (w_last + m - w[i - 1] + (c_last - c[i - 1]) % m) % m;
        (vt + shifted) % m
    };

    let mut first = 0usize;
    let mut last = 0usize;
    for i in 1..=l + 1 {
        if vt_at(i) == tag.vt {
            if first == 0 {
                first = i;
            }
            last = i;
        }
    }
    if first == 0 {
        return Err(Error::NoCandidate);
    }
    // matches at several positions must all denote the same word, which
    // happens exactly when they straddle a run of the inserted symbol
    if ys[first - 1..last - 1].iter().any(|&s| s != sigma) {
        return Err(Error::AmbiguousCandidates);
    }
    y.insert_run(first, &[sigma])
}

// -- interleaved tracks --
//
// For burst length up to t, syndromes are taken over the subsequences
// ("tracks") of positions congruent to j mod t2, for every t2 in [1, t] and
// j in [1, t2]. The canonical track order everywhere in this crate is
// (1,1), (2,1), (2,2), .., (t,t).

/// Canonical `(t2, j)` track order.
pub fn tracks(t: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(t * (t + 1) / 2);
    for t2 in 1..=t {
        for j in 1..=t2 {
            out.push((t2, j));
        }
    }
    out
}

/// Number of positions in `[1, m]` congruent to `j` mod `t2` (`1 <= j <= t2`).
pub fn track_len(m: usize, t2: usize, j: usize) -> usize {
    debug_assert!(j >= 1 && j <= t2);
    if m >= j {
        (m - j) / t2 + 1
    } else {
        0
    }
}

/// The subsequence of `x` at positions congruent to `j` mod `t2`.
pub fn extract_track(x: &[u8], t2: usize, j: usize) -> Vec<u8> {
    x.iter()
        .skip(j - 1)
        .step_by(t2)
        .copied()
        .collect()
}

/// Packing radices for the interleaved tag pairs of a length-`len` word:
/// per track in canonical order, `(track_len + 1)` for the vt component
/// followed by `q` for the symbol sum.
pub fn syndrome_radices(q: u32, t: usize, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(t * (t + 1));
    for (t2, j) in tracks(t) {
        out.push(track_len(len, t2, j) as u64 + 1);
        out.push(u64::from(q));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn vt_syndrome_weights_positions() {
        assert_eq!(vt_syndrome(&[0, 1, 0, 1]).unwrap(), (2 + 4) % 5);
        assert_eq!(vt_syndrome(&[1, 0, 1, 1]).unwrap(), 8 % 5);
        assert_eq!(vt_syndrome(&[1, 1]).unwrap(), 0);
        assert_eq!(vt_syndrome(&[0, 0, 0, 0]).unwrap(), 0);
        assert_eq!(vt_syndrome(&[]).unwrap(), 0);
        assert!(vt_syndrome(&[0, 2]).is_err());
    }

    #[test]
    fn signature_marks_ascents() {
        assert_eq!(signature(&[2, 0, 1, 1]).unwrap(), vec![0, 0, 1, 1]);
        assert_eq!(signature(&[0, 0, 0]).unwrap(), vec![0, 1, 1]);
        assert_eq!(signature(&[1, 2, 0]).unwrap(), vec![0, 1, 0]);
        assert_eq!(signature(&[5]).unwrap(), vec![0]);
        assert!(signature(&[]).is_err());
    }

    fn tag_pair(x: &[u8], q: u32) -> (u64, u64) {
        let tag = tenengolts_tag(x, q);
        (tag.vt, tag.sum)
    }

    #[test]
    fn tag_examples() {
        assert_eq!(tag_pair(&[2, 0, 1], 3), (2, 0));
        assert_eq!(tag_pair(&[0, 0], 3), (1, 0));
        assert_eq!(tag_pair(&[0, 1, 2], 3), (3, 0));
        assert_eq!(tag_pair(&[2, 0, 1, 1], 3), (0, 1));
        assert_eq!(tag_pair(&[], 3), (0, 0));
        // independent recomputation from the signature: sum i * phi_{i+1},
        // reduced mod n + 1 only at the end (the tag modulus is n + 1, one
        // more than the signature-suffix length)
        let x = [1u8, 1, 0, 2];
        let phi = signature(&x).unwrap();
        let raw: u64 = (1..x.len())
            .map(|i| i as u64 * u64::from(phi[i]))
            .sum();
        assert_eq!(tenengolts_tag(&x, 3).vt, raw % (x.len() as u64 + 1));
    }

    #[test]
    fn corrects_every_single_deletion_small() {
        // exhaustive over q = 3, n in 1..=5 (the larger sweep lives in the
        // acceptance suite)
        for n in 1usize..=5 {
            for idx in 0..3u32.pow(n as u32) {
                let mut v = idx;
                let syms: Vec<u8> = (0..n)
                    .map(|_| {
                        let s = (v % 3) as u8;
                        v /= 3;
                        s
                    })
                    .collect();
                let x = Word::new(3, syms).unwrap();
                let tag = tenengolts_tag(x.symbols(), 3);
                for i in 1..=n {
                    let y = x.delete_burst(i, 1).unwrap();
                    assert_eq!(tenengolts_decode(&y, &tag).unwrap(), x);
                }
            }
        }
    }

    #[test]
    fn wrong_length_is_rejected() {
        let y = Word::new(3, vec![1, 2]).unwrap();
        let tag = TenengoltsTag { vt: 0, sum: 0, n: 5 };
        assert!(tenengolts_decode(&y, &tag).is_err());
    }

    /// Brute-force decode: try every insertion, keep full-tag matches.
    fn reference_decode(y: &Word, tag: &TenengoltsTag) -> Result<Word> {
        if y.len() + 1 != tag.n {
            return Err(Error::LengthMismatch {
                expected: tag.n - 1,
                got: y.len(),
            });
        }
        let q = y.q();
        let mut found: Option<Word> = None;
        for i in 1..=y.len() + 1 {
            for s in 0..q {
                let cand = y.insert_run(i, &[s as u8])?;
                if tenengolts_tag(cand.symbols(), q) != *tag {
                    continue;
                }
                match &found {
                    None => found = Some(cand),
                    Some(prev) if *prev == cand => {}
                    Some(_) => return Err(Error::AmbiguousCandidates),
                }
            }
        }
        found.ok_or(Error::NoCandidate)
    }

    #[test]
    fn linear_decode_matches_reference_on_every_tag() {
        // every received word x every possible tag, consistent or not
        for q in 2u32..=4 {
            for len in 0usize..=5 {
                for idx in 0..q.pow(len as u32) {
                    let mut v = idx;
                    let syms: Vec<u8> = (0..len)
                        .map(|_| {
                            let s = (v % q) as u8;
                            v /= q;
                            s
                        })
                        .collect();
                    let y = Word::new(q, syms).unwrap();
                    let n = len + 1;
                    for vt in 0..=n as u64 {
                        for sum in 0..u64::from(q) {
                            let tag = TenengoltsTag { vt, sum, n };
                            match (tenengolts_decode(&y, &tag), reference_decode(&y, &tag)) {
                                (Ok(a), Ok(b)) => assert_eq!(a, b),
                                (Err(_), Err(_)) => {}
                                (a, b) => panic!("diverged on {y:?} {tag:?}: {a:?} vs {b:?}"),
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn track_bookkeeping() {
        assert_eq!(tracks(2), vec![(1, 1), (2, 1), (2, 2)]);
        assert_eq!(track_len(4, 1, 1), 4);
        assert_eq!(track_len(4, 2, 1), 2);
        assert_eq!(track_len(5, 2, 2), 2);
        assert_eq!(track_len(1, 2, 2), 0);
        assert_eq!(extract_track(&[2, 0, 1, 1], 2, 1), vec![2, 1]);
        assert_eq!(extract_track(&[2, 0, 1, 1], 2, 2), vec![0, 1]);
        assert_eq!(extract_track(&[2, 0, 1], 3, 3), vec![1]);
        // track lengths over all j partition the positions
        for m in 0..20 {
            for t2 in 1..=4 {
                let total: usize = (1..=t2).map(|j| track_len(m, t2, j)).sum();
                assert_eq!(total, m);
            }
        }
        assert_eq!(syndrome_radices(3, 2, 4), vec![5, 3, 3, 3, 3, 3]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_single_deletions_decode(
            syms in proptest::collection::vec(0u8..4, 1..12),
            pos in 1usize..12,
        ) {
            let x = Word::new(4, syms).unwrap();
            prop_assume!(pos <= x.len());
            let tag = tenengolts_tag(x.symbols(), 4);
            let y = x.delete_burst(pos, 1).unwrap();
            prop_assert_eq!(tenengolts_decode(&y, &tag).unwrap(), x);
        }
    }
}
