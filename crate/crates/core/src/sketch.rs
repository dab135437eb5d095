//! Window syndromes, checksum primes, and the word-level sketch.
//!
//! Every window of a codeword carries a packed interleaved syndrome `h`: for
//! each track (stride `t2 <= t`, offset `j`) the pair (position-weighted
//! ascent count mod `L + 1`, symbol sum mod `q`), packed mixed-radix. A burst
//! of up to `t` deletions inside the window can be undone from `h` alone —
//! in compressed mode from `h mod alpha` for a window-specific checksum
//! prime `alpha`, in raw mode from `h` verbatim.
//!
//! The word-level sketch folds the per-window values into two running sums
//! split by window parity, so a single corrupted window can be isolated and
//! its value reconstructed by subtracting the untouched ones.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::params::{Params, SketchMode};
use crate::pattern::IndicatorProfile;
use crate::radix::{digits_to_int, int_to_digits, mixed_radix_pack, mixed_radix_unpack};
use crate::vt::{
    extract_track, syndrome_radices, tenengolts_decode, tenengolts_tag, track_len, tracks,
    TenengoltsTag,
};
use crate::word::{all_runs, Word};

/// Packed interleaved syndrome of `x`: per track the pair `(vt, sum)` of the
/// track subsequence, least-significant track first.
pub fn h_bar(x: &[u8], q: u32, t: usize) -> Result<BigUint> {
    let mut values = Vec::with_capacity(t * (t + 1));
    for (t2, j) in tracks(t) {
        let track: Vec<u8> = x.iter().skip(j - 1).step_by(t2).copied().collect();
        let tag = tenengolts_tag(&track, q);
        values.push(tag.vt);
        values.push(tag.sum);
    }
    mixed_radix_pack(&values, &syndrome_radices(q, t, x.len()))
}

/// Reduction by a fixed modulus without a hardware division per call.
/// Valid for inputs below 2^63.
#[derive(Clone, Debug)]
struct Reducer {
    m: u64,
    inv: u64,
}

impl Reducer {
    fn new(m: u64) -> Self {
        debug_assert!(m >= 1);
        Reducer {
            m,
            inv: if m > 1 { u64::MAX / m } else { 0 },
        }
    }

    /// Exact for inputs below 2^63; checked exhaustively against `%` in the
    /// unit tests, so no per-call assertion in this innermost loop.
    #[inline]
    fn reduce(&self, x: u64) -> u64 {
        if self.m == 1 {
            return 0;
        }
        let q = ((u128::from(x) * u128::from(self.inv)) >> 64) as u64;
        let mut r = x - q * self.m;
        while r >= self.m {
            r -= self.m;
        }
        r
    }
}

/// Per-track prefix tables over a fixed word `y`, supporting O(1) syndrome
/// evaluation of any word obtained by inserting a fixed-length run into `y`.
struct TrackPre {
    t2: usize,
    j: usize,
    len: usize,
    /// `vtp[k] = sum_{i=1}^{k-1} i * [elem_{i+1} >= elem_i]`
    vtp: Vec<u64>,
    /// `php[k]` = ascent count among the first `k` elements
    php: Vec<u64>,
    /// `smp[k]` = sum of the first `k` elements
    smp: Vec<u64>,
}

/// Evaluates the per-track syndrome pairs of `insert_run(y, pos, run)` for
/// any insertion position without materializing the candidate word.
///
/// The inserted word's track splits into a prefix shared with `y`'s own
/// track, at most `ceil(t'/t2)` run symbols, and a suffix that is a tail of
/// the `y`-track for the residue shifted by `t'`; only the O(t') junction
/// pairs need to be looked at per candidate, the rest comes from the prefix
/// tables.
pub(crate) struct InsertScan<'a> {
    y: &'a [u8],
    q: u64,
    t_prime: usize,
    /// length of every candidate, `y.len() + t_prime`
    w: usize,
    pre: Vec<TrackPre>,
    mods: Vec<Reducer>,
}

impl<'a> InsertScan<'a> {
    pub(crate) fn new(y: &'a [u8], q: u32, t: usize, t_prime: usize) -> Self {
        debug_assert!(t_prime >= 1 && t_prime <= t);
        let w = y.len() + t_prime;
        debug_assert!(w < 1 << 31);
        let mut pre = Vec::new();
        let mut mods = Vec::new();
        for (t2, j) in tracks(t) {
            let track: Vec<u64> = y
                .iter()
                .skip(j - 1)
                .step_by(t2)
                .map(|&s| u64::from(s))
                .collect();
            let len = track.len();
            let mut vtp = Vec::with_capacity(len + 1);
            let mut php = Vec::with_capacity(len + 1);
            let mut smp = Vec::with_capacity(len + 1);
            vtp.push(0);
            php.push(0);
            smp.push(0);
            for k in 1..=len {
                let asc = if k >= 2 && track[k - 1] >= track[k - 2] {
                    1u64
                } else {
                    0
                };
                vtp.push(vtp[k - 1] + (k as u64 - 1) * asc);
                php.push(php[k - 1] + asc);
                smp.push(smp[k - 1] + track[k - 1]);
            }
            mods.push(Reducer::new(track_len(w, t2, j) as u64 + 1));
            pre.push(TrackPre {
                t2,
                j,
                len,
                vtp,
                php,
                smp,
            });
        }
        InsertScan {
            y,
            q: u64::from(q),
            t_prime,
            w,
            pre,
            mods,
        }
    }

    /// `(vt mod L+1, sum mod q)` of track `ti` of `insert_run(y, pos, run)`.
    pub(crate) fn track_pair(&self, ti: usize, pos: usize, run: &[u8]) -> (u64, u64) {
        let tp = &self.pre[ti];
        let (t2, j) = (tp.t2, tp.j);
        let tpr = self.t_prime;
        let l_x = (self.mods[ti].m - 1) as usize;

        // track elements with x'-position p <= pos - 1 coincide with y's
        let a = if pos > j { (pos - 1 - j) / t2 + 1 } else { 0 };
        // first suffix element: smallest track position >= pos + t'
        let v = pos + tpr;
        let first_suf = if v <= j {
            j
        } else {
            j + (v - j).div_ceil(t2) * t2
        };
        let k0 = if first_suf <= self.w {
            (first_suf - j) / t2 + 1
        } else {
            l_x + 1
        };

        let elem = |p: usize| -> u64 {
            if p < pos {
                u64::from(self.y[p - 1])
            } else if p < pos + tpr {
                u64::from(run[p - pos])
            } else {
                u64::from(self.y[p - tpr - 1])
            }
        };

        let mut vt = tp.vtp[a];
        let mut sum = tp.smp[a];
        // junction pairs around the run, looked up directly
        let pair_hi = (k0 - 1).min(l_x.saturating_sub(1));
        for i in a.max(1)..=pair_hi {
            let p = j + (i - 1) * t2;
            if elem(p + t2) >= elem(p) {
                vt += i as u64;
            }
        }
        // run symbols landing on this track
        for k in (a + 1)..k0 {
            let p = j + (k - 1) * t2;
            sum += elem(p);
        }
        // suffix: a tail of the y-track for the residue shifted by t',
        // with every pair index offset by a constant
        if k0 <= l_x {
            let p0y = first_suf - tpr;
            let jp = (p0y - 1) % t2 + 1;
            let tp2 = &self.pre[t2 * (t2 - 1) / 2 + (jp - 1)];
            let kp0 = (p0y - jp) / t2 + 1;
            let lp = tp2.len;
            let sigma = (k0 - kp0) as u64;
            sum += tp2.smp[lp] - tp2.smp[kp0 - 1];
            if kp0 < lp {
                vt += tp2.vtp[lp] - tp2.vtp[kp0] + sigma * (tp2.php[lp] - tp2.php[kp0]);
            }
        }
        (self.mods[ti].reduce(vt), sum % self.q)
    }

    /// All per-track pairs, in track order, written into `out`.
    pub(crate) fn components(&self, pos: usize, run: &[u8], out: &mut Vec<(u64, u64)>) {
        out.clear();
        for ti in 0..self.pre.len() {
            out.push(self.track_pair(ti, pos, run));
        }
    }
}

/// `h mod alpha` from per-track pairs without forming the packed integer.
fn pairs_mod(pairs: &[(u64, u64)], radices: &[u64], alpha: u64) -> u64 {
    debug_assert_eq!(radices.len(), 2 * pairs.len());
    let a = u128::from(alpha);
    let mut acc: u128 = 0;
    for (ti, &(vt, sum)) in pairs.iter().enumerate().rev() {
        acc = (acc * u128::from(radices[2 * ti + 1]) + u128::from(sum)) % a;
        acc = (acc * u128::from(radices[2 * ti]) + u128::from(vt)) % a;
    }
    acc as u64
}

/// Packed value from per-track pairs when the radix product fits in u64.
fn pairs_pack_u64(pairs: &[(u64, u64)], radices: &[u64]) -> u64 {
    let mut acc: u64 = 0;
    for (ti, &(vt, sum)) in pairs.iter().enumerate().rev() {
        acc = acc * radices[2 * ti + 1] + sum;
        acc = acc * radices[2 * ti] + vt;
    }
    acc
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    for d in [2u64, 3] {
        if p.is_multiple_of(d) {
            return p == d;
        }
    }
    let mut d = 5u64;
    while d * d <= p {
        if p.is_multiple_of(d) || p.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Smallest prime `<= alpha_max` dividing none of the nonzero `diffs`.
pub fn smallest_avoiding_prime(diffs: &[u64], alpha_max: u64) -> Result<u64> {
    let mut p = 2u64;
    loop {
        if p > alpha_max {
            return Err(Error::AlphaExhausted);
        }
        if is_prime(p) && diffs.iter().all(|&d| d == 0 || d % p != 0) {
            return Ok(p);
        }
        p += 1;
    }
}

/// Checksum prime for window `win`: the smallest prime dividing none of the
/// nonzero syndrome differences `|h(win) - h(w')|` over every word `w'`
/// reachable from `win` by deleting a burst of length `a <= t` and
/// reinserting `a` arbitrary symbols anywhere.
pub fn alpha_search(win: &[u8], params: &Params) -> Result<u64> {
    let (q, t) = (params.q, params.t);
    if win.len() > params.window_max {
        return Err(Error::WindowTooLong {
            len: win.len(),
            max: params.window_max,
        });
    }
    let radices = syndrome_radices(q, t, win.len());
    let mut product: u128 = 1;
    for &r in &radices {
        product = product.saturating_mul(u128::from(r));
    }
    let mut comps = Vec::new();

    if product <= 1 << 24 {
        // dense bitset of attained differences, then a multiples scan
        let hx = u64::try_from(&h_bar(win, q, t)?).expect("fits by radix product");
        let mut seen = vec![false; product as usize];
        for a in 1..=t.min(win.len()) {
            let runs = all_runs(q, a);
            for i in 1..=win.len() - a + 1 {
                let mut y = win.to_vec();
                y.drain(i - 1..i + a - 1);
                let scan = InsertScan::new(&y, q, t, a);
                for run in &runs {
                    for pos in 1..=y.len() + 1 {
                        scan.components(pos, run, &mut comps);
                        let h = pairs_pack_u64(&comps, &radices);
                        seen[hx.abs_diff(h) as usize] = true;
                    }
                }
            }
        }
        seen[0] = false;
        let mut p = 2u64;
        loop {
            if p > params.alpha_max {
                return Err(Error::AlphaExhausted);
            }
            if is_prime(p)
                && !(p..product as u64)
                    .step_by(p as usize)
                    .any(|m| seen[m as usize])
            {
                return Ok(p);
            }
            p += 1;
        }
    } else {
        // wide syndromes: collect exact differences instead
        let hx = h_bar(win, q, t)?;
        let mut diffs = std::collections::BTreeSet::new();
        for a in 1..=t.min(win.len()) {
            let runs = all_runs(q, a);
            for i in 1..=win.len() - a + 1 {
                let mut y = win.to_vec();
                y.drain(i - 1..i + a - 1);
                let scan = InsertScan::new(&y, q, t, a);
                for run in &runs {
                    for pos in 1..=y.len() + 1 {
                        scan.components(pos, run, &mut comps);
                        let values: Vec<u64> = comps.iter().flat_map(|&(v, s)| [v, s]).collect();
                        let h = mixed_radix_pack(&values, &radices)?;
                        if h != hx {
                            let d = if h > hx { &h - &hx } else { &hx - &h };
                            diffs.insert(d);
                        }
                    }
                }
            }
        }
        let mut p = 2u64;
        loop {
            if p > params.alpha_max {
                return Err(Error::AlphaExhausted);
            }
            if is_prime(p) && diffs.iter().all(|d| !(d % p).is_zero()) {
                return Ok(p);
            }
            p += 1;
        }
    }
}

/// Sketch of a single window: what the decoder needs to undo a burst inside
/// it. Compressed mode stores a residue of the packed syndrome modulo a
/// window-specific prime; raw mode stores the packed syndrome itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WindowSketch {
    Residue { alpha: u64, remainder: u64 },
    Exact { h: BigUint },
}

impl WindowSketch {
    /// Numeric value folded into the word-level sums: strictly below the
    /// sketch modulus of `params`.
    pub fn value(&self, params: &Params) -> BigUint {
        match self {
            WindowSketch::Residue { alpha, remainder } => {
                BigUint::from(alpha - 2) * params.alpha_max + remainder
            }
            WindowSketch::Exact { h } => h.clone(),
        }
    }

    /// Inverse of [`WindowSketch::value`] for the mode of `params`.
    pub fn from_value(value: &BigUint, params: &Params) -> Result<WindowSketch> {
        match params.sketch_mode {
            SketchMode::Compressed => {
                let alpha_max = BigUint::from(params.alpha_max);
                let alpha = u64::try_from(&(value / &alpha_max))
                    .map_err(|_| Error::SketchFieldRange("window value".into()))?
                    .checked_add(2)
                    .ok_or_else(|| Error::SketchFieldRange("window value".into()))?;
                let remainder =
                    u64::try_from(&(value % &alpha_max)).expect("below alpha_max by construction");
                Ok(WindowSketch::Residue { alpha, remainder })
            }
            SketchMode::Raw => Ok(WindowSketch::Exact { h: value.clone() }),
        }
    }
}

/// Compute the sketch of one window under `params`.
pub fn window_sketch(win: &[u8], params: &Params) -> Result<WindowSketch> {
    if win.len() > params.window_max {
        return Err(Error::WindowTooLong {
            len: win.len(),
            max: params.window_max,
        });
    }
    match params.sketch_mode {
        SketchMode::Compressed => {
            let alpha = alpha_search(win, params)?;
            let h = h_bar(win, params.q, params.t)?;
            let remainder = u64::try_from(&(h % alpha)).expect("residue below a u64 prime");
            Ok(WindowSketch::Residue { alpha, remainder })
        }
        SketchMode::Raw => Ok(WindowSketch::Exact {
            h: h_bar(win, params.q, params.t)?,
        }),
    }
}

/// Content-addressed memo of window sketches. Encoding a word warms the
/// cache with every window of the codeword; decoding then reuses the entries
/// for all untouched windows, whose content is byte-identical. Entries are
/// only valid for the parameter set they were computed under.
#[derive(Default)]
pub struct SketchCache {
    map: HashMap<Vec<u8>, WindowSketch>,
}

impl SketchCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn window(&mut self, win: &[u8], params: &Params) -> Result<WindowSketch> {
        if let Some(ws) = self.map.get(win) {
            return Ok(ws.clone());
        }
        let ws = window_sketch(win, params)?;
        self.map.insert(win.to_vec(), ws.clone());
        Ok(ws)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Word-level sketch: marker statistics plus the parity-split window sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sketch {
    pub a0_mod4: u8,
    pub a1_mod2n: u64,
    /// Sum of even-index window values, mod the sketch modulus.
    pub h0: BigUint,
    /// Sum of odd-index window values, mod the sketch modulus.
    pub h1: BigUint,
}

/// Sketch of a word of length `n`.
pub fn f_sketch(x: &Word, params: &Params, cache: &mut SketchCache) -> Result<Sketch> {
    if x.q() != params.q {
        return Err(Error::AlphabetMismatch {
            left: x.q(),
            right: params.q,
        });
    }
    if x.len() != params.n {
        return Err(Error::LengthMismatch {
            expected: params.n,
            got: x.len(),
        });
    }
    let profile = IndicatorProfile::of_word(x, params.t);
    let modulus = params.sketch_modulus();
    let mut h0 = BigUint::zero();
    let mut h1 = BigUint::zero();
    for (idx, (lo, hi)) in params.window_intervals()?.into_iter().enumerate() {
        let value = cache
            .window(&x.symbols()[lo - 1..hi], params)?
            .value(params);
        if (idx + 1) % 2 == 0 {
            h0 += value;
        } else {
            h1 += value;
        }
    }
    Ok(Sketch {
        a0_mod4: (profile.a0 % 4) as u8,
        a1_mod2n: profile.a1 % (2 * params.n as u64),
        h0: h0 % &modulus,
        h1: h1 % &modulus,
    })
}

/// Fixed-width base-q serialization: `a0`, `a1`, `h0`, `h1` fields in order,
/// each most-significant digit first.
pub fn serialize_sketch(sk: &Sketch, params: &Params) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(params.sketch_width);
    out.extend(int_to_digits(
        &BigUint::from(sk.a0_mod4),
        params.q,
        params.a0_width,
    )?);
    out.extend(int_to_digits(
        &BigUint::from(sk.a1_mod2n),
        params.q,
        params.a1_width,
    )?);
    out.extend(int_to_digits(&sk.h0, params.q, params.h_width)?);
    out.extend(int_to_digits(&sk.h1, params.q, params.h_width)?);
    debug_assert_eq!(out.len(), params.sketch_width);
    Ok(out)
}

/// Inverse of [`serialize_sketch`], with range validation of every field.
pub fn deserialize_sketch(digits: &[u8], params: &Params) -> Result<Sketch> {
    if digits.len() != params.sketch_width {
        return Err(Error::LengthMismatch {
            expected: params.sketch_width,
            got: digits.len(),
        });
    }
    let (a0_digits, rest) = digits.split_at(params.a0_width);
    let (a1_digits, rest) = rest.split_at(params.a1_width);
    let (h0_digits, h1_digits) = rest.split_at(params.h_width);
    let a0 = digits_to_int(a0_digits, params.q)?;
    let a1 = digits_to_int(a1_digits, params.q)?;
    let h0 = digits_to_int(h0_digits, params.q)?;
    let h1 = digits_to_int(h1_digits, params.q)?;
    if a0 >= BigUint::from(4u32) {
        return Err(Error::SketchFieldRange("a0 mod 4".into()));
    }
    if a1 >= BigUint::from(2 * params.n as u64) {
        return Err(Error::SketchFieldRange("a1 mod 2n".into()));
    }
    let modulus = params.sketch_modulus();
    if h0 >= modulus || h1 >= modulus {
        return Err(Error::SketchFieldRange("window sum".into()));
    }
    Ok(Sketch {
        a0_mod4: u64::try_from(&a0).expect("below 4") as u8,
        a1_mod2n: u64::try_from(&a1).expect("below 2n"),
        h0,
        h1,
    })
}

/// Recover the original window from `y_win` (the window with a burst of
/// `t_prime` symbols deleted) and the window's sketch value. Scans every
/// insertion candidate, accepts those matching the sketch, and demands a
/// unique surviving word.
pub fn recover_window(
    y_win: &[u8],
    target: &BigUint,
    t_prime: usize,
    params: &Params,
) -> Result<Vec<u8>> {
    if t_prime == 0 {
        return Ok(y_win.to_vec());
    }
    let (q, t) = (params.q, params.t);
    let w = y_win.len() + t_prime;
    if w > params.window_max {
        return Err(Error::WindowTooLong {
            len: w,
            max: params.window_max,
        });
    }
    let radices = syndrome_radices(q, t, w);

    match params.sketch_mode {
        SketchMode::Raw => match mixed_radix_unpack(target, &radices) {
            Ok(values) => {
                let pairs: Vec<(u64, u64)> =
                    values.chunks_exact(2).map(|c| (c[0], c[1])).collect();
                recover_exact(y_win, &pairs, t_prime, q, t, w)
            }
            // a packed value this large matches no word of this length
            Err(Error::PackedValueRange) => Err(Error::WindowNoSurvivor),
            Err(e) => Err(e),
        },
        SketchMode::Compressed => {
            let (alpha, remainder) = match WindowSketch::from_value(target, params)? {
                WindowSketch::Residue { alpha, remainder } => (alpha, remainder),
                WindowSketch::Exact { .. } => unreachable!("mode fixes the variant"),
            };
            recover_residue(y_win, alpha, remainder, &radices, t_prime, q, t, w)
        }
    }
}

/// Raw recovery: deleting `t_prime` adjacent symbols shifts the survivors by
/// a multiple of `t_prime`, so each stride-`t_prime` track keeps its phase
/// and loses exactly one symbol. Every track is then decodable on its own
/// from its pair, and the strides the reconstruction did not use serve as a
/// check.
fn recover_exact(
    y_win: &[u8],
    pairs: &[(u64, u64)],
    t_prime: usize,
    q: u32,
    t: usize,
    w: usize,
) -> Result<Vec<u8>> {
    let base = t_prime * (t_prime - 1) / 2;
    let mut cand = vec![0u8; w];
    for j in 1..=t_prime {
        let (vt, sum) = pairs[base + j - 1];
        let track: Vec<u8> = y_win.iter().skip(j - 1).step_by(t_prime).copied().collect();
        let tag = TenengoltsTag {
            vt,
            sum,
            n: track_len(w, t_prime, j),
        };
        let full = tenengolts_decode(&Word::new(q, track)?, &tag)
            .map_err(|_| Error::WindowNoSurvivor)?;
        for (k, &s) in full.symbols().iter().enumerate() {
            cand[j - 1 + k * t_prime] = s;
        }
    }
    // the tracks were decoded independently; their insertions form one
    // contiguous burst only if the candidate and the window share a
    // prefix/suffix split around it
    let cp = cand.iter().zip(y_win).take_while(|(a, b)| a == b).count();
    let cs = cand
        .iter()
        .rev()
        .zip(y_win.iter().rev())
        .take_while(|(a, b)| a == b)
        .count();
    if cp + cs < y_win.len() {
        return Err(Error::WindowNoSurvivor);
    }
    for (ti, (t2, j)) in tracks(t).into_iter().enumerate() {
        if t2 == t_prime {
            continue; // forced by construction
        }
        let tag = tenengolts_tag(&extract_track(&cand, t2, j), q);
        if (tag.vt, tag.sum) != pairs[ti] {
            return Err(Error::WindowNoSurvivor);
        }
    }
    Ok(cand)
}

/// Compressed recovery: only `h mod alpha` is known, so sweep every burst
/// content and position and keep the candidates whose packed syndrome agrees
/// mod `alpha`. The checksum prime was chosen so survivors agree as words.
#[allow(clippy::too_many_arguments)]
fn recover_residue(
    y_win: &[u8],
    alpha: u64,
    remainder: u64,
    radices: &[u64],
    t_prime: usize,
    q: u32,
    t: usize,
    w: usize,
) -> Result<Vec<u8>> {
    let scan = InsertScan::new(y_win, q, t, t_prime);
    let mut comps = Vec::new();
    let mut found: Vec<Vec<u8>> = Vec::new();
    for run in &all_runs(q, t_prime) {
        for pos in 1..=y_win.len() + 1 {
            scan.components(pos, run, &mut comps);
            if pairs_mod(&comps, radices, alpha) != remainder {
                continue;
            }
            let mut cand = Vec::with_capacity(w);
            cand.extend_from_slice(&y_win[..pos - 1]);
            cand.extend_from_slice(run);
            cand.extend_from_slice(&y_win[pos - 1..]);
            if !found.contains(&cand) {
                found.push(cand);
            }
        }
    }
    match found.len() {
        0 => Err(Error::WindowNoSurvivor),
        1 => Ok(found.pop().expect("len checked")),
        _ => Err(Error::WindowAmbiguous),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::enc_den;
    use crate::params::ParamMode;
    use crate::vt::extract_track;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn params(q: u32, t: usize, n: usize, mode: SketchMode) -> Params {
        Params::derive(q, t, n, ParamMode::Compact, mode).unwrap()
    }

    #[test]
    fn h_bar_spec_points() {
        // single track: vt=4, sum=1, packed 4 + 5*1
        assert_eq!(h_bar(&[1, 1, 0, 2], 3, 1).unwrap(), BigUint::from(9u32));
        // all-zero word: ascents everywhere, vt = 6 mod 5 = 1
        assert_eq!(h_bar(&[0, 0, 0, 0], 3, 1).unwrap(), BigUint::from(1u32));
        // three tracks at t=2
        assert_eq!(h_bar(&[2, 0, 1, 1], 3, 2).unwrap(), BigUint::from(545u32));
    }

    #[test]
    fn insert_scan_matches_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for &(q, t) in &[(3u32, 1usize), (3, 2), (4, 2), (2, 2)] {
            for t_prime in 1..=t {
                for len in [t_prime, 5, 12, 17] {
                    let y: Vec<u8> =
                        (0..len).map(|_| rng.random_range(0..q) as u8).collect();
                    let scan = InsertScan::new(&y, q, t, t_prime);
                    let mut comps = Vec::new();
                    for run in &all_runs(q, t_prime) {
                        for pos in 1..=y.len() + 1 {
                            scan.components(pos, run, &mut comps);
                            // reference: materialize and tag every track
                            let mut x = y.clone();
                            x.splice(pos - 1..pos - 1, run.iter().copied());
                            let expect: Vec<(u64, u64)> = tracks(t)
                                .into_iter()
                                .map(|(t2, j)| {
                                    let tag = tenengolts_tag(&extract_track(&x, t2, j), q);
                                    (tag.vt, tag.sum)
                                })
                                .collect();
                            assert_eq!(comps, expect, "q={q} t={t} t'={t_prime} pos={pos}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reducer_agrees_with_division() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..2000 {
            let m = rng.random_range(1u64..1 << 32);
            let x = rng.random_range(0u64..1 << 63);
            assert_eq!(Reducer::new(m).reduce(x), x % m);
        }
        assert_eq!(Reducer::new(1).reduce(12345), 0);
        assert_eq!(Reducer::new(2).reduce((1 << 63) - 1), 1);
    }

    #[test]
    fn prime_selection_spec_points() {
        assert_eq!(smallest_avoiding_prime(&[3, 5, 9], 100).unwrap(), 2);
        assert_eq!(smallest_avoiding_prime(&[2, 4, 6], 100).unwrap(), 5);
        assert_eq!(smallest_avoiding_prime(&[], 100).unwrap(), 2);
        // zero differences are ignored rather than blocking every prime
        assert_eq!(smallest_avoiding_prime(&[0, 3], 100).unwrap(), 2);
        assert!(matches!(
            smallest_avoiding_prime(&[2, 3, 5, 7, 11, 13], 13),
            Err(Error::AlphaExhausted)
        ));
    }

    #[test]
    fn alpha_separates_every_confusable() {
        let p = params(3, 1, 841, SketchMode::Compressed);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..5 {
            let syms: Vec<u8> = (0..24).map(|_| rng.random_range(0..3)).collect();
            let x = Word::new(3, syms.clone()).unwrap();
            let alpha = alpha_search(&syms, &p).unwrap();
            let hx = h_bar(&syms, 3, 1).unwrap();
            let mut divisible = Vec::new();
            for other in x.confusable_set(1) {
                let ho = h_bar(other.symbols(), 3, 1).unwrap();
                if hx != ho {
                    let d = if ho > hx { &ho - &hx } else { &hx - &ho };
                    assert!(!(&d % alpha).is_zero(), "alpha={alpha} divides {d}");
                    divisible.push(d);
                }
            }
            // minimality: every smaller prime divides some difference
            for smaller in 2..alpha {
                if is_prime(smaller) {
                    assert!(divisible.iter().any(|d| (d % smaller).is_zero()));
                }
            }
        }
    }

    #[test]
    fn window_value_roundtrips_in_both_modes() {
        let pc = params(3, 1, 841, SketchMode::Compressed);
        let ws = WindowSketch::Residue {
            alpha: 7,
            remainder: 3,
        };
        let v = ws.value(&pc);
        assert_eq!(
            v,
            BigUint::from(5u32) * pc.alpha_max + BigUint::from(3u32)
        );
        assert_eq!(WindowSketch::from_value(&v, &pc).unwrap(), ws);

        let pr = params(3, 1, 841, SketchMode::Raw);
        let we = WindowSketch::Exact {
            h: BigUint::from(99991u32),
        };
        assert_eq!(
            WindowSketch::from_value(&we.value(&pr), &pr).unwrap(),
            we
        );
    }

    #[test]
    fn window_values_stay_below_the_modulus() {
        for mode in [SketchMode::Compressed, SketchMode::Raw] {
            let p = params(3, 1, 841, mode);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
            let modulus = p.sketch_modulus();
            for _ in 0..3 {
                let win: Vec<u8> = (0..500).map(|_| rng.random_range(0..3)).collect();
                let ws = window_sketch(&win, &p).unwrap();
                assert!(ws.value(&p) < modulus);
            }
        }
    }

    #[test]
    fn sketch_parity_splits_windows() {
        // n = 1700 gives exactly two overlapping windows: [1, 1680], [841, 1700]
        let p = params(3, 1, 1700, SketchMode::Compressed);
        let wins = p.window_intervals().unwrap();
        assert_eq!(wins, vec![(1, 1680), (841, 1700)]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let syms: Vec<u8> = (0..1700).map(|_| rng.random_range(0..3)).collect();
        let x = Word::new(3, syms.clone()).unwrap();
        let base = f_sketch(&x, &p, &mut SketchCache::new()).unwrap();

        // a change strictly right of window 1 alters only the even sum h0
        let mut even_only = syms.clone();
        even_only[1690] = (even_only[1690] + 1) % 3;
        let sk = f_sketch(&Word::new(3, even_only).unwrap(), &p, &mut SketchCache::new()).unwrap();
        assert_eq!(sk.h1, base.h1);
        assert_ne!(sk.h0, base.h0);

        // a change strictly left of window 2 alters only the odd sum h1
        let mut odd_only = syms.clone();
        odd_only[10] = (odd_only[10] + 1) % 3;
        let sk = f_sketch(&Word::new(3, odd_only).unwrap(), &p, &mut SketchCache::new()).unwrap();
        assert_eq!(sk.h0, base.h0);
        assert_ne!(sk.h1, base.h1);
    }

    #[test]
    fn serialization_roundtrips_and_validates() {
        for mode in [SketchMode::Compressed, SketchMode::Raw] {
            let p = params(3, 1, 841, mode);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
            let syms: Vec<u8> = (0..841).map(|_| rng.random_range(0..3)).collect();
            let x = Word::new(3, syms).unwrap();
            let sk = f_sketch(&x, &p, &mut SketchCache::new()).unwrap();
            let digits = serialize_sketch(&sk, &p).unwrap();
            assert_eq!(digits.len(), p.sketch_width);
            assert_eq!(deserialize_sketch(&digits, &p).unwrap(), sk);

            // out-of-range h0 field is rejected
            let mut bad = digits.clone();
            for d in &mut bad[p.a0_width + p.a1_width..p.a0_width + p.a1_width + p.h_width] {
                *d = 2;
            }
            assert!(matches!(
                deserialize_sketch(&bad, &p),
                Err(Error::SketchFieldRange(_))
            ));
            assert!(deserialize_sketch(&digits[1..], &p).is_err());
        }
    }

    #[test]
    fn recover_window_restores_deleted_bursts() {
        for mode in [SketchMode::Compressed, SketchMode::Raw] {
            let p = params(3, 1, 841, mode);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
            let u = Word::new(
                3,
                (0..840).map(|_| rng.random_range(0..3)).collect::<Vec<u8>>(),
            )
            .unwrap();
            let x = enc_den(&u, &p).unwrap();
            let (lo, hi) = p.window_intervals().unwrap()[0];
            let win = &x.symbols()[lo - 1..hi];
            let target = window_sketch(win, &p).unwrap().value(&p);
            for del_pos in [1usize, 2, 400, win.len()] {
                let mut y = win.to_vec();
                y.remove(del_pos - 1);
                assert_eq!(
                    recover_window(&y, &target, 1, &p).unwrap(),
                    win,
                    "mode={mode:?} pos={del_pos}"
                );
            }
            // a wrong target must not hand back a word silently
            let wrong = (&target + 1u32) % p.sketch_modulus();
            let mut y = win.to_vec();
            y.remove(10);
            assert!(recover_window(&y, &wrong, 1, &p).is_err());
        }
    }

    #[test]
    fn recover_window_exercises_double_bursts() {
        let p = params(3, 2, 25477, SketchMode::Raw);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        // a short synthetic dense-ish window keeps this test quick
        let win: Vec<u8> = (0..600).map(|_| rng.random_range(0..3)).collect();
        let target = window_sketch(&win, &p).unwrap().value(&p);
        for (del_pos, del_len) in [(1usize, 2usize), (3, 2), (299, 2), (599, 2), (40, 1)] {
            let mut y = win.clone();
            y.drain(del_pos - 1..del_pos - 1 + del_len);
            assert_eq!(
                recover_window(&y, &target, del_len, &p).unwrap(),
                win,
                "pos={del_pos} len={del_len}"
            );
        }
    }

    fn raw_q3t2() -> &'static Params {
        static P: std::sync::OnceLock<Params> = std::sync::OnceLock::new();
        P.get_or_init(|| params(3, 2, 25477, SketchMode::Raw))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // the exact packed syndrome pins down any window among all words
        // reachable by a burst deletion plus reinsertion, with no density
        // assumption: the stride-t' tracks each lose exactly one symbol
        #[test]
        fn raw_recovery_is_unique_on_arbitrary_windows(
            seed in 0u64..1 << 40, len in 6usize..40, raw_pos in 0usize..1 << 16,
            t_prime in 1usize..=2
        ) {
            let p = raw_q3t2();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let win: Vec<u8> = (0..len).map(|_| rng.random_range(0..3)).collect();
            let target = window_sketch(&win, p).unwrap().value(p);
            let pos = 1 + raw_pos % (len - t_prime + 1);
            let mut y = win.clone();
            y.drain(pos - 1..pos - 1 + t_prime);
            prop_assert_eq!(recover_window(&y, &target, t_prime, p).unwrap(), win);
        }
    }
}
