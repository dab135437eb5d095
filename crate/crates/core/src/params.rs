//! Parameter derivation: one consistent configuration shared by encoder,
//! decoder, and harness.
//!
//! Two modes. `paper` uses the asymptotic density window
//! `delta = 2t q^{2t} ceil(log2 n)` together with a size condition that
//! pushes `n` into the billions; it is exposed for completeness. `compact`
//! instead picks the smallest `delta` satisfying the one inequality the
//! construction actually consumes — every pattern-free window of length
//! `delta` must fit into `gImageLen = delta - ceil(log_q n) - 6t - 2`
//! symbols after compression:
//!
//! ```text
//! (q^{2t} - 1)^{delta/(2t)} <= q^{gImageLen}
//! ```
//!
//! which keeps desk-scale `n` usable. All ceilings and comparisons are
//! exact integer arithmetic; no floating point is involved anywhere.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::pattern::marker;
use crate::radix::{big_pow, ceil_log, ceil_log_big};
use crate::vt::{track_len, tracks};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamMode {
    Paper,
    Compact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SketchMode {
    /// Window checksums carried as `(alpha, h mod alpha)` packed below
    /// `alphaMax^2`.
    Compressed,
    /// Window checksums carried verbatim below `2^syndromeBound`; wider but
    /// skips the per-window prime search.
    Raw,
}

impl fmt::Display for ParamMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParamMode::Paper => "paper",
            ParamMode::Compact => "compact",
        })
    }
}

impl FromStr for ParamMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(ParamMode::Paper),
            "compact" => Ok(ParamMode::Compact),
            other => Err(Error::CampaignConfig(format!(
                "unknown param mode {other:?} (expected paper|compact)"
            ))),
        }
    }
}

impl fmt::Display for SketchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SketchMode::Compressed => "compressed",
            SketchMode::Raw => "raw",
        })
    }
}

impl FromStr for SketchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "compressed" => Ok(SketchMode::Compressed),
            "raw" => Ok(SketchMode::Raw),
            other => Err(Error::CampaignConfig(format!(
                "unknown sketch mode {other:?} (expected compressed|raw)"
            ))),
        }
    }
}

/// Every derived quantity of a code instance. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    pub q: u32,
    pub t: usize,
    pub n: usize,
    pub mode: ParamMode,
    pub sketch_mode: SketchMode,
    /// The marker `0^t 1^t`.
    pub pattern: Vec<u8>,
    /// Density window length; positive multiple of `2t`, at least `4t`.
    pub delta: usize,
    /// Locator window stride, exactly `3 * delta`.
    pub rho: usize,
    /// Compressor output width `delta - ceil(log_q n) - 6t - 2`.
    pub g_image_len: usize,
    /// Position-field width `ceil(log_q n)` inside encoder blocks.
    pub i_field_len: usize,
    /// Maximum sketch-window length, exactly `2 * rho`.
    pub window_max: usize,
    /// Bit-length bound for packed interleaved syndromes of any window.
    pub syndrome_bound: u64,
    /// Upper end of the checksum prime search.
    pub alpha_max: u64,
    /// `alpha_max^2`, the compressed-mode window-sum modulus.
    pub n_bar: BigUint,
    /// Serialized sketch field widths, in base-q symbols.
    pub a0_width: usize,
    pub a1_width: usize,
    pub h_width: usize,
    pub sketch_width: usize,
    /// Total redundancy `t + 1 + sketch_width`.
    pub r: usize,
}

/// `(q^{2t} - 1)^{delta/(2t)} <= q^{g}`, exactly.
fn capacity_holds(q: u32, t: usize, delta: usize, g: usize) -> bool {
    debug_assert!(delta.is_multiple_of(2 * t));
    let lhs = (big_pow(u64::from(q), 2 * t) - 1u32).pow((delta / (2 * t)) as u32);
    lhs <= big_pow(u64::from(q), g)
}

/// Numerator/denominator of a rational lower bound for e^5; used to check
/// the paper-mode size condition `n^2 e^5 >= q^{30t+15}` conservatively.
const E5_LOWER_NUM: u64 = 148_413_159;
const E5_LOWER_DEN: u64 = 1_000_000;

/// ln 2 <= LN2_UPPER_NUM / LN2_UPPER_DEN; used in the prime-count bound.
const LN2_UPPER_NUM: u128 = 693_148;
const LN2_UPPER_DEN: u128 = 1_000_000;

impl Params {
    pub fn derive(
        q: u32,
        t: usize,
        n: usize,
        mode: ParamMode,
        sketch_mode: SketchMode,
    ) -> Result<Params> {
        if !(2..=256).contains(&q) {
            return Err(Error::AlphabetUnsupported { q });
        }
        if t < 1 {
            return Err(Error::Infeasible("t must be at least 1".into()));
        }
        if n < 2 {
            return Err(Error::Infeasible("n must be at least 2".into()));
        }
        let c = ceil_log(u64::from(q), n as u64);

        let delta = match mode {
            ParamMode::Paper => {
                let b = ceil_log(2, n as u64);
                let delta_wide = (q as u128)
                    .checked_pow(2 * t as u32)
                    .and_then(|v| v.checked_mul(2 * t as u128))
                    .and_then(|v| v.checked_mul(b as u128));
                let delta = match delta_wide {
                    Some(d) if d < n as u128 => d as usize,
                    _ => {
                        return Err(Error::Infeasible(format!(
                            "density window must be shorter than the word: \
                             delta = 2t q^(2t) ceil(log2 n) >= n = {n}"
                        )))
                    }
                };
                // size condition n^2 e^5 >= q^{30t+15}, via a rational
                // lower bound on e^5 so acceptance is never optimistic
                let lhs = BigUint::from(n) * n * E5_LOWER_NUM;
                let rhs = big_pow(u64::from(q), 30 * t + 15) * E5_LOWER_DEN;
                if lhs < rhs {
                    return Err(Error::Infeasible(format!(
                        "size condition n^2 e^5 >= q^(30t+15) fails for n = {n}, \
                         q = {q}, t = {t}"
                    )));
                }
                if delta < c + 6 * t + 2 || !capacity_holds(q, t, delta, delta - c - 6 * t - 2) {
                    return Err(Error::Infeasible(
                        "capacity inequality (q^(2t)-1)^(delta/2t) <= q^gImageLen fails".into(),
                    ));
                }
                delta
            }
            ParamMode::Compact => {
                // smallest multiple of 2t with delta >= 4t, gImageLen >= 0,
                // n > delta, and the capacity inequality; lhs is maintained
                // incrementally, rhs recomputed only when g first exists
                let step = big_pow(u64::from(q), 2 * t) - 1u32;
                let q_step = big_pow(u64::from(q), 2 * t);
                let mut delta = 2 * t;
                let mut lhs = step.clone();
                let mut rhs: Option<BigUint> = None;
                loop {
                    if delta >= n {
                        return Err(Error::Infeasible(format!(
                            "no delta < n = {n} satisfies the capacity inequality \
                             (q^(2t)-1)^(delta/2t) <= q^(delta - ceil(log_q n) - 6t - 2)"
                        )));
                    }
                    if delta >= 4 * t && delta >= c + 6 * t + 2 {
                        let g = delta - c - 6 * t - 2;
                        let r = match rhs.take() {
                            Some(prev) => prev * &q_step,
                            None => big_pow(u64::from(q), g),
                        };
                        if lhs <= r {
                            break delta;
                        }
                        rhs = Some(r);
                    }
                    delta += 2 * t;
                    lhs *= &step;
                }
            }
        };

        let g_image_len = delta - c - 6 * t - 2;
        let rho = 3 * delta;
        let window_max = 2 * rho;

        // bit-length bound for the packed interleaved syndromes of any
        // window (radix product is monotone in window length)
        let mut product = BigUint::one();
        for (t2, j) in tracks(t) {
            product *= track_len(window_max, t2, j) as u64 + 1;
            product *= u64::from(q);
        }
        let syndrome_bound = product.bits();

        // The checksum prime is found by pigeonhole: at most
        // t * window_max^2 * q^t confusable checksum values, each nonzero
        // difference below 2^syndrome_bound and hence with fewer than
        // syndrome_bound prime factors, so among the first
        // K = t * window_max^2 * q^t * syndrome_bound + 1 primes one fits.
        // alpha_max bounds the K-th prime: p_K < K (ln K + ln ln K) for
        // K >= 6, and with b1 = bits(K), b2 = bits(b1) we have
        // ln K + ln ln K <= (b1 + b2) ln 2.
        let k: u128 = (t as u128)
            .checked_mul((window_max as u128).pow(2))
            .and_then(|v| v.checked_mul((q as u128).checked_pow(t as u32)?))
            .and_then(|v| v.checked_mul(syndrome_bound as u128))
            .and_then(|v| v.checked_add(1))
            .ok_or_else(|| Error::Infeasible("prime-count bound overflows".into()))?;
        let b1 = (128 - k.leading_zeros()) as u128;
        let b2 = (128 - b1.leading_zeros()) as u128;
        let alpha_max_wide = k
            .checked_mul(LN2_UPPER_NUM)
            .and_then(|v| v.checked_mul(b1 + b2))
            .map(|v| v / LN2_UPPER_DEN + 1)
            .ok_or_else(|| Error::Infeasible("alpha bound overflows".into()))?;
        let alpha_max = u64::try_from(alpha_max_wide.max(13))
            .map_err(|_| Error::Infeasible("alpha bound exceeds 64 bits".into()))?;
        let n_bar = BigUint::from(alpha_max) * alpha_max;

        let modulus = match sketch_mode {
            SketchMode::Compressed => n_bar.clone(),
            SketchMode::Raw => big_pow(2, syndrome_bound as usize),
        };
        let a0_width = ceil_log(u64::from(q), 4);
        let a1_width = ceil_log(u64::from(q), 2 * n as u64);
        let h_width = ceil_log_big(u64::from(q), &modulus);
        let sketch_width = a0_width + a1_width + 2 * h_width;

        Ok(Params {
            q,
            t,
            n,
            mode,
            sketch_mode,
            pattern: marker(t),
            delta,
            rho,
            g_image_len,
            i_field_len: c,
            window_max,
            syndrome_bound,
            alpha_max,
            n_bar,
            a0_width,
            a1_width,
            h_width,
            sketch_width,
            r: t + 1 + sketch_width,
        })
    }

    /// Modulus for window-sum fields: `n_bar` in compressed mode,
    /// `2^syndrome_bound` in raw mode.
    pub fn sketch_modulus(&self) -> BigUint {
        match self.sketch_mode {
            SketchMode::Compressed => self.n_bar.clone(),
            SketchMode::Raw => big_pow(2, self.syndrome_bound as usize),
        }
    }

    /// Message length accepted by the outer encoder.
    pub fn message_len(&self) -> usize {
        self.n - 1
    }

    /// Codeword length emitted by the outer encoder.
    pub fn codeword_len(&self) -> usize {
        self.n + self.r
    }

    /// The overlapping stride-`rho` window intervals `[lo, hi]` (1-based,
    /// inclusive): `J = ceil(n/rho) - 1` of them, interior windows of
    /// length `2 rho` and the last running to `n` (length in
    /// `(rho, 2 rho]`). Errors when `n <= rho` (no full stride fits).
    pub fn window_intervals(&self) -> Result<Vec<(usize, usize)>> {
        let n = self.n;
        let rho = self.rho;
        let j_count = n.div_ceil(rho).saturating_sub(1);
        if j_count == 0 {
            return Err(Error::NoSketchWindows);
        }
        let mut out = Vec::with_capacity(j_count);
        for j in 1..=j_count {
            let lo = (j - 1) * rho + 1;
            let hi = if j < j_count { (j + 1) * rho } else { n };
            out.push((lo, hi));
        }
        Ok(out)
    }

    /// Key = value lines for the CLI and for campaign reports.
    pub fn to_kv_pairs(&self) -> Vec<(&'static str, String)> {
        let pattern = self
            .pattern
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        vec![
            ("q", self.q.to_string()),
            ("t", self.t.to_string()),
            ("n", self.n.to_string()),
            ("mode", self.mode.to_string()),
            ("sketch_mode", self.sketch_mode.to_string()),
            ("pattern", pattern),
            ("delta", self.delta.to_string()),
            ("rho", self.rho.to_string()),
            ("g_image_len", self.g_image_len.to_string()),
            ("i_field_len", self.i_field_len.to_string()),
            ("window_max", self.window_max.to_string()),
            ("syndrome_bound", self.syndrome_bound.to_string()),
            ("alpha_max", self.alpha_max.to_string()),
            ("n_bar", self.n_bar.to_string()),
            ("a0_width", self.a0_width.to_string()),
            ("a1_width", self.a1_width.to_string()),
            ("h_width", self.h_width.to_string()),
            ("sketch_width", self.sketch_width.to_string()),
            ("r", self.r.to_string()),
            ("message_len", self.message_len().to_string()),
            ("codeword_len", self.codeword_len().to_string()),
        ]
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.to_kv_pairs() {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

/// Smallest delta usable in compact mode when `ceil(log_q n) = c`, ignoring
/// the `delta < n` cap (the caller applies it).
fn compact_delta_for(q: u32, t: usize, c: usize) -> usize {
    let step = big_pow(u64::from(q), 2 * t) - 1u32;
    let mut delta = 2 * t;
    let mut lhs = step.clone();
    loop {
        if delta >= 4 * t && delta >= c + 6 * t + 2 {
            let g = delta - c - 6 * t - 2;
            if lhs <= big_pow(u64::from(q), g) {
                return delta;
            }
        }
        delta += 2 * t;
        lhs *= &step;
    }
}

/// Smallest `n` for which derivation succeeds *and* the codec pipeline is
/// usable (`n > rho`, so at least one sketch window exists).
pub fn min_codec_n(q: u32, t: usize, mode: ParamMode, sketch_mode: SketchMode) -> Result<usize> {
    if !(2..=256).contains(&q) {
        return Err(Error::AlphabetUnsupported { q });
    }
    match mode {
        ParamMode::Compact => {
            // delta depends on n only through c = ceil(log_q n), so walk c
            for c in 1..=((usize::BITS as usize) / ceil_log(2, u64::from(q)).max(1) + 1) {
                let Some(hi) = (q as usize).checked_pow(c as u32) else {
                    break;
                };
                let lo = hi / q as usize + 1; // q^{c-1} + 1, smallest n with this c
                let delta = compact_delta_for(q, t, c);
                let cand = lo.max(3 * delta + 1).max(2);
                if cand <= hi {
                    let p = Params::derive(q, t, cand, mode, sketch_mode)?;
                    debug_assert!(cand > p.rho);
                    return Ok(cand);
                }
            }
            Err(Error::Infeasible(
                "no machine-range n admits a usable compact configuration".into(),
            ))
        }
        ParamMode::Paper => {
            // smallest n passing the size condition, then bump for n > 3 delta
            let a = big_pow(u64::from(q), 30 * t + 15) * E5_LOWER_DEN;
            let b = BigUint::from(E5_LOWER_NUM);
            let mut n0 = ((&a + &b - 1u32) / &b).sqrt();
            while &n0 * &n0 * E5_LOWER_NUM < a {
                n0 += 1u32;
            }
            let n0 = usize::try_from(&n0).map_err(|_| {
                Error::Infeasible("paper-mode size condition exceeds machine range".into())
            })?;
            for b in ceil_log(2, n0 as u64)..usize::BITS as usize {
                let hi = 1usize << b;
                let lo = (1usize << (b - 1)) + 1;
                let delta = 2 * t * (q as usize).pow(2 * t as u32) * b;
                let cand = n0.max(lo).max(3 * delta + 1);
                if cand <= hi {
                    let p = Params::derive(q, t, cand, mode, sketch_mode)?;
                    debug_assert!(cand > p.rho);
                    return Ok(cand);
                }
            }
            Err(Error::Infeasible(
                "no machine-range n admits a usable paper configuration".into(),
            ))
        }
    }
}
