//! Burst-deletion channel campaigns: seeded message generation, burst
//! injection, decode verification, and a machine-readable report.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{decode_with_cache, encode_with_cache};
use crate::error::{Error, Result};
use crate::params::{ParamMode, Params, SketchMode};
use crate::sketch::SketchCache;
use crate::word::Word;

/// Which bursts to inject per codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BurstPlan {
    /// Every start position for every burst length in `[0, t]` (length 0
    /// checks the clean path once per start position only for position 1).
    Exhaustive,
    /// This many random `(position, length)` draws with `length in [1, t]`.
    Sample(usize),
}

impl std::str::FromStr for BurstPlan {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exhaustive" {
            return Ok(BurstPlan::Exhaustive);
        }
        if let Some(k) = s.strip_prefix("sample:") {
            let k: usize = k
                .parse()
                .map_err(|_| Error::CampaignConfig(format!("bad sample count in '{s}'")))?;
            if k == 0 {
                return Err(Error::CampaignConfig("sample count must be positive".into()));
            }
            return Ok(BurstPlan::Sample(k));
        }
        Err(Error::CampaignConfig(format!(
            "burst plan '{s}' is neither 'exhaustive' nor 'sample:<k>'"
        )))
    }
}

/// Full description of a campaign; two runs with equal specs produce equal
/// reports up to timings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub q: u32,
    pub t: usize,
    pub n: usize,
    pub mode: ParamMode,
    pub sketch_mode: SketchMode,
    pub seed: u64,
    pub messages: usize,
    pub bursts: BurstPlan,
}

/// One trial that did not return the transmitted message.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub message_index: usize,
    pub message_seed: u64,
    pub burst_pos: usize,
    pub burst_len: usize,
    /// Pipeline stage that failed, or "mismatch" for a silently wrong result.
    pub stage: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RedundancySummary {
    pub message_symbols: usize,
    pub codeword_symbols: usize,
    /// Redundant symbols: `t + 1 + sketch_width`.
    pub redundancy_symbols: usize,
    pub sketch_width: usize,
    /// Sketch size in bits beyond the `log2 n + 8 log2 log2 n` target.
    pub slack_bits: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub derive_ms: f64,
    pub encode_ms: f64,
    pub decode_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub spec: CampaignSpec,
    pub params: Vec<(String, String)>,
    pub trials: usize,
    pub failures: Vec<FailureRecord>,
    pub passed: bool,
    pub redundancy: RedundancySummary,
    pub timings_ms: StageTimings,
}

impl CampaignReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Redundancy of a parameter set against the asymptotic target.
pub fn redundancy_summary(params: &Params) -> RedundancySummary {
    let q = f64::from(params.q);
    let n = params.n as f64;
    let log2_n = n.log2();
    let target_bits = log2_n + 8.0 * log2_n.log2();
    RedundancySummary {
        message_symbols: params.message_len(),
        codeword_symbols: params.codeword_len(),
        redundancy_symbols: params.r,
        sketch_width: params.sketch_width,
        slack_bits: params.sketch_width as f64 * q.log2() - target_bits,
    }
}

fn message_seed(spec_seed: u64, index: usize) -> u64 {
    // splitmix-style spreading keeps per-message streams independent
    let mut z = spec_seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn burst_list(plan: BurstPlan, codeword_len: usize, t: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    match plan {
        BurstPlan::Exhaustive => {
            let mut out = vec![(1, 0)];
            for len in 1..=t {
                for pos in 1..=codeword_len - len + 1 {
                    out.push((pos, len));
                }
            }
            out
        }
        BurstPlan::Sample(k) => (0..k)
            .map(|_| {
                let len = rng.random_range(1..=t);
                (rng.random_range(1..=codeword_len - len + 1), len)
            })
            .collect(),
    }
}

struct MessageOutcome {
    trials: usize,
    failures: Vec<FailureRecord>,
    encode_ms: f64,
    decode_ms: f64,
}

/// Run a campaign: derive parameters, then for each seeded random message
/// encode once and decode every planned burst, comparing against the
/// original message.
pub fn run_campaign(spec: &CampaignSpec) -> Result<CampaignReport> {
    if spec.messages == 0 {
        return Err(Error::CampaignConfig("messages must be positive".into()));
    }
    let t_total = Instant::now();
    let t0 = Instant::now();
    let params = Params::derive(spec.q, spec.t, spec.n, spec.mode, spec.sketch_mode)?;
    let derive_ms = t0.elapsed().as_secs_f64() * 1e3;

    let outcomes: Vec<MessageOutcome> = (0..spec.messages)
        .into_par_iter()
        .map(|mi| run_message(spec, &params, mi))
        .collect();

    let mut failures = Vec::new();
    let mut trials = 0;
    let mut encode_ms = 0.0;
    let mut decode_ms = 0.0;
    for o in outcomes {
        trials += o.trials;
        failures.extend(o.failures);
        encode_ms += o.encode_ms;
        decode_ms += o.decode_ms;
    }
    failures.sort_by_key(|f| (f.message_index, f.burst_pos, f.burst_len));

    Ok(CampaignReport {
        spec: spec.clone(),
        params: params
            .to_kv_pairs()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        trials,
        passed: failures.is_empty(),
        failures,
        redundancy: redundancy_summary(&params),
        timings_ms: StageTimings {
            derive_ms,
            encode_ms,
            decode_ms,
            total_ms: t_total.elapsed().as_secs_f64() * 1e3,
        },
    })
}

fn run_message(spec: &CampaignSpec, params: &Params, mi: usize) -> MessageOutcome {
    let seed = message_seed(spec.seed, mi);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = Word::new_unchecked(
        params.q,
        (0..params.message_len())
            .map(|_| rng.random_range(0..params.q) as u8)
            .collect(),
    );
    let mut cache = SketchCache::new();
    let mut failures = Vec::new();

    let t0 = Instant::now();
    let z = match encode_with_cache(&u, params, &mut cache) {
        Ok(z) => z,
        Err(e) => {
            return MessageOutcome {
                trials: 1,
                failures: vec![FailureRecord {
                    message_index: mi,
                    message_seed: seed,
                    burst_pos: 0,
                    burst_len: 0,
                    stage: e.stage().to_string(),
                }],
                encode_ms: t0.elapsed().as_secs_f64() * 1e3,
                decode_ms: 0.0,
            };
        }
    };
    let encode_ms = t0.elapsed().as_secs_f64() * 1e3;

    let bursts = burst_list(spec.bursts, z.len(), params.t, &mut rng);
    let trials = bursts.len();
    let t0 = Instant::now();
    for (pos, len) in bursts {
        let y = match z.delete_burst(pos, len) {
            Ok(y) => y,
            Err(e) => {
                failures.push(FailureRecord {
                    message_index: mi,
                    message_seed: seed,
                    burst_pos: pos,
                    burst_len: len,
                    stage: format!("inject: {}", e.stage()),
                });
                continue;
            }
        };
        match decode_with_cache(&y, params, &mut cache) {
            Ok(got) if got == u => {}
            Ok(_) => failures.push(FailureRecord {
                message_index: mi,
                message_seed: seed,
                burst_pos: pos,
                burst_len: len,
                stage: "mismatch".to_string(),
            }),
            Err(e) => failures.push(FailureRecord {
                message_index: mi,
                message_seed: seed,
                burst_pos: pos,
                burst_len: len,
                stage: e.stage().to_string(),
            }),
        }
    }
    MessageOutcome {
        trials,
        failures,
        encode_ms,
        decode_ms: t0.elapsed().as_secs_f64() * 1e3,
    }
}

/// True when some word is reachable from both `a` and `b` by deleting one
/// burst of length at most `t`: such a pair can never coexist in a code.
pub fn deletion_balls_intersect(a: &Word, b: &Word, t: usize) -> bool {
    let ball = |w: &Word| -> std::collections::HashSet<Vec<u8>> {
        let mut out = std::collections::HashSet::new();
        for len in 1..=t.min(w.len()) {
            for pos in 1..=w.len() - len + 1 {
                out.insert(w.delete_burst(pos, len).expect("in range").symbols().to_vec());
            }
        }
        out
    };
    if a == b {
        return true;
    }
    let (ba, bb) = (ball(a), ball(b));
    ba.intersection(&bb).next().is_some()
}

/// Increment one sketch digit of a codeword mod q: a fault-injection helper
/// for exercising the failure paths of decoding.
pub fn flip_sketch_digit(z: &Word, params: &Params, offset: usize) -> Result<Word> {
    let start = params.n + params.t + 1;
    if offset >= params.sketch_width {
        return Err(Error::RangeOutOfBounds {
            lo: offset,
            hi: offset,
            len: params.sketch_width,
        });
    }
    let mut syms = z.symbols().to_vec();
    let i = start + offset;
    syms[i] = ((u32::from(syms[i]) + 1) % params.q) as u8;
    Word::new(z.q(), syms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::encode;

    fn spec_841(messages: usize, bursts: BurstPlan, seed: u64) -> CampaignSpec {
        CampaignSpec {
            q: 3,
            t: 1,
            n: 841,
            mode: ParamMode::Compact,
            sketch_mode: SketchMode::Raw,
            seed,
            messages,
            bursts,
        }
    }

    #[test]
    fn exhaustive_campaign_passes_and_counts_trials() {
        let spec = spec_841(2, BurstPlan::Exhaustive, 7);
        let params =
            Params::derive(spec.q, spec.t, spec.n, spec.mode, spec.sketch_mode).unwrap();
        let report = run_campaign(&spec).unwrap();
        // one clean trial plus every position of a single deletion, per message
        assert_eq!(report.trials, 2 * (1 + params.codeword_len()));
        assert!(report.passed, "failures: {:?}", report.failures);
        assert!(report.failures.is_empty());
        assert_eq!(report.redundancy.redundancy_symbols, params.r);
        assert!(report
            .params
            .iter()
            .any(|(k, v)| k == "n" && v == "841"));
    }

    #[test]
    fn sampled_campaign_is_deterministic_up_to_timings() {
        let spec = spec_841(2, BurstPlan::Sample(17), 99);
        let a = run_campaign(&spec).unwrap();
        let b = run_campaign(&spec).unwrap();
        let strip = |r: &CampaignReport| {
            let mut v = serde_json::to_value(r).unwrap();
            v.as_object_mut().unwrap().remove("timings_ms");
            v
        };
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(a.trials, 2 * 17);
    }

    #[test]
    fn corrupted_sketch_cannot_return_a_wrong_message_silently_here() {
        let spec = spec_841(1, BurstPlan::Sample(1), 1);
        let params =
            Params::derive(spec.q, spec.t, spec.n, spec.mode, spec.sketch_mode).unwrap();
        let seed = message_seed(spec.seed, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = Word::new(
            params.q,
            (0..params.message_len())
                .map(|_| rng.random_range(0..params.q) as u8)
                .collect(),
        )
        .unwrap();
        let z = encode(&u, &params).unwrap();
        // corrupt a digit of the odd window sum, the one a single-window
        // instance actually consults, then delete inside the payload
        let bad = flip_sketch_digit(
            &z,
            &params,
            params.a0_width + params.a1_width + params.h_width + 3,
        )
        .unwrap();
        let y = bad.delete_burst(100, 1).unwrap();
        let got = crate::codec::decode(&y, &params);
        assert!(
            !matches!(&got, Ok(w) if *w == u),
            "corrupted sketch decoded as if clean"
        );
        assert!(flip_sketch_digit(&z, &params, params.sketch_width).is_err());
    }

    #[test]
    fn burst_plan_parsing() {
        assert_eq!("exhaustive".parse::<BurstPlan>().unwrap(), BurstPlan::Exhaustive);
        assert_eq!("sample:40".parse::<BurstPlan>().unwrap(), BurstPlan::Sample(40));
        assert!("sample:0".parse::<BurstPlan>().is_err());
        assert!("sample:x".parse::<BurstPlan>().is_err());
        assert!("everything".parse::<BurstPlan>().is_err());
    }

    #[test]
    fn ball_intersection_oracle_matches_hand_examples() {
        // both contain 0102 after one deletion
        let a = Word::new(3, vec![0, 1, 0, 0, 2]).unwrap();
        let b = Word::new(3, vec![0, 1, 1, 0, 2]).unwrap();
        assert!(deletion_balls_intersect(&a, &b, 1));
        // deleting one symbol of 00000 gives 0000 only; 22222 gives 2222
        let c = Word::new(3, vec![0; 5]).unwrap();
        let d = Word::new(3, vec![2; 5]).unwrap();
        assert!(!deletion_balls_intersect(&c, &d, 1));
        assert!(deletion_balls_intersect(&c, &c, 1));
    }

    #[test]
    fn codewords_have_disjoint_deletion_balls() {
        let params =
            Params::derive(3, 1, 841, ParamMode::Compact, SketchMode::Raw).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut words = Vec::new();
        for _ in 0..4 {
            let u = Word::new(
                params.q,
                (0..params.message_len())
                    .map(|_| rng.random_range(0..params.q) as u8)
                    .collect(),
            )
            .unwrap();
            words.push(encode(&u, &params).unwrap());
        }
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                assert!(
                    !deletion_balls_intersect(&words[i], &words[j], params.t),
                    "codewords {i} and {j} share a deletion result"
                );
            }
        }
    }
}
