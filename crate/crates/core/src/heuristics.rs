//! Expected-count models for Fibonacci-Wieferich primes and near misses.
//!
//! Three per-prime probability models:
//!
//! - `Cdp`: k is uniform on p residues, so P(k = 0) = 1/p for every prime.
//! - `Klaska`: split by p mod 5 — probability 1/p² when p ≡ ±1 (split
//!   case), 1/p when p ≡ ±2 (inert case).
//! - `NormHeuristic`: the split-case pair (a, b) is pinned to the line
//!   2a + b ≡ 0 mod p, leaving p choices, so both cases come back to 1/p;
//!   totals coincide with `Cdp` term by term.
//!
//! Near misses (|k| ≤ T) select 2T + 1 of p signed residues under the
//! uniform model, giving min(1, (2T+1)/p) per prime. Prime sums are exact
//! by sieve up to 10^8; past that the reciprocal-prime tail is
//! approximated by ∫ dt/(t·ln t) = Δ ln ln t and the result is flagged.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sieve::{segment_bounds, sieve_segment, simple_sieve};
use crate::wieferich::ScanSummary;

/// Exact prime enumeration stops here; larger bounds get the flagged
/// logarithmic-integral tail.
pub const EXACT_SUM_LIMIT: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HeuristicModel {
    #[serde(rename = "CDP")]
    Cdp,
    Klaska,
    NormHeuristic,
}

impl std::str::FromStr for HeuristicModel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "cdp" => Ok(HeuristicModel::Cdp),
            "klaska" => Ok(HeuristicModel::Klaska),
            "norm" | "normheuristic" | "norm-heuristic" => Ok(HeuristicModel::NormHeuristic),
            _ => Err(format!("unknown model {s:?} (expected cdp, klaska, or norm)")),
        }
    }
}

impl HeuristicModel {
    pub fn description(&self) -> &'static str {
        match self {
            HeuristicModel::Cdp => {
                "k uniform on p residues: probability 1/p per prime, every prime"
            }
            HeuristicModel::Klaska => {
                "split by p mod 5: probability 1/p² when p ≡ ±1 (split), 1/p when p ≡ ±2 (inert)"
            }
            HeuristicModel::NormHeuristic => {
                "the norm pins 2a + b ≡ 0 mod p, leaving p choices: 1/p in both splitting cases"
            }
        }
    }
}

impl std::fmt::Display for HeuristicModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HeuristicModel::Cdp => "CDP",
            HeuristicModel::Klaska => "Klaska",
            HeuristicModel::NormHeuristic => "NormHeuristic",
        })
    }
}

/// A count expectation, flagged when a tail approximation contributed.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Expectation {
    pub value: f64,
    pub approximate: bool,
}

fn validate_range(lo: u64, hi: u64) -> Result<()> {
    if lo < 7 {
        return Err(Error::RangeInvalid { lo, hi, reason: "range must start at 7 or above" });
    }
    if hi < lo {
        return Err(Error::RangeInvalid { lo, hi, reason: "empty range" });
    }
    Ok(())
}

/// Σ f(p) over primes in [lo, hi], segment-parallel with a deterministic
/// ordered reduction so the floating-point sum is reproducible for any
/// worker count.
fn sum_over_primes<F>(lo: u64, hi: u64, f: F) -> f64
where
    F: Fn(u64) -> f64 + Sync,
{
    if hi < lo {
        return 0.0;
    }
    let base = simple_sieve(hi.isqrt());
    let partials: Vec<f64> = segment_bounds(lo, hi, 1 << 20)
        .into_par_iter()
        .map(|(seg_lo, seg_hi)| {
            sieve_segment(seg_lo, seg_hi, &base).into_iter().map(&f).sum()
        })
        .collect();
    partials.into_iter().sum()
}

/// Δ ln ln over [lo, hi]: the logarithmic-integral estimate of Σ 1/p.
fn reciprocal_prime_tail(lo: u64, hi: u64) -> f64 {
    (hi as f64).ln().ln() - (lo as f64).ln().ln()
}

/// Expected number of Fibonacci-Wieferich primes in [lo, hi] under the
/// chosen model.
pub fn expected_fw_count(model: HeuristicModel, lo: u64, hi: u64) -> Result<Expectation> {
    validate_range(lo, hi)?;
    let exact_hi = hi.min(EXACT_SUM_LIMIT);
    let value = match model {
        HeuristicModel::Cdp | HeuristicModel::NormHeuristic => {
            sum_over_primes(lo, exact_hi, |p| 1.0 / p as f64)
        }
        HeuristicModel::Klaska => sum_over_primes(lo, exact_hi, |p| {
            if p % 5 == 1 || p % 5 == 4 {
                1.0 / (p as f64 * p as f64)
            } else {
                1.0 / p as f64
            }
        }),
    };
    if hi <= EXACT_SUM_LIMIT {
        return Ok(Expectation { value, approximate: false });
    }
    // tail: 1/p over half the primes for Klaska (the ±2 classes; the ±1
    // classes contribute Σ 1/p² < 1/(X ln X) ≈ 5e-10, ignored), all of
    // them otherwise
    let tail = reciprocal_prime_tail(EXACT_SUM_LIMIT, hi);
    let tail = match model {
        HeuristicModel::Klaska => 0.5 * tail,
        _ => tail,
    };
    Ok(Expectation { value: value + tail, approximate: true })
}

/// Expected near misses in [lo, hi] at threshold T under the uniform-k
/// model: Σ min(1, (2T+1)/p).
pub fn expected_near_misses(lo: u64, hi: u64, threshold: u64) -> Result<Expectation> {
    expected_near_misses_for(HeuristicModel::Cdp, lo, hi, threshold)
}

/// Model-specific near-miss expectation. Under `Klaska` the split-case
/// probability scales as (2T+1)/p², mirroring its 1/p² fw-chance.
pub fn expected_near_misses_for(
    model: HeuristicModel,
    lo: u64,
    hi: u64,
    threshold: u64,
) -> Result<Expectation> {
    validate_range(lo, hi)?;
    let window = 2.0 * threshold as f64 + 1.0;
    let exact_hi = hi.min(EXACT_SUM_LIMIT);
    let value = match model {
        HeuristicModel::Cdp | HeuristicModel::NormHeuristic => {
            sum_over_primes(lo, exact_hi, |p| (window / p as f64).min(1.0))
        }
        HeuristicModel::Klaska => sum_over_primes(lo, exact_hi, |p| {
            if p % 5 == 1 || p % 5 == 4 {
                (window / (p as f64 * p as f64)).min(1.0)
            } else {
                (window / p as f64).min(1.0)
            }
        }),
    };
    if hi <= EXACT_SUM_LIMIT {
        return Ok(Expectation { value, approximate: false });
    }
    let tail = reciprocal_prime_tail(EXACT_SUM_LIMIT, hi);
    let tail = match model {
        HeuristicModel::Klaska => 0.5 * window * tail,
        _ => window * tail,
    };
    Ok(Expectation { value: value + tail, approximate: true })
}

/// Expected-vs-observed comparison for a completed scan.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ComparisonReport {
    pub range: [u64; 2],
    pub threshold: u64,
    pub model: HeuristicModel,
    pub expected: f64,
    pub observed: u64,
    pub poisson_sigma: f64,
    pub z_score: f64,
    pub anomalous: bool,
    pub approximate: bool,
}

/// Compare a scan's near-miss count against the model expectation,
/// flagging |z| > 3 as anomalous.
pub fn compare(summary: &ScanSummary, model: HeuristicModel) -> Result<ComparisonReport> {
    let [lo, hi] = summary.range;
    let expectation = expected_near_misses_for(model, lo, hi, summary.threshold)?;
    let expected = expectation.value;
    let observed = summary.near_misses;
    let poisson_sigma = expected.sqrt();
    let z_score = if expected > 0.0 { (observed as f64 - expected) / poisson_sigma } else { 0.0 };
    Ok(ComparisonReport {
        range: summary.range,
        threshold: summary.threshold,
        model,
        expected,
        observed,
        poisson_sigma,
        z_score,
        anomalous: z_score.abs() > 3.0 || (expected == 0.0 && observed > 0),
        approximate: expectation.approximate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_prime_range() {
        let e = expected_fw_count(HeuristicModel::Cdp, 7, 7).unwrap();
        assert!((e.value - 1.0 / 7.0).abs() < 1e-15);
        assert!(!e.approximate);
    }

    #[test]
    fn cdp_on_small_range_matches_direct_sum() {
        // the 22 primes in [7, 100], summed directly
        let primes = [
            7u64, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
            89, 97,
        ];
        let direct: f64 = primes.iter().map(|&p| 1.0 / p as f64).sum();
        assert!((direct - 0.769_484).abs() < 1e-6);
        let e = expected_fw_count(HeuristicModel::Cdp, 7, 100).unwrap();
        assert!((e.value - direct).abs() < 1e-12);
        // NormHeuristic coincides with CDP term by term
        let n = expected_fw_count(HeuristicModel::NormHeuristic, 7, 100).unwrap();
        assert_eq!(e.value, n.value);
    }

    #[test]
    fn klaska_is_below_cdp() {
        for (lo, hi) in [(7u64, 100u64), (100, 10_000), (7, 1_000_000)] {
            let cdp = expected_fw_count(HeuristicModel::Cdp, lo, hi).unwrap().value;
            let klaska = expected_fw_count(HeuristicModel::Klaska, lo, hi).unwrap().value;
            assert!(klaska < cdp, "[{lo},{hi}]: {klaska} vs {cdp}");
        }
    }

    #[test]
    fn near_miss_examples() {
        // T = 0 reduces to the fw expectation
        let t0 = expected_near_misses(7, 10_000, 0).unwrap().value;
        let fw = expected_fw_count(HeuristicModel::Cdp, 7, 10_000).unwrap().value;
        assert!((t0 - fw).abs() < 1e-12);

        // single prime 101 at T = 50: 2T+1 = 101 residues of 101, clamped
        let e = expected_near_misses(101, 101, 50).unwrap().value;
        assert_eq!(e, 1.0);
    }

    #[test]
    fn near_miss_is_window_times_reciprocal_sum_when_unclamped() {
        // every prime in [10^4, 10^6] exceeds 2T+1 = 201, so no term clamps
        // and the expectation is exactly 201·Σ 1/p
        let nm = expected_near_misses(10_000, 1_000_000, 100).unwrap().value;
        let fw = expected_fw_count(HeuristicModel::Cdp, 10_000, 1_000_000).unwrap().value;
        assert!((nm - 201.0 * fw).abs() < 1e-9, "{nm} vs {}", 201.0 * fw);
    }

    #[test]
    fn near_miss_monotonicity() {
        let base = expected_near_misses(1000, 100_000, 50).unwrap().value;
        assert!(expected_near_misses(1000, 100_000, 100).unwrap().value >= base);
        assert!(expected_near_misses(1000, 200_000, 50).unwrap().value >= base);
    }

    #[test]
    fn range_validation() {
        assert!(matches!(
            expected_fw_count(HeuristicModel::Cdp, 3, 100),
            Err(Error::RangeInvalid { .. })
        ));
        assert!(matches!(
            expected_near_misses(100, 7, 10),
            Err(Error::RangeInvalid { .. })
        ));
    }

    #[test]
    fn tail_is_flagged() {
        let e = expected_fw_count(HeuristicModel::Cdp, 7, 200_000_000).unwrap();
        assert!(e.approximate);
        let exact = expected_fw_count(HeuristicModel::Cdp, 7, 100_000_000).unwrap();
        assert!(!exact.approximate);
        assert!(e.value > exact.value);
    }

    #[test]
    fn z_score_definition() {
        let summary = |near: u64| ScanSummary {
            range: [7, 10_000],
            threshold: 10,
            primes_tested: 1226,
            near_misses: near,
            fw_found: 0,
            min_abs_k: Some(1),
            elapsed_seconds: 0.0,
        };
        let expected = expected_near_misses(7, 10_000, 10).unwrap().value;
        let at_mean = compare(&summary(expected.round() as u64), HeuristicModel::Cdp).unwrap();
        assert!(at_mean.z_score.abs() < 0.2);
        assert!(!at_mean.anomalous);

        let spiked = (expected + 3.5 * expected.sqrt()).ceil() as u64;
        let high = compare(&summary(spiked), HeuristicModel::Cdp).unwrap();
        assert!(high.z_score > 3.0);
        assert!(high.anomalous);
    }
}
