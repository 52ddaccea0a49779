//! Parallel segmented Fibonacci-Wieferich scanner.
//!
//! The range is cut into fixed segments; workers sieve and test disjoint
//! segments sharing nothing but the immutable config, and a single
//! collector folds segment results back in ascending-segment order. Output
//! is therefore byte-identical for any worker count, and checkpoints are
//! written only at segment boundaries (temp file + atomic rename).
//!
//! Per prime, the fast path computes the k-value from F(p−ε) mod p². The
//! α-criterion runs on every emitted record and on a deterministic,
//! seed-keyed sample of the remaining primes, so the golden-ring route
//! continuously guards the Fibonacci route at negligible cost. Any
//! disagreement aborts the scan loudly. A genuine k = 0 hit does not: the
//! record is emitted, the checkpoint flushed, and the scan continues.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::abc_triples::factor::splitmix64;
use crate::error::{Error, Result};
use crate::sieve::{segment_bounds, sieve_segment, simple_sieve};
use crate::wieferich::{alpha_criterion, checkpoint, cross_check, fw_k_fast, FwRecord, MAX_SCAN_PRIME};

pub const DEFAULT_THRESHOLD: u64 = 100;
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 20;
pub const DEFAULT_SAMPLE_RATE: f64 = 1.0 / 256.0;

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub range_start: u64,
    pub range_end: u64,
    /// Near-miss bound: emit every prime with |k| ≤ threshold.
    pub threshold: u64,
    pub segment_size: u64,
    pub worker_count: usize,
    pub checkpoint_path: Option<PathBuf>,
    /// Fraction of non-emitted primes that also get the α-criterion check.
    pub cross_check_sample_rate: f64,
    /// Keys the sampling hash; fixed seed means reproducible sampling.
    pub seed: u64,
}

impl ScanConfig {
    pub fn new(range_start: u64, range_end: u64) -> ScanConfig {
        ScanConfig {
            range_start,
            range_end,
            threshold: DEFAULT_THRESHOLD,
            segment_size: DEFAULT_SEGMENT_SIZE,
            worker_count: std::thread::available_parallelism().map_or(1, |n| n.get()),
            checkpoint_path: None,
            cross_check_sample_rate: DEFAULT_SAMPLE_RATE,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::ConfigInvalid(msg));
        if self.range_start < 7 {
            return invalid(format!(
                "range must start at 7 or above (2, 3, 5 are excluded), got {}",
                self.range_start
            ));
        }
        if self.range_end > MAX_SCAN_PRIME {
            return invalid(format!("range end {} exceeds the p² < 2^64 domain", self.range_end));
        }
        if self.segment_size == 0 {
            return invalid("segment_size must be positive".into());
        }
        if self.worker_count == 0 {
            return invalid("worker_count must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.cross_check_sample_rate) {
            return invalid(format!(
                "cross_check_sample_rate must be in [0, 1], got {}",
                self.cross_check_sample_rate
            ));
        }
        Ok(())
    }
}

/// The machine-readable scan summary.
#[derive(Clone, Debug, Serialize, serde::Deserialize)]
pub struct ScanSummary {
    pub range: [u64; 2],
    pub threshold: u64,
    pub primes_tested: u64,
    pub near_misses: u64,
    pub fw_found: u64,
    pub min_abs_k: Option<u64>,
    pub elapsed_seconds: f64,
}

/// Everything a scan produces. The histogram counts k mod 16 over all
/// tested primes of the current process (it is not persisted across a
/// checkpoint resume; the emitted records and counts are).
#[derive(Clone, Debug)]
pub struct ScanOutcome {
    pub records: Vec<FwRecord>,
    pub summary: ScanSummary,
    pub k_mod16_histogram: [u64; 16],
}

struct SegmentOutcome {
    hi: u64,
    primes_tested: u64,
    min_abs_k: Option<u64>,
    histogram: [u64; 16],
    records: Vec<FwRecord>,
}

fn process_segment(
    lo: u64,
    hi: u64,
    base_primes: &[u64],
    config: &ScanConfig,
    sample_limit: u128,
) -> Result<SegmentOutcome> {
    let mut out = SegmentOutcome {
        hi,
        primes_tested: 0,
        min_abs_k: None,
        histogram: [0; 16],
        records: Vec::new(),
    };
    for p in sieve_segment(lo, hi, base_primes) {
        let (epsilon, k) = fw_k_fast(p)?;
        out.primes_tested += 1;
        let abs_k = k.unsigned_abs();
        if out.min_abs_k.is_none_or(|m| abs_k < m) {
            out.min_abs_k = Some(abs_k);
        }
        out.histogram[k.rem_euclid(16) as usize] += 1;

        let emit = abs_k <= config.threshold;
        let sampled = (splitmix64(p ^ config.seed) as u128) < sample_limit;
        if emit || sampled {
            let alpha = alpha_criterion(p)?;
            cross_check(p, k, &alpha)?;
            if emit {
                out.records.push(FwRecord {
                    p,
                    epsilon,
                    k,
                    a: alpha.a,
                    b: alpha.b,
                    is_fw: k == 0,
                    is_near_miss: true,
                });
            }
        }
    }
    Ok(out)
}

/// Run a scan to completion, resuming from the checkpoint when one exists.
pub fn scan(config: &ScanConfig) -> Result<ScanOutcome> {
    config.validate()?;
    let started = Instant::now();

    // Resume state. Counts for the already-completed region are recovered
    // by recounting primes (cheap sieve pass); emitted rows come from the
    // checkpoint verbatim.
    let mut records: Vec<FwRecord> = Vec::new();
    let mut primes_tested = 0u64;
    let mut min_abs_k: Option<u64> = None;
    let mut histogram = [0u64; 16];
    let mut start = config.range_start;

    if let Some(path) = &config.checkpoint_path {
        if let Some(ckpt) = checkpoint::load(path)? {
            if ckpt.completed_through.saturating_add(1) < config.range_start {
                return Err(Error::CheckpointCorrupt(format!(
                    "completed_through = {} below range start {}",
                    ckpt.completed_through, config.range_start
                )));
            }
            for r in &ckpt.records {
                if r.p < config.range_start || r.p > config.range_end {
                    return Err(Error::CheckpointCorrupt(format!(
                        "row p = {} outside scan range",
                        r.p
                    )));
                }
                if r.p > ckpt.completed_through {
                    return Err(Error::CheckpointCorrupt(format!(
                        "row p = {} beyond completed_through",
                        r.p
                    )));
                }
                if r.is_near_miss != (r.k.unsigned_abs() <= config.threshold) {
                    return Err(Error::CheckpointCorrupt(format!(
                        "row p = {} was emitted under a different threshold",
                        r.p
                    )));
                }
                let abs_k = r.k.unsigned_abs();
                if min_abs_k.is_none_or(|m| abs_k < m) {
                    min_abs_k = Some(abs_k);
                }
                histogram[r.k.rem_euclid(16) as usize] += 1;
            }
            let done_hi = ckpt.completed_through.min(config.range_end);
            if done_hi >= config.range_start {
                let base = simple_sieve(done_hi.isqrt());
                primes_tested = segment_bounds(config.range_start, done_hi, config.segment_size)
                    .into_par_iter()
                    .map(|(lo, hi)| sieve_segment(lo, hi, &base).len() as u64)
                    .sum();
            }
            records = ckpt.records;
            start = ckpt.completed_through.saturating_add(1).max(config.range_start);
        }
    }

    let sample_limit = (config.cross_check_sample_rate * 2f64.powi(64)) as u128;
    let bounds = if start <= config.range_end {
        segment_bounds(start, config.range_end, config.segment_size)
    } else {
        Vec::new()
    };
    let base_primes = if config.range_end >= 4 {
        simple_sieve(config.range_end.isqrt())
    } else {
        Vec::new()
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.worker_count)
        .build()
        .map_err(|e| Error::ConfigInvalid(format!("worker pool: {e}")))?;

    // Batches of segments: parallel within a batch, sequential fold across
    // batches so the checkpoint advances in order.
    let mut completed_through = start.saturating_sub(1);
    for batch in bounds.chunks(config.worker_count.max(1) * 4) {
        let results: Vec<SegmentOutcome> = pool.install(|| {
            batch
                .par_iter()
                .map(|&(lo, hi)| process_segment(lo, hi, &base_primes, config, sample_limit))
                .collect::<Result<Vec<_>>>()
        })?;
        for seg in results {
            primes_tested += seg.primes_tested;
            if let Some(m) = seg.min_abs_k {
                if min_abs_k.is_none_or(|cur| m < cur) {
                    min_abs_k = Some(m);
                }
            }
            for (acc, v) in histogram.iter_mut().zip(seg.histogram) {
                *acc += v;
            }
            records.extend(seg.records);
            completed_through = seg.hi;
        }
        if let Some(path) = &config.checkpoint_path {
            checkpoint::save(path, completed_through, &records)?;
        }
    }

    // A fully resumed scan (empty tail) still rewrites its final marker.
    if bounds.is_empty() {
        if let Some(path) = &config.checkpoint_path {
            checkpoint::save(path, completed_through.min(config.range_end), &records)?;
        }
    }

    let summary = ScanSummary {
        range: [config.range_start, config.range_end],
        threshold: config.threshold,
        primes_tested,
        near_misses: records.iter().filter(|r| r.is_near_miss).count() as u64,
        fw_found: records.iter().filter(|r| r.is_fw).count() as u64,
        min_abs_k,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    };
    Ok(ScanOutcome { records, summary, k_mod16_histogram: histogram })
}
