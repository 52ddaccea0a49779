//! Prime generation: a simple sieve for base primes and a segmented sieve
//! of Eratosthenes for range scans. Segments are independent, so callers
//! can fan them out across workers and merge results in segment order.

/// All primes ≤ limit by a plain odd-only sieve. Intended for base primes
/// (√range) and small verification ranges, not for the scan path itself.
pub fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut is_comp = vec![false; n / 2 + 1]; // index i ↔ odd number 2i+1
    let mut primes = vec![2u64];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !is_comp[i] {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j <= n / 2 {
                is_comp[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    for (i, &comp) in is_comp.iter().enumerate().skip(1) {
        if !comp && 2 * i < n {
            primes.push((2 * i + 1) as u64);
        }
    }
    primes
}

/// Inclusive segment bounds partitioning [lo, hi] exactly.
pub fn segment_bounds(lo: u64, hi: u64, segment_size: u64) -> Vec<(u64, u64)> {
    assert!(segment_size >= 1);
    let mut bounds = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = start.saturating_add(segment_size - 1).min(hi);
        bounds.push((start, end));
        if end == u64::MAX {
            break;
        }
        start = end + 1;
    }
    bounds
}

/// Primes in [lo, hi] by marking multiples of the supplied base primes.
/// `base_primes` must cover every prime ≤ √hi.
pub fn sieve_segment(lo: u64, hi: u64, base_primes: &[u64]) -> Vec<u64> {
    if hi < 2 || hi < lo {
        return Vec::new();
    }
    let lo = lo.max(2);
    let len = (hi - lo + 1) as usize;
    let mut is_comp = vec![false; len];
    for &p in base_primes {
        if p * p > hi {
            break;
        }
        // first multiple of p in [lo, hi], at least p²
        let mut start = lo.div_ceil(p) * p;
        if start < p * p {
            start = p * p;
        }
        let mut j = start;
        while j <= hi {
            is_comp[(j - lo) as usize] = true;
            j += p;
        }
    }
    (0..len)
        .filter(|&i| !is_comp[i])
        .map(|i| lo + i as u64)
        .collect()
}

/// Iterator over segments of primes in ascending order.
pub struct PrimeSegments {
    bounds: std::vec::IntoIter<(u64, u64)>,
    base_primes: Vec<u64>,
}

impl Iterator for PrimeSegments {
    type Item = PrimeSegment;

    fn next(&mut self) -> Option<PrimeSegment> {
        let (lo, hi) = self.bounds.next()?;
        Some(PrimeSegment { lo, hi, primes: sieve_segment(lo, hi, &self.base_primes) })
    }
}

#[derive(Clone, Debug)]
pub struct PrimeSegment {
    pub lo: u64,
    pub hi: u64,
    pub primes: Vec<u64>,
}

/// Segmented sieve over [lo, hi]: ascending prime lists, one per segment.
pub fn prime_segments(lo: u64, hi: u64, segment_size: u64) -> PrimeSegments {
    let base = if hi >= 4 { simple_sieve(hi.isqrt()) } else { Vec::new() };
    PrimeSegments { bounds: segment_bounds(lo, hi, segment_size).into_iter(), base_primes: base }
}

/// Convenience: all primes in [lo, hi] as one vector.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    prime_segments(lo, hi, 1 << 20).flat_map(|seg| seg.primes).collect()
}
