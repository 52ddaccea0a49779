//! Fibonacci-Wieferich (Wall-Sun-Sun) prime testing.
//!
//! Three equivalent criteria are in play for a prime p ∉ {2, 5}:
//!
//! 1. π(p) = π(p²) — the definition;
//! 2. p² | F(p − ε), ε = (p/5) — the fast path. F(p − ε) ≡ 0 mod p always
//!    holds, so F(p − ε) ≡ kp mod p² defines the k-value, and the prime is
//!    Fibonacci-Wieferich exactly when k = 0;
//! 3. α^(p²−1) ≡ 1 mod p² in Z\[α\] — the golden-ring criterion. The power
//!    is always 1 + k_p·p mod p² with k_p = a + bα, 0 ≤ a, b < p, and the
//!    prime is Fibonacci-Wieferich exactly when (a, b) = (0, 0).
//!
//! Since N(α^(p²−1)) = (αᾱ)^(p²−1) = 1 (the exponent is even), the pair is
//! pinned to the line 2a + b ≡ 0 mod p; that norm constraint is re-checked
//! whenever the α-criterion runs, as a continuous guard on the arithmetic.
//!
//! A disagreement between criteria is an arithmetic bug and surfaces as
//! `SanityViolation`, never as data. A k = 0 finding, on the other hand,
//! is data: the scanner records it and keeps going.

pub mod checkpoint;
pub mod scan;

pub use scan::{scan, ScanConfig, ScanOutcome, ScanSummary};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibonacci::{fib_pair_mod_u64, legendre5};
use crate::golden_ring::{GoldenResidue, Modulus};

/// Largest prime the scanner accepts: p² must fit in u64.
pub const MAX_SCAN_PRIME: u64 = u32::MAX as u64;

/// Per-prime Fibonacci-Wieferich test result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FwRecord {
    pub p: u64,
    /// Legendre symbol (p/5).
    pub epsilon: i8,
    /// Signed representative in (−p/2, p/2] of F(p−ε)/p mod p.
    pub k: i64,
    /// Coordinates of k_p = a + bα from the α-criterion, in [0, p).
    pub a: u64,
    pub b: u64,
    pub is_fw: bool,
    pub is_near_miss: bool,
}

impl FwRecord {
    /// CSV row `p,epsilon,k,a,b,is_fw,is_near_miss` with booleans as 0/1.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.p,
            self.epsilon,
            self.k,
            self.a,
            self.b,
            self.is_fw as u8,
            self.is_near_miss as u8
        )
    }

    pub fn parse_csv_row(line: &str) -> Result<FwRecord> {
        let bad = |what: &str| Error::CheckpointCorrupt(format!("{what} in row {line:?}"));
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 7 {
            return Err(bad("wrong field count"));
        }
        let parse_bool = |s: &str| match s {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(bad("bad boolean")),
        };
        let epsilon: i8 = fields[1].parse().map_err(|_| bad("bad epsilon"))?;
        if epsilon != 1 && epsilon != -1 {
            return Err(bad("epsilon out of range"));
        }
        Ok(FwRecord {
            p: fields[0].parse().map_err(|_| bad("bad p"))?,
            epsilon,
            k: fields[2].parse().map_err(|_| bad("bad k"))?,
            a: fields[3].parse().map_err(|_| bad("bad a"))?,
            b: fields[4].parse().map_err(|_| bad("bad b"))?,
            is_fw: parse_bool(fields[5])?,
            is_near_miss: parse_bool(fields[6])?,
        })
    }
}

/// α-criterion outcome: α^(p²−1) = 1 + (a + bα)p mod p².
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphaCriterion {
    pub is_fw: bool,
    pub a: u64,
    pub b: u64,
}

fn check_scan_prime(p: u64) -> Result<u64> {
    if p == 2 || p == 5 {
        return Err(Error::ConfigInvalid(format!(
            "p = {p} is excluded: 2 and 5 satisfy Wall's conjecture by direct check"
        )));
    }
    if p > MAX_SCAN_PRIME {
        return Err(Error::ConfigInvalid(format!("p = {p} exceeds the p² < 2^64 scan domain")));
    }
    Ok(p * p)
}

/// Fast path: ε and the signed k-value from F(p−ε) mod p².
/// The caller guarantees p is prime.
pub(crate) fn fw_k_fast(p: u64) -> Result<(i8, i64)> {
    let p2 = check_scan_prime(p)?;
    let epsilon = legendre5(p)?;
    let index = if epsilon == 1 { p - 1 } else { p + 1 };
    let f = fib_pair_mod_u64(index, p2).0;
    if !f.is_multiple_of(p) {
        // F(p−ε) ≡ 0 mod p is a theorem for primes; its failure means the
        // arithmetic is broken or p is not prime.
        return Err(Error::SanityViolation(format!(
            "F({index}) mod {p} = {} ≠ 0 at p = {p}; arithmetic bug or composite input",
            f % p
        )));
    }
    let q = f / p; // in [0, p)
    let k = if q > p / 2 { q as i64 - p as i64 } else { q as i64 };
    Ok((epsilon, k))
}

/// α-criterion: compute α^(p²−1) mod p² and extract (a, b).
pub fn alpha_criterion(p: u64) -> Result<AlphaCriterion> {
    let p2 = check_scan_prime(p)?;
    let modulus = Modulus::from_u64(p2)?;
    let power = GoldenResidue::alpha(&modulus).pow(&(p2 - 1).into());
    let (x, y) = (as_u64(&power.x()), as_u64(&power.y()));
    if x % p != 1 || y % p != 0 {
        return Err(Error::SanityViolation(format!(
            "α^(p²−1) mod {p} ≠ 1 at p = {p}; arithmetic bug or composite input"
        )));
    }
    let a = (x - 1) / p;
    let b = y / p;
    Ok(AlphaCriterion { is_fw: a == 0 && b == 0, a, b })
}

fn as_u64(v: &num_bigint::BigUint) -> u64 {
    use num_traits::ToPrimitive;
    v.to_u64().expect("residue below a u64 modulus")
}

/// The norm constraint 2a + b ≡ 0 mod p; must hold for every prime.
pub fn norm_constraint_check(p: u64) -> Result<bool> {
    let c = alpha_criterion(p)?;
    Ok(norm_constraint_holds(p, c.a, c.b))
}

#[inline]
fn norm_constraint_holds(p: u64, a: u64, b: u64) -> bool {
    (2 * a as u128 + b as u128).is_multiple_of(p as u128)
}

/// Full per-prime test: fast path and α-criterion, cross-checked, with the
/// near-miss flag at the given threshold. The caller guarantees p prime.
pub fn fw_test(p: u64, threshold: u64) -> Result<FwRecord> {
    let (epsilon, k) = fw_k_fast(p)?;
    let alpha = alpha_criterion(p)?;
    cross_check(p, k, &alpha)?;
    Ok(FwRecord {
        p,
        epsilon,
        k,
        a: alpha.a,
        b: alpha.b,
        is_fw: k == 0,
        is_near_miss: k.unsigned_abs() <= threshold,
    })
}

/// The two criteria must agree, and the norm constraint must hold.
pub(crate) fn cross_check(p: u64, k: i64, alpha: &AlphaCriterion) -> Result<()> {
    if alpha.is_fw != (k == 0) {
        return Err(Error::SanityViolation(format!(
            "criteria disagree at p = {p}: k = {k} but α-criterion says is_fw = {}",
            alpha.is_fw
        )));
    }
    if !norm_constraint_holds(p, alpha.a, alpha.b) {
        return Err(Error::SanityViolation(format!(
            "norm constraint 2a + b ≡ 0 mod p fails at p = {p}: a = {}, b = {}",
            alpha.a, alpha.b
        )));
    }
    Ok(())
}

/// Primes of [lo, hi] in ascending segments (re-export of the sieve with
/// the scanner's segment semantics).
pub fn prime_segments(lo: u64, hi: u64, segment_size: u64) -> crate::sieve::PrimeSegments {
    crate::sieve::prime_segments(lo, hi, segment_size)
}
