//! Heights, radicals, and qualities of the Fibonacci triples
//! (√5·Fₙ, −αⁿ, ᾱⁿ) on X + Y + Z = 0, plus the squarefree split
//! Fₙ = Uₙ·Vₙ they depend on. Includes the integer factorization
//! utilities (`factor`).
//!
//! The height comparison never touches floating point. Both embedding
//! maxima equal max(√5Fₙ, αⁿ), and since √5Fₙ = αⁿ − ᾱⁿ the comparison is
//! settled by the sign of ᾱⁿ:
//!
//! - n odd:  ᾱⁿ < 0, so √5Fₙ > αⁿ and H = 5Fₙ² exactly;
//! - n even: ᾱⁿ > 0, so H = α^(2n), and H − 5Fₙ² = 2 − ᾱ^(2n) > 0,
//!   verified exactly in the golden ring.
//!
//! The radical uses absolute norms so it stays a positive integer: each
//! rational prime p | Fₙ contributes p² whether it splits (two conjugate
//! primes of norm ±p) or stays inert (norm p²); the ramified √5 factor
//! contributes |N(√5)| = 5 once, which also covers a 5-part of Fₙ.

pub mod bigreal;
pub mod factor;

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fibonacci;
use crate::golden_ring::GoldenInt;
use bigreal::BigReal;
use factor::{FactorBudget, FactorMap};

/// Default cap on the triple index; factorization above it is a lost cause
/// at desk scale and callers should raise it explicitly.
pub const DEFAULT_INDEX_CAP: u64 = 150;

/// Default precision for log-height and log-radical values.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

fn ser_biguint<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Exact measures of one Fibonacci abc-triple.
#[derive(Clone, Debug, Serialize)]
pub struct AbcTripleReport {
    pub n: u64,
    #[serde(serialize_with = "ser_biguint")]
    pub f_n: BigUint,
    #[serde(serialize_with = "ser_biguint")]
    pub u_n: BigUint,
    #[serde(serialize_with = "ser_biguint")]
    pub v_n: BigUint,
    pub log_height: f64,
    pub log_radical: f64,
    pub quality: f64,
    /// H ≥ 5Fₙ², checked exactly.
    pub height_bound_ok: bool,
    /// rad ≤ 5Uₙ²Vₙ, checked exactly.
    pub radical_bound_ok: bool,
}

fn check_index(n: u64, cap: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::ConfigInvalid("abc triple undefined for n = 0".into()));
    }
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    Ok(())
}

fn factored_fib(n: u64, budget: &FactorBudget) -> Result<(BigUint, FactorMap)> {
    let f_n = fibonacci::fib_exact(n)?;
    let map = factor::factorize(&f_n, budget);
    if !map.complete {
        return Err(Error::IncompleteFactorization { n: format!("F({n}) = {f_n}") });
    }
    Ok((f_n, map))
}

/// (Uₙ, Vₙ): Uₙ = product of primes dividing Fₙ exactly once, Vₙ = Fₙ/Uₙ.
pub fn squarefree_split(n: u64) -> Result<(BigUint, BigUint)> {
    squarefree_split_with(n, &FactorBudget::default())
}

pub fn squarefree_split_with(n: u64, budget: &FactorBudget) -> Result<(BigUint, BigUint)> {
    if n == 0 {
        return Err(Error::ConfigInvalid("abc triple undefined for n = 0".into()));
    }
    let (f_n, map) = factored_fib(n, budget)?;
    let mut u = BigUint::one();
    for (p, e) in &map.factors {
        if *e == 1 {
            u *= p;
        }
    }
    let v = &f_n / &u;
    Ok((u, v))
}

/// rad = 5·∏ p² over distinct rational primes p | Fₙ, p ≠ 5.
pub fn triple_radical(n: u64) -> Result<BigUint> {
    triple_radical_with(n, &FactorBudget::default())
}

pub fn triple_radical_with(n: u64, budget: &FactorBudget) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::ConfigInvalid("abc triple undefined for n = 0".into()));
    }
    let (_, map) = factored_fib(n, budget)?;
    let five = BigUint::from(5u32);
    let mut rad = five.clone();
    for p in map.distinct_primes() {
        if *p != five {
            rad *= p * p;
        }
    }
    Ok(rad)
}

/// log H at the requested precision: 5Fₙ² exactly for odd n, α^(2n) for
/// even n.
pub fn triple_height_log(n: u64, precision_bits: u32) -> Result<BigReal> {
    if n == 0 {
        return Err(Error::ConfigInvalid("abc triple undefined for n = 0".into()));
    }
    if n % 2 == 1 {
        let f_n = fibonacci::fib_exact(n)?;
        let h = BigUint::from(5u32) * &f_n * &f_n;
        Ok(BigReal::ln_of_biguint(&h, precision_bits))
    } else {
        Ok(BigReal::ln_alpha(precision_bits).scale_u64(2 * n))
    }
}

/// Exact check that H ≥ 5Fₙ². Odd n gives equality; even n reduces to
/// 2 − ᾱ^(2n) > 0, decided by the exact real sign.
fn height_bound_holds(n: u64) -> bool {
    if n % 2 == 1 {
        return true;
    }
    let alpha_bar_2n = GoldenInt::alpha_bar().pow(2 * n);
    let margin = &GoldenInt::new(2, 0) - &alpha_bar_2n;
    margin.real_sign() == Ordering::Greater
}

/// Quality log H / log rad at the requested precision.
pub fn triple_quality(n: u64, precision_bits: u32) -> Result<BigReal> {
    triple_quality_with(n, precision_bits, &FactorBudget::default())
}

pub fn triple_quality_with(n: u64, precision_bits: u32, budget: &FactorBudget) -> Result<BigReal> {
    let log_h = triple_height_log(n, precision_bits)?;
    let rad = triple_radical_with(n, budget)?;
    let log_rad = BigReal::ln_of_biguint(&rad, precision_bits);
    Ok(log_h.div(&log_rad))
}

/// Assemble the full report for index n with default budget and precision.
pub fn triple_report(n: u64) -> Result<AbcTripleReport> {
    triple_report_with(n, DEFAULT_INDEX_CAP, DEFAULT_PRECISION_BITS, &FactorBudget::default())
}

pub fn triple_report_with(
    n: u64,
    index_cap: u64,
    precision_bits: u32,
    budget: &FactorBudget,
) -> Result<AbcTripleReport> {
    check_index(n, index_cap)?;
    let (f_n, map) = factored_fib(n, budget)?;
    let mut u_n = BigUint::one();
    let five = BigUint::from(5u32);
    let mut rad = five.clone();
    for (p, e) in &map.factors {
        if *e == 1 {
            u_n *= p;
        }
        if *p != five {
            rad *= p * p;
        }
    }
    let v_n = &f_n / &u_n;

    // rad ≤ 5Uₙ²Vₙ, exact integers on both sides
    let radical_bound_ok = rad <= &five * &u_n * &u_n * &v_n;
    let height_bound_ok = height_bound_holds(n);

    let log_height = triple_height_log(n, precision_bits)?;
    let log_radical = BigReal::ln_of_biguint(&rad, precision_bits);
    let quality = log_height.div(&log_radical);

    Ok(AbcTripleReport {
        n,
        f_n,
        u_n,
        v_n,
        log_height: log_height.to_f64(),
        log_radical: log_radical.to_f64(),
        quality: quality.to_f64(),
        height_bound_ok,
        radical_bound_ok,
    })
}
