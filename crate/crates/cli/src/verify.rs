//! Verification suites: re-derive the structural properties over a range
//! and fail loudly (exit 4) on the first violation. Each suite prints one
//! line per check with the count of cases examined, and the first
//! counterexample when there is one.

use clap::ValueEnum;
use rayon::prelude::*;
use wallsun_core::golden_ring::{multiplicative_order, GoldenResidue, Modulus};
use wallsun_core::sieve::primes_in_range;
use wallsun_core::{abc_triples, periods, wieferich};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Period divisibility, lifting law, and the brute-force period oracle
    Wall,
    /// Rank biconditional, rank = order of αᾱ⁻¹, squarefree-rank criterion
    Lemmas,
    /// Fibonacci-route vs α-criterion agreement on every prime
    Criteria,
    /// The 2a + b ≡ 0 mod p norm constraint on every prime
    Norm,
    /// Height and radical bounds of the Fibonacci abc-triples
    Abc,
}

#[derive(Debug)]
pub struct SuiteFailed {
    pub violations: u64,
}

impl std::fmt::Display for SuiteFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed with {} violation(s)", self.violations)
    }
}

impl std::error::Error for SuiteFailed {}

struct CheckOutcome {
    name: &'static str,
    checked: u64,
    violations: Vec<String>,
}

impl CheckOutcome {
    fn report(&self) -> u64 {
        if self.violations.is_empty() {
            println!("{}: OK ({} checked)", self.name, self.checked);
            0
        } else {
            println!(
                "{}: FAIL ({} checked, {} violations, first: {})",
                self.name,
                self.checked,
                self.violations.len(),
                self.violations[0]
            );
            self.violations.len() as u64
        }
    }
}

pub fn run_suite(suite: Suite, bound: u64, threads: usize) -> anyhow::Result<()> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    let outcomes = pool.install(|| match suite {
        Suite::Wall => wall_suite(bound),
        Suite::Lemmas => lemmas_suite(bound),
        Suite::Criteria => criteria_suite(bound),
        Suite::Norm => norm_suite(bound),
        Suite::Abc => abc_suite(bound),
    })?;
    let violations: u64 = outcomes.iter().map(CheckOutcome::report).sum();
    if violations > 0 {
        return Err(SuiteFailed { violations }.into());
    }
    Ok(())
}

/// Independent oracle: iterate Fibonacci pairs until (0, 1) recurs.
fn pisano_brute(m: u64) -> u64 {
    let (mut a, mut b) = (0u64, 1 % m);
    let mut n = 0;
    loop {
        let c = (a + b) % m;
        a = b;
        b = c;
        n += 1;
        if (a, b) == (0, 1 % m) {
            return n;
        }
    }
}

fn wall_suite(bound: u64) -> anyhow::Result<Vec<CheckOutcome>> {
    let oracle_bound = bound.min(10_000);
    let oracle_violations: Vec<String> = (2..=oracle_bound)
        .into_par_iter()
        .filter_map(|m| {
            let got = periods::pisano(m).map(|p| p.pi);
            let want = pisano_brute(m);
            match got {
                Ok(pi) if pi == want => None,
                Ok(pi) => Some(format!("π({m}) = {pi}, brute force says {want}")),
                Err(e) => Some(format!("π({m}) errored: {e}")),
            }
        })
        .collect();
    let oracle = CheckOutcome {
        name: "pisano-brute-force-oracle",
        checked: oracle_bound - 1,
        violations: oracle_violations,
    };

    let primes: Vec<u64> = primes_in_range(3, bound).into_iter().filter(|&p| p != 5).collect();
    let checked = primes.len() as u64;
    let divisibility_violations: Vec<String> = primes
        .into_par_iter()
        .filter_map(|p| {
            let wall_bound = if p % 10 == 1 || p % 10 == 9 { p - 1 } else { 2 * (p + 1) };
            match periods::pisano_prime(p) {
                Ok(pi) if wall_bound % pi == 0 => None,
                Ok(pi) => Some(format!("π({p}) = {pi} does not divide {wall_bound}")),
                Err(e) => Some(format!("π({p}) errored: {e}")),
            }
        })
        .collect();
    let divisibility = CheckOutcome {
        name: "wall-divisibility",
        checked,
        violations: divisibility_violations,
    };

    let lift_primes = primes_in_range(2, bound.min(500));
    let lift_checked = lift_primes.len() as u64;
    let lifting_violations: Vec<String> = lift_primes
        .into_par_iter()
        .filter_map(|p| {
            let mut prev = match periods::pisano_prime_power(p, 1) {
                Ok(v) => v,
                Err(e) => return Some(format!("π({p}) errored: {e}")),
            };
            for e in 2..=4u32 {
                let cur = match periods::pisano_prime_power(p, e) {
                    Ok(v) => v,
                    Err(err) => return Some(format!("π({p}^{e}) errored: {err}")),
                };
                if cur != prev && cur != p * prev {
                    return Some(format!("π({p}^{e}) = {cur} is neither π nor p·π of {prev}"));
                }
                prev = cur;
            }
            None
        })
        .collect();
    let lifting = CheckOutcome {
        name: "prime-power-lifting",
        checked: lift_checked,
        violations: lifting_violations,
    };

    Ok(vec![oracle, divisibility, lifting])
}

fn lemmas_suite(bound: u64) -> anyhow::Result<Vec<CheckOutcome>> {
    // Lemma 1 biconditional: F(n) ≡ 0 mod m ⟺ l(m) | n
    let m_bound = bound.min(10_000);
    let rank_violations: Vec<String> = (2..=m_bound)
        .into_par_iter()
        .filter_map(|m| {
            let rank = match periods::rank_of_apparition(m) {
                Ok(r) => r,
                Err(e) => return Some(format!("l({m}) errored: {e}")),
            };
            let (mut a, mut b) = (0u64, 1 % m);
            for n in 1..=1000u64 {
                let c = (a + b) % m;
                a = b;
                b = c;
                if (a == 0) != (n % rank == 0) {
                    return Some(format!("m = {m}, n = {n}: F(n) ≡ 0 is {} but l = {rank}", a == 0));
                }
            }
            None
        })
        .collect();
    let lemma1 = CheckOutcome {
        name: "rank-divisibility-biconditional",
        checked: m_bound - 1,
        violations: rank_violations,
    };

    // Lemma 2: l(p^e) = ord(αᾱ⁻¹) mod p^e
    let order_primes: Vec<u64> =
        primes_in_range(3, bound.min(500)).into_iter().filter(|&p| p != 5).collect();
    let order_checked = 2 * order_primes.len() as u64;
    let order_violations: Vec<String> = order_primes
        .into_par_iter()
        .flat_map_iter(|p| (1..=2u32).map(move |e| (p, e)))
        .filter_map(|(p, e)| {
            let modulus = Modulus::from_u64(p.pow(e)).ok()?;
            let g = GoldenResidue::alpha(&modulus)
                .mul(&GoldenResidue::alpha_bar(&modulus).inverse().ok()?);
            let mut bound_factors = abc_triples::factor::factorize_u64(p * p - 1);
            if e > 1 {
                bound_factors.push((p, e - 1));
            }
            let order = match multiplicative_order(&g, &bound_factors) {
                Ok(o) => o,
                Err(err) => return Some(format!("order mod {p}^{e} errored: {err}")),
            };
            let rank = match periods::rank_of_apparition(p.pow(e)) {
                Ok(r) => r,
                Err(err) => return Some(format!("l({p}^{e}) errored: {err}")),
            };
            (order != num_bigint::BigUint::from(rank))
                .then(|| format!("l({p}^{e}) = {rank} but ord(αᾱ⁻¹) = {order}"))
        })
        .collect();
    let lemma2 = CheckOutcome {
        name: "rank-equals-alpha-ratio-order",
        checked: order_checked,
        violations: order_violations,
    };

    // Squarefree-rank criterion: hypothesis must hold and π(p²) = p·π(p)
    let ml_primes: Vec<u64> =
        primes_in_range(3, bound).into_iter().filter(|&p| p != 5).collect();
    let ml_checked = ml_primes.len() as u64;
    let ml_violations: Vec<String> = ml_primes
        .into_par_iter()
        .filter_map(|p| {
            let rec = match periods::check_main_lemma(p) {
                Ok(r) => r,
                Err(e) => return Some(format!("check({p}) errored: {e}")),
            };
            if !rec.squarefree_at_rank {
                // a prime with p² | F(l(p)) would be a major finding
                return Some(format!("p = {p}: p² divides F(l(p))"));
            }
            if rec.pi_p2 != p * rec.pi_p {
                return Some(format!("p = {p}: π(p²) = {} ≠ p·π(p) = {}", rec.pi_p2, p * rec.pi_p));
            }
            None
        })
        .collect();
    let main_lemma = CheckOutcome {
        name: "squarefree-rank-criterion",
        checked: ml_checked,
        violations: ml_violations,
    };

    Ok(vec![lemma1, lemma2, main_lemma])
}

fn criteria_suite(bound: u64) -> anyhow::Result<Vec<CheckOutcome>> {
    let primes = primes_in_range(7, bound);
    let checked = primes.len() as u64;
    // fw_test cross-checks the Fibonacci route against the α-criterion and
    // the norm constraint internally; any disagreement comes back as Err.
    let violations: Vec<String> = primes
        .into_par_iter()
        .filter_map(|p| match wieferich::fw_test(p, 100) {
            Ok(record) => {
                let alpha_zero = record.a == 0 && record.b == 0;
                (alpha_zero != (record.k == 0))
                    .then(|| format!("p = {p}: (a,b) = (0,0) is {alpha_zero} but k = {}", record.k))
            }
            Err(e) => Some(format!("p = {p}: {e}")),
        })
        .collect();
    Ok(vec![CheckOutcome { name: "criteria-equivalence", checked, violations }])
}

fn norm_suite(bound: u64) -> anyhow::Result<Vec<CheckOutcome>> {
    let primes = primes_in_range(7, bound);
    let checked = primes.len() as u64;
    let violations: Vec<String> = primes
        .into_par_iter()
        .filter_map(|p| match wieferich::norm_constraint_check(p) {
            Ok(true) => None,
            Ok(false) => Some(format!("2a + b ≢ 0 mod {p}")),
            Err(e) => Some(format!("p = {p}: {e}")),
        })
        .collect();
    Ok(vec![CheckOutcome { name: "norm-constraint", checked, violations }])
}

fn abc_suite(bound: u64) -> anyhow::Result<Vec<CheckOutcome>> {
    let n_bound = bound.min(120);
    let results: Vec<Result<(u64, f64), String>> = (1..=n_bound)
        .into_par_iter()
        .map(|n| match abc_triples::triple_report(n) {
            Ok(r) => {
                if !r.height_bound_ok {
                    Err(format!("n = {n}: H < 5F(n)²"))
                } else if !r.radical_bound_ok {
                    Err(format!("n = {n}: rad > 5U²V"))
                } else if &r.u_n * &r.v_n != r.f_n {
                    Err(format!("n = {n}: U·V ≠ F"))
                } else {
                    Ok((n, r.quality))
                }
            }
            Err(e) => Err(format!("n = {n}: {e}")),
        })
        .collect();
    let violations: Vec<String> = results.iter().filter_map(|r| r.as_ref().err().cloned()).collect();
    let qualities: Vec<(u64, f64)> = results.into_iter().flatten().collect();
    if let (Some(min), Some(max)) = (
        qualities.iter().map(|(_, q)| *q).reduce(f64::min),
        qualities.iter().map(|(_, q)| *q).reduce(f64::max),
    ) {
        println!("abc quality over n ≤ {n_bound}: min {min:.6}, max {max:.6}");
    }
    Ok(vec![CheckOutcome { name: "abc-bounds", checked: n_bound, violations }])
}
