//! Pisano periods π(m) and ranks of apparition l(m).
//!
//! π(p) is found by enumerating divisors of the Wall bound (p − 1 when
//! p ≡ ±1 mod 10, else 2(p + 1)) in ascending order; the first divisor d
//! with (F(d), F(d+1)) ≡ (0, 1) is the period. Correctness depends on the
//! ascending order — the first hit is the least — so the divisor list is
//! sorted and that ordering is tested.
//!
//! Prime powers lift from π(p): each level either keeps the period or
//! multiplies it by p, and both outcomes are verified directly against the
//! Fibonacci pair rather than assumed.
//!
//! Composition over prime factorizations is by lcm:
//! π(m) = lcm(π(p₁^e₁), ..., π(p_r^e_r)). Note π is *not* multiplicative
//! in the strict product sense: π(12) = lcm(π(4), π(3)) = lcm(6, 8) = 24,
//! while the product would give 48. The profile keeps every factor's
//! period so both readings stay visible.
//!
//! p = 2 and p = 5 sit outside the Wall-bound dichotomy and get their base
//! periods (π(2) = 3, π(5) = 20) from a direct cycle search.

use serde::Serialize;

use crate::abc_triples::factor::factorize_u64;
use crate::error::{Error, Result};
use crate::fibonacci::fib_pair_mod_u64;

/// How a prime-power period was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PeriodProvenance {
    /// Least divisor of the Wall bound passing the Fibonacci-pair test.
    DivisorEnumeration,
    /// Brute-force cycle search (p = 2, 5).
    DirectSearch,
    /// Lifted from a lower power with per-level verification.
    Lifted,
}

/// Period and rank of one prime power p^e.
#[derive(Clone, Debug, Serialize)]
pub struct PrimePowerPeriod {
    pub p: u64,
    pub e: u32,
    pub pi: u64,
    pub rank: u64,
    pub provenance: PeriodProvenance,
}

/// π(m), l(m), and the prime-power decomposition they compose from.
#[derive(Clone, Debug, Serialize)]
pub struct PisanoProfile {
    pub m: u64,
    pub pi: u64,
    pub rank: u64,
    pub factors: Vec<PrimePowerPeriod>,
    /// For prime powers: the largest e₀ (probed up to max(e, 2)) with
    /// π(p^e₀) = π(p). None for composite m or when p² overflows u64.
    pub lift_exponent: Option<u32>,
}

/// Outcome of the squarefree-rank check for one prime.
#[derive(Clone, Debug, Serialize)]
pub struct MainLemmaRecord {
    pub p: u64,
    pub rank: u64,
    /// p divides F(l(p)) exactly once.
    pub squarefree_at_rank: bool,
    pub pi_p: u64,
    pub pi_p2: u64,
    /// Vacuously true when the hypothesis fails; otherwise π(p) ≠ π(p²).
    pub conclusion_holds: bool,
}

#[inline]
fn is_pisano_index(d: u64, m: u64) -> bool {
    fib_pair_mod_u64(d, m) == (0, 1 % m)
}

/// All divisors of n in ascending order.
fn divisors_ascending(n: u64) -> Vec<u64> {
    let factors = factorize_u64(n);
    let mut divisors = vec![1u64];
    for (p, e) in factors {
        let prev = divisors.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divisors.extend(prev.iter().map(|d| d * pk));
        }
    }
    divisors.sort_unstable();
    divisors
}

/// Brute-force cycle search: iterate pairs until (0, 1) recurs.
fn direct_cycle_search(m: u64) -> u64 {
    let (mut a, mut b) = (0u64, 1 % m);
    let mut n = 0u64;
    loop {
        let c = (a + b) % m;
        a = b;
        b = c;
        n += 1;
        if a == 0 && b == 1 % m {
            return n;
        }
    }
}

/// π(p) for a prime p.
pub fn pisano_prime(p: u64) -> Result<u64> {
    if p < 2 {
        return Err(Error::PeriodUndefined { m: p });
    }
    if p == 2 || p == 5 {
        return Ok(direct_cycle_search(p));
    }
    let bound = if p % 10 == 1 || p % 10 == 9 { p - 1 } else { 2 * (p + 1) };
    for d in divisors_ascending(bound) {
        if is_pisano_index(d, p) {
            return Ok(d);
        }
    }
    // No divisor of the Wall bound worked: either p was not prime or the
    // divisibility theorem just fell. Either way, refuse to continue.
    Err(Error::SanityViolation(format!(
        "no divisor of the Wall bound {bound} is a Fibonacci period mod {p}; is {p} prime?"
    )))
}

struct LiftedPeriod {
    pi: u64,
    stabilization: u32,
    provenance: PeriodProvenance,
}

/// π(p^e) with per-level verification, plus the observed stabilization
/// level e₀ (largest probed j with π(p^j) = π(p)).
fn pisano_prime_power_full(p: u64, e: u32, probe_past_e: bool) -> Result<LiftedPeriod> {
    assert!(e >= 1, "exponent must be positive");
    let probe_to = if probe_past_e { e.max(2) } else { e };

    // 2 and 5 sit outside the Wall-bound dichotomy; their powers get an
    // honest cycle search while it stays cheap, verified lifting beyond.
    if (p == 2 || p == 5) && p.checked_pow(probe_to).is_some_and(|m| m <= 10_000_000) {
        let base = direct_cycle_search(p);
        let mut pi = base;
        let mut stabilization = 1u32;
        let mut modulus = p;
        for level in 2..=probe_to {
            modulus *= p;
            let found = direct_cycle_search(modulus);
            if found == base {
                stabilization = level;
            }
            if level <= e {
                pi = found;
            }
        }
        return Ok(LiftedPeriod { pi, stabilization, provenance: PeriodProvenance::DirectSearch });
    }

    let base = pisano_prime(p)?;
    let provenance = if e > 1 {
        PeriodProvenance::Lifted
    } else if p == 2 || p == 5 {
        PeriodProvenance::DirectSearch
    } else {
        PeriodProvenance::DivisorEnumeration
    };
    let mut pi = base;
    let mut stabilization = 1u32;
    let mut modulus = p;
    for level in 2..=probe_to {
        modulus = match modulus.checked_mul(p) {
            Some(m) => m,
            None => {
                return Err(Error::ConfigInvalid(format!("{p}^{level} overflows u64")));
            }
        };
        let lifted = if is_pisano_index(pi, modulus) {
            pi
        } else {
            let candidate = pi.checked_mul(p).ok_or_else(|| {
                Error::ConfigInvalid(format!("pisano period of {p}^{level} overflows u64"))
            })?;
            if !is_pisano_index(candidate, modulus) {
                return Err(Error::SanityViolation(format!(
                    "period mod {p}^{level} is neither π nor p·π of the level below"
                )));
            }
            candidate
        };
        if lifted == base {
            stabilization = level;
        }
        if level <= e {
            pi = lifted;
        }
    }
    Ok(LiftedPeriod { pi, stabilization, provenance })
}

/// π(p^e) for a prime p and e ≥ 1.
pub fn pisano_prime_power(p: u64, e: u32) -> Result<u64> {
    Ok(pisano_prime_power_full(p, e, false)?.pi)
}

/// l(p^e): least divisor d of π(p^e) with F(d) ≡ 0 mod p^e.
fn rank_of_prime_power(p: u64, e: u32) -> Result<u64> {
    let pi = pisano_prime_power(p, e)?;
    let modulus = p.pow(e);
    for d in divisors_ascending(pi) {
        if fib_pair_mod_u64(d, modulus).0 == 0 {
            return Ok(d);
        }
    }
    unreachable!("π(p^e) itself is always a zero of F mod p^e");
}

fn lcm_u64(a: u64, b: u64) -> Result<u64> {
    let g = gcd_u64(a, b);
    let wide = a as u128 / g as u128 * b as u128;
    u64::try_from(wide).map_err(|_| Error::ConfigInvalid("period lcm overflows u64".into()))
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// l(m): least l > 0 with F(l) ≡ 0 mod m, as the lcm of prime-power ranks.
pub fn rank_of_apparition(m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::PeriodUndefined { m });
    }
    let mut rank = 1u64;
    for (p, e) in factorize_u64(m) {
        rank = lcm_u64(rank, rank_of_prime_power(p, e)?)?;
    }
    Ok(rank)
}

/// Full Pisano profile of m ≥ 2: π(m) = lcm of prime-power periods,
/// l(m) = lcm of prime-power ranks, with per-factor detail.
pub fn pisano(m: u64) -> Result<PisanoProfile> {
    if m < 2 {
        return Err(Error::PeriodUndefined { m });
    }
    let prime_powers = factorize_u64(m);
    let single_prime = prime_powers.len() == 1;
    let mut factors = Vec::with_capacity(prime_powers.len());
    let mut pi = 1u64;
    let mut rank = 1u64;
    let mut lift_exponent = None;
    for (p, e) in prime_powers {
        let lifted = if single_prime && p.checked_mul(p).is_some() {
            let full = pisano_prime_power_full(p, e, true)?;
            lift_exponent = Some(full.stabilization);
            full
        } else {
            pisano_prime_power_full(p, e, false)?
        };
        let factor_rank = rank_of_prime_power(p, e)?;
        pi = lcm_u64(pi, lifted.pi)?;
        rank = lcm_u64(rank, factor_rank)?;
        factors.push(PrimePowerPeriod {
            p,
            e,
            pi: lifted.pi,
            rank: factor_rank,
            provenance: lifted.provenance,
        });
    }
    Ok(PisanoProfile { m, pi, rank, factors, lift_exponent })
}

/// Check one prime against the squarefree-rank criterion: if p divides
/// F(l(p)) exactly once, then π(p) ≠ π(p²) (in fact π(p²) = p·π(p)).
pub fn check_main_lemma(p: u64) -> Result<MainLemmaRecord> {
    let p2 = p
        .checked_mul(p)
        .ok_or_else(|| Error::ConfigInvalid(format!("{p}² overflows u64")))?;
    let rank = rank_of_prime_power(p, 1)?;
    let f_rank_mod_p2 = fib_pair_mod_u64(rank, p2).0;
    if !f_rank_mod_p2.is_multiple_of(p) {
        return Err(Error::SanityViolation(format!(
            "F(l({p})) not divisible by {p}; rank computation is broken"
        )));
    }
    let squarefree_at_rank = f_rank_mod_p2 != 0;
    let pi_p = pisano_prime(p)?;
    let pi_p2 = pisano_prime_power(p, 2)?;
    Ok(MainLemmaRecord {
        p,
        rank,
        squarefree_at_rank,
        pi_p,
        pi_p2,
        conclusion_holds: !squarefree_at_rank || pi_p != pi_p2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: naive pair iteration, shared with nothing above.
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

    fn rank_brute(m: u64) -> u64 {
        let (mut a, mut b) = (0u64, 1 % m);
        let mut n = 0;
        loop {
            let c = (a + b) % m;
            a = b;
            b = c;
            n += 1;
            if a == 0 {
                return n;
            }
        }
    }

    #[test]
    fn pisano_prime_examples() {
        assert_eq!(pisano_prime(3).unwrap(), 8);
        assert_eq!(pisano_prime(11).unwrap(), 10);
        assert_eq!(pisano_prime(7).unwrap(), 16); // = 2(p+1)
        assert_eq!(pisano_prime(2).unwrap(), 3);
        assert_eq!(pisano_prime(5).unwrap(), 20);
        assert_eq!(pisano_prime(13).unwrap(), 28);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_of_apparition(3).unwrap(), 4);
        assert_eq!(rank_of_apparition(9).unwrap(), 12); // F(12) = 144 = 16·9
        assert_eq!(rank_of_apparition(2).unwrap(), 3); // F(3) = 2
        assert_eq!(rank_of_apparition(10).unwrap(), 15);
        assert_eq!(rank_of_apparition(169).unwrap(), 91);
        assert!(matches!(rank_of_apparition(1), Err(Error::PeriodUndefined { m: 1 })));
    }

    #[test]
    fn prime_power_examples() {
        assert_eq!(pisano_prime_power(3, 2).unwrap(), 24);
        assert_eq!(pisano_prime_power(7, 1).unwrap(), 16);
        assert_eq!(pisano_prime_power(5, 2).unwrap(), 100);
        assert_eq!(pisano_prime_power(2, 3).unwrap(), 12);
        assert_eq!(pisano_prime_power(2, 4).unwrap(), 24);
        assert_eq!(pisano_prime_power(3, 4).unwrap(), 216);
        assert_eq!(pisano_prime_power(5, 3).unwrap(), 500);
        assert_eq!(pisano_prime_power(7, 2).unwrap(), 112);
    }

    #[test]
    fn huge_powers_of_two_and_five_lift() {
        // beyond the direct-search budget the verified lifting takes over;
        // π(2^e) = 3·2^(e−1) and π(5^e) = 4·5^(e−1)·5 = 4·5^e
        assert_eq!(pisano_prime_power(2, 32).unwrap(), 3 * (1u64 << 31));
        assert_eq!(pisano_prime_power(5, 12).unwrap(), 4 * 5u64.pow(12));
    }

    #[test]
    fn composition_is_lcm_not_product() {
        // π(12) = lcm(π(4), π(3)) = lcm(6, 8) = 24; the product form
        // would claim 48 and the brute-force cycle refutes it.
        let profile = pisano(12).unwrap();
        assert_eq!(profile.pi, 24);
        assert_eq!(pisano_brute(12), 24);
        let product: u64 = profile.factors.iter().map(|f| f.pi).product();
        assert_eq!(product, 48); // kept visible in the profile
        assert_eq!(profile.rank, 12);

        assert_eq!(pisano(10).unwrap().pi, 60);
        let p11 = pisano(11).unwrap();
        assert_eq!(p11.pi, pisano_prime(11).unwrap());
        assert_eq!(p11.lift_exponent, Some(1));
    }

    #[test]
    fn profile_matches_brute_force_small() {
        for m in 2..=400u64 {
            let profile = pisano(m).unwrap();
            assert_eq!(profile.pi, pisano_brute(m), "π({m})");
            assert_eq!(profile.rank, rank_brute(m), "l({m})");
            assert_eq!(profile.m, m);
            // rank divides pi
            assert_eq!(profile.pi % profile.rank, 0, "l({m}) ∤ π({m})");
        }
    }

    #[test]
    fn rejects_m_below_two() {
        assert!(matches!(pisano(0), Err(Error::PeriodUndefined { m: 0 })));
        assert!(matches!(pisano(1), Err(Error::PeriodUndefined { m: 1 })));
    }

    #[test]
    fn main_lemma_examples() {
        let r3 = check_main_lemma(3).unwrap();
        assert_eq!((r3.rank, r3.pi_p, r3.pi_p2), (4, 8, 24));
        assert!(r3.squarefree_at_rank && r3.conclusion_holds);

        let r7 = check_main_lemma(7).unwrap();
        assert_eq!((r7.rank, r7.pi_p, r7.pi_p2), (8, 16, 112));
        assert!(r7.squarefree_at_rank && r7.conclusion_holds);

        let r11 = check_main_lemma(11).unwrap();
        assert_eq!((r11.rank, r11.pi_p, r11.pi_p2), (10, 10, 110));
        assert!(r11.squarefree_at_rank && r11.conclusion_holds);
    }

    #[test]
    fn divisor_enumeration_is_ascending() {
        let ds = divisors_ascending(2 * 8); // 16
        assert_eq!(ds, vec![1, 2, 4, 8, 16]);
        let ds = divisors_ascending(60);
        assert_eq!(ds, vec![1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]);
        for w in divisors_ascending(27720).windows(2) {
            assert!(w[0] < w[1]);
        }
    }
}
