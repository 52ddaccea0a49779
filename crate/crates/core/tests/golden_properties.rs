//! Ring-law properties of the golden-ring arithmetic, checked over large
//! random samples and against an independent one-step oracle.

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use wallsun_core::golden_ring::{
    multiplicative_order, splitting_type, GoldenInt, GoldenResidue, Modulus, Splitting,
};
use wallsun_core::periods;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn norm_and_conjugate_are_multiplicative(
        ax in -1_000_000i64..=1_000_000,
        ay in -1_000_000i64..=1_000_000,
        bx in -1_000_000i64..=1_000_000,
        by in -1_000_000i64..=1_000_000,
    ) {
        let g = GoldenInt::new(ax, ay);
        let h = GoldenInt::new(bx, by);
        let gh = &g * &h;
        prop_assert_eq!(gh.norm(), g.norm() * h.norm());
        prop_assert_eq!(gh.conjugate(), &g.conjugate() * &h.conjugate());
        // g·ḡ is the norm embedded as a rational integer
        let gg = &g * &g.conjugate();
        prop_assert_eq!(gg.x(), &g.norm());
        prop_assert_eq!(gg.y(), &BigInt::from(0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn fast_and_big_paths_agree(
        gx in any::<i64>(),
        gy in any::<i64>(),
        k in any::<u64>(),
        m in 2u64..=(1 << 62),
    ) {
        let g = GoldenInt::new(gx, gy);
        let fast = Modulus::from_u64(m).unwrap();
        let big = Modulus::with_forced_big_path(BigUint::from(m)).unwrap();
        prop_assert!(fast.is_fast() && !big.is_fast());

        let rf = GoldenResidue::reduce(&g, &fast);
        let rb = GoldenResidue::reduce(&g, &big);
        prop_assert_eq!(&rf, &rb);
        prop_assert_eq!(rf.pow_u64(k), rb.pow_u64(k));
        prop_assert_eq!(rf.norm_residue(), rb.norm_residue());
        prop_assert_eq!(rf.conjugate(), rb.conjugate());
        match (rf.inverse(), rb.inverse()) {
            (Ok(inv_f), Ok(inv_b)) => {
                prop_assert_eq!(&inv_f, &inv_b);
                prop_assert!(rf.mul(&inv_f).is_one());
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "paths disagree on invertibility"),
        }
    }
}

/// Lagrange consistency: (αᾱ⁻¹)^n = 1 mod p^e exactly when l(p^e) | n.
#[test]
fn rank_generates_the_kernel() {
    for p in wallsun_core::sieve::primes_in_range(3, 1000) {
        if p == 5 {
            continue;
        }
        for e in 1..=2u32 {
            let m = Modulus::from_u64(p.pow(e)).unwrap();
            let g = GoldenResidue::alpha(&m)
                .mul(&GoldenResidue::alpha_bar(&m).inverse().unwrap());
            let rank = periods::rank_of_apparition(p.pow(e)).unwrap();
            let mut power = GoldenResidue::one(&m);
            for n in 1..=4 * rank {
                power = power.mul(&g);
                assert_eq!(
                    power.is_one(),
                    n % rank == 0,
                    "(αᾱ⁻¹)^{n} mod {p}^{e} vs l = {rank}"
                );
            }
        }
    }
}

/// The computed order d satisfies g^d = 1 and g^(d/q) ≠ 1 for prime q | d.
#[test]
fn order_is_minimal() {
    for p in [3u64, 7, 11, 13, 101, 499] {
        let m = Modulus::from_u64(p * p).unwrap();
        let g = GoldenResidue::alpha(&m);
        // α^(p(p²−1)) = 1 always; factor the bound
        let mut bound_factors = wallsun_core::abc_triples::factor::factorize_u64(p * p - 1);
        bound_factors.push((p, 1));
        let order = multiplicative_order(&g, &bound_factors).unwrap();
        assert!(g.pow(&order).is_one());
        for (q, _) in wallsun_core::abc_triples::factor::factorize(
            &order,
            &wallsun_core::abc_triples::factor::FactorBudget::default(),
        )
        .factors
        {
            assert!(!g.pow(&(&order / &q)).is_one(), "order not minimal at p = {p}");
        }
    }
}

#[test]
fn splitting_matches_legendre_classes() {
    for p in wallsun_core::sieve::primes_in_range(2, 2000) {
        let s = splitting_type(p);
        match p % 5 {
            0 => assert_eq!(s, Splitting::Ramified),
            1 | 4 => assert_eq!(s, Splitting::Split),
            _ => assert_eq!(s, Splitting::Inert),
        }
    }
}
