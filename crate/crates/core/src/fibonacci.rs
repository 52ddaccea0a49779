//! Fibonacci numbers, exact and modular, via fast doubling.
//!
//! Doubling halves the multiplication count of the 2×2 matrix power:
//!
//! ```text
//! F(2k)   = F(k)·(2F(k+1) − F(k))
//! F(2k+1) = F(k)² + F(k+1)²
//! ```
//!
//! Both identities follow from F(n+k) = F(n)F(k+1) + F(n−1)F(k). The
//! modular routine carries the (F(n), F(n+1)) pair because the Pisano
//! test needs both and the doubling step consumes both.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::golden_ring::Modulus;

/// Cap on exact Fibonacci indices; F(10^6) is ~200k digits and anything
/// larger is a caller mistake rather than a use case.
pub const DEFAULT_EXACT_CAP: u64 = 1_000_000;

/// A consecutive Fibonacci pair (F(n), F(n+1)), possibly reduced mod m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibPair {
    pub n: u64,
    pub f_n: BigUint,
    pub f_n1: BigUint,
    pub modulus: Option<BigUint>,
}

/// Exact F(n) with the default cap.
pub fn fib_exact(n: u64) -> Result<BigUint> {
    fib_exact_with_cap(n, DEFAULT_EXACT_CAP)
}

/// Exact F(n) by fast doubling on big integers.
pub fn fib_exact_with_cap(n: u64, cap: u64) -> Result<BigUint> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let (mut a, mut b) = (BigUint::zero(), BigUint::one()); // (F(0), F(1))
    if n == 0 {
        return Ok(a);
    }
    for i in (0..64 - n.leading_zeros()).rev() {
        let two_b_minus_a = (&b << 1) - &a;
        let c = &a * &two_b_minus_a; // F(2k)
        let d = &a * &a + &b * &b; // F(2k+1)
        if (n >> i) & 1 == 0 {
            a = c;
            b = d;
        } else {
            b = &c + &d;
            a = d;
        }
    }
    Ok(a)
}

/// (F(n) mod m, F(n+1) mod m) in O(log n) ring operations.
pub fn fib_pair_mod(n: u64, m: &Modulus) -> FibPair {
    let (f_n, f_n1) = match m.value().to_u64() {
        Some(mf) => {
            let (a, b) = fib_pair_mod_u64(n, mf);
            (BigUint::from(a), BigUint::from(b))
        }
        None => fib_pair_mod_big(n, m.value()),
    };
    FibPair { n, f_n, f_n1, modulus: Some(m.value().clone()) }
}

/// Fast-doubling pair mod a machine-word modulus. All intermediates fit
/// u128 because reduced values stay below m ≤ 2^64.
pub fn fib_pair_mod_u64(n: u64, m: u64) -> (u64, u64) {
    debug_assert!(m >= 2);
    let m128 = m as u128;
    let (mut a, mut b) = (0u128, 1 % m128); // (F(0), F(1))
    if n == 0 {
        return (a as u64, b as u64);
    }
    let bits = 64 - n.leading_zeros();
    for i in (0..bits).rev() {
        // c = a·(2b − a), d = a² + b²
        let t = ((b << 1) % m128 + m128 - a) % m128;
        let c = a * t % m128;
        let d = (a * a % m128 + b * b % m128) % m128;
        if (n >> i) & 1 == 0 {
            a = c;
            b = d;
        } else {
            a = d;
            b = (c + d) % m128;
        }
    }
    (a as u64, b as u64)
}

fn fib_pair_mod_big(n: u64, m: &BigUint) -> (BigUint, BigUint) {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one() % m);
    if n == 0 {
        return (a, b);
    }
    let bits = 64 - n.leading_zeros();
    for i in (0..bits).rev() {
        let t = (((&b << 1) % m) + m - &a) % m;
        let c = (&a * t) % m;
        let d = (&a * &a + &b * &b) % m;
        if (n >> i) & 1 == 0 {
            a = c;
            b = d;
        } else {
            b = (&c + &d) % m;
            a = d;
        }
    }
    (a, b)
}

/// Legendre symbol (p/5) for a prime p ≠ 5: +1 when p ≡ ±1 mod 5, −1 when
/// p ≡ ±2 mod 5. Quadratic reciprocity makes (p/5) = (5/p), so this is the
/// ε in F(p−ε) ≡ 0 mod p.
pub fn legendre5(p: u64) -> Result<i8> {
    match p % 5 {
        0 => Err(Error::LegendreUndefined),
        1 | 4 => Ok(1),
        _ => Ok(-1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_small_values() {
        let expected: [u64; 19] = [
            0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 1597, 2584,
        ];
        for (n, want) in expected.iter().enumerate() {
            assert_eq!(fib_exact(n as u64).unwrap(), BigUint::from(*want), "F({n})");
        }
    }

    #[test]
    fn exact_cap() {
        assert!(matches!(
            fib_exact_with_cap(1001, 1000),
            Err(Error::CapExceeded { n: 1001, cap: 1000 })
        ));
        assert!(fib_exact_with_cap(1000, 1000).is_ok());
    }

    #[test]
    fn pair_mod_examples() {
        // F mod 3 runs 0, 1, 1, 2, 0, 2, 2, 1, 0, 1, ... — positions 4, 5
        let m3 = Modulus::from_u64(3).unwrap();
        let pair = fib_pair_mod(4, &m3);
        assert_eq!(pair.f_n, BigUint::from(0u32));
        assert_eq!(pair.f_n1, BigUint::from(2u32));

        let m17 = Modulus::from_u64(17).unwrap();
        let pair = fib_pair_mod(0, &m17);
        assert_eq!((pair.f_n, pair.f_n1), (BigUint::from(0u32), BigUint::from(1u32)));

        // F(14) = 377 = 2·169 + 39
        let m169 = Modulus::from_u64(169).unwrap();
        let pair = fib_pair_mod(14, &m169);
        assert_eq!(pair.f_n, BigUint::from(39u32));
        assert_eq!(pair.f_n1, BigUint::from(610u32 % 169));
    }

    #[test]
    fn pair_mod_agrees_with_exact() {
        for m in [2u64, 3, 5, 10, 49, 121, 169, 1_000_003] {
            let modulus = Modulus::from_u64(m).unwrap();
            let (mut a, mut b) = (0u64, 1 % m);
            for n in 0..300u64 {
                let pair = fib_pair_mod(n, &modulus);
                assert_eq!(pair.f_n, BigUint::from(a), "F({n}) mod {m}");
                assert_eq!(pair.f_n1, BigUint::from(b), "F({}) mod {m}", n + 1);
                let c = (a + b) % m;
                a = b;
                b = c;
            }
        }
    }

    #[test]
    fn pair_mod_big_path_agrees() {
        for m in [2u64, 3, 1_000_000_007, u64::MAX] {
            let mb = BigUint::from(m);
            for n in [0u64, 1, 2, 89, 1024, 999_999] {
                let (big_a, big_b) = fib_pair_mod_big(n, &mb);
                let (a, b) = fib_pair_mod_u64(n, m);
                assert_eq!(big_a, BigUint::from(a), "F({n}) mod {m}");
                assert_eq!(big_b, BigUint::from(b), "F({}) mod {m}", n + 1);
            }
        }
    }

    #[test]
    fn legendre5_examples() {
        assert_eq!(legendre5(11).unwrap(), 1);
        assert_eq!(legendre5(7).unwrap(), -1);
        assert_eq!(legendre5(13).unwrap(), -1); // 13 ≡ 3 ≡ −2 mod 5
        assert_eq!(legendre5(19).unwrap(), 1); // 19 ≡ −1 mod 5
        assert_eq!(legendre5(2).unwrap(), -1);
        assert!(matches!(legendre5(5), Err(Error::LegendreUndefined)));
    }
}
