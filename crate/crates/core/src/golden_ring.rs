//! Exact and modular arithmetic in Z\[α\], the ring of integers of Q(√5).
//!
//! Here α = (1+√5)/2 satisfies α² = α + 1, its conjugate is ᾱ = 1 − α, and
//! αᾱ = −1. Elements are stored on the integral basis {1, α}, so every
//! coordinate stays an ordinary integer and √5 is represented as 2α − 1.
//!
//! Multiplication follows from α² = α + 1:
//!
//! ```text
//! (a + bα)(c + dα) = (ac + bd) + (ad + bc + bd)α
//! ```
//!
//! Residue arithmetic modulo m runs on one of two interchangeable paths:
//! a fixed-precision path using 128-bit intermediates whenever m fits in a
//! machine word (every product of reduced coordinates then fits in u128),
//! and a big-integer path for everything else. Both paths produce identical
//! canonical representatives in [0, m).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact element x + yα of Z\[α\] with arbitrary-precision coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GoldenInt {
    x: BigInt,
    y: BigInt,
}

impl GoldenInt {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        GoldenInt { x: x.into(), y: y.into() }
    }

    pub fn zero() -> Self {
        GoldenInt::new(0, 0)
    }

    pub fn one() -> Self {
        GoldenInt::new(1, 0)
    }

    /// α itself: 0 + 1·α.
    pub fn alpha() -> Self {
        GoldenInt::new(0, 1)
    }

    /// ᾱ = 1 − α.
    pub fn alpha_bar() -> Self {
        GoldenInt::new(1, -1)
    }

    /// √5 on the {1, α} basis: 2α − 1.
    pub fn sqrt5() -> Self {
        GoldenInt::new(-1, 2)
    }

    /// Coefficient of 1.
    pub fn x(&self) -> &BigInt {
        &self.x
    }

    /// Coefficient of α.
    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Image under α ↦ ᾱ: conjugate(x + yα) = (x + y) − yα. An involution.
    pub fn conjugate(&self) -> GoldenInt {
        GoldenInt { x: &self.x + &self.y, y: -&self.y }
    }

    /// N(g) = g·ḡ = x² + xy − y². Multiplicative; ±1 exactly on units.
    pub fn norm(&self) -> BigInt {
        &self.x * &self.x + &self.x * &self.y - &self.y * &self.y
    }

    /// g^k by binary powering.
    pub fn pow(&self, k: u64) -> GoldenInt {
        let mut acc = GoldenInt::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact sign of x + yα under the real embedding α ↦ (1+√5)/2.
    ///
    /// Doubling gives 2(x + yα) = (2x + y) + y√5, so the question reduces
    /// to the sign of s + t√5 with s = 2x + y, t = y, settled by comparing
    /// s² against 5t² when the signs of s and t disagree. No floating
    /// point is involved, so there is no precision cliff for huge inputs.
    pub fn real_sign(&self) -> Ordering {
        use num_bigint::Sign::{Minus, NoSign, Plus};
        let s: BigInt = 2 * &self.x + &self.y;
        let t = &self.y;
        match (s.sign(), t.sign()) {
            (NoSign, NoSign) => Ordering::Equal,
            (Minus, Minus | NoSign) => Ordering::Less,
            (Plus | NoSign, Plus | NoSign) => Ordering::Greater,
            // Signs disagree: s + t√5 > 0  ⟺  sign(t)·(5t² − s²) > 0.
            (Minus, Plus) => (5u32 * t * t).cmp(&(&s * &s)),
            (Plus | NoSign, Minus) => (&s * &s).cmp(&(5u32 * t * t)),
        }
    }
}

impl Add for &GoldenInt {
    type Output = GoldenInt;
    fn add(self, rhs: &GoldenInt) -> GoldenInt {
        GoldenInt { x: &self.x + &rhs.x, y: &self.y + &rhs.y }
    }
}

impl Sub for &GoldenInt {
    type Output = GoldenInt;
    fn sub(self, rhs: &GoldenInt) -> GoldenInt {
        GoldenInt { x: &self.x - &rhs.x, y: &self.y - &rhs.y }
    }
}

impl Neg for &GoldenInt {
    type Output = GoldenInt;
    fn neg(self) -> GoldenInt {
        GoldenInt { x: -&self.x, y: -&self.y }
    }
}

impl Mul for &GoldenInt {
    type Output = GoldenInt;
    fn mul(self, rhs: &GoldenInt) -> GoldenInt {
        let bd = &self.y * &rhs.y;
        GoldenInt {
            x: &self.x * &rhs.x + &bd,
            y: &self.x * &rhs.y + &self.y * &rhs.x + &bd,
        }
    }
}

impl fmt::Display for GoldenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}a", self.x, self.y)
    }
}

/// A residue modulus m ≥ 2 with a fast-path flag.
///
/// The fast path is taken whenever m fits in a u64: reduced coordinates are
/// then < 2^64 and every product fits a u128, so no big-integer arithmetic
/// is needed. This covers p² for all p < 2^32, i.e. every desk-scale scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus {
    value: BigUint,
    fast: Option<u64>,
}

impl Modulus {
    pub fn new(m: BigUint) -> Result<Modulus> {
        if m < BigUint::from(2u32) {
            return Err(Error::ConfigInvalid(format!("modulus must be >= 2, got {m}")));
        }
        let fast = m.to_u64();
        Ok(Modulus { value: m, fast })
    }

    pub fn from_u64(m: u64) -> Result<Modulus> {
        Modulus::new(BigUint::from(m))
    }

    /// Same modulus, but forced onto the big-integer path. The two paths
    /// must agree everywhere; tests use this to compare them directly.
    #[doc(hidden)]
    pub fn with_forced_big_path(m: BigUint) -> Result<Modulus> {
        let mut modulus = Modulus::new(m)?;
        modulus.fast = None;
        Ok(modulus)
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn is_fast(&self) -> bool {
        self.fast.is_some()
    }
}

/// Element of Z\[α\]/mZ\[α\] in canonical form: both coordinates in [0, m).
#[derive(Clone, Debug)]
pub struct GoldenResidue {
    repr: Repr,
}

#[derive(Clone, Debug)]
enum Repr {
    Fast { x: u64, y: u64, m: u64 },
    Big { x: BigUint, y: BigUint, m: BigUint },
}

impl PartialEq for GoldenResidue {
    fn eq(&self, other: &Self) -> bool {
        // Canonical representation: equal iff coordinate pairs and moduli
        // are equal as integers, regardless of which path holds them.
        self.x() == other.x() && self.y() == other.y() && self.modulus() == other.modulus()
    }
}

impl Eq for GoldenResidue {}

impl GoldenResidue {
    /// Reduce an exact element mod m.
    pub fn reduce(g: &GoldenInt, m: &Modulus) -> GoldenResidue {
        let repr = match m.fast {
            Some(mf) => {
                let mb = BigInt::from(mf);
                let x = g.x().mod_floor(&mb).to_u64().unwrap();
                let y = g.y().mod_floor(&mb).to_u64().unwrap();
                Repr::Fast { x, y, m: mf }
            }
            None => {
                let mb = BigInt::from(m.value.clone());
                let x = g.x().mod_floor(&mb).to_biguint().unwrap();
                let y = g.y().mod_floor(&mb).to_biguint().unwrap();
                Repr::Big { x, y, m: m.value.clone() }
            }
        };
        GoldenResidue { repr }
    }

    pub fn one(m: &Modulus) -> GoldenResidue {
        GoldenResidue::reduce(&GoldenInt::one(), m)
    }

    pub fn alpha(m: &Modulus) -> GoldenResidue {
        GoldenResidue::reduce(&GoldenInt::alpha(), m)
    }

    pub fn alpha_bar(m: &Modulus) -> GoldenResidue {
        GoldenResidue::reduce(&GoldenInt::alpha_bar(), m)
    }

    pub fn x(&self) -> BigUint {
        match &self.repr {
            Repr::Fast { x, .. } => BigUint::from(*x),
            Repr::Big { x, .. } => x.clone(),
        }
    }

    pub fn y(&self) -> BigUint {
        match &self.repr {
            Repr::Fast { y, .. } => BigUint::from(*y),
            Repr::Big { y, .. } => y.clone(),
        }
    }

    pub fn modulus(&self) -> BigUint {
        match &self.repr {
            Repr::Fast { m, .. } => BigUint::from(*m),
            Repr::Big { m, .. } => m.clone(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Fast { x, y, .. } => *x == 1 && *y == 0,
            Repr::Big { x, y, .. } => x.is_one() && y.is_zero(),
        }
    }

    pub fn mul(&self, rhs: &GoldenResidue) -> GoldenResidue {
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Fast { x: x1, y: y1, m }, Repr::Fast { x: x2, y: y2, m: m2 }) => {
                debug_assert_eq!(m, m2, "mixed moduli");
                let m128 = *m as u128;
                let ac = mulmod(*x1, *x2, m128);
                let bd = mulmod(*y1, *y2, m128);
                let ad = mulmod(*x1, *y2, m128);
                let bc = mulmod(*y1, *x2, m128);
                Repr::Fast {
                    x: ((ac + bd) % m128) as u64,
                    y: ((ad + bc + bd) % m128) as u64,
                    m: *m,
                }
            }
            _ => {
                let m = self.modulus();
                debug_assert_eq!(m, rhs.modulus(), "mixed moduli");
                let (x1, y1) = (self.x(), self.y());
                let (x2, y2) = (rhs.x(), rhs.y());
                let bd = &y1 * &y2;
                Repr::Big {
                    x: (&x1 * &x2 + &bd) % &m,
                    y: (&x1 * &y2 + &y1 * &x2 + &bd) % &m,
                    m,
                }
            }
        };
        GoldenResidue { repr }
    }

    pub fn square(&self) -> GoldenResidue {
        self.mul(self)
    }

    /// g^k by square-and-multiply; g^0 = 1. The exponent is arbitrary
    /// precision because order bounds like p^(e−1)(p²−1) outgrow u64.
    pub fn pow(&self, k: &BigUint) -> GoldenResidue {
        let bits = k.bits();
        let mut acc = GoldenResidue::one(&Modulus::new(self.modulus()).unwrap());
        let mut base = self.clone();
        for i in 0..bits {
            if k.bit(i) {
                acc = acc.mul(&base);
            }
            if i + 1 < bits {
                base = base.square();
            }
        }
        acc
    }

    pub fn pow_u64(&self, k: u64) -> GoldenResidue {
        self.pow(&BigUint::from(k))
    }

    /// Conjugate in the quotient ring: (x + yα) ↦ (x + y) − yα, reduced.
    pub fn conjugate(&self) -> GoldenResidue {
        let repr = match &self.repr {
            Repr::Fast { x, y, m } => {
                let m128 = *m as u128;
                let xc = ((*x as u128 + *y as u128) % m128) as u64;
                let yc = ((m128 - *y as u128) % m128) as u64;
                Repr::Fast { x: xc, y: yc, m: *m }
            }
            Repr::Big { x, y, m } => Repr::Big {
                x: (x + y) % m,
                y: (m - y) % m,
                m: m.clone(),
            },
        };
        GoldenResidue { repr }
    }

    /// N(g) mod m as a canonical scalar residue.
    pub fn norm_residue(&self) -> BigUint {
        match &self.repr {
            Repr::Fast { x, y, m } => {
                let m128 = *m as u128;
                let xx = mulmod(*x, *x, m128);
                let xy = mulmod(*x, *y, m128);
                let yy = mulmod(*y, *y, m128);
                BigUint::from(((xx + xy + (m128 - yy)) % m128) as u64)
            }
            Repr::Big { x, y, m } => {
                let xx = (x * x) % m;
                let xy = (x * y) % m;
                let yy = (y * y) % m;
                (xx + xy + (m - yy)) % m
            }
        }
    }

    /// g⁻¹ = ḡ · N(g)⁻¹ mod m. Fails with `NotInvertible` when the norm
    /// shares a factor with m.
    pub fn inverse(&self) -> Result<GoldenResidue> {
        match &self.repr {
            Repr::Fast { m, .. } => {
                let n = self.norm_residue().to_u64().unwrap();
                let ninv = mod_inverse_u64(n, *m).ok_or_else(|| Error::NotInvertible {
                    modulus: m.to_string(),
                })?;
                let m128 = *m as u128;
                let conj = self.conjugate();
                let (cx, cy) = match conj.repr {
                    Repr::Fast { x, y, .. } => (x, y),
                    _ => unreachable!(),
                };
                Ok(GoldenResidue {
                    repr: Repr::Fast {
                        x: mulmod(cx, ninv, m128) as u64,
                        y: mulmod(cy, ninv, m128) as u64,
                        m: *m,
                    },
                })
            }
            Repr::Big { m, .. } => {
                let n = self.norm_residue();
                let ninv = mod_inverse_big(&n, m).ok_or_else(|| Error::NotInvertible {
                    modulus: m.to_string(),
                })?;
                let conj = self.conjugate();
                Ok(GoldenResidue {
                    repr: Repr::Big {
                        x: (conj.x() * &ninv) % m,
                        y: (conj.y() * &ninv) % m,
                        m: m.clone(),
                    },
                })
            }
        }
    }
}

#[inline]
fn mulmod(a: u64, b: u64, m: u128) -> u128 {
    (a as u128 * b as u128) % m
}

/// Modular inverse of a mod m by extended Euclid; None if gcd(a, m) > 1.
pub fn mod_inverse_u64(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

fn mod_inverse_big(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let gcd = a.extended_gcd(&m);
    if !gcd.gcd.is_one() {
        return None;
    }
    Some(gcd.x.mod_floor(&m).to_biguint().unwrap())
}

/// Exact multiplicative order of an invertible residue.
///
/// The caller supplies the factored exponent bound E (for instance p − 1,
/// 2(p + 1), or p^(e−1)(p² − 1)); deciding which bound applies — and
/// factoring it — is the caller's concern. Starting from E, each prime
/// factor is divided out while the power stays 1, which pins the minimal
/// d | E with g^d = 1, and Lagrange makes that the order.
pub fn multiplicative_order(
    g: &GoldenResidue,
    exponent_bound_factorization: &[(u64, u32)],
) -> Result<BigUint> {
    let mut bound = BigUint::one();
    for &(q, mult) in exponent_bound_factorization {
        bound *= BigUint::from(q).pow(mult);
    }
    if !g.pow(&bound).is_one() {
        return Err(Error::OrderNotDividing { bound: bound.to_string() });
    }
    let mut order = bound;
    for &(q, _) in exponent_bound_factorization {
        let q = BigUint::from(q);
        while (&order % &q).is_zero() {
            let candidate = &order / &q;
            if g.pow(&candidate).is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// How a rational prime factors in Z\[α\].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Splitting {
    /// p ≡ ±1 mod 5: (p) = (q₁)(q₂) with conjugate primes of norm ±p.
    Split,
    /// p ≡ ±2 mod 5: (p) stays prime, norm p².
    Inert,
    /// p = 5 = (√5)² up to a unit.
    Ramified,
}

/// Splitting type of a rational prime p in Z\[α\].
pub fn splitting_type(p: u64) -> Splitting {
    match p % 5 {
        0 => Splitting::Ramified,
        1 | 4 => Splitting::Split,
        _ => Splitting::Inert,
    }
}
