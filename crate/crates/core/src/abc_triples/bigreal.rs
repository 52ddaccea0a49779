//! Minimal arbitrary-precision reals: fixed-point BigInt mantissas with a
//! binary scale, enough for logarithms and their ratios at a requested
//! precision. Used for heights and qualities, where f64 would fall off a
//! precision cliff long before n reaches the factorization budget.
//!
//! ln is computed from the atanh series after normalizing into [1, 2):
//!
//! ```text
//! ln x = k·ln 2 + 2·(z + z³/3 + z⁵/5 + ...),   z = (m−1)/(m+1), x = m·2^k
//! ```
//!
//! With m ∈ [1, 2), z ≤ 1/3, so each term gains ~3.17 bits. All series run
//! with 64 guard bits and round once at the end.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

const GUARD_BITS: u32 = 64;

/// value = mantissa · 2^(−prec)
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigReal {
    mantissa: BigInt,
    prec: u32,
}

impl BigReal {
    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Natural log of a positive integer at `prec` bits.
    pub fn ln_of_biguint(n: &BigUint, prec: u32) -> BigReal {
        assert!(!n.is_zero(), "ln of zero");
        let w = prec + GUARD_BITS;
        let bits = n.bits() as i64;
        // n = m·2^(bits−1), m ∈ [1, 2): m_w ≈ m·2^w
        let shift = w as i64 + 1 - bits;
        let m_w: BigInt = if shift >= 0 {
            BigInt::from(n.clone()) << shift as u32
        } else {
            BigInt::from(n.clone()) >> (-shift) as u32
        };
        let ln_m = ln_series(&m_w, w);
        let k = bits - 1;
        let total = ln_m + k * ln2_mantissa(w);
        BigReal { mantissa: total >> GUARD_BITS, prec }
    }

    /// ln α, α = (1+√5)/2, at `prec` bits.
    pub fn ln_alpha(prec: u32) -> BigReal {
        let w = prec + GUARD_BITS;
        // √5 at w-bit scale by integer square root, then α = (1+√5)/2 ∈ [1, 2)
        let five = BigUint::from(5u32) << (2 * w);
        let sqrt5_w = BigInt::from(five.sqrt());
        let alpha_w = ((BigInt::from(1) << w) + sqrt5_w) >> 1;
        BigReal { mantissa: ln_series(&alpha_w, w) >> GUARD_BITS, prec }
    }

    pub fn scale_u64(&self, k: u64) -> BigReal {
        BigReal { mantissa: &self.mantissa * k, prec: self.prec }
    }

    /// self / rhs at self's precision.
    pub fn div(&self, rhs: &BigReal) -> BigReal {
        assert!(!rhs.mantissa.is_zero(), "division by zero");
        let rhs_aligned = rhs.with_precision(self.prec);
        BigReal {
            mantissa: (&self.mantissa << self.prec) / rhs_aligned.mantissa,
            prec: self.prec,
        }
    }

    pub fn with_precision(&self, prec: u32) -> BigReal {
        let mantissa = if prec >= self.prec {
            &self.mantissa << (prec - self.prec)
        } else {
            &self.mantissa >> (self.prec - prec)
        };
        BigReal { mantissa, prec }
    }

    pub fn to_f64(&self) -> f64 {
        // split the scale so the mantissa conversion cannot overflow f64
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 900).max(0) as u32;
        let reduced = (&self.mantissa >> drop).to_f64().unwrap_or(f64::NAN);
        reduced * 2f64.powi(drop as i32 - self.prec as i32)
    }

    /// True when self and other agree to the given number of significant
    /// decimal digits (relative comparison, exact integer arithmetic).
    pub fn agrees_to_digits(&self, other: &BigReal, digits: u32) -> bool {
        let prec = self.prec.min(other.prec);
        let a = self.with_precision(prec).mantissa;
        let b = other.with_precision(prec).mantissa;
        let diff = (&a - &b).abs();
        let scale = BigInt::from(10u32).pow(digits);
        // |a − b| · 10^digits ≤ |a| + slack of one ulp for the final rounding
        diff * scale <= a.abs() + (BigInt::from(1) << 1)
    }
}

/// atanh-series ln of m_w ≈ m·2^w with m ∈ [1, 2); result at w-bit scale.
fn ln_series(m_w: &BigInt, w: u32) -> BigInt {
    let one_w = BigInt::from(1) << w;
    let num = (m_w - &one_w) << w;
    let den = m_w + &one_w;
    let z = num / den; // z·2^w, 0 ≤ z ≤ 1/3
    let z2 = (&z * &z) >> w;
    let mut term = z.clone();
    let mut sum = z;
    let mut i = 1u64;
    while !term.is_zero() {
        term = (&term * &z2) >> w;
        i += 2;
        sum += &term / i;
    }
    sum << 1
}

fn ln2_mantissa(w: u32) -> BigInt {
    ln_series(&(BigInt::from(2) << w), w)
}
