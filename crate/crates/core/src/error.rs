//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The norm of the element shares a factor with the modulus.
    #[error("element not invertible: gcd(norm, {modulus}) > 1")]
    NotInvertible { modulus: String },

    /// `multiplicative_order` was handed an exponent bound E with g^E != 1.
    /// This is a caller bug, not a mathematical event.
    #[error("g^E != 1 for the supplied exponent bound E = {bound}")]
    OrderNotDividing { bound: String },

    /// Exact Fibonacci index above the configured cap.
    #[error("fibonacci index {n} exceeds cap {cap}")]
    CapExceeded { n: u64, cap: u64 },

    /// The Legendre symbol (p/5) is undefined at p = 5.
    #[error("legendre symbol (p/5) undefined for p = 5")]
    LegendreUndefined,

    /// Pisano period of m < 2 is undefined under our definition.
    #[error("pisano period undefined for m = {m}")]
    PeriodUndefined { m: u64 },

    #[error("factorization budget exceeded for {n}")]
    FactorizationBudgetExceeded { n: String },

    #[error("incomplete factorization of {n}")]
    IncompleteFactorization { n: String },

    /// An identity the mathematics guarantees failed to hold. Signals an
    /// arithmetic bug (or a genuinely historic counterexample) and must
    /// never be silenced.
    #[error("sanity violation: {0}")]
    SanityViolation(String),

    #[error("invalid input: {0}")]
    ConfigInvalid(String),

    #[error("corrupt checkpoint: {0}")]
    CheckpointCorrupt(String),

    #[error("invalid range [{lo}, {hi}]: {reason}")]
    RangeInvalid { lo: u64, hi: u64, reason: &'static str },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
