//! Computational companion to Wall's conjecture: arithmetic in the golden
//! ring Z\[α\], Pisano periods and ranks of apparition, Fibonacci-Wieferich
//! prime testing with a segmented parallel scanner, expected-count
//! heuristics, and exact height/radical/quality measures for the
//! Fibonacci abc-triples (√5·Fₙ, −αⁿ, ᾱⁿ).

pub mod abc_triples;
pub mod error;
pub mod fibonacci;
pub mod golden_ring;
pub mod heuristics;
pub mod periods;
pub mod sieve;
pub mod wieferich;

pub use error::{Error, Result};
