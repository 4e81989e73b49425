//! Pattern densities in Latin squares and step latinons.
//!
//! The crate computes exact (rational) and Monte Carlo densities of
//! order patterns in finite Latin squares, evaluates the same densities
//! in step latinons (piecewise limit objects), certifies quasirandomness
//! from the 2x3 density vector, constructs structured counterexample
//! squares by blow-up, and decides eliminability of generalized patterns.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the
//! command line live in the companion `latpat-cli` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod density;
pub mod generators;
pub mod latinon;
pub mod mc;
pub mod pattern;
pub mod ratio;
pub mod square;

pub use pattern::{GeneralizedPattern, Pattern, PatternId};
pub use ratio::Rational;
pub use square::LatinSquare;
