//! Certified nonhomogeneous spectra `n -> floor(alpha*n + gamma)` and finite
//! largeness certificates for subsets of the natural numbers.
//!
//! Every claim made by this crate is about a bounded prefix of a set. The
//! certificates (progressions, gap profiles, densities, harmonic sums,
//! finite-sum generators, shift witnesses, chains) can all be rechecked from
//! the set alone.

pub mod error;
pub mod exact;
pub mod reals;
pub mod sets;
pub mod spectra;
pub mod chains;
pub mod constants;
pub mod largeness;
pub mod preservation;
pub mod report;

pub use error::{Error, Result};
pub use reals::{
    floor_affine, nearest_affine, signed_frac, AffineEvaluator, Certified, CircleValue, RealValue,
};
pub use sets::{GeneratorSequence, IntegerSet};
pub use spectra::SpectrumParams;

/// Arbitrary-precision integer used throughout.
pub type Int = num_bigint::BigInt;
/// Exact rational used for densities, sums and bounds.
pub type Rational = num_rational::BigRational;
