use num_rational::BigRational;

use crate::exact::{reciprocal_sum, render_decimal};
use crate::IntegerSet;

/// Digits after the point in rendered harmonic sums.
pub const HARMONIC_DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HarmonicSum {
    pub value: BigRational,
}

impl HarmonicSum {
    pub fn decimal(&self) -> String {
        render_decimal(&self.value, HARMONIC_DIGITS)
    }
}

/// Exact `sum 1/n` over the set.
pub fn harmonic_partial_sum(set: &IntegerSet) -> HarmonicSum {
    HarmonicSum {
        value: reciprocal_sum(set.elements()),
    }
}
