//! Set-level spectrum maps and circle diagnostics.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::reals::{AffineEvaluator, NearestMap};
use crate::{CircleValue, Error, IntegerSet, RealValue, Result};

/// A validated pair `alpha > 0`, `0 < gamma < 1`.
#[derive(Clone, Debug)]
pub struct SpectrumParams {
    alpha: RealValue,
    gamma: RealValue,
    eval: AffineEvaluator,
}

impl SpectrumParams {
    pub fn new(alpha: RealValue, gamma: RealValue) -> Result<Self> {
        alpha.ensure_positive("alpha")?;
        gamma.ensure_unit_open("gamma")?;
        let eval = AffineEvaluator::new(&alpha, &gamma);
        Ok(SpectrumParams { alpha, gamma, eval })
    }

    pub fn parse(alpha: &str, gamma: &str) -> Result<Self> {
        Self::new(RealValue::parse(alpha)?, RealValue::parse(gamma)?)
    }

    pub fn alpha(&self) -> &RealValue {
        &self.alpha
    }

    pub fn gamma(&self) -> &RealValue {
        &self.gamma
    }

    /// `floor(alpha*n + gamma)`; may be 0 for small `alpha*n`.
    pub fn apply(&self, n: u64) -> Result<u64> {
        self.eval.floor_at(n)
    }

    /// Like [`apply`](Self::apply) but rejects a zero value.
    pub fn apply_positive(&self, n: u64) -> Result<u64> {
        match self.apply(n)? {
            0 => Err(Error::Range(format!(
                "alpha*{n} + gamma < 1 with alpha = {}, gamma = {}; the image would contain 0",
                self.alpha, self.gamma
            ))),
            v => Ok(v),
        }
    }

    /// Image of each element in order, duplicates kept.
    pub fn map_elements(&self, set: &IntegerSet) -> Result<Vec<u64>> {
        set.elements().iter().map(|&n| self.apply_positive(n)).collect()
    }
}

impl fmt::Display for SpectrumParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={} gamma={}", self.alpha, self.gamma)
    }
}

/// `{floor(alpha*n + gamma) : n in set}`.
///
/// The universe bound is `g(N)` for the input bound `N`, the largest value
/// `g` takes on `[1, N]`; with `alpha = 1` the set comes back unchanged.
pub fn spectrum_image(params: &SpectrumParams, set: &IntegerSet) -> Result<IntegerSet> {
    if set.is_empty() {
        return Err(Error::Domain("spectrum image of an empty set".into()));
    }
    // the map is nondecreasing, so the image is already sorted
    let mut image = params.map_elements(set)?;
    image.dedup();
    let bound = params.apply_positive(set.universe_bound())?;
    IntegerSet::new(image, bound)
}

/// `h_alpha[set]`, the nearest-integer image.
pub fn nearest_image(alpha: &RealValue, set: &IntegerSet) -> Result<IntegerSet> {
    let half = RealValue::Rational(BigRational::new(1.into(), 2.into()));
    spectrum_image(&SpectrumParams::new(alpha.clone(), half)?, set)
}

/// `{n <= domain_bound : floor(alpha*n + gamma) in target}`.
pub fn spectrum_preimage(
    params: &SpectrumParams,
    target: &IntegerSet,
    domain_bound: u64,
) -> Result<IntegerSet> {
    if domain_bound == 0 {
        return Err(Error::Domain("domain bound must be >= 1".into()));
    }
    let mut out = Vec::new();
    for n in 1..=domain_bound {
        if target.contains(params.apply(n)?) {
            out.push(n);
        }
    }
    IntegerSet::new(out, domain_bound)
}

/// Residue precisions tried for irrational `alpha` before giving up.
const REFINE_BITS: [u32; 3] = [128, 512, 2048];

/// `|signed_frac(alpha, n)| < threshold`, refining enclosures as needed.
pub fn near_zero(map: &NearestMap, n: u64, threshold: &BigRational) -> Result<bool> {
    let mut last = None;
    for bits in REFINE_BITS {
        let f = map.signed_frac(n, bits)?;
        if let Some(v) = f.abs_below(threshold) {
            return Ok(v);
        }
        last = Some(f);
    }
    Err(Error::PrecisionExhausted(format!(
        "|alpha*{n} - h| = {} cannot be compared with {threshold}",
        last.map(|f| f.to_string()).unwrap_or_default()
    )))
}

/// `{n <= bound : |signed_frac(alpha, n)| < threshold}` for `0 < threshold <= 1/2`.
pub fn near_zalpha_points(
    alpha: &RealValue,
    threshold: &BigRational,
    bound: u64,
) -> Result<IntegerSet> {
    let half = BigRational::new(BigInt::one(), 2.into());
    if !threshold.is_positive() || threshold > &half {
        return Err(Error::Domain(format!("threshold {threshold} must lie in (0, 1/2]")));
    }
    if bound == 0 {
        return Err(Error::Domain("bound must be >= 1".into()));
    }
    let map = NearestMap::new(alpha)?;
    let mut out = Vec::new();
    for n in 1..=bound {
        if near_zero(&map, n, threshold)? {
            out.push(n);
        }
    }
    IntegerSet::new(out, bound)
}

/// Whether `-gamma <= f < 1 - gamma` holds for the circle value `f`, when decidable.
///
/// On those points `floor(alpha*n + gamma)` and the nearest integer agree.
pub fn in_agreement_zone(f: &CircleValue, gamma: &RealValue) -> Option<bool> {
    let g = gamma.enclosure(256);
    let v = f.value();
    let zero = BigRational::from_integer(0.into());
    // f >= -gamma  <=>  f + gamma >= 0
    let lower = if v.lo() + g.lo() >= zero {
        Some(true)
    } else if v.hi() + g.hi() < zero {
        Some(false)
    } else {
        None
    };
    let one = BigRational::one();
    // f < 1 - gamma  <=>  f + gamma < 1
    let upper = if v.hi() + g.hi() < one {
        Some(true)
    } else if v.lo() + g.lo() >= one {
        Some(false)
    } else {
        None
    };
    match (lower, upper) {
        (Some(a), Some(b)) => Some(a && b),
        (Some(false), _) | (_, Some(false)) => Some(false),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: &str, g: &str) -> SpectrumParams {
        SpectrumParams::parse(a, g).unwrap()
    }

    fn set(xs: &[u64]) -> IntegerSet {
        IntegerSet::from_unsorted(xs.iter().copied(), None).unwrap()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn image_examples() {
        assert_eq!(spectrum_image(&params("1", "1/2"), &set(&[1, 2, 3])).unwrap().elements(), &[1, 2, 3]);
        let img = spectrum_image(&params("3/2", "1/2"), &set(&[2, 4, 6])).unwrap();
        assert_eq!(img.elements(), &[3, 6, 9]);
        assert_eq!(img.universe_bound(), 9);
        let wide = IntegerSet::new(vec![2, 4, 6], 10).unwrap();
        assert_eq!(spectrum_image(&params("3/2", "1/2"), &wide).unwrap().universe_bound(), 15);
        let p = crate::sets::primes_up_to(100).unwrap();
        assert_eq!(spectrum_image(&params("1", "1/2"), &p).unwrap(), p);
        assert_eq!(
            spectrum_image(&params("1/2", "1/2"), &set(&[1, 2, 3, 4])).unwrap().elements(),
            &[1, 2]
        );
    }

    #[test]
    fn zero_images_are_rejected() {
        assert!(matches!(
            spectrum_image(&params("1/3", "1/3"), &set(&[1, 2, 3])),
            Err(Error::Range(_))
        ));
        assert!(SpectrumParams::parse("1", "1").is_err());
        assert!(SpectrumParams::parse("-1/2", "1/2").is_err());
    }

    #[test]
    fn preimage_examples() {
        let s = spectrum_preimage(&params("1", "1/2"), &set(&[5]), 10).unwrap();
        assert_eq!(s.elements(), &[5]);
        let s = spectrum_preimage(&params("3/2", "1/2"), &set(&[3, 6, 9]), 6).unwrap();
        assert_eq!(s.elements(), &[2, 4, 6]);
        let s = spectrum_preimage(&params("2", "1/2"), &set(&[7]), 10).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn near_points_examples() {
        let pts = near_zalpha_points(&RealValue::parse("1/2").unwrap(), &rat(1, 4), 8).unwrap();
        assert_eq!(pts.elements(), &[2, 4, 6, 8]);
        let pts = near_zalpha_points(&RealValue::parse("1").unwrap(), &rat(1, 3), 5).unwrap();
        assert_eq!(pts.elements(), &[1, 2, 3, 4, 5]);
        let pts = near_zalpha_points(&RealValue::parse("sqrt(2)").unwrap(), &rat(1, 10), 50).unwrap();
        assert!(pts.contains(29));
        // 5√2 ≈ 7.071 is near, 2√2 ≈ 2.83 is not
        assert!(pts.contains(5));
        assert!(!pts.contains(2));
        assert!(near_zalpha_points(&RealValue::parse("1").unwrap(), &rat(3, 4), 5).is_err());
    }

    #[test]
    fn nested_spectrum_with_decimal_constants() {
        // floor(sqrt7 * floor(n*pi + 1/e) + 2/3), all parameters at 50 digits
        let inner = SpectrumParams::new(crate::constants::pi(), crate::constants::inv_e()).unwrap();
        let outer = SpectrumParams::new(crate::constants::sqrt7(), RealValue::rational(2, 3).unwrap()).unwrap();
        let got: Vec<u64> = (1..=20)
            .map(|n| outer.apply(inner.apply(n).unwrap()).unwrap())
            .collect();
        assert_eq!(
            got,
            [8, 16, 24, 32, 42, 50, 58, 66, 74, 82, 90, 101, 109, 117, 125, 132, 140, 148, 159, 167]
        );
    }

    #[test]
    fn agreement_zone() {
        let gamma = RealValue::parse("1/3").unwrap();
        let f = CircleValue::from_rational(rat(-1, 3));
        assert_eq!(in_agreement_zone(&f, &gamma), Some(true));
        let f = CircleValue::from_rational(rat(-2, 5));
        assert_eq!(in_agreement_zone(&f, &gamma), Some(false));
        let f = CircleValue::from_rational(rat(2, 5));
        assert_eq!(in_agreement_zone(&f, &gamma), Some(true));
        let gamma = RealValue::parse("3/4").unwrap();
        assert_eq!(in_agreement_zone(&CircleValue::from_rational(rat(1, 4)), &gamma), Some(false));
    }
}
