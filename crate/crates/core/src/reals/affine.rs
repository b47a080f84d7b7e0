//! Certified evaluation of `floor(alpha*n + gamma)` and its relatives.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{interval_floor, CircleValue, RealValue};
use crate::exact::floor_mul_sqrt;
use crate::{Error, Result};

/// Bits used when a surd has to be enclosed next to a decimal.
const MIXED_ENCLOSURE_BITS: u32 = 256;
/// Default enclosure width for irrational circle values.
pub const CIRCLE_BITS: u32 = 128;

/// Linear combination `rational + sum coef_d * sqrt(d)` over distinct squarefree `d`,
/// or a rational enclosure once a decimal is involved.
#[derive(Clone, Debug)]
pub(crate) enum Expr {
    Quad {
        rational: BigRational,
        roots: BTreeMap<BigInt, BigRational>,
    },
    Interval {
        lo: BigRational,
        hi: BigRational,
    },
}

impl Expr {
    pub(crate) fn from_real(value: &RealValue) -> Expr {
        match value {
            RealValue::Rational(r) => Expr::Quad {
                rational: r.clone(),
                roots: BTreeMap::new(),
            },
            RealValue::Surd(s) => {
                let mut roots = BTreeMap::new();
                roots.insert(s.d().clone(), BigRational::new(s.b().clone(), s.c().clone()));
                Expr::Quad {
                    rational: BigRational::new(s.a().clone(), s.c().clone()),
                    roots,
                }
            }
            RealValue::Decimal(d) => Expr::Interval {
                lo: d.lo(),
                hi: d.hi(),
            },
        }
    }

    pub(crate) fn integer(k: &BigInt) -> Expr {
        Expr::Quad {
            rational: BigRational::from_integer(k.clone()),
            roots: BTreeMap::new(),
        }
    }

    /// Multiplies by a positive integer.
    pub(crate) fn scale(&self, n: &BigInt) -> Expr {
        debug_assert!(n.is_positive());
        let k = BigRational::from_integer(n.clone());
        match self {
            Expr::Quad { rational, roots } => Expr::Quad {
                rational: rational * &k,
                roots: roots.iter().map(|(d, c)| (d.clone(), c * &k)).collect(),
            },
            Expr::Interval { lo, hi } => Expr::Interval {
                lo: lo * &k,
                hi: hi * &k,
            },
        }
    }

    pub(crate) fn add(&self, other: &Expr) -> Expr {
        match (self, other) {
            (
                Expr::Quad { rational: r1, roots: t1 },
                Expr::Quad { rational: r2, roots: t2 },
            ) => {
                let mut roots = t1.clone();
                for (d, c) in t2 {
                    let entry = roots.entry(d.clone()).or_insert_with(BigRational::zero);
                    *entry += c;
                }
                roots.retain(|_, c| !c.is_zero());
                Expr::Quad {
                    rational: r1 + r2,
                    roots,
                }
            }
            _ => {
                let (lo1, hi1) = self.bounds(MIXED_ENCLOSURE_BITS);
                let (lo2, hi2) = other.bounds(MIXED_ENCLOSURE_BITS);
                Expr::Interval {
                    lo: lo1 + lo2,
                    hi: hi1 + hi2,
                }
            }
        }
    }

    pub(crate) fn neg(&self) -> Expr {
        match self {
            Expr::Quad { rational, roots } => Expr::Quad {
                rational: -rational,
                roots: roots.iter().map(|(d, c)| (d.clone(), -c)).collect(),
            },
            Expr::Interval { lo, hi } => Expr::Interval {
                lo: -hi,
                hi: -lo,
            },
        }
    }

    /// Rational bounds; each root term contributes width at most `2^-bits`.
    pub(crate) fn bounds(&self, bits: u32) -> (BigRational, BigRational) {
        match self {
            Expr::Interval { lo, hi } => (lo.clone(), hi.clone()),
            Expr::Quad { rational, roots } => {
                let mut lo = rational.clone();
                let mut hi = rational.clone();
                let scale = BigInt::one() << bits;
                for (d, coef) in roots {
                    // coef * sqrt(d) = y * sqrt(d) / den
                    let y = coef.numer() * &scale;
                    let t = floor_mul_sqrt(&y, d);
                    let den = coef.denom() * &scale;
                    lo += BigRational::new(t.clone(), den.clone());
                    hi += BigRational::new(t + 1, den);
                }
                (lo, hi)
            }
        }
    }

    /// Exact floor where possible; enclosure refinement otherwise.
    pub(crate) fn floor(&self) -> Result<BigInt> {
        match self {
            Expr::Interval { lo, hi } => interval_floor(lo, hi, || "a decimal expression".into()),
            Expr::Quad { rational, roots } => match roots.len() {
                0 => Ok(rational.numer().div_floor(rational.denom())),
                1 => {
                    let (d, coef) = roots.iter().next().expect("one root");
                    // (x/dx) + (y/dy)√d = (x·dy + y·dx·√d) / (dx·dy)
                    let x = rational.numer() * coef.denom();
                    let y = coef.numer() * rational.denom();
                    let den = rational.denom() * coef.denom();
                    Ok((x + floor_mul_sqrt(&y, d)).div_floor(&den))
                }
                _ => {
                    // Distinct squarefree radicands are linearly independent over Q,
                    // so the value is irrational and refinement terminates.
                    let mut bits = 64;
                    while bits <= 8192 {
                        let (lo, hi) = self.bounds(bits);
                        if let Ok(f) = interval_floor(&lo, &hi, String::new) {
                            return Ok(f);
                        }
                        bits *= 2;
                    }
                    Err(Error::PrecisionExhausted(
                        "floor of a multi-radicand expression did not settle".into(),
                    ))
                }
            },
        }
    }
}

// floor((x0 + x1 n + (y0 + y1 n) sqrt(d)) / den) with small integer coefficients.
#[derive(Clone, Debug)]
struct SmallKernel {
    x0: i128,
    x1: i128,
    y0: i128,
    y1: i128,
    d: u128,
    den: i128,
}

impl SmallKernel {
    const LIMIT: u32 = 100;

    fn build(alpha: &Expr, gamma: &Expr) -> Option<SmallKernel> {
        let (Expr::Quad { rational: ar, roots: at }, Expr::Quad { rational: gr, roots: gt }) =
            (alpha, gamma)
        else {
            return None;
        };
        let mut radicands: Vec<&BigInt> = at.keys().chain(gt.keys()).collect();
        radicands.sort();
        radicands.dedup();
        if radicands.len() > 1 {
            return None;
        }
        let zero = BigRational::zero();
        let (d, a_root, g_root) = match radicands.first() {
            Some(d) => (
                (*d).clone(),
                at.get(*d).unwrap_or(&zero),
                gt.get(*d).unwrap_or(&zero),
            ),
            None => (BigInt::zero(), &zero, &zero),
        };
        let den = [ar, a_root, gr, g_root]
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let whole = |r: &BigRational| -> Option<i128> {
            let v = r.numer() * (&den / r.denom());
            (v.bits() <= Self::LIMIT as u64).then(|| v.to_i128()).flatten()
        };
        Some(SmallKernel {
            x0: whole(gr)?,
            x1: whole(ar)?,
            y0: whole(g_root)?,
            y1: whole(a_root)?,
            d: d.to_u128().filter(|d| *d < (1u128 << 64))?,
            den: (den.bits() <= Self::LIMIT as u64).then(|| den.to_i128()).flatten()?,
        })
    }

    fn floor_at(&self, n: u64) -> Option<i128> {
        let n = n as i128;
        let x = self.x1.checked_mul(n)?.checked_add(self.x0)?;
        let y = self.y1.checked_mul(n)?.checked_add(self.y0)?;
        let root_floor = if y == 0 {
            0
        } else {
            let sq = y.unsigned_abs().checked_mul(y.unsigned_abs())?.checked_mul(self.d)?;
            let r = sq.sqrt() as i128;
            if y > 0 {
                r
            } else {
                -r - 1
            }
        };
        Some(x.checked_add(root_floor)?.div_euclid(self.den))
    }
}

// Enclosure (lo1 n + lo0, hi1 n + hi0) / den for decimal parameters.
#[derive(Clone, Debug)]
struct IntervalKernel {
    lo0: BigInt,
    lo1: BigInt,
    hi0: BigInt,
    hi1: BigInt,
    den: BigInt,
}

impl IntervalKernel {
    fn build(alpha: &Expr, gamma: &Expr) -> IntervalKernel {
        let (alo, ahi) = alpha.bounds(MIXED_ENCLOSURE_BITS);
        let (glo, ghi) = gamma.bounds(MIXED_ENCLOSURE_BITS);
        let den = [&alo, &ahi, &glo, &ghi]
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let whole = |r: &BigRational| r.numer() * (&den / r.denom());
        IntervalKernel {
            lo0: whole(&glo),
            lo1: whole(&alo),
            hi0: whole(&ghi),
            hi1: whole(&ahi),
            den,
        }
    }

    fn floor_at(&self, n: u64) -> Result<BigInt> {
        let n = BigInt::from(n);
        let lo = (&self.lo1 * &n + &self.lo0).div_floor(&self.den);
        let hi = (&self.hi1 * &n + &self.hi0).div_floor(&self.den);
        if lo == hi {
            Ok(lo)
        } else {
            Err(Error::PrecisionExhausted(format!(
                "floor at n = {n} straddles {hi}; supply more digits"
            )))
        }
    }
}

/// Precompiled evaluator for `n -> floor(alpha*n + gamma)`.
///
/// Small rational and single-radicand parameters run on `i128` with an exact
/// integer square root; anything that overflows falls back to big integers.
#[derive(Clone, Debug)]
pub struct AffineEvaluator {
    alpha: Expr,
    gamma: Expr,
    small: Option<SmallKernel>,
    interval: Option<IntervalKernel>,
}

impl AffineEvaluator {
    /// No range validation is done here; see `SpectrumParams` for that.
    pub fn new(alpha: &RealValue, gamma: &RealValue) -> AffineEvaluator {
        let alpha = Expr::from_real(alpha);
        let gamma = Expr::from_real(gamma);
        let small = SmallKernel::build(&alpha, &gamma);
        let interval = match (&alpha, &gamma) {
            (Expr::Quad { .. }, Expr::Quad { .. }) => None,
            _ => Some(IntervalKernel::build(&alpha, &gamma)),
        };
        AffineEvaluator {
            alpha,
            gamma,
            small,
            interval,
        }
    }

    /// Big-integer floor, skipping the `i128` kernel.
    pub fn floor_big(&self, n: u64) -> Result<BigInt> {
        if let Some(k) = &self.interval {
            return k.floor_at(n);
        }
        self.alpha.scale(&BigInt::from(n)).add(&self.gamma).floor()
    }

    pub fn floor_at(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::Domain("spectrum argument must be >= 1".into()));
        }
        if let Some(v) = self.small.as_ref().and_then(|k| k.floor_at(n)) {
            return u64::try_from(v)
                .map_err(|_| Error::Range(format!("floor value {v} at n = {n} is out of range")));
        }
        crate::exact::to_u64(&self.floor_big(n)?, "floor value")
    }
}

/// `n -> nearest_affine(alpha, n)` together with the signed residue `alpha*n - h`.
#[derive(Clone, Debug)]
pub struct NearestMap {
    alpha: RealValue,
    expr: Expr,
    eval: AffineEvaluator,
}

impl NearestMap {
    pub fn new(alpha: &RealValue) -> Result<NearestMap> {
        alpha.ensure_positive("alpha")?;
        Ok(NearestMap {
            alpha: alpha.clone(),
            expr: Expr::from_real(alpha),
            eval: AffineEvaluator::new(alpha, &one_half()),
        })
    }

    pub fn alpha(&self) -> &RealValue {
        &self.alpha
    }

    pub fn nearest(&self, n: u64) -> Result<u64> {
        self.eval.floor_at(n)
    }

    /// `alpha*n - nearest(n)`; irrational values are enclosed to about `2^-bits`.
    pub fn signed_frac(&self, n: u64, bits: u32) -> Result<CircleValue> {
        let h = BigInt::from(self.nearest(n)?);
        let big_n = BigInt::from(n);
        match &self.alpha {
            RealValue::Rational(r) => {
                let v = BigRational::new(r.numer() * &big_n - &h * r.denom(), r.denom().clone());
                Ok(CircleValue::from_rational(v))
            }
            _ => {
                let e = self.expr.scale(&big_n).add(&Expr::integer(&h).neg());
                let (lo, hi) = e.bounds(bits);
                Ok(CircleValue::from_enclosure(lo, hi))
            }
        }
    }
}

/// `floor(alpha*n + gamma)` with `alpha > 0`, `0 < gamma < 1`, `n >= 1`.
///
/// The result can be 0 when `alpha*n + gamma < 1`.
pub fn floor_affine(alpha: &RealValue, gamma: &RealValue, n: u64) -> Result<u64> {
    alpha.ensure_positive("alpha")?;
    gamma.ensure_unit_open("gamma")?;
    AffineEvaluator::new(alpha, gamma).floor_at(n)
}

fn one_half() -> RealValue {
    RealValue::Rational(BigRational::new(BigInt::one(), 2.into()))
}

/// Nearest integer to `alpha*n`, ties rounded up (`floor(alpha*n + 1/2)`).
pub fn nearest_affine(alpha: &RealValue, n: u64) -> Result<u64> {
    alpha.ensure_positive("alpha")?;
    AffineEvaluator::new(alpha, &one_half()).floor_at(n)
}

/// `alpha*n - nearest_affine(alpha, n)` in `[-1/2, 1/2)`.
pub fn signed_frac(alpha: &RealValue, n: u64) -> Result<CircleValue> {
    signed_frac_bits(alpha, n, CIRCLE_BITS)
}

/// [`signed_frac`] with irrational values enclosed to about `2^-bits`.
pub fn signed_frac_bits(alpha: &RealValue, n: u64, bits: u32) -> Result<CircleValue> {
    NearestMap::new(alpha)?.signed_frac(n, bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn real(text: &str) -> RealValue {
        RealValue::parse(text).unwrap()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn floor_examples() {
        assert_eq!(floor_affine(&real("3/2"), &real("1/2"), 3).unwrap(), 5);
        assert_eq!(floor_affine(&real("1"), &real("0.3"), 7).unwrap(), 7);
        // 5√2 + 1/3 ≈ 7.40440 (high-precision oracle)
        assert_eq!(floor_affine(&real("(0+1*sqrt(2))/1"), &real("1/3"), 5).unwrap(), 7);
    }

    #[test]
    fn nearest_examples() {
        assert_eq!(nearest_affine(&real("3/2"), 3).unwrap(), 5);
        assert_eq!(nearest_affine(&real("2"), 4).unwrap(), 8);
        // 3√7 ≈ 7.937
        assert_eq!(nearest_affine(&real("sqrt(7)"), 3).unwrap(), 8);
    }

    #[test]
    fn signed_frac_examples() {
        assert_eq!(signed_frac(&real("3/2"), 3).unwrap().exact(), Some(&rat(-1, 2)));
        assert_eq!(signed_frac(&real("1"), 9).unwrap().exact(), Some(&rat(0, 1)));
        assert_eq!(signed_frac(&real("1/3"), 2).unwrap().exact(), Some(&rat(-1, 3)));
        // 29√2 ≈ 41.0122
        let f = signed_frac(&real("sqrt(2)"), 29).unwrap();
        assert_eq!(f.abs_below(&rat(1, 50)), Some(true));
        assert_eq!(f.abs_below(&rat(1, 100)), Some(false));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            floor_affine(&real("0"), &real("1/2"), 1),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            floor_affine(&real("1"), &real("3/2"), 1),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            floor_affine(&real("1"), &real("1/2"), 0),
            Err(Error::Domain(_))
        ));
        // 2 * 1.25 + 0.5 = 3 exactly, but the decimal only knows 1.25 ± 1e-9
        assert!(matches!(
            floor_affine(&real("1.250000000~10"), &real("1/2"), 2),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn surd_sum_hitting_an_integer_is_exact() {
        // √2 + (2 − √2) = 2 exactly
        let alpha = real("sqrt(2)");
        let gamma = real("(2-sqrt(2))/1");
        let ev = AffineEvaluator::new(&alpha, &gamma);
        assert_eq!(ev.floor_at(1).unwrap(), 2);
        assert_eq!(ev.floor_big(1).unwrap(), BigInt::from(2));
        // 3√2 + 2 − √2 = 2 + 2√2 ≈ 4.83
        assert_eq!(ev.floor_at(3).unwrap(), 4);
    }

    #[test]
    fn two_radicands_refine() {
        // √2·n + (√3 − 1) for n = 1..4 against f64
        let alpha = real("sqrt(2)");
        let gamma = real("(-1+sqrt(3))/1");
        let ev = AffineEvaluator::new(&alpha, &gamma);
        for n in 1..=40u64 {
            let approx = (2f64.sqrt() * n as f64 + 3f64.sqrt() - 1.0).floor() as u64;
            assert_eq!(ev.floor_at(n).unwrap(), approx, "n = {n}");
        }
    }

    #[test]
    fn decimal_kernel_matches_exact_surd() {
        let exact = AffineEvaluator::new(&real("sqrt(7)"), &real("2/3"));
        let decimal = AffineEvaluator::new(
            &real("2.6457513110645905905016157536392604257102591830825~50"),
            &real("2/3"),
        );
        for n in 1..=5000u64 {
            assert_eq!(exact.floor_at(n).unwrap(), decimal.floor_at(n).unwrap());
        }
    }

    proptest! {
        #[test]
        fn small_kernel_agrees_with_big_path(
            p in 1i64..5000, q in 1i64..500, r in 1i64..400, n in 1u64..1_000_000
        ) {
            let s = r + 1 + (r % 7);
            let alpha = RealValue::rational(p, q).unwrap();
            let gamma = RealValue::rational(r, s).unwrap();
            let ev = AffineEvaluator::new(&alpha, &gamma);
            prop_assert_eq!(BigInt::from(ev.floor_at(n).unwrap()), ev.floor_big(n).unwrap());
            let oracle = (BigInt::from(p) * n * s + BigInt::from(r) * q).div_floor(&BigInt::from(q * s));
            prop_assert_eq!(ev.floor_big(n).unwrap(), oracle);
        }

        #[test]
        fn surd_kernel_agrees_with_big_path(
            a in -50i64..50, b in 1i64..40, d in 2i64..200, c in 1i64..30, n in 1u64..100_000
        ) {
            prop_assume!(!crate::exact::is_perfect_square(&BigInt::from(d)));
            let alpha = RealValue::surd(a, b, d, c).unwrap();
            prop_assume!(alpha.ensure_positive("a").is_ok());
            let gamma = RealValue::rational(1, 3).unwrap();
            let ev = AffineEvaluator::new(&alpha, &gamma);
            prop_assert_eq!(BigInt::from(ev.floor_at(n).unwrap()), ev.floor_big(n).unwrap());
        }

        #[test]
        fn frac_plus_nearest_is_alpha_n(p in 1i64..1000, q in 1i64..1000, n in 1u64..10_000) {
            let alpha = RealValue::rational(p, q).unwrap();
            let f = signed_frac(&alpha, n).unwrap();
            let h = nearest_affine(&alpha, n).unwrap();
            let v = f.exact().unwrap().clone() + BigRational::from_integer(h.into());
            prop_assert_eq!(v, BigRational::new(BigInt::from(p) * n, q.into()));
            let half = rat(1, 2);
            prop_assert!(f.exact().unwrap() >= &-half.clone() && f.exact().unwrap() < &half);
        }

        #[test]
        fn nearest_is_floor_at_half(p in 1i64..1000, q in 1i64..1000, n in 1u64..10_000) {
            let alpha = RealValue::rational(p, q).unwrap();
            prop_assert_eq!(
                nearest_affine(&alpha, n).unwrap(),
                floor_affine(&alpha, &real("1/2"), n).unwrap()
            );
        }

        #[test]
        fn surd_frac_encloses_alpha_n(b in 1i64..20, d in 2i64..50, n in 1u64..5000) {
            prop_assume!(!crate::exact::is_perfect_square(&BigInt::from(d)));
            let alpha = RealValue::surd(0, b, d, 1).unwrap();
            let f = signed_frac(&alpha, n).unwrap();
            let h = BigRational::from_integer(nearest_affine(&alpha, n).unwrap().into());
            let value = alpha.enclosure(200);
            let lo = f.value().lo() + &h;
            let hi = f.value().hi() + &h;
            // certified interval around alpha*n
            let an_lo = value.lo() * BigRational::from_integer(n.into());
            let an_hi = value.hi() * BigRational::from_integer(n.into());
            prop_assert!(lo <= an_hi && an_lo <= hi);
        }
    }
}
