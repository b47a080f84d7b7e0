//! Exact and certified real parameters.
//!
//! A [`RealValue`] is a rational, a quadratic surd `(a+b√d)/c`, or a decimal
//! known to a declared number of significant digits. Rationals and surds are
//! evaluated exactly; decimals are carried as rational enclosures and any
//! floor that cannot be decided at the declared precision is reported as
//! [`Error::PrecisionExhausted`].

mod affine;
mod decimal;
mod surd;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use affine::{
    floor_affine, nearest_affine, signed_frac, signed_frac_bits, AffineEvaluator, NearestMap,
    CIRCLE_BITS,
};
pub use decimal::{parse_plain_decimal, DecimalReal, MIN_PRECISION};
pub use surd::{QuadSurd, SurdOrRational};

use crate::{Error, Result};

/// An exact or certified positive real parameter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RealValue {
    Rational(BigRational),
    Surd(QuadSurd),
    Decimal(DecimalReal),
}

impl RealValue {
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Domain("rational denominator is zero".into()));
        }
        Ok(RealValue::Rational(BigRational::new(p.into(), q.into())))
    }

    pub fn integer(n: i64) -> Self {
        RealValue::Rational(BigRational::from_integer(n.into()))
    }

    /// `(a + b*sqrt(d)) / c`, normalised; collapses to `Rational` when `b == 0`.
    pub fn surd(a: i64, b: i64, d: i64, c: i64) -> Result<Self> {
        Ok(QuadSurd::new(a.into(), b.into(), d.into(), c.into())?.into())
    }

    pub fn decimal(digits: &str, precision: u32) -> Result<Self> {
        Ok(RealValue::Decimal(DecimalReal::parse(digits, precision)?))
    }

    /// Parses `p/q`, `(a+b*sqrt(d))/c`, `<decimal>~<precision>`, or a plain
    /// integer or terminating decimal (read as an exact rational).
    pub fn parse(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty real value".into()));
        }
        if compact.contains("sqrt(") {
            return parse_surd(&compact);
        }
        if let Some((digits, precision)) = compact.split_once('~') {
            let precision: u32 = precision
                .parse()
                .map_err(|_| Error::Parse(format!("bad precision in {text:?}")))?;
            return Self::decimal(digits, precision);
        }
        if let Some((p, q)) = compact.split_once('/') {
            let p: BigInt = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in {text:?}")))?;
            let q: BigInt = q
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in {text:?}")))?;
            if q.is_zero() {
                return Err(Error::Domain(format!("zero denominator in {text:?}")));
            }
            return Ok(RealValue::Rational(BigRational::new(p, q)));
        }
        Ok(RealValue::Rational(parse_plain_decimal(&compact)?))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            RealValue::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Enclosure of the value; exact for rationals, width about `2^-bits` for surds.
    pub fn enclosure(&self, bits: u32) -> Certified {
        match self {
            RealValue::Rational(r) => Certified::Exact(r.clone()),
            RealValue::Surd(s) => {
                let (lo, hi) = s.enclosure(bits);
                Certified::Interval { lo, hi }
            }
            RealValue::Decimal(d) => Certified::Interval {
                lo: d.lo(),
                hi: d.hi(),
            },
        }
    }

    /// Exact comparison with a rational; decimals fail when the enclosure contains `r`.
    pub fn cmp_rational(&self, r: &BigRational) -> Result<Ordering> {
        match self {
            RealValue::Rational(v) => Ok(v.cmp(r)),
            RealValue::Surd(s) => Ok(s.cmp_rational(r)),
            RealValue::Decimal(d) => {
                if d.hi() < *r {
                    Ok(Ordering::Less)
                } else if d.lo() > *r {
                    Ok(Ordering::Greater)
                } else {
                    Err(Error::PrecisionExhausted(format!(
                        "{d} cannot be ordered against {r} at the declared precision"
                    )))
                }
            }
        }
    }

    pub fn cmp_integer(&self, k: i64) -> Result<Ordering> {
        self.cmp_rational(&BigRational::from_integer(k.into()))
    }

    pub fn floor(&self) -> Result<BigInt> {
        match self {
            RealValue::Rational(r) => Ok(r.numer().div_floor(r.denom())),
            RealValue::Surd(s) => Ok(s.floor()),
            RealValue::Decimal(d) => interval_floor(&d.lo(), &d.hi(), || d.to_string()),
        }
    }

    /// `floor(1 / self)` for a positive value.
    pub fn floor_recip(&self) -> Result<BigInt> {
        match self {
            RealValue::Rational(r) => {
                if !r.is_positive() {
                    return Err(Error::Domain(format!("reciprocal of nonpositive {r}")));
                }
                Ok(r.denom().div_floor(r.numer()))
            }
            RealValue::Surd(s) => match s.recip() {
                SurdOrRational::Surd(inv) => Ok(inv.floor()),
                SurdOrRational::Rational(r) => Ok(r.numer().div_floor(r.denom())),
            },
            RealValue::Decimal(d) => {
                let lo = d.lo();
                if !lo.is_positive() {
                    return Err(Error::PrecisionExhausted(format!(
                        "{d} is not certified positive"
                    )));
                }
                interval_floor(&d.hi().recip(), &lo.recip(), || format!("1/({d})"))
            }
        }
    }

    /// `1 / self` for rationals and surds. Decimals have no exact reciprocal in
    /// this representation and are rejected.
    pub fn recip(&self) -> Result<RealValue> {
        match self {
            RealValue::Rational(r) if r.is_zero() => {
                Err(Error::Domain("reciprocal of zero".into()))
            }
            RealValue::Rational(r) => Ok(RealValue::Rational(r.recip())),
            RealValue::Surd(s) => Ok(s.recip().into()),
            RealValue::Decimal(d) => Err(Error::Domain(format!(
                "reciprocal of decimal {d} is not representable exactly"
            ))),
        }
    }

    /// Certified check that the value is strictly positive.
    pub fn ensure_positive(&self, what: &str) -> Result<()> {
        match self.cmp_rational(&BigRational::zero()) {
            Ok(Ordering::Greater) => Ok(()),
            Ok(_) => Err(Error::Domain(format!("{what} = {self} must be > 0"))),
            Err(e) => Err(e),
        }
    }

    /// Certified check that the value lies in the open unit interval.
    pub fn ensure_unit_open(&self, what: &str) -> Result<()> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        if let RealValue::Decimal(d) = self {
            if d.center() <= &zero || d.center() >= &one {
                return Err(Error::Domain(format!("{what} = {self} must lie in (0, 1)")));
            }
        }
        let above = self.cmp_rational(&zero)? == Ordering::Greater;
        let below = self.cmp_rational(&one)? == Ordering::Less;
        if above && below {
            Ok(())
        } else {
            Err(Error::Domain(format!("{what} = {self} must lie in (0, 1)")))
        }
    }

    /// A floating-point approximation, for display only.
    pub fn approx_f64(&self) -> f64 {
        match self {
            RealValue::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            RealValue::Surd(s) => s.approx_f64(),
            RealValue::Decimal(d) => d.center().to_f64().unwrap_or(f64::NAN),
        }
    }
}

pub(crate) fn interval_floor(
    lo: &BigRational,
    hi: &BigRational,
    describe: impl FnOnce() -> String,
) -> Result<BigInt> {
    let f_lo = lo.numer().div_floor(lo.denom());
    let f_hi = hi.numer().div_floor(hi.denom());
    if f_lo == f_hi {
        Ok(f_lo)
    } else {
        Err(Error::PrecisionExhausted(format!(
            "floor of {} is ambiguous: enclosure straddles {}",
            describe(),
            f_hi
        )))
    }
}

impl From<SurdOrRational> for RealValue {
    fn from(v: SurdOrRational) -> Self {
        match v {
            SurdOrRational::Surd(s) => RealValue::Surd(s),
            SurdOrRational::Rational(r) => RealValue::Rational(r),
        }
    }
}

impl FromStr for RealValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RealValue::parse(s)
    }
}

impl fmt::Display for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealValue::Rational(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            RealValue::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            RealValue::Surd(s) => write!(f, "{s}"),
            RealValue::Decimal(d) => write!(f, "{d}"),
        }
    }
}

fn parse_int(text: &str, whole: &str) -> Result<BigInt> {
    text.parse()
        .map_err(|_| Error::Parse(format!("bad integer {text:?} in {whole:?}")))
}

// Accepts `(A±B*sqrt(D))/C`, `A±B*sqrt(D)`, `B*sqrt(D)`, `sqrt(D)` and sign variants.
fn parse_surd(text: &str) -> Result<RealValue> {
    let malformed = || Error::Parse(format!("malformed surd {text:?}"));
    let (inner, c) = match text.rfind(")/") {
        Some(pos) if text.starts_with('(') => (&text[1..pos], parse_int(&text[pos + 2..], text)?),
        _ => (text, BigInt::one()),
    };
    let root_at = inner.find("sqrt(").ok_or_else(malformed)?;
    let radicand = inner[root_at + 5..]
        .strip_suffix(')')
        .ok_or_else(malformed)?;
    let d = parse_int(radicand, text)?;
    let head = &inner[..root_at];
    let head = head.strip_suffix('*').unwrap_or(head);
    // split "A+B" / "A-B" / "B" / "-B" / "A+" / ""
    let split = head
        .char_indices()
        .skip(1)
        .filter(|&(_, ch)| ch == '+' || ch == '-')
        .last()
        .map(|(i, _)| i);
    let (a_text, b_text) = match split {
        Some(i) => (&head[..i], &head[i..]),
        None => ("", head),
    };
    let a = if a_text.is_empty() {
        BigInt::zero()
    } else {
        parse_int(a_text, text)?
    };
    let b = match b_text {
        "" | "+" => BigInt::one(),
        "-" => -BigInt::one(),
        t => parse_int(t.strip_prefix('+').unwrap_or(t), text)?,
    };
    Ok(QuadSurd::new(a, b, d, c)?.into())
}

/// A value that is either known exactly or enclosed by rational bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certified {
    Exact(BigRational),
    Interval { lo: BigRational, hi: BigRational },
}

impl Certified {
    pub fn lo(&self) -> &BigRational {
        match self {
            Certified::Exact(v) => v,
            Certified::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &BigRational {
        match self {
            Certified::Exact(v) => v,
            Certified::Interval { hi, .. } => hi,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Certified::Exact(v) => Some(v),
            Certified::Interval { .. } => None,
        }
    }

    /// Certified ordering against `r`, or `None` when the enclosure contains `r`.
    pub fn cmp_rational(&self, r: &BigRational) -> Option<Ordering> {
        match self {
            Certified::Exact(v) => Some(v.cmp(r)),
            Certified::Interval { lo, hi } => {
                if hi < r {
                    Some(Ordering::Less)
                } else if lo > r {
                    Some(Ordering::Greater)
                } else {
                    None
                }
            }
        }
    }

    pub fn midpoint(&self) -> BigRational {
        (self.lo() + self.hi()) / BigRational::from_integer(2.into())
    }

    pub fn approx_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Certified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certified::Exact(v) => write!(f, "{v}"),
            Certified::Interval { lo, hi } => write!(f, "[{lo},{hi}]"),
        }
    }
}

/// A point of the circle group represented in `[-1/2, 1/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleValue(Certified);

impl CircleValue {
    fn half() -> BigRational {
        BigRational::new(BigInt::one(), 2.into())
    }

    /// Reduces an exact rational modulo 1 into `[-1/2, 1/2)`.
    pub fn from_rational(v: BigRational) -> Self {
        let shift = (&v + Self::half()).floor();
        CircleValue(Certified::Exact(v - shift))
    }

    /// Wraps an enclosure already known to bracket a point of `[-1/2, 1/2)`.
    pub(crate) fn from_enclosure(lo: BigRational, hi: BigRational) -> Self {
        let half = Self::half();
        let lo = if lo < -half.clone() { -half.clone() } else { lo };
        let hi = if hi > half { half } else { hi };
        CircleValue(Certified::Interval { lo, hi })
    }

    pub fn value(&self) -> &Certified {
        &self.0
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.0.exact()
    }

    /// Certified `|value| < threshold`, or `None` when undecidable at this precision.
    pub fn abs_below(&self, threshold: &BigRational) -> Option<bool> {
        match &self.0 {
            Certified::Exact(v) => Some(v.abs() < *threshold),
            Certified::Interval { lo, hi } => {
                let max_abs = lo.abs().max(hi.abs());
                let min_abs = if lo.is_negative() && hi.is_positive() {
                    BigRational::zero()
                } else {
                    lo.abs().min(hi.abs())
                };
                if max_abs < *threshold {
                    Some(true)
                } else if min_abs >= *threshold {
                    Some(false)
                } else {
                    None
                }
            }
        }
    }

    /// Group addition in `T = R/Z`.
    pub fn add_mod1(&self, other: &CircleValue) -> CircleValue {
        match (&self.0, &other.0) {
            (Certified::Exact(a), Certified::Exact(b)) => CircleValue::from_rational(a + b),
            _ => {
                let lo = self.0.lo() + other.0.lo();
                let hi = self.0.hi() + other.0.hi();
                let mid = (&lo + &hi) / BigRational::from_integer(2.into());
                let shift = BigRational::from_integer((mid + Self::half()).floor().to_integer());
                CircleValue(Certified::Interval {
                    lo: lo - &shift,
                    hi: hi - shift,
                })
            }
        }
    }
}

impl fmt::Display for CircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn parse_grammar_examples() {
        assert_eq!(RealValue::parse("3/2").unwrap(), RealValue::Rational(rat(3, 2)));
        assert_eq!(RealValue::parse("6/4").unwrap(), RealValue::Rational(rat(3, 2)));
        assert_eq!(
            RealValue::parse("(0+1*sqrt(7))/1").unwrap(),
            RealValue::surd(0, 1, 7, 1).unwrap()
        );
        match RealValue::parse("3.14159265358979~15").unwrap() {
            RealValue::Decimal(d) => {
                assert_eq!(d.digits(), "3.14159265358979");
                assert_eq!(d.precision(), 15);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(RealValue::parse("1").unwrap(), RealValue::integer(1));
        assert_eq!(RealValue::parse("0.3").unwrap(), RealValue::Rational(rat(3, 10)));
    }

    #[test]
    fn parse_surd_variants() {
        let root7 = RealValue::surd(0, 1, 7, 1).unwrap();
        assert_eq!(RealValue::parse("sqrt(7)").unwrap(), root7);
        assert_eq!(RealValue::parse("1*sqrt(7)").unwrap(), root7);
        assert_eq!(RealValue::parse("( 0 + 1 * sqrt(7) ) / 1").unwrap(), root7);
        assert_eq!(
            RealValue::parse("(2-sqrt(2))/1").unwrap(),
            RealValue::surd(2, -1, 2, 1).unwrap()
        );
        assert_eq!(
            RealValue::parse("(-3+2*sqrt(5))/4").unwrap(),
            RealValue::surd(-3, 2, 5, 4).unwrap()
        );
        // b = 0 normalises to a rational
        assert_eq!(
            RealValue::parse("(3+0*sqrt(2))/2").unwrap(),
            RealValue::Rational(rat(3, 2))
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(RealValue::parse("1/0"), Err(Error::Domain(_))));
        assert!(matches!(RealValue::parse("(0+1*sqrt(4))/1"), Err(Error::Domain(_))));
        assert!(matches!(RealValue::parse("(0+1*sqrt(2))/0"), Err(Error::Domain(_))));
        assert!(matches!(RealValue::parse("abc"), Err(Error::Parse(_))));
        assert!(matches!(RealValue::parse("1/x"), Err(Error::Parse(_))));
        assert!(matches!(RealValue::parse("sqrt(2"), Err(Error::Parse(_))));
        assert!(matches!(RealValue::parse(""), Err(Error::Parse(_))));
    }

    #[test]
    fn display_parses_back() {
        for text in ["3/2", "7", "(1-2*sqrt(3))/5", "2.6457513110~10"] {
            let v = RealValue::parse(text).unwrap();
            assert_eq!(RealValue::parse(&v.to_string()).unwrap(), v, "{text}");
        }
    }

    #[test]
    fn range_checks() {
        assert!(RealValue::parse("1/2").unwrap().ensure_unit_open("g").is_ok());
        assert!(RealValue::parse("1").unwrap().ensure_unit_open("g").is_err());
        assert!(RealValue::parse("(2-sqrt(2))/1").unwrap().ensure_unit_open("g").is_ok());
        assert!(RealValue::parse("(0-1*sqrt(2))/1").unwrap().ensure_positive("a").is_err());
        assert!(matches!(
            RealValue::parse("0.99999999999~8").unwrap().ensure_unit_open("g"),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn reciprocal_floors() {
        assert_eq!(RealValue::parse("1/3").unwrap().floor_recip().unwrap(), 3.into());
        assert_eq!(RealValue::parse("2").unwrap().floor_recip().unwrap(), 0.into());
        // 1/√2 ≈ 0.707
        assert_eq!(RealValue::parse("sqrt(2)").unwrap().floor_recip().unwrap(), 0.into());
        // 1/(√2 - 1) = √2 + 1 ≈ 2.414
        assert_eq!(
            RealValue::parse("(-1+sqrt(2))/1").unwrap().floor_recip().unwrap(),
            2.into()
        );
        assert_eq!(RealValue::parse("0.3~10").unwrap().floor_recip().unwrap(), 3.into());
        // 1/x straddles 3 when x is only known near 1/3
        assert!(matches!(
            RealValue::parse("0.333333333333~12").unwrap().floor_recip(),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn circle_reduction() {
        assert_eq!(CircleValue::from_rational(rat(1, 2)).exact(), Some(&rat(-1, 2)));
        assert_eq!(CircleValue::from_rational(rat(7, 3)).exact(), Some(&rat(1, 3)));
        assert_eq!(CircleValue::from_rational(rat(-5, 4)).exact(), Some(&rat(-1, 4)));
        let a = CircleValue::from_rational(rat(2, 5));
        let b = CircleValue::from_rational(rat(1, 5));
        assert_eq!(a.add_mod1(&b).exact(), Some(&rat(-2, 5)));
    }
}
