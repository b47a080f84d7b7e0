use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Smallest precision accepted for a decimal input.
pub const MIN_PRECISION: u32 = 8;

/// A decimal known to `precision` significant digits.
///
/// The true value is taken to lie within one unit of the last declared
/// significant place, which covers both truncated and rounded digit strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecimalReal {
    digits: String,
    precision: u32,
    center: BigRational,
    radius: BigRational,
}

impl DecimalReal {
    pub fn parse(digits: &str, precision: u32) -> Result<Self> {
        if precision < MIN_PRECISION {
            return Err(Error::Domain(format!(
                "decimal precision {precision} is below the minimum of {MIN_PRECISION}"
            )));
        }
        let center = parse_plain_decimal(digits)?;
        if center.is_zero() {
            return Err(Error::Domain("decimal value is zero; no significant digits".into()));
        }
        let leading = leading_exponent(&center.abs());
        let radius = pow10(leading - precision as i64 + 1);
        Ok(DecimalReal {
            digits: digits.to_string(),
            precision,
            center,
            radius,
        })
    }

    pub fn digits(&self) -> &str {
        &self.digits
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn center(&self) -> &BigRational {
        &self.center
    }

    pub fn radius(&self) -> &BigRational {
        &self.radius
    }

    pub fn lo(&self) -> BigRational {
        &self.center - &self.radius
    }

    pub fn hi(&self) -> BigRational {
        &self.center + &self.radius
    }
}

impl fmt::Display for DecimalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}~{}", self.digits, self.precision)
    }
}

fn pow10(e: i64) -> BigRational {
    let p = BigInt::from(10u32).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

// Exponent E with 10^E <= x < 10^(E+1), for x > 0.
fn leading_exponent(x: &BigRational) -> i64 {
    let digits_num = x.numer().to_string().len() as i64;
    let digits_den = x.denom().to_string().len() as i64;
    let mut e = digits_num - digits_den;
    while pow10(e) > *x {
        e -= 1;
    }
    while pow10(e + 1) <= *x {
        e += 1;
    }
    e
}

/// Parses `[-]ddd[.ddd]` into an exact rational.
pub fn parse_plain_decimal(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("malformed decimal {text:?}"));
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{int_part}{frac_part}");
    let numer: BigInt = joined.parse().map_err(|_| bad())?;
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    let value = BigRational::new(numer, denom);
    Ok(if negative { -value } else { value })
}
