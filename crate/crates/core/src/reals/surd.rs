use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{floor_mul_sqrt, squarefree_decompose};
use crate::{Error, Result};

/// A real quadratic irrational `(a + b*sqrt(d)) / c`.
///
/// Canonical form: `b != 0`, `d > 1` squarefree, `c > 0` and
/// `gcd(a, b, c) = 1`. Square factors of the radicand are pulled into `b`
/// on construction, so two equal surds always compare equal structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    a: BigInt,
    b: BigInt,
    d: BigInt,
    c: BigInt,
}

/// Result of normalising surd coefficients: either a genuine surd or a rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurdOrRational {
    Surd(QuadSurd),
    Rational(BigRational),
}

impl QuadSurd {
    /// Builds `(a + b*sqrt(d)) / c`, rejecting a perfect-square or nonpositive radicand.
    #[allow(clippy::new_ret_no_self)]
    pub fn new(a: BigInt, b: BigInt, d: BigInt, c: BigInt) -> Result<SurdOrRational> {
        if c.is_zero() {
            return Err(Error::Domain("surd denominator c is zero".into()));
        }
        if !d.is_positive() {
            return Err(Error::Domain(format!("radicand must be positive, got {d}")));
        }
        if crate::exact::is_perfect_square(&d) {
            return Err(Error::Domain(format!("radicand {d} is a perfect square")));
        }
        let d64 = d
            .to_u64()
            .ok_or_else(|| Error::Domain(format!("radicand {d} exceeds 64 bits")))?;
        let (outer, square_free) = squarefree_decompose(d64);
        Ok(Self::normalized(a, b * BigInt::from(outer), BigInt::from(square_free), c))
    }

    // `d` must already be squarefree and > 1.
    pub(crate) fn normalized(a: BigInt, b: BigInt, d: BigInt, c: BigInt) -> SurdOrRational {
        if b.is_zero() {
            return SurdOrRational::Rational(BigRational::new(a, c));
        }
        let (mut a, mut b, mut c) = (a, b, c);
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        SurdOrRational::Surd(QuadSurd { a, b, d, c })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// Exact three-way comparison against a rational, by sign-preserving squaring.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        // (a + b√d)/c  vs  u/v   <=>   v·b·√d  vs  u·c − v·a
        let (u, v) = (r.numer(), r.denom());
        let s = v * &self.b;
        let t = u * &self.c - v * &self.a;
        cmp_scaled_root(&s, &self.d, &t)
    }

    pub fn floor(&self) -> BigInt {
        (&self.a + floor_mul_sqrt(&self.b, &self.d)).div_floor(&self.c)
    }

    /// Rational enclosure of width at most `2^-bits / c`.
    pub fn enclosure(&self, bits: u32) -> (BigRational, BigRational) {
        let scale = BigInt::one() << bits;
        let t = floor_mul_sqrt(&(&self.b * &scale), &self.d);
        let base = &self.a * &scale + t;
        let den = &self.c * &scale;
        (
            BigRational::new(base.clone(), den.clone()),
            BigRational::new(base + 1, den),
        )
    }

    pub fn mul_int(&self, n: &BigInt) -> SurdOrRational {
        Self::normalized(&self.a * n, &self.b * n, self.d.clone(), self.c.clone())
    }

    pub fn add_rational(&self, r: &BigRational) -> SurdOrRational {
        let (u, v) = (r.numer(), r.denom());
        Self::normalized(
            &self.a * v + u * &self.c,
            &self.b * v,
            self.d.clone(),
            &self.c * v,
        )
    }

    /// `c / (a + b√d) = c(a − b√d) / (a² − b²d)`; the norm is nonzero for nonsquare `d`.
    pub fn recip(&self) -> SurdOrRational {
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        Self::normalized(&self.c * &self.a, -(&self.c * &self.b), self.d.clone(), norm)
    }

    pub fn approx_f64(&self) -> f64 {
        let (lo, _) = self.enclosure(64);
        lo.to_f64().unwrap_or(f64::NAN)
    }
}

/// Compares `s·√d` with `t` for `s != 0` and nonsquare `d`.
pub(crate) fn cmp_scaled_root(s: &BigInt, d: &BigInt, t: &BigInt) -> Ordering {
    if s.is_positive() {
        if !t.is_positive() {
            return Ordering::Greater;
        }
        (s * s * d).cmp(&(t * t))
    } else {
        if !t.is_negative() {
            return Ordering::Less;
        }
        (t * t).cmp(&(s * s * d))
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(
            f,
            "({}{}{}*sqrt({}))/{}",
            self.a,
            sign,
            self.b.abs(),
            self.d,
            self.c
        )
    }
}
