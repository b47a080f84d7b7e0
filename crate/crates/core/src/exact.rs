//! Big-integer helpers shared by the exact paths.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::sets::sieve_primes;

/// `floor(y * sqrt(d))` for a positive non-square `d`.
///
/// `y * sqrt(d)` is irrational unless `y == 0`, so the floor of its square
/// root bracket is exact.
pub fn floor_mul_sqrt(y: &BigInt, d: &BigInt) -> BigInt {
    if y.is_zero() {
        return BigInt::zero();
    }
    let square = y * y * d;
    let root = square.sqrt();
    if y.is_positive() {
        root
    } else {
        -root - 1
    }
}

/// Splits `d` into `(k, s)` with `d = k^2 * s` and `s` squarefree.
pub fn squarefree_decompose(d: u64) -> (u64, u64) {
    if d == 0 {
        return (0, 0);
    }
    let mut rest = d;
    let mut outer = 1u64;
    let mut square_free = 1u64;
    let cbrt = (d as f64).cbrt() as u64 + 2;
    let mut p = 2u64;
    while p <= cbrt && p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            outer *= p.pow(e / 2);
            if e % 2 == 1 {
                square_free *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // rest now has at most two prime factors, so it is either a square or squarefree.
    let r = rest.sqrt();
    if r * r == rest {
        outer *= r;
    } else {
        square_free *= rest;
    }
    (outer, square_free)
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Rounds `value` to `digits` places after the decimal point, half away from zero.
pub fn render_decimal(value: &BigRational, digits: usize) -> String {
    let negative = value.is_negative();
    let num = value.numer().abs();
    let den = value.denom().clone();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (BigInt::from(2u32) * num * scale.clone() + &den) / (BigInt::from(2u32) * den);
    let (int_part, frac_part) = scaled.div_rem(&scale);
    let mut out = String::new();
    if negative && !scaled.is_zero() {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if digits > 0 {
        let frac = frac_part.to_string();
        out.push('.');
        for _ in frac.len()..digits {
            out.push('0');
        }
        out.push_str(&frac);
    }
    out
}

fn product_tree(values: &[BigUint]) -> BigUint {
    match values.len() {
        0 => BigUint::one(),
        1 => values[0].clone(),
        n => {
            let (l, r) = values.split_at(n / 2);
            product_tree(l) * product_tree(r)
        }
    }
}

// Returns (P, Q) with P / Q = sum of 1/d over the slice and Q the plain product.
fn split_sum(denoms: &[u64]) -> (BigUint, BigUint) {
    match denoms.len() {
        0 => (BigUint::zero(), BigUint::one()),
        1 => (BigUint::one(), BigUint::from(denoms[0])),
        n => {
            let (l, r) = denoms.split_at(n / 2);
            let (pl, ql) = split_sum(l);
            let (pr, qr) = split_sum(r);
            (pl * &qr + pr * &ql, ql * qr)
        }
    }
}

const TRIAL_LIMIT: u64 = 1_000_000_000_000;

fn lcm_factors(denoms: &[u64]) -> Option<Vec<(u64, u32)>> {
    let max = *denoms.iter().max()?;
    if max > TRIAL_LIMIT {
        return None;
    }
    let primes = sieve_primes(max.sqrt().max(2));
    let mut exps: std::collections::BTreeMap<u64, u32> = Default::default();
    let mut distinct = denoms.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    for &d in &distinct {
        let mut rest = d;
        for &p in &primes {
            if p * p > rest {
                break;
            }
            if rest.is_multiple_of(p) {
                let mut e = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    e += 1;
                }
                let slot = exps.entry(p).or_insert(0);
                *slot = (*slot).max(e);
            }
        }
        if rest > 1 {
            exps.entry(rest).or_insert(1);
        }
    }
    Some(exps.into_iter().collect())
}

/// Exact, reduced `sum 1/d` over `denoms` (all nonzero).
///
/// Uses binary splitting for the unreduced sum and reduces against the
/// prime factorisation of `lcm(denoms)`, avoiding big-number gcds.
pub fn reciprocal_sum(denoms: &[u64]) -> BigRational {
    assert!(denoms.iter().all(|&d| d > 0), "reciprocal of zero");
    if denoms.is_empty() {
        return BigRational::zero();
    }
    let (p, q) = split_sum(denoms);
    let Some(factors) = lcm_factors(denoms) else {
        return BigRational::new(BigInt::from(p), BigInt::from(q));
    };
    let powers: Vec<BigUint> = factors
        .iter()
        .map(|&(prime, e)| BigUint::from(prime).pow(e))
        .collect();
    let mut lcm = product_tree(&powers);
    let (mut numer, rem) = (p * &lcm).div_rem(&q);
    debug_assert!(rem.is_zero());
    for (prime, mut e) in factors {
        while e > 0 && (&numer % prime).is_zero() {
            numer /= prime;
            lcm /= prime;
            e -= 1;
        }
    }
    BigRational::new_raw(BigInt::from(numer), BigInt::from(lcm))
}

/// Exact, reduced `scale * sum 1/d`.
pub fn scaled_reciprocal_sum(scale: u64, denoms: &[u64]) -> BigRational {
    let base = reciprocal_sum(denoms);
    if scale == 0 {
        return BigRational::zero();
    }
    let den_mod = (base.denom() % BigInt::from(scale)).to_u64().unwrap_or(0);
    let g = scale.gcd(&den_mod);
    let numer = base.numer() * BigInt::from(scale / g);
    let denom = base.denom() / BigInt::from(g);
    BigRational::new_raw(numer, denom)
}

/// `floor(a / b)` for `b > 0`.
pub fn floor_ratio(value: &BigRational) -> BigInt {
    value.numer().div_floor(value.denom())
}

pub fn to_u64(value: &BigInt, what: &str) -> crate::Result<u64> {
    if value.sign() == Sign::Minus {
        return Err(crate::Error::Range(format!("{what} is negative: {value}")));
    }
    value
        .to_u64()
        .ok_or_else(|| crate::Error::Range(format!("{what} exceeds 64 bits: {value}")))
}
