//! Constructive checks that spectrum maps keep sets large.
//!
//! The injective partition, the harmonic inequality, the two density cases
//! and the gap transfer bound are consequences of `alpha*d > 1 => g` strictly
//! increasing on points `d` apart, and of `g(y) - g(x) < alpha*(y - x) + 1`.
//! A failing check therefore indicates a bug, not a counterexample.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::exact::{reciprocal_sum, scaled_reciprocal_sum, to_u64};
use crate::largeness::{analyze, density_report, harmonic_partial_sum, AnalyzeOptions, Family};
use crate::report::{CertValue, ReportRow, Side};
use crate::spectra::spectrum_image;
use crate::{Certified, Error, IntegerSet, RealValue, Result, SpectrumParams};

/// Least `r >= 1` with `r * alpha > 1`.
pub fn least_r_exceeding_recip(alpha: &RealValue) -> Result<u64> {
    to_u64(&(alpha.floor_recip()? + 1), "r")
}

/// Least integer strictly greater than `alpha`.
pub fn least_integer_above(alpha: &RealValue) -> Result<u64> {
    to_u64(&(alpha.floor()? + 1), "r")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCertificate {
    pub r: u64,
    /// `classes[i]` holds the elements whose 0-based enumeration index is `i mod r`.
    pub classes: Vec<IntegerSet>,
    pub class_sums: Vec<BigRational>,
    /// 1-based index of the class with the largest harmonic sum (least index on ties).
    pub chosen_index: usize,
    pub injective: Vec<bool>,
}

impl PartitionCertificate {
    pub fn chosen(&self) -> &IntegerSet {
        &self.classes[self.chosen_index - 1]
    }

    pub fn chosen_injective(&self) -> bool {
        self.injective[self.chosen_index - 1]
    }
}

fn strictly_increasing(params: &SpectrumParams, set: &IntegerSet) -> Result<bool> {
    let mut prev = None;
    for &n in set.elements() {
        let v = params.apply(n)?;
        if prev.is_some_and(|p| p >= v) {
            return Ok(false);
        }
        prev = Some(v);
    }
    Ok(true)
}

/// Splits the set into `r` index classes on which the spectrum map is injective.
pub fn injective_partition(params: &SpectrumParams, set: &IntegerSet) -> Result<PartitionCertificate> {
    if set.is_empty() {
        return Err(Error::Domain("cannot partition an empty set".into()));
    }
    let r = least_r_exceeding_recip(params.alpha())?;
    let mut buckets = vec![Vec::new(); r.min(set.len() as u64) as usize];
    let width = buckets.len();
    for (j, &x) in set.elements().iter().enumerate() {
        buckets[j % width].push(x);
    }
    // classes past the set's size are empty
    buckets.resize((r as usize).max(width), Vec::new());
    let classes: Vec<IntegerSet> = buckets
        .into_iter()
        .map(|b| IntegerSet::new(b, set.universe_bound()))
        .collect::<Result<_>>()?;
    let class_sums: Vec<BigRational> = classes.iter().map(|c| reciprocal_sum(c.elements())).collect();
    let mut chosen = 0;
    for (i, s) in class_sums.iter().enumerate() {
        if *s > class_sums[chosen] {
            chosen = i;
        }
    }
    let injective = classes
        .iter()
        .map(|c| strictly_increasing(params, c))
        .collect::<Result<_>>()?;
    Ok(PartitionCertificate {
        r,
        classes,
        class_sums,
        chosen_index: chosen + 1,
        injective,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HsdInequality {
    /// `sum 1/(n*alpha + 1)`, exact for rational `alpha`.
    pub lhs: Certified,
    /// `sum 1/floor(n*alpha + gamma)`.
    pub rhs: BigRational,
    pub holds: bool,
}

// Fixed-point bits for irrational left-hand sides.
const LHS_BITS: u32 = 160;

fn lhs_exact(p: &BigInt, q: &BigInt, class: &IntegerSet) -> Option<BigRational> {
    let (p, q) = (p.to_u64()?, q.to_u64()?);
    let denoms: Option<Vec<u64>> = class
        .elements()
        .iter()
        .map(|&n| n.checked_mul(p)?.checked_add(q))
        .collect();
    Some(scaled_reciprocal_sum(q, &denoms?))
}

fn lhs_enclosure(alpha: &RealValue, class: &IntegerSet) -> Certified {
    let a = alpha.enclosure(LHS_BITS + 32);
    let den = a.lo().denom().lcm(a.hi().denom());
    let lo_num = a.lo().numer() * (&den / a.lo().denom());
    let hi_num = a.hi().numer() * (&den / a.hi().denom());
    let scale = BigInt::one() << LHS_BITS;
    let top = &scale * &den;
    let (mut s_lo, mut s_hi) = (BigInt::zero(), BigInt::zero());
    for &n in class.elements() {
        let n = BigInt::from(n);
        // 1/(n*alpha + 1) lies in [den/(n*hi + den), den/(n*lo + den)]
        s_lo += top.div_floor(&(&n * &hi_num + &den));
        s_hi += top.div_ceil(&(&n * &lo_num + &den));
    }
    Certified::Interval {
        lo: BigRational::new(s_lo, scale.clone()),
        hi: BigRational::new(s_hi, scale),
    }
}

/// `sum 1/(n*alpha + 1) <= sum 1/floor(n*alpha + gamma)` over the class.
pub fn hsd_inequality_check(params: &SpectrumParams, class: &IntegerSet) -> Result<HsdInequality> {
    let images = params.map_elements(class)?;
    let rhs = reciprocal_sum(&images);
    let lhs = match params.alpha() {
        RealValue::Rational(r) => match lhs_exact(r.numer(), r.denom(), class) {
            Some(v) => Certified::Exact(v),
            None => {
                let mut sum = BigRational::zero();
                for &n in class.elements() {
                    sum += (r * BigRational::from_integer(n.into()) + BigRational::one()).recip();
                }
                Certified::Exact(sum)
            }
        },
        alpha => lhs_enclosure(alpha, class),
    };
    let holds = match lhs.cmp_rational(&rhs) {
        Some(o) => o != Ordering::Greater,
        None => {
            return Err(Error::PrecisionExhausted(
                "harmonic inequality undecided at the working precision".into(),
            ))
        }
    };
    Ok(HsdInequality { lhs, rhs, holds })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DensityCase {
    /// `alpha <= 1`: counts compared on the same prefix.
    I,
    /// `alpha > 1`: image density on `[1, g(n)]` against `1/r` of the input density.
    II,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensitySample {
    pub n: u64,
    /// Prefix length on the image side: `n` in case I, `g(n)` in case II.
    pub m: u64,
    /// Case I: `|B ∩ [1,n]|`; case II: `(1/r) |B ∩ [1,n]| / n`.
    pub input_side: BigRational,
    /// Case I: `|g[B] ∩ [1,n]|`; case II: `|g[B] ∩ [1,m]| / m`.
    pub image_side: BigRational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityComparison {
    pub case: DensityCase,
    pub r: Option<u64>,
    pub samples: Vec<DensitySample>,
    /// Least image prefix density over the samples.
    pub beta: BigRational,
    /// Least input prefix density over the samples.
    pub input_beta: BigRational,
    pub holds: bool,
}

fn require_injective(params: &SpectrumParams, class: &IntegerSet) -> Result<Vec<u64>> {
    let images = params.map_elements(class)?;
    if let Some(w) = images.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::ContractViolation(format!(
            "spectrum map is not strictly increasing on the class ({} then {}); partition first",
            w[0], w[1]
        )));
    }
    Ok(images)
}

fn frac(k: usize, n: u64) -> BigRational {
    BigRational::new(BigInt::from(k), BigInt::from(n))
}

/// Checks the prefix density transfer at each sample point.
pub fn density_transfer_check(
    params: &SpectrumParams,
    class: &IntegerSet,
    samples: &[u64],
) -> Result<DensityComparison> {
    let images = require_injective(params, class)?;
    if samples.is_empty() {
        return Err(Error::Domain("no sample points".into()));
    }
    if let Some(&bad) = samples.iter().find(|&&n| n == 0 || n > class.universe_bound()) {
        return Err(Error::Domain(format!(
            "sample {bad} outside 1..={}",
            class.universe_bound()
        )));
    }
    let image_count = |m: u64| images.partition_point(|&v| v <= m);
    let case = if params.alpha().cmp_integer(1)? == Ordering::Greater {
        DensityCase::II
    } else {
        DensityCase::I
    };
    let r = match case {
        DensityCase::I => None,
        DensityCase::II => Some(least_integer_above(params.alpha())?),
    };
    let mut out = Vec::with_capacity(samples.len());
    let mut beta: Option<BigRational> = None;
    let mut input_beta: Option<BigRational> = None;
    for &n in samples {
        let k = class.count_up_to(n);
        let (m, input_side, image_side, image_density) = match r {
            None => {
                let c = image_count(n);
                (n, frac(k, 1), frac(c, 1), frac(c, n))
            }
            Some(r) => {
                let m = params.apply_positive(n)?;
                let d = frac(image_count(m), m);
                (m, frac(k, n) / BigRational::from_integer(r.into()), d.clone(), d)
            }
        };
        let holds = image_side >= input_side;
        let input_density = frac(k, n);
        beta = Some(beta.map_or(image_density.clone(), |b| b.min(image_density)));
        input_beta = Some(input_beta.map_or(input_density.clone(), |b| b.min(input_density)));
        out.push(DensitySample {
            n,
            m,
            input_side,
            image_side,
            holds,
        });
    }
    Ok(DensityComparison {
        case,
        r,
        holds: out.iter().all(|s| s.holds),
        samples: out,
        beta: beta.expect("samples nonempty"),
        input_beta: input_beta.expect("samples nonempty"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BanachTransfer {
    pub window: u64,
    pub input_start: u64,
    pub input_count: u64,
    /// `[g(start), g(start + window - 1)]`.
    pub image_first: u64,
    pub image_last: u64,
    pub image_count: u64,
    /// `alpha * (window - 1) + 2`, which the image window length stays below.
    pub length_bound: Certified,
    pub holds: bool,
}

impl BanachTransfer {
    pub fn image_length(&self) -> u64 {
        self.image_last - self.image_first + 1
    }
}

/// Maps the densest input window of the class and checks that its image sits
/// in a window shorter than `alpha*(window-1) + 2` holding as many elements.
pub fn banach_transfer_check(
    params: &SpectrumParams,
    class: &IntegerSet,
    window: u64,
) -> Result<BanachTransfer> {
    let images = require_injective(params, class)?;
    let d = density_report(class, window)?;
    let s = d.banach_start;
    let image_first = params.apply(s)?;
    let image_last = params.apply(s + window - 1)?;
    let image_count = (images.partition_point(|&v| v <= image_last)
        - images.partition_point(|&v| v < image_first)) as u64;
    let w_img = image_last - image_first + 1;
    let scale = BigRational::from_integer((window - 1).into());
    let two = BigRational::from_integer(2.into());
    let length_bound = match params.alpha().enclosure(128) {
        Certified::Exact(a) => Certified::Exact(a * &scale + &two),
        Certified::Interval { lo, hi } => Certified::Interval {
            lo: lo * &scale + &two,
            hi: hi * &scale + &two,
        },
    };
    // w_img < alpha*(window-1) + 2
    let shorter = if window == 1 {
        w_img < 2
    } else {
        let t = BigRational::new(BigInt::from(w_img) - 2, BigInt::from(window - 1));
        params.alpha().cmp_rational(&t)? == Ordering::Greater
    };
    Ok(BanachTransfer {
        window,
        input_start: s,
        input_count: d.banach_count,
        image_first,
        image_last,
        image_count,
        length_bound,
        holds: shorter && image_count >= d.banach_count,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapTransfer {
    pub input_max_gap: u64,
    pub image_max_gap: u64,
    /// `alpha * input_max_gap + 1`.
    pub bound: Certified,
    pub holds: bool,
}

/// `image_max_gap <= alpha * input_max_gap + 1`, decided exactly.
pub fn gap_transfer_check(params: &SpectrumParams, set: &IntegerSet) -> Result<GapTransfer> {
    if set.len() < 2 {
        return Err(Error::Size(format!(
            "gap transfer needs at least two elements, got {}",
            set.len()
        )));
    }
    let gap = |xs: &[u64]| xs.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    let input_max_gap = gap(set.elements());
    let image = spectrum_image(params, set)?;
    let image_max_gap = gap(image.elements());
    let g = BigRational::from_integer(input_max_gap.into());
    let one = BigRational::one();
    let bound = match params.alpha().enclosure(128) {
        Certified::Exact(a) => Certified::Exact(a * &g + &one),
        Certified::Interval { lo, hi } => Certified::Interval {
            lo: lo * &g + &one,
            hi: hi * &g + &one,
        },
    };
    let holds = image_max_gap == 0 || {
        let t = BigRational::new(BigInt::from(image_max_gap) - 1, BigInt::from(input_max_gap));
        params.alpha().cmp_rational(&t)? != Ordering::Less
    };
    Ok(GapTransfer {
        input_max_gap,
        image_max_gap,
        bound,
        holds,
    })
}

/// Rows of a preservation run and whether every theorem-backed check held.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub rows: Vec<ReportRow>,
    pub all_hold: bool,
    pub failed: Vec<String>,
}

struct Rows<'a> {
    rows: Vec<ReportRow>,
    failed: Vec<String>,
    params: &'a str,
}

impl Rows<'_> {
    fn check(&mut self, family: Family, field: &str, value: CertValue) {
        self.rows.push(ReportRow::new(family.tag(), Side::Check, field, value, self.params));
    }

    fn verdict(&mut self, family: Family, field: &str, holds: bool) {
        if !holds {
            self.failed.push(format!("{family}/{field}"));
        }
        self.check(family, field, CertValue::Bool(holds));
    }
}

/// Index of the class with the largest prefix density, least index on ties.
fn densest_class(classes: &[IntegerSet]) -> Result<Option<usize>> {
    let mut best: Option<(usize, BigRational)> = None;
    for (i, c) in classes.iter().enumerate() {
        if c.is_empty() {
            continue;
        }
        let d = density_report(c, 1)?.prefix_max;
        if best.as_ref().is_none_or(|(_, b)| d > *b) {
            best = Some((i, d));
        }
    }
    Ok(best.map(|(i, _)| i))
}

/// Certificates for `set` and its spectrum image side by side, plus the
/// transfer checks for each requested family.
pub fn run_preservation_suite(
    params: &SpectrumParams,
    set: &IntegerSet,
    families: &[Family],
    opts: &AnalyzeOptions,
) -> Result<SuiteReport> {
    let image = spectrum_image(params, set)?;
    let image_opts = AnalyzeOptions {
        window: opts.window.min(image.universe_bound()),
        ..opts.clone()
    };
    let base = format!("alpha={} gamma={}", params.alpha(), params.gamma());
    let mut out = Rows {
        rows: Vec::new(),
        failed: Vec::new(),
        params: &base,
    };
    for (side, s, o) in [(Side::Input, set, opts), (Side::Image, &image, &image_opts)] {
        for report in analyze(s, families, o)? {
            let params = format!("{base} {}", report.params).trim_end().to_string();
            for (field, value) in report.fields() {
                out.rows.push(ReportRow::new(report.family.tag(), side, field, value, params.clone()));
            }
        }
    }

    let partition = injective_partition(params, set)?;
    let r = partition.r;
    for &family in families {
        match family {
            Family::If => {
                // each fibre of g has fewer than r + 1 points
                out.check(family, "r", CertValue::int(r));
                let ok = image.len() as u128 * r as u128 >= set.len() as u128;
                out.verdict(family, "fibre_bound_holds", ok);
            }
            Family::Hsd => {
                out.check(family, "r", CertValue::int(r));
                out.check(family, "chosen_index", CertValue::int(partition.chosen_index as u64));
                let class_sum = partition.class_sums[partition.chosen_index - 1].clone();
                let total = harmonic_partial_sum(set).value;
                out.check(family, "class_sum", CertValue::Rational(class_sum.clone()));
                let share = class_sum * BigRational::from_integer(r.into()) >= total;
                out.verdict(family, "class_share_holds", share);
                out.verdict(family, "chosen_injective_holds", partition.chosen_injective());
                let ineq = hsd_inequality_check(params, partition.chosen())?;
                out.check(family, "inequality_lhs", CertValue::certified(&ineq.lhs));
                out.check(family, "inequality_rhs", CertValue::Rational(ineq.rhs.clone()));
                out.verdict(family, "inequality_holds", ineq.holds);
                let image_sum = harmonic_partial_sum(&image).value;
                out.verdict(family, "image_sum_holds", image_sum >= ineq.rhs);
            }
            Family::Puad | Family::Pubd => {
                let Some(idx) = densest_class(&partition.classes)? else {
                    continue;
                };
                let class = &partition.classes[idx];
                out.check(family, "class_index", CertValue::int(idx as u64 + 1));
                if family == Family::Puad {
                    let samples = density_report(class, 1)?.prefix_argmax;
                    let cmp = density_transfer_check(params, class, &samples)?;
                    let tag = match cmp.case {
                        DensityCase::I => "I",
                        DensityCase::II => "II",
                    };
                    out.check(family, "case", CertValue::Text(tag.into()));
                    if let Some(r2) = cmp.r {
                        out.check(family, "r", CertValue::int(r2));
                    }
                    out.check(family, "samples", CertValue::int(cmp.samples.len() as u64));
                    out.check(family, "beta", CertValue::Rational(cmp.beta.clone()));
                    out.check(family, "input_beta", CertValue::Rational(cmp.input_beta.clone()));
                    out.verdict(family, "density_holds", cmp.holds);
                } else {
                    let w = opts.window.min(class.universe_bound());
                    let b = banach_transfer_check(params, class, w)?;
                    out.check(family, "window", CertValue::int(b.window));
                    out.check(family, "input_start", CertValue::int(b.input_start));
                    out.check(family, "input_count", CertValue::int(b.input_count));
                    out.check(family, "image_length", CertValue::int(b.image_length()));
                    out.check(family, "image_count", CertValue::int(b.image_count));
                    out.check(family, "length_bound", CertValue::certified(&b.length_bound));
                    out.verdict(family, "window_holds", b.holds);
                }
            }
            Family::Ps => {
                if set.len() < 2 {
                    continue;
                }
                let g = gap_transfer_check(params, set)?;
                out.check(family, "input_max_gap", CertValue::int(g.input_max_gap));
                out.check(family, "image_max_gap", CertValue::int(g.image_max_gap));
                out.check(family, "gap_bound", CertValue::certified(&g.bound));
                out.verdict(family, "gap_holds", g.holds);
            }
            Family::Ap | Family::Ip | Family::J => {}
        }
    }
    let Rows { rows, failed, .. } = out;
    Ok(SuiteReport {
        all_hold: failed.is_empty(),
        rows,
        failed,
    })
}
