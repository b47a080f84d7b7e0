//! Finite certificates for the largeness families IF, AP, PS, PUAD, PUBD, HSD, IP and J.
//!
//! Each detector returns a witness that can be rechecked against the set
//! alone. None of them decides membership of an infinite set in a family;
//! they measure a bounded prefix.

mod ap;
mod density;
mod fs;
mod gaps;
mod harmonic;
mod jset;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;

pub use ap::{longest_ap, ApCertificate};
pub use density::{density_report, DensityReport};
pub use fs::{ip_certificate, verify_fs_subset, FsCheck, IpCertificate};
pub use gaps::{gap_certificate, GapCertificate, GapRun};
pub use harmonic::{harmonic_partial_sum, HarmonicSum, HARMONIC_DIGITS};
pub use jset::{j_witness_search, JWitness, ShiftDomain, MAX_CONFIGURATIONS, MAX_DOMAIN};

use crate::report::CertValue;
use crate::{Error, IntegerSet, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    If,
    Ap,
    Ps,
    Puad,
    Pubd,
    Hsd,
    Ip,
    J,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::If,
        Family::Ap,
        Family::Ps,
        Family::Puad,
        Family::Pubd,
        Family::Hsd,
        Family::Ip,
        Family::J,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::If => "if",
            Family::Ap => "ap",
            Family::Ps => "ps",
            Family::Puad => "puad",
            Family::Pubd => "pubd",
            Family::Hsd => "hsd",
            Family::Ip => "ip",
            Family::J => "j",
        }
    }

    /// Parses a comma-separated list such as `ap,ps,hsd`; `all` selects every family.
    pub fn parse_list(text: &str) -> Result<Vec<Family>> {
        if text.trim() == "all" {
            return Ok(Family::ALL.to_vec());
        }
        let mut out: Vec<Family> = text
            .split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Fixed function family used to probe the J property of a set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JProbe {
    pub functions: Vec<Vec<u64>>,
    pub a_bound: u64,
    pub h_size_bound: usize,
}

impl Default for JProbe {
    /// `n -> n` and `n -> n^2` on `[1..6]`, `|H| <= 3`, shifts up to 1000.
    fn default() -> Self {
        JProbe {
            functions: vec![(1..=6).collect(), (1..=6).map(|n| n * n).collect()],
            a_bound: 1000,
            h_size_bound: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub window: u64,
    pub gap_bounds: Vec<u64>,
    pub ip_terms: usize,
    pub j_probe: JProbe,
}

impl AnalyzeOptions {
    pub fn with_window(window: u64) -> Self {
        AnalyzeOptions {
            window,
            gap_bounds: vec![1, 2, 4, 8, 16, 32, 64],
            ip_terms: 8,
            j_probe: JProbe::default(),
        }
    }
}

/// Cardinality, extremes and universe bound of the analysed set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub cardinality: usize,
    pub min: Option<u64>,
    pub max: Option<u64>,
    pub universe_bound: u64,
}

impl Fingerprint {
    pub fn of(set: &IntegerSet) -> Self {
        Fingerprint {
            cardinality: set.len(),
            min: set.min(),
            max: set.max(),
            universe_bound: set.universe_bound(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    If { cardinality: usize },
    Ap(ApCertificate),
    Ps(GapCertificate),
    Puad(DensityReport),
    Pubd(DensityReport),
    Hsd(HarmonicSum),
    Ip(IpCertificate),
    J { probe: JProbe, witness: Option<JWitness> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LargenessReport {
    pub family: Family,
    pub fingerprint: Fingerprint,
    pub params: String,
    pub certificate: Certificate,
}

impl LargenessReport {
    /// Named certificate fields in a fixed order.
    pub fn fields(&self) -> Vec<(String, CertValue)> {
        let int = |v: u64| CertValue::int(v);
        let mut out: Vec<(String, CertValue)> = Vec::new();
        let mut push = |name: &str, v: CertValue| out.push((name.to_string(), v));
        match &self.certificate {
            Certificate::If { cardinality } => push("cardinality", int(*cardinality as u64)),
            Certificate::Ap(c) => {
                push("length", int(c.length));
                push("start", int(c.start));
                push("difference", int(c.difference));
            }
            Certificate::Ps(c) => {
                push("max_gap", int(c.max_gap));
                for r in &c.runs {
                    push(&format!("span_b{}", r.bound), int(r.span));
                    push(&format!("run_b{}", r.bound), CertValue::List(vec![r.first, r.last]));
                }
            }
            Certificate::Puad(d) => {
                push("prefix_max", CertValue::Rational(d.prefix_max.clone()));
                push("argmax_first", int(d.prefix_argmax.first().copied().unwrap_or(0)));
                push("argmax_count", int(d.prefix_argmax.len() as u64));
            }
            Certificate::Pubd(d) => {
                push("banach_max", CertValue::Rational(d.banach_max.clone()));
                push("window_start", int(d.banach_start));
                push("window_count", int(d.banach_count));
            }
            Certificate::Hsd(h) => push("sum", CertValue::Rational(h.value.clone())),
            Certificate::Ip(c) => {
                push("terms", CertValue::List(c.terms.clone()));
                push("length", int(c.terms.len() as u64));
            }
            Certificate::J { witness, .. } => {
                push("found", CertValue::Bool(witness.is_some()));
                if let Some(w) = witness {
                    push("a", int(w.a));
                    push("h", CertValue::List(w.h.iter().map(|&i| i as u64).collect()));
                    push("sums", CertValue::List(w.sums.clone()));
                }
            }
        }
        out
    }

    /// Rechecks the certificate against `set`.
    pub fn recheck(&self, set: &IntegerSet) -> bool {
        if Fingerprint::of(set) != self.fingerprint {
            return false;
        }
        match &self.certificate {
            Certificate::If { cardinality } => *cardinality == set.len(),
            Certificate::Ap(c) => c.recheck(set),
            Certificate::Ps(c) => c.recheck(set),
            Certificate::Puad(d) | Certificate::Pubd(d) => d.recheck(set),
            Certificate::Hsd(h) => *h == harmonic_partial_sum(set),
            Certificate::Ip(c) => c.recheck(set),
            Certificate::J { probe, witness } => match witness {
                Some(w) => w.recheck(&probe.functions, set),
                None => true,
            },
        }
    }
}

/// Runs one detector.
pub fn analyze_family(set: &IntegerSet, family: Family, opts: &AnalyzeOptions) -> Result<LargenessReport> {
    let (certificate, params) = match family {
        Family::If => (Certificate::If { cardinality: set.len() }, String::new()),
        Family::Ap => (Certificate::Ap(longest_ap(set)), String::new()),
        Family::Ps => (
            Certificate::Ps(gap_certificate(set, &opts.gap_bounds)?),
            format!(
                "gap_bounds={}",
                opts.gap_bounds.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
            ),
        ),
        Family::Puad => (
            Certificate::Puad(density_report(set, opts.window)?),
            format!("bound={}", set.universe_bound()),
        ),
        Family::Pubd => (
            Certificate::Pubd(density_report(set, opts.window)?),
            format!("window={}", opts.window),
        ),
        Family::Hsd => (Certificate::Hsd(harmonic_partial_sum(set)), String::new()),
        Family::Ip => (
            Certificate::Ip(ip_certificate(set, opts.ip_terms)?),
            format!("max_terms={}", opts.ip_terms),
        ),
        Family::J => {
            let p = &opts.j_probe;
            let witness = j_witness_search(
                &p.functions,
                set,
                p.a_bound,
                p.h_size_bound,
                ShiftDomain::TargetMembers,
            )?;
            let params = format!(
                "functions={} a_bound={} h_size_bound={}",
                p.functions.len(),
                p.a_bound,
                p.h_size_bound
            );
            (
                Certificate::J {
                    probe: p.clone(),
                    witness,
                },
                params,
            )
        }
    };
    Ok(LargenessReport {
        family,
        fingerprint: Fingerprint::of(set),
        params,
        certificate,
    })
}

pub fn analyze(set: &IntegerSet, families: &[Family], opts: &AnalyzeOptions) -> Result<Vec<LargenessReport>> {
    families.iter().map(|&f| analyze_family(set, f, opts)).collect()
}

/// A pass/fail threshold on one family's certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyCheck {
    /// At least this many elements.
    If(usize),
    /// A progression of at least this length.
    Ap(u64),
    /// A run of span at least `min_span` with gaps at most `gap_bound`.
    Ps { gap_bound: u64, min_span: u64 },
    /// Prefix density maximum at least this value.
    Puad(BigRational),
    /// Window density maximum at least `min` for windows of length `window`.
    Pubd { window: u64, min: BigRational },
    /// Harmonic sum at least this value.
    Hsd(BigRational),
    /// A greedy generator of at least this many terms.
    Ip(usize),
}

impl FamilyCheck {
    pub fn family(&self) -> Family {
        match self {
            FamilyCheck::If(_) => Family::If,
            FamilyCheck::Ap(_) => Family::Ap,
            FamilyCheck::Ps { .. } => Family::Ps,
            FamilyCheck::Puad(_) => Family::Puad,
            FamilyCheck::Pubd { .. } => Family::Pubd,
            FamilyCheck::Hsd(_) => Family::Hsd,
            FamilyCheck::Ip(_) => Family::Ip,
        }
    }

    pub fn passes(&self, set: &IntegerSet) -> Result<bool> {
        Ok(match self {
            FamilyCheck::If(min) => set.len() >= *min,
            FamilyCheck::Ap(min) => longest_ap(set).length >= *min,
            FamilyCheck::Ps { gap_bound, min_span } => {
                set.len() >= 2 && gap_certificate(set, &[*gap_bound])?.runs[0].span >= *min_span
            }
            FamilyCheck::Puad(min) => density_report(set, 1)?.prefix_max >= *min,
            FamilyCheck::Pubd { window, min } => density_report(set, *window)?.banach_max >= *min,
            FamilyCheck::Hsd(min) => harmonic_partial_sum(set).value >= *min,
            FamilyCheck::Ip(min) => ip_certificate(set, *min)?.terms.len() >= *min,
        })
    }
}

fn parse_rational(text: &str, whole: &str) -> Result<BigRational> {
    let r = crate::RealValue::parse(text)
        .map_err(|_| Error::Parse(format!("bad threshold {text:?} in {whole:?}")))?;
    r.as_rational()
        .cloned()
        .ok_or_else(|| Error::Parse(format!("threshold in {whole:?} must be rational")))
}

fn parse_count<T: FromStr>(text: &str, whole: &str) -> Result<T> {
    text.parse()
        .map_err(|_| Error::Parse(format!("bad count {text:?} in {whole:?}")))
}

impl FromStr for FamilyCheck {
    type Err = Error;

    /// `if:N`, `ap:N`, `ps:B:S`, `puad:R`, `pubd:W:R`, `hsd:R`, `ip:K`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let arity = |n: usize| {
            if parts.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!("family check {s:?} expects {} parameter(s)", n - 1)))
            }
        };
        let family: Family = parts[0].parse()?;
        match family {
            Family::If => {
                arity(2)?;
                Ok(FamilyCheck::If(parse_count(parts[1], s)?))
            }
            Family::Ap => {
                arity(2)?;
                Ok(FamilyCheck::Ap(parse_count(parts[1], s)?))
            }
            Family::Ps => {
                arity(3)?;
                Ok(FamilyCheck::Ps {
                    gap_bound: parse_count(parts[1], s)?,
                    min_span: parse_count(parts[2], s)?,
                })
            }
            Family::Puad => {
                arity(2)?;
                Ok(FamilyCheck::Puad(parse_rational(parts[1], s)?))
            }
            Family::Pubd => {
                arity(3)?;
                Ok(FamilyCheck::Pubd {
                    window: parse_count(parts[1], s)?,
                    min: parse_rational(parts[2], s)?,
                })
            }
            Family::Hsd => {
                arity(2)?;
                Ok(FamilyCheck::Hsd(parse_rational(parts[1], s)?))
            }
            Family::Ip => {
                arity(2)?;
                Ok(FamilyCheck::Ip(parse_count(parts[1], s)?))
            }
            Family::J => Err(Error::Parse("the j family has no threshold check".into())),
        }
    }
}

impl fmt::Display for FamilyCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyCheck::If(n) => write!(f, "if:{n}"),
            FamilyCheck::Ap(n) => write!(f, "ap:{n}"),
            FamilyCheck::Ps { gap_bound, min_span } => write!(f, "ps:{gap_bound}:{min_span}"),
            FamilyCheck::Puad(r) => write!(f, "puad:{r}"),
            FamilyCheck::Pubd { window, min } => write!(f, "pubd:{window}:{min}"),
            FamilyCheck::Hsd(r) => write!(f, "hsd:{r}"),
            FamilyCheck::Ip(n) => write!(f, "ip:{n}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_lists() {
        assert_eq!(
            Family::parse_list("hsd, ap,ps").unwrap(),
            vec![Family::Ap, Family::Ps, Family::Hsd]
        );
        assert_eq!(Family::parse_list("all").unwrap().len(), 8);
        assert!(Family::parse_list("ap,xyz").is_err());
    }

    #[test]
    fn checks_parse_and_print() {
        for text in ["if:2", "ap:5", "ps:4:100", "puad:1/4", "pubd:10:1/2", "hsd:3/2", "ip:3"] {
            let c: FamilyCheck = text.parse().unwrap();
            assert_eq!(c.to_string(), text);
        }
        assert!("hsd".parse::<FamilyCheck>().is_err());
        assert!("ps:3".parse::<FamilyCheck>().is_err());
        assert!("j:1".parse::<FamilyCheck>().is_err());
        assert!("hsd:sqrt(2)".parse::<FamilyCheck>().is_err());
    }

    #[test]
    fn checks_evaluate() {
        let evens = IntegerSet::multiples(2, 100);
        assert!(FamilyCheck::If(2).passes(&evens).unwrap());
        assert!(FamilyCheck::Ap(50).passes(&evens).unwrap());
        assert!(!FamilyCheck::Ap(51).passes(&evens).unwrap());
        assert!("ps:2:98".parse::<FamilyCheck>().unwrap().passes(&evens).unwrap());
        assert!("puad:1/2".parse::<FamilyCheck>().unwrap().passes(&evens).unwrap());
        assert!(!"pubd:4:3/4".parse::<FamilyCheck>().unwrap().passes(&evens).unwrap());
        assert!("hsd:2".parse::<FamilyCheck>().unwrap().passes(&evens).unwrap());
    }

    #[test]
    fn every_report_rechecks() {
        let p = crate::sets::primes_up_to(2000).unwrap();
        let opts = AnalyzeOptions::with_window(50);
        for r in analyze(&p, &Family::ALL, &opts).unwrap() {
            assert!(r.recheck(&p), "{}", r.family);
            assert!(!r.fields().is_empty());
        }
        let other = crate::sets::primes_up_to(1999).unwrap();
        let r = analyze_family(&p, Family::Ap, &opts).unwrap();
        assert!(!r.recheck(&other));
    }
}
