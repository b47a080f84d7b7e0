//! Report rows and their CSV form.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::exact::render_decimal;
use crate::{Certified, Error, Result};

pub const CSV_HEADER: [&str; 6] = ["family", "side", "cert_field", "value", "decimal", "params"];
/// Digits after the point in the decimal column.
pub const DECIMAL_DIGITS: usize = 12;

/// A single certificate field value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertValue {
    Int(BigInt),
    Rational(BigRational),
    Interval(BigRational, BigRational),
    Bool(bool),
    List(Vec<u64>),
    Text(String),
}

impl CertValue {
    pub fn int(v: impl Into<BigInt>) -> Self {
        CertValue::Int(v.into())
    }

    pub fn certified(c: &Certified) -> Self {
        match c {
            Certified::Exact(v) => CertValue::Rational(v.clone()),
            Certified::Interval { lo, hi } => CertValue::Interval(lo.clone(), hi.clone()),
        }
    }

    /// Exact text: rationals as `p/q`, intervals as `[lo,hi]`, lists space separated.
    pub fn exact_text(&self) -> String {
        let frac = |r: &BigRational| format!("{}/{}", r.numer(), r.denom());
        match self {
            CertValue::Int(v) => v.to_string(),
            CertValue::Rational(r) => frac(r),
            CertValue::Interval(lo, hi) => format!("[{},{}]", frac(lo), frac(hi)),
            CertValue::Bool(b) => b.to_string(),
            CertValue::List(xs) => xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" "),
            CertValue::Text(t) => t.clone(),
        }
    }

    /// Decimal rendering for rationals and intervals (midpoint), empty otherwise.
    pub fn decimal_text(&self) -> String {
        match self {
            CertValue::Rational(r) => render_decimal(r, DECIMAL_DIGITS),
            CertValue::Interval(lo, hi) => {
                render_decimal(&((lo + hi) / BigRational::from_integer(2.into())), DECIMAL_DIGITS)
            }
            _ => String::new(),
        }
    }
}

impl fmt::Display for CertValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.exact_text())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Check,
    Image,
    Input,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Check => "check",
            Side::Image => "image",
            Side::Input => "input",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub family: String,
    pub side: Side,
    pub cert_field: String,
    pub value: CertValue,
    pub params: String,
}

impl ReportRow {
    pub fn new(
        family: impl Into<String>,
        side: Side,
        cert_field: impl Into<String>,
        value: CertValue,
        params: impl Into<String>,
    ) -> Self {
        ReportRow {
            family: family.into(),
            side,
            cert_field: cert_field.into(),
            value,
            params: params.into(),
        }
    }
}

/// CSV text with the header first and rows ordered by `(family, side, cert_field)`.
pub fn emit_report(rows: &[ReportRow]) -> String {
    let mut sorted: Vec<&ReportRow> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        (&a.family, a.side.as_str(), &a.cert_field).cmp(&(&b.family, b.side.as_str(), &b.cert_field))
    });
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in sorted {
        w.write_record([
            r.family.as_str(),
            r.side.as_str(),
            r.cert_field.as_str(),
            &r.value.exact_text(),
            &r.value.decimal_text(),
            r.params.as_str(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

/// A row read back from CSV, all fields as text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedRow {
    pub family: String,
    pub side: String,
    pub cert_field: String,
    pub value: String,
    pub decimal: String,
    pub params: String,
}

impl From<&ReportRow> for ParsedRow {
    fn from(r: &ReportRow) -> Self {
        ParsedRow {
            family: r.family.clone(),
            side: r.side.as_str().into(),
            cert_field: r.cert_field.clone(),
            value: r.value.exact_text(),
            decimal: r.value.decimal_text(),
            params: r.params.clone(),
        }
    }
}

pub fn parse_report(text: &str) -> Result<Vec<ParsedRow>> {
    let bad = |e: csv::Error| Error::Parse(format!("report csv: {e}"));
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = rdr.headers().map_err(bad)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse(format!("unexpected report header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(bad)?;
        let field = |i: usize| rec.get(i).unwrap_or_default().to_string();
        rows.push(ParsedRow {
            family: field(0),
            side: field(1),
            cert_field: field(2),
            value: field(3),
            decimal: field(4),
            params: field(5),
        });
    }
    Ok(rows)
}
