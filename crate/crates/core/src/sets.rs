//! Finite integer sets, generators and the plain-text set format.

use std::fmt::Write as _;
use std::path::Path;

use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// A strictly increasing list of positive integers, all at most `universe_bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerSet {
    elements: Vec<u64>,
    universe_bound: u64,
}

impl IntegerSet {
    /// Validates an already sorted element list.
    pub fn new(elements: Vec<u64>, universe_bound: u64) -> Result<Self> {
        if universe_bound == 0 {
            return Err(Error::Domain("universe bound must be >= 1".into()));
        }
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Domain(format!(
                "elements not strictly increasing at {} then {}",
                w[0], w[1]
            )));
        }
        if elements.first() == Some(&0) {
            return Err(Error::Domain("elements must be positive".into()));
        }
        if let Some(&last) = elements.last() {
            if last > universe_bound {
                return Err(Error::Domain(format!(
                    "element {last} exceeds universe bound {universe_bound}"
                )));
            }
        }
        Ok(IntegerSet {
            elements,
            universe_bound,
        })
    }

    /// Sorts and deduplicates; the bound defaults to the largest element (or 1).
    pub fn from_unsorted(values: impl IntoIterator<Item = u64>, universe_bound: Option<u64>) -> Result<Self> {
        let mut elements: Vec<u64> = values.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        let bound = universe_bound.unwrap_or_else(|| elements.last().copied().unwrap_or(1).max(1));
        Self::new(elements, bound)
    }

    /// `{1, ..., n}`.
    pub fn interval(n: u64) -> Self {
        IntegerSet {
            elements: (1..=n).collect(),
            universe_bound: n.max(1),
        }
    }

    /// Multiples of `step` up to `bound`.
    pub fn multiples(step: u64, bound: u64) -> Self {
        assert!(step > 0 && bound > 0);
        IntegerSet {
            elements: (1..=bound / step).map(|k| k * step).collect(),
            universe_bound: bound,
        }
    }

    pub(crate) fn from_sorted_unchecked(elements: Vec<u64>, universe_bound: u64) -> Self {
        debug_assert!(Self::new(elements.clone(), universe_bound).is_ok());
        IntegerSet {
            elements,
            universe_bound,
        }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn universe_bound(&self) -> u64 {
        self.universe_bound
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.elements.last().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &IntegerSet) -> bool {
        let mut it = other.elements.iter().peekable();
        'outer: for &x in &self.elements {
            while let Some(&&y) = it.peek() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
                it.next();
            }
            return false;
        }
        true
    }

    /// `|A ∩ [1, n]|`.
    pub fn count_up_to(&self, n: u64) -> usize {
        self.elements.partition_point(|&x| x <= n)
    }

    /// Elements `<= n`, keeping the universe bound.
    pub fn truncated(&self, n: u64) -> IntegerSet {
        IntegerSet {
            elements: self.elements[..self.count_up_to(n)].to_vec(),
            universe_bound: self.universe_bound,
        }
    }

    pub fn intersection(&self, other: &IntegerSet) -> IntegerSet {
        let (a, b) = (&self.elements, &other.elements);
        let mut elements = Vec::with_capacity(a.len().min(b.len()));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    elements.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        IntegerSet {
            elements,
            universe_bound: self.universe_bound.min(other.universe_bound),
        }
    }

    pub fn with_bound(&self, universe_bound: u64) -> Result<IntegerSet> {
        Self::new(self.elements.clone(), universe_bound)
    }

    /// Dense membership table indexed by value, for inner loops.
    pub fn membership(&self) -> Vec<bool> {
        let top = self.max().unwrap_or(0) as usize;
        let mut table = vec![false; top + 1];
        for &x in &self.elements {
            table[x as usize] = true;
        }
        table
    }

    /// Set file text: a `# bound N` line followed by one element per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.len() * 8 + 16);
        writeln!(out, "# bound {}", self.universe_bound).expect("string write");
        for x in &self.elements {
            writeln!(out, "{x}").expect("string write");
        }
        out
    }

    /// Parses the set file format. Blank lines and `#` comments are ignored;
    /// a `# bound N` comment sets the universe bound, otherwise it is the
    /// largest element.
    pub fn parse_text(text: &str) -> Result<IntegerSet> {
        let mut elements = Vec::new();
        let mut bound = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(value) = comment.trim().strip_prefix("bound") {
                    let b: u64 = value.trim().parse().map_err(|_| {
                        Error::Parse(format!("line {}: bad bound directive {line:?}", i + 1))
                    })?;
                    bound = Some(b);
                }
                continue;
            }
            let x: u64 = line
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: not a positive integer: {line:?}", i + 1)))?;
            if x == 0 {
                return Err(Error::Parse(format!("line {}: element must be positive", i + 1)));
            }
            if let Some(&prev) = elements.last() {
                if x == prev {
                    return Err(Error::Parse(format!("line {}: duplicate element {x}", i + 1)));
                }
                if x < prev {
                    return Err(Error::Parse(format!(
                        "line {}: {x} follows {prev}; elements must ascend",
                        i + 1
                    )));
                }
            }
            elements.push(x);
        }
        let bound = bound.unwrap_or_else(|| elements.last().copied().unwrap_or(1));
        IntegerSet::new(elements, bound).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn read_set(path: impl AsRef<Path>) -> Result<IntegerSet> {
    IntegerSet::parse_text(&std::fs::read_to_string(path)?)
}

pub fn write_set(set: &IntegerSet, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, set.to_text())?;
    Ok(())
}

/// A finite generator list `x_1, ..., x_k` for finite sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSequence {
    terms: Vec<u64>,
}

impl GeneratorSequence {
    pub fn new(terms: Vec<u64>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Domain("generator sequence is empty".into()));
        }
        if terms.contains(&0) {
            return Err(Error::Domain("generator terms must be positive".into()));
        }
        Ok(GeneratorSequence { terms })
    }

    /// `base^0, base^1, ..., base^(k-1)`.
    pub fn powers(base: u64, k: usize) -> Result<Self> {
        let mut terms = Vec::with_capacity(k);
        let mut t = 1u64;
        for i in 0..k {
            if i > 0 {
                t = t
                    .checked_mul(base)
                    .ok_or_else(|| Error::Range(format!("{base}^{i} overflows")))?;
            }
            terms.push(t);
        }
        Self::new(terms)
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms from 1-based index `n` on.
    pub fn tail(&self, n: usize) -> Result<GeneratorSequence> {
        if n == 0 || n > self.terms.len() {
            return Err(Error::Domain(format!(
                "tail index {n} outside 1..={}",
                self.terms.len()
            )));
        }
        Self::new(self.terms[n - 1..].to_vec())
    }

    pub fn total(&self) -> Result<u64> {
        self.terms
            .iter()
            .try_fold(0u64, |acc, &t| acc.checked_add(t))
            .ok_or_else(|| Error::Range("sum of generator terms overflows".into()))
    }
}

/// Largest generator list accepted by [`finite_sums`].
pub const MAX_FS_TERMS: usize = 24;

/// All nonempty subset sums; the universe bound is the sum of every term.
pub fn finite_sums(gen: &GeneratorSequence) -> Result<IntegerSet> {
    if gen.len() > MAX_FS_TERMS {
        return Err(Error::Size(format!(
            "{} generator terms; at most {MAX_FS_TERMS} are enumerable",
            gen.len()
        )));
    }
    let total = gen.total()?;
    let mut sums: Vec<u64> = Vec::new();
    for &x in gen.terms() {
        let shifted: Vec<u64> = std::iter::once(x).chain(sums.iter().map(|s| s + x)).collect();
        sums = merge_dedup(&sums, &shifted);
    }
    Ok(IntegerSet::from_sorted_unchecked(sums, total))
}

fn merge_dedup(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x <= y => {
                i += 1;
                if x == y {
                    j += 1;
                }
                x
            }
            (_, Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

const SEGMENT: u64 = 1 << 16;

/// Primes `<= limit` by a segmented sieve of Eratosthenes.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = limit.sqrt();
    let mut small = vec![true; root as usize + 1];
    let mut base = Vec::new();
    for i in 2..=root as usize {
        if small[i] {
            base.push(i as u64);
            let mut j = i * i;
            while j <= root as usize {
                small[j] = false;
                j += i;
            }
        }
    }
    let mut primes = Vec::new();
    let mut seg = vec![true; SEGMENT as usize];
    let mut lo = 2u64;
    while lo <= limit {
        let hi = (lo + SEGMENT - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        seg[..len].fill(true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let start = (p * p).max(lo.div_ceil(p) * p);
            let mut m = start;
            while m <= hi {
                seg[(m - lo) as usize] = false;
                m += p;
            }
        }
        primes.extend((0..len).filter(|&i| seg[i]).map(|i| lo + i as u64));
        lo = hi + 1;
    }
    primes
}

pub fn primes_up_to(limit: u64) -> Result<IntegerSet> {
    if limit < 2 {
        return Err(Error::Domain(format!("prime limit {limit} is below 2")));
    }
    Ok(IntegerSet::from_sorted_unchecked(sieve_primes(limit), limit))
}

/// Includes each `n <= bound` independently with probability `density`.
pub fn random_density_set(density: &BigRational, bound: u64, seed: u64) -> Result<IntegerSet> {
    if !density.is_positive() || density > &BigRational::one() {
        return Err(Error::Domain(format!("density {density} must lie in (0, 1]")));
    }
    if bound == 0 {
        return Err(Error::Domain("bound must be >= 1".into()));
    }
    let (num, den) = match (density.numer().to_u64(), density.denom().to_u64()) {
        (Some(p), Some(q)) => (p, q),
        _ => return Err(Error::Domain(format!("density {density} has oversized terms"))),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elements = (1..=bound).filter(|_| rng.gen_range(0..den) < num).collect();
    Ok(IntegerSet::from_sorted_unchecked(elements, bound))
}
