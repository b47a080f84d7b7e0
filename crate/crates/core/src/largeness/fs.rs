use crate::sets::MAX_FS_TERMS;
use crate::{Error, GeneratorSequence, IntegerSet, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FsCheck {
    pub holds: bool,
    /// Lexicographically least violating index subset, 1-based and ascending.
    pub violator: Option<Vec<usize>>,
    pub violating_sum: Option<u64>,
}

/// Whether every nonempty subset sum of `gen` lies in `set`.
pub fn verify_fs_subset(gen: &GeneratorSequence, set: &IntegerSet) -> Result<FsCheck> {
    if gen.len() > MAX_FS_TERMS {
        return Err(Error::Size(format!(
            "{} generator terms; at most {MAX_FS_TERMS} are enumerable",
            gen.len()
        )));
    }
    gen.total()?;
    let mut path = Vec::new();
    let found = first_violation(gen.terms(), set, 0, 0, &mut path);
    Ok(match found {
        Some(sum) => FsCheck {
            holds: false,
            violator: Some(path.iter().map(|i| i + 1).collect()),
            violating_sum: Some(sum),
        },
        None => FsCheck {
            holds: true,
            violator: None,
            violating_sum: None,
        },
    })
}

// Preorder over ascending index lists visits subsets in lexicographic order.
fn first_violation(
    terms: &[u64],
    set: &IntegerSet,
    from: usize,
    sum: u64,
    path: &mut Vec<usize>,
) -> Option<u64> {
    for i in from..terms.len() {
        let s = sum + terms[i];
        path.push(i);
        if !set.contains(s) {
            return Some(s);
        }
        if let Some(v) = first_violation(terms, set, i + 1, s, path) {
            return Some(v);
        }
        path.pop();
    }
    None
}

/// Greedy generator `x_1 < x_2 < ...` with all finite sums inside the set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IpCertificate {
    pub terms: Vec<u64>,
}

impl IpCertificate {
    pub fn recheck(&self, set: &IntegerSet) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        GeneratorSequence::new(self.terms.clone())
            .and_then(|g| verify_fs_subset(&g, set))
            .map(|c| c.holds)
            .unwrap_or(false)
    }
}

/// Repeatedly takes the least `x` above the previous term such that `x` and
/// `x + s` lie in the set for every finite sum `s` found so far.
pub fn ip_certificate(set: &IntegerSet, max_terms: usize) -> Result<IpCertificate> {
    if max_terms > MAX_FS_TERMS {
        return Err(Error::Size(format!(
            "at most {MAX_FS_TERMS} generator terms are enumerable, asked for {max_terms}"
        )));
    }
    let mut terms = Vec::new();
    let mut sums: Vec<u64> = Vec::new();
    let mut last = 0;
    while terms.len() < max_terms {
        let next = set
            .elements()
            .iter()
            .copied()
            .filter(|&x| x > last)
            .find(|&x| sums.iter().all(|&s| set.contains(s + x)));
        let Some(x) = next else { break };
        let mut extended: Vec<u64> = sums.iter().map(|s| s + x).collect();
        extended.push(x);
        sums.extend(extended);
        sums.sort_unstable();
        sums.dedup();
        terms.push(x);
        last = x;
    }
    Ok(IpCertificate { terms })
}
