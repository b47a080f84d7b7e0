use crate::{Error, IntegerSet, Result};

/// Longest function domain accepted by the search.
pub const MAX_DOMAIN: usize = 20;
/// Largest number of `(a, H)` configurations the search will visit.
pub const MAX_CONFIGURATIONS: u128 = 1_000_000_000;

/// Where the common shift `a` is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShiftDomain {
    /// `a` ranges over `1..=a_bound`.
    Naturals,
    /// `a` ranges over members of the target that are at most `a_bound`.
    TargetMembers,
}

/// A shift `a` and index set `H` with `a + sum_{n in H} f(n)` in the target for every `f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JWitness {
    pub a: u64,
    /// 1-based, ascending.
    pub h: Vec<usize>,
    /// One sum per function, in input order.
    pub sums: Vec<u64>,
}

impl JWitness {
    pub fn recheck(&self, functions: &[Vec<u64>], target: &IntegerSet) -> bool {
        self.sums.len() == functions.len()
            && functions.iter().zip(&self.sums).all(|(f, &s)| {
                let total = self
                    .h
                    .iter()
                    .try_fold(self.a, |acc, &i| f.get(i.wrapping_sub(1)).map(|v| acc + v));
                total == Some(s) && target.contains(s)
            })
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Exhaustive search: `a` ascending, then `H` by size and lexicographically within a size.
///
/// Sums above the target's universe bound count as misses, so `None` only
/// says that no witness exists inside the searched window.
pub fn j_witness_search(
    functions: &[Vec<u64>],
    target: &IntegerSet,
    a_bound: u64,
    h_size_bound: usize,
    domain: ShiftDomain,
) -> Result<Option<JWitness>> {
    let Some(first) = functions.first() else {
        return Err(Error::Domain("no functions given".into()));
    };
    let m = first.len();
    if functions.iter().any(|f| f.len() != m) {
        return Err(Error::Domain("functions must share one domain [1..M]".into()));
    }
    if m == 0 || m > MAX_DOMAIN {
        return Err(Error::Size(format!("domain length {m} must lie in 1..={MAX_DOMAIN}")));
    }
    if h_size_bound == 0 || h_size_bound > m {
        return Err(Error::Domain(format!("H size bound {h_size_bound} must lie in 1..={m}")));
    }
    let shifts: Vec<u64> = match domain {
        ShiftDomain::Naturals => (1..=a_bound).collect(),
        ShiftDomain::TargetMembers => target.truncated(a_bound).elements().to_vec(),
    };
    let per_shift: u128 = (1..=h_size_bound).map(|k| binomial(m, k)).sum();
    let space = per_shift * shifts.len() as u128;
    if space > MAX_CONFIGURATIONS {
        return Err(Error::Size(format!(
            "search space of {space} configurations exceeds {MAX_CONFIGURATIONS}"
        )));
    }
    let member = target.membership();
    let hit = |v: u64| (v as usize) < member.len() && member[v as usize];

    let mut sums = vec![0u64; functions.len()];
    for &a in &shifts {
        for k in 1..=h_size_bound {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                for (s, f) in sums.iter_mut().zip(functions) {
                    *s = idx.iter().fold(a, |acc, &i| acc.saturating_add(f[i]));
                }
                if sums.iter().all(|&s| hit(s)) {
                    return Ok(Some(JWitness {
                        a,
                        h: idx.iter().map(|i| i + 1).collect(),
                        sums: sums.clone(),
                    }));
                }
                if !next_combination(&mut idx, m) {
                    break;
                }
            }
        }
    }
    Ok(None)
}

// Advances to the next k-subset of 0..n in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for pos in (0..k).rev() {
        if idx[pos] < n - k + pos {
            idx[pos] += 1;
            for j in pos + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
