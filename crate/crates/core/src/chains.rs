//! Truncated chain and tree certificates for shift-closed families of sets.
//!
//! Containments `x + C ⊆ D` are read inside the window `[1, U]`: only
//! elements `y` of `C` with `x + y <= U` are tested. A reported violation is a
//! genuine failure of the containment inside the window; a pass says nothing
//! about elements pushed past `U`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::largeness::FamilyCheck;
use crate::sets::finite_sums;
use crate::spectra::spectrum_image;
use crate::{Error, GeneratorSequence, IntegerSet, Result, SpectrumParams};

/// A decreasing sequence `C_1 ⊇ C_2 ⊇ ... ⊇ C_k` of nonempty sets sharing one universe bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    levels: Vec<IntegerSet>,
}

impl Chain {
    pub fn new(levels: Vec<IntegerSet>) -> Result<Self> {
        let Some(first) = levels.first() else {
            return Err(Error::Domain("chain has no levels".into()));
        };
        let bound = first.universe_bound();
        for (i, level) in levels.iter().enumerate() {
            if level.is_empty() {
                return Err(Error::Domain(format!("chain level {} is empty", i + 1)));
            }
            if level.universe_bound() != bound {
                return Err(Error::Domain(format!(
                    "chain level {} has bound {}, expected {bound}",
                    i + 1,
                    level.universe_bound()
                )));
            }
            if i > 0 && !level.is_subset_of(&levels[i - 1]) {
                return Err(Error::Domain(format!(
                    "chain level {} is not contained in level {i}",
                    i + 1
                )));
            }
        }
        Ok(Chain { levels })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[IntegerSet] {
        &self.levels
    }

    /// 1-based.
    pub fn level(&self, n: usize) -> &IntegerSet {
        &self.levels[n - 1]
    }

    pub fn universe_bound(&self) -> u64 {
        self.levels[0].universe_bound()
    }

    /// Levels in the set file format separated by `---` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, level) in self.levels.iter().enumerate() {
            if i > 0 {
                out.push_str("---\n");
            }
            write!(out, "{}", level.to_text()).expect("string write");
        }
        out
    }

    /// Parses levels separated by `---`; the shared bound is the largest
    /// bound declared or implied by any level.
    pub fn parse_text(text: &str) -> Result<Chain> {
        let mut blocks = vec![String::new()];
        for line in text.lines() {
            if line.trim() == "---" {
                blocks.push(String::new());
            } else {
                let last = blocks.last_mut().expect("nonempty");
                last.push_str(line);
                last.push('\n');
            }
        }
        let parsed: Vec<IntegerSet> = blocks
            .iter()
            .map(|b| IntegerSet::parse_text(b))
            .collect::<Result<_>>()?;
        let bound = parsed.iter().map(IntegerSet::universe_bound).max().unwrap_or(1);
        let levels = parsed
            .iter()
            .map(|l| l.with_bound(bound))
            .collect::<Result<_>>()?;
        Chain::new(levels).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn read_chain(path: impl AsRef<std::path::Path>) -> Result<Chain> {
    Chain::parse_text(&std::fs::read_to_string(path)?)
}

pub fn write_chain(chain: &Chain, path: impl AsRef<std::path::Path>) -> Result<()> {
    std::fs::write(path, chain.to_text())?;
    Ok(())
}

// x + (C ∩ [1, U - x]) ⊆ D
fn shifted_within(x: u64, c: &IntegerSet, d: &IntegerSet, bound: u64) -> bool {
    if x >= bound {
        return true;
    }
    c.elements()
        .iter()
        .take_while(|&&y| y <= bound - x)
        .all(|&y| d.contains(x + y))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainVerdict {
    pub holds: bool,
    /// `(n, x, m)` with `m` the least level satisfying the shifted containment.
    pub witnesses: Vec<(usize, u64, usize)>,
    /// `(n, x)` pairs with no valid `m`, in ascending order.
    pub violations: Vec<(usize, u64)>,
    /// Levels failing the family check, 1-based.
    pub family_failures: Vec<usize>,
}

/// For every level `n < depth` and `x ∈ C_n` with `x <= shift_bound`, looks for
/// `m <= depth` with `x + C_m ⊆ C_n` inside the window, and applies the family
/// check to every level.
pub fn verify_chain_d(chain: &Chain, check: &FamilyCheck, shift_bound: u64) -> Result<ChainVerdict> {
    let bound = chain.universe_bound();
    let mut witnesses = Vec::new();
    let mut violations = Vec::new();
    for n in 1..chain.depth() {
        let cn = chain.level(n);
        for &x in cn.elements().iter().take_while(|&&x| x <= shift_bound) {
            match (1..=chain.depth()).find(|&m| shifted_within(x, chain.level(m), cn, bound)) {
                Some(m) => witnesses.push((n, x, m)),
                None => violations.push((n, x)),
            }
        }
    }
    let mut family_failures = Vec::new();
    for (i, level) in chain.levels().iter().enumerate() {
        if !check.passes(level)? {
            family_failures.push(i + 1);
        }
    }
    Ok(ChainVerdict {
        holds: violations.is_empty() && family_failures.is_empty(),
        witnesses,
        violations,
        family_failures,
    })
}

/// `C_n = FS(x_n, x_{n+1}, ..., x_k)` for `n = 1..=depth`, bound `x_1 + ... + x_k`.
pub fn canonical_ip_chain(gen: &GeneratorSequence, depth: usize) -> Result<Chain> {
    if depth == 0 || depth >= gen.len() {
        return Err(Error::Size(format!(
            "depth {depth} must lie in 1..{} for {} generator terms",
            gen.len(),
            gen.len()
        )));
    }
    let bound = gen.total()?;
    let levels = (1..=depth)
        .map(|n| finite_sums(&gen.tail(n)?)?.with_bound(bound))
        .collect::<Result<_>>()?;
    Chain::new(levels)
}

/// A finite tree of sequences with materialised branch sets `B_f = {x : f⌢x ∈ T}`.
///
/// Nodes with a stored branch set are internal; their children `f⌢x` for
/// `x ∈ B_f` are nodes too, and are leaves unless they have a branch set of
/// their own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertTree {
    ambient: IntegerSet,
    window: u64,
    branches: BTreeMap<Vec<u64>, IntegerSet>,
}

impl CertTree {
    /// Starts a tree whose root has branch set `root`.
    pub fn new(ambient: IntegerSet, root: IntegerSet) -> Result<Self> {
        if root.is_empty() {
            return Err(Error::Domain("root branch set is empty".into()));
        }
        let window = ambient.universe_bound();
        let mut branches = BTreeMap::new();
        branches.insert(Vec::new(), root);
        Ok(CertTree {
            ambient,
            window,
            branches,
        })
    }

    /// Stores or replaces `B_f`; an empty set makes `f` a leaf. The node must
    /// already exist. Branch sets of sequences that stop being nodes are dropped.
    pub fn set_branch(&mut self, node: Vec<u64>, branch: IntegerSet) -> Result<()> {
        if !self.is_node(&node) {
            return Err(Error::Domain(format!("{node:?} is not a node of the tree")));
        }
        if branch.is_empty() {
            self.branches.remove(&node);
        } else {
            self.branches.insert(node, branch);
        }
        // prefixes sort first, so parents are settled before their children
        let old = std::mem::take(&mut self.branches);
        for (k, v) in old {
            let keep = match k.split_last() {
                None => true,
                Some((&x, parent)) => self.branches.get(parent).is_some_and(|b| b.contains(x)),
            };
            if keep {
                self.branches.insert(k, v);
            }
        }
        Ok(())
    }

    pub fn is_node(&self, node: &[u64]) -> bool {
        match node.split_last() {
            None => true,
            Some((&x, parent)) => self.branches.get(parent).is_some_and(|b| b.contains(x)),
        }
    }

    pub fn branch(&self, node: &[u64]) -> Option<&IntegerSet> {
        self.branches.get(node)
    }

    pub fn internal_nodes(&self) -> impl Iterator<Item = (&Vec<u64>, &IntegerSet)> {
        self.branches.iter()
    }

    pub fn ambient(&self) -> &IntegerSet {
        &self.ambient
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    /// The tree built from a chain: `B_∅ = C_1`, and for a node with
    /// `B_f = C_n` and a child `x <= shift_bound`, `B_{f⌢x} = C_m` for the
    /// least valid `m`. Nodes are expanded to length `depth`.
    pub fn from_chain(chain: &Chain, depth: usize, shift_bound: u64) -> Result<CertTree> {
        let mut tree = CertTree::new(chain.level(1).clone(), chain.level(1).clone())?;
        let bound = chain.universe_bound();
        let mut frontier: Vec<(Vec<u64>, usize)> = vec![(Vec::new(), 1)];
        while let Some((node, n)) = frontier.pop() {
            if node.len() >= depth {
                continue;
            }
            let cn = chain.level(n);
            for &x in cn.elements().iter().take_while(|&&x| x <= shift_bound) {
                let m = (1..=chain.depth()).find(|&m| shifted_within(x, chain.level(m), cn, bound));
                if let Some(m) = m {
                    let mut child = node.clone();
                    child.push(x);
                    tree.branches.insert(child.clone(), chain.level(m).clone());
                    frontier.push((child, m));
                }
            }
        }
        Ok(tree)
    }
}

/// Largest number of intersections condition (iii) will evaluate.
pub const MAX_INTERSECTIONS: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeVerdict {
    pub holds: bool,
    /// Nodes with a value outside the ambient set.
    pub range_violations: Vec<Vec<u64>>,
    /// `(f, x)` with `x + B_{f⌢x} ⊄ B_f` inside the window.
    pub containment_violations: Vec<(Vec<u64>, u64)>,
    /// Families of internal nodes whose branch-set intersection fails the check.
    pub family_failures: Vec<Vec<Vec<u64>>>,
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Checks the three tree conditions: values in range, shifted branch
/// containment, and the family check on every intersection of at most
/// `subset_bound` branch sets.
pub fn verify_tree_b(tree: &CertTree, check: &FamilyCheck, subset_bound: usize) -> Result<TreeVerdict> {
    let internal: Vec<(&Vec<u64>, &IntegerSet)> = tree.internal_nodes().collect();
    let combos: u128 = (1..=subset_bound.min(internal.len()))
        .map(|k| binomial(internal.len(), k))
        .sum();
    if combos > MAX_INTERSECTIONS {
        return Err(Error::Size(format!(
            "{combos} branch intersections exceed the limit of {MAX_INTERSECTIONS}"
        )));
    }

    let mut range_violations = Vec::new();
    let mut containment_violations = Vec::new();
    for (node, branch) in &internal {
        if node.iter().any(|&v| !tree.ambient.contains(v)) {
            range_violations.push((*node).clone());
        }
        for &x in branch.elements() {
            if !tree.ambient.contains(x) {
                let mut child = (*node).clone();
                child.push(x);
                range_violations.push(child);
            }
            let mut child = (*node).clone();
            child.push(x);
            if let Some(sub) = tree.branch(&child) {
                if !shifted_within(x, sub, branch, tree.window) {
                    containment_violations.push(((*node).clone(), x));
                }
            }
        }
    }
    range_violations.sort();
    range_violations.dedup();

    let mut family_failures = Vec::new();
    let mut idx: Vec<usize> = Vec::new();
    for k in 1..=subset_bound.min(internal.len()) {
        idx.clear();
        idx.extend(0..k);
        loop {
            let mut inter = internal[idx[0]].1.clone();
            for &i in &idx[1..] {
                inter = inter.intersection(internal[i].1);
            }
            if !check.passes(&inter)? {
                family_failures.push(idx.iter().map(|&i| internal[i].0.clone()).collect());
            }
            if !next_combination(&mut idx, internal.len()) {
                break;
            }
        }
    }
    Ok(TreeVerdict {
        holds: range_violations.is_empty() && containment_violations.is_empty() && family_failures.is_empty(),
        range_violations,
        containment_violations,
        family_failures,
    })
}

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

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageChainReport {
    pub input: ChainVerdict,
    pub image_chain: Chain,
    pub image: ChainVerdict,
}

/// Maps every level through the spectrum and reruns the chain check on the result.
///
/// This only reports what happens on the truncation; a failure is evidence
/// about the probe, not a refutation.
pub fn image_chain_experiment(
    params: &SpectrumParams,
    chain: &Chain,
    check: &FamilyCheck,
    shift_bound: u64,
) -> Result<ImageChainReport> {
    let input = verify_chain_d(chain, check, shift_bound)?;
    let bound = params.apply_positive(chain.universe_bound())?;
    let levels = chain
        .levels()
        .iter()
        .map(|l| spectrum_image(params, l)?.with_bound(bound))
        .collect::<Result<_>>()?;
    let image_chain = Chain::new(levels)?;
    let image = verify_chain_d(&image_chain, check, shift_bound)?;
    Ok(ImageChainReport {
        input,
        image_chain,
        image,
    })
}
