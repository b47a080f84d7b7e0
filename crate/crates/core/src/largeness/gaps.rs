use crate::{Error, IntegerSet, Result};

/// A maximal run of consecutive elements whose successive differences are at most `bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GapRun {
    pub bound: u64,
    pub span: u64,
    pub first: u64,
    pub last: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GapCertificate {
    pub max_gap: u64,
    pub runs: Vec<GapRun>,
}

impl GapCertificate {
    pub fn run_for(&self, bound: u64) -> Option<&GapRun> {
        self.runs.iter().find(|r| r.bound == bound)
    }

    pub fn recheck(&self, set: &IntegerSet) -> bool {
        let xs = set.elements();
        let gaps_ok = xs.windows(2).all(|w| w[1] - w[0] <= self.max_gap)
            && xs.windows(2).any(|w| w[1] - w[0] == self.max_gap);
        let runs_ok = self.runs.iter().all(|r| {
            let (Ok(i), Ok(j)) = (xs.binary_search(&r.first), xs.binary_search(&r.last)) else {
                return false;
            };
            r.span == r.last - r.first && xs[i..=j].windows(2).all(|w| w[1] - w[0] <= r.bound)
        });
        gaps_ok && runs_ok
    }
}

/// Largest consecutive gap, and for each bound the widest run with gaps at most that bound.
///
/// Ties between runs of equal span go to the leftmost.
pub fn gap_certificate(set: &IntegerSet, bounds: &[u64]) -> Result<GapCertificate> {
    let xs = set.elements();
    if xs.len() < 2 {
        return Err(Error::Size(format!(
            "gap certificate needs at least two elements, got {}",
            xs.len()
        )));
    }
    let max_gap = xs.windows(2).map(|w| w[1] - w[0]).max().expect("two elements");
    let runs = bounds.iter().map(|&b| widest_run(xs, b)).collect();
    Ok(GapCertificate { max_gap, runs })
}

fn widest_run(xs: &[u64], bound: u64) -> GapRun {
    let mut best = GapRun {
        bound,
        span: 0,
        first: xs[0],
        last: xs[0],
    };
    let mut run_start = 0;
    for i in 1..=xs.len() {
        if i == xs.len() || xs[i] - xs[i - 1] > bound {
            let span = xs[i - 1] - xs[run_start];
            if span > best.span {
                best = GapRun {
                    bound,
                    span,
                    first: xs[run_start],
                    last: xs[i - 1],
                };
            }
            run_start = i;
        }
    }
    best
}
