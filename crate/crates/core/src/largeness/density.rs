use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::{Error, IntegerSet, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DensityReport {
    pub window: u64,
    /// `max_{1<=n<=N} |A ∩ [1,n]| / n`.
    pub prefix_max: BigRational,
    /// Every `n` attaining `prefix_max`, ascending (always set elements).
    pub prefix_argmax: Vec<u64>,
    /// `max_m |A ∩ [m+1, m+window]| / window` over windows inside `[1, N]`.
    pub banach_max: BigRational,
    /// First element `m+1` of the leftmost maximising window.
    pub banach_start: u64,
    pub banach_count: u64,
}

impl DensityReport {
    pub fn recheck(&self, set: &IntegerSet) -> bool {
        matches!(density_report(set, self.window), Ok(ref r) if r == self)
    }
}

fn ratio(k: usize, n: u64) -> BigRational {
    BigRational::new(BigInt::from(k), BigInt::from(n))
}

/// Exact prefix and sliding-window densities over `[1, universe_bound]`.
pub fn density_report(set: &IntegerSet, window: u64) -> Result<DensityReport> {
    let bound = set.universe_bound();
    if window == 0 || window > bound {
        return Err(Error::Domain(format!(
            "window {window} must lie in 1..={bound}"
        )));
    }
    let xs = set.elements();

    // |A ∩ [1,n]|/n only peaks at elements of A.
    let mut best = (0usize, 1u64);
    let mut prefix_argmax = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        let k = i + 1;
        let lhs = k as u128 * best.1 as u128;
        let rhs = best.0 as u128 * x as u128;
        if lhs > rhs {
            best = (k, x);
            prefix_argmax.clear();
            prefix_argmax.push(x);
        } else if lhs == rhs && best.0 > 0 {
            prefix_argmax.push(x);
        }
    }
    let prefix_max = if best.0 == 0 {
        BigRational::zero()
    } else {
        ratio(best.0, best.1)
    };

    // The window count only changes where a start passes a+1 or a-window+1.
    let last_start = bound - window + 1;
    let mut starts: Vec<u64> = vec![1];
    for &a in xs {
        starts.push(a + 1);
        if a >= window {
            starts.push(a - window + 1);
        }
    }
    starts.retain(|&s| s <= last_start);
    starts.sort_unstable();
    starts.dedup();
    let (mut banach_count, mut banach_start) = (0usize, 1u64);
    for s in starts {
        let k = set.count_up_to(s + window - 1) - set.count_up_to(s - 1);
        if k > banach_count {
            banach_count = k;
            banach_start = s;
        }
    }
    Ok(DensityReport {
        window,
        prefix_max,
        prefix_argmax,
        banach_max: ratio(banach_count, window),
        banach_start,
        banach_count: banach_count as u64,
    })
}
