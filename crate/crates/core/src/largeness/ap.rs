use crate::IntegerSet;

/// Longest arithmetic progression `start, start+d, ..., start+(length-1)d` in a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ApCertificate {
    pub length: u64,
    pub start: u64,
    pub difference: u64,
}

impl ApCertificate {
    pub fn terms(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.length).map(move |i| self.start + i * self.difference)
    }

    /// Every listed term is a member.
    pub fn recheck(&self, set: &IntegerSet) -> bool {
        match self.length {
            0 => set.is_empty(),
            _ => self.terms().all(|t| set.contains(t)),
        }
    }
}

/// Longest progression with `d >= 1`; ties go to the smallest start, then the smallest `d`.
///
/// Sets with fewer than two elements report their size with `d = 0`.
pub fn longest_ap(set: &IntegerSet) -> ApCertificate {
    let xs = set.elements();
    match xs.len() {
        0 => {
            return ApCertificate {
                length: 0,
                start: 0,
                difference: 0,
            }
        }
        1 => {
            return ApCertificate {
                length: 1,
                start: xs[0],
                difference: 0,
            }
        }
        _ => {}
    }
    let member = set.membership();
    let max = xs[xs.len() - 1];
    let is_member = |v: u64| v <= max && member[v as usize];
    let mut best = ApCertificate {
        length: 2,
        start: xs[0],
        difference: xs[1] - xs[0],
    };
    for (i, &a) in xs.iter().enumerate() {
        // an AP from a with length > best needs a + best.length * d <= max
        if (max - a) / best.length == 0 {
            break;
        }
        for &b in &xs[i + 1..] {
            let d = b - a;
            if (max - a) / d < best.length {
                break;
            }
            if a > d && is_member(a - d) {
                continue;
            }
            let mut length = 2;
            let mut next = b + d;
            while is_member(next) {
                length += 1;
                next += d;
            }
            if length > best.length {
                best = ApCertificate {
                    length,
                    start: a,
                    difference: d,
                };
            }
        }
    }
    best
}
