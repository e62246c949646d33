use serde::{Deserialize, Serialize};

/// Finite union of closed intervals, sorted and pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn real_line() -> Self {
        Self::interval(f64::NEG_INFINITY, f64::INFINITY)
    }

    /// `[lo, hi]`, or the empty set when `lo > hi`.
    pub fn interval(lo: f64, hi: f64) -> Self {
        if lo <= hi {
            Self {
                intervals: vec![(lo, hi)],
            }
        } else {
            Self::empty()
        }
    }

    /// Normalizes arbitrary intervals: drops empty ones, sorts, merges overlaps.
    pub fn from_intervals(mut raw: Vec<(f64, f64)>) -> Self {
        raw.retain(|(lo, hi)| lo <= hi);
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match out.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        Self { intervals: out }
    }

    /// `{t : |α t + β| <= 1}`.
    pub fn linear_abs_le_one(alpha: f64, beta: f64) -> Self {
        if alpha == 0.0 {
            return if beta.abs() <= 1.0 {
                Self::real_line()
            } else {
                Self::empty()
            };
        }
        let (a, b) = ((-1.0 - beta) / alpha, (1.0 - beta) / alpha);
        Self::interval(a.min(b), a.max(b))
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= t && t <= hi)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].0.max(b[j].0);
            let hi = a[i].1.min(b[j].1);
            if lo <= hi {
                out.push((lo, hi));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { intervals: out }
    }

    /// Removes the open interval `(lo, hi)`.
    pub fn remove_open(&self, lo: f64, hi: f64) -> Self {
        if lo >= hi {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        for &(a, b) in &self.intervals {
            if b <= lo || a >= hi {
                out.push((a, b));
                continue;
            }
            if a <= lo {
                out.push((a, lo));
            }
            if b >= hi {
                out.push((hi, b));
            }
        }
        Self { intervals: out }
    }
}
