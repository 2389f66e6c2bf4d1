//! Integer domains and variable identifiers.

use std::fmt;

/// Integer value type used for every variable and constant.
pub type Value = i64;

/// Wildcard cell in starred tables. Lies outside every valid domain.
pub const STAR: Value = i64::MIN;

/// Dense variable index, `0..n` within an instance.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

impl VarId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for VarId {
    fn from(i: usize) -> Self {
        VarId(i as u32)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "%{}", self.0)
    }
}

/// An ordered finite set of integers, stored as sorted disjoint closed intervals.
///
/// Adjacent intervals are always merged, so two domains holding the same values
/// compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Domain {
    intervals: Vec<(Value, Value)>,
    size: u64,
}

impl Domain {
    pub fn empty() -> Self {
        Domain::default()
    }

    /// Closed range `lo..=hi`; empty when `lo > hi`.
    pub fn range(lo: Value, hi: Value) -> Self {
        if lo > hi {
            return Domain::empty();
        }
        Domain {
            intervals: vec![(lo, hi)],
            size: (hi as i128 - lo as i128 + 1) as u64,
        }
    }

    pub fn singleton(v: Value) -> Self {
        Domain::range(v, v)
    }

    /// Builds a domain from arbitrary values; duplicates are ignored.
    pub fn from_values<I: IntoIterator<Item = Value>>(values: I) -> Self {
        let mut vals: Vec<Value> = values.into_iter().collect();
        vals.sort_unstable();
        vals.dedup();
        let mut intervals: Vec<(Value, Value)> = Vec::new();
        for v in vals {
            match intervals.last_mut() {
                Some(last) if last.1.checked_add(1) == Some(v) => last.1 = v,
                _ => intervals.push((v, v)),
            }
        }
        Domain::from_sorted_intervals(intervals)
    }

    /// Builds a domain from possibly overlapping intervals.
    pub fn from_intervals<I: IntoIterator<Item = (Value, Value)>>(intervals: I) -> Self {
        let mut iv: Vec<(Value, Value)> = intervals.into_iter().filter(|(a, b)| a <= b).collect();
        iv.sort_unstable();
        let mut merged: Vec<(Value, Value)> = Vec::with_capacity(iv.len());
        for (a, b) in iv {
            match merged.last_mut() {
                Some(last) if a <= last.1.saturating_add(1) => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Domain::from_sorted_intervals(merged)
    }

    fn from_sorted_intervals(intervals: Vec<(Value, Value)>) -> Self {
        let size = intervals
            .iter()
            .map(|&(a, b)| (b as i128 - a as i128 + 1) as u64)
            .sum();
        Domain { intervals, size }
    }

    pub fn intervals(&self) -> &[(Value, Value)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn min(&self) -> Option<Value> {
        self.intervals.first().map(|iv| iv.0)
    }

    pub fn max(&self) -> Option<Value> {
        self.intervals.last().map(|iv| iv.1)
    }

    pub fn contains(&self, v: Value) -> bool {
        // first interval whose upper end is >= v
        let i = self.intervals.partition_point(|&(_, hi)| hi < v);
        i < self.intervals.len() && self.intervals[i].0 <= v
    }

    pub fn is_singleton(&self) -> bool {
        self.size == 1
    }

    /// Values in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = Value> + '_ {
        self.intervals.iter().flat_map(|&(a, b)| a..=b)
    }

    pub fn values(&self) -> Vec<Value> {
        self.iter().collect()
    }

    pub fn is_subset_of(&self, other: &Domain) -> bool {
        self.intervals.iter().all(|&(a, b)| {
            let i = other.intervals.partition_point(|&(_, hi)| hi < a);
            i < other.intervals.len() && other.intervals[i].0 <= a && b <= other.intervals[i].1
        })
    }

    pub fn intersect(&self, other: &Domain) -> Domain {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a1, b1) = self.intervals[i];
            let (a2, b2) = other.intervals[j];
            let lo = a1.max(a2);
            let hi = b1.min(b2);
            if lo <= hi {
                out.push((lo, hi));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Domain::from_intervals(out)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, &(a, b)) in self.intervals.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            if a == b {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}..{b}")?;
            }
        }
        write!(f, "}}")
    }
}

/// A decision variable of an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub id: VarId,
    pub name: String,
    pub domain: Domain,
}
