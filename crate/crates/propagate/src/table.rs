//! Table constraints (supports and conflicts, with wildcards).

use std::collections::HashSet;

use xcore::{Constraint, Value, VarId, STAR};

use crate::engine::{Local, Propagator};
use crate::store::{DomainStore, PResult, Wipeout};

/// Assignment budget for support search in starred conflict tables.
const CONFLICT_BUDGET: u64 = 1 << 14;

pub struct SupportsProp {
    scope: Vec<VarId>,
    tuples: Vec<Vec<Value>>,
}

impl SupportsProp {
    pub fn new(scope: &[VarId], tuples: &[Vec<Value>]) -> SupportsProp {
        SupportsProp { scope: scope.to_vec(), tuples: tuples.to_vec() }
    }
}

impl Propagator for SupportsProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        let k = self.scope.len();
        let scope = &self.scope;
        // drop tuples that lost validity; the list only shrinks within a call
        let valid: Vec<&Vec<Value>> = self
            .tuples
            .iter()
            .filter(|t| t.iter().zip(scope).all(|(&c, &x)| c == STAR || s.contains(x, c)))
            .collect();
        if valid.is_empty() {
            return Err(Wipeout);
        }
        for p in 0..k {
            if valid.iter().any(|t| t[p] == STAR) {
                continue;
            }
            let mut keep: Vec<Value> = valid.iter().map(|t| t[p]).collect();
            keep.sort_unstable();
            keep.dedup();
            s.intersect_sorted(scope[p], &keep)?;
        }
        Ok(())
    }
}

/// Conflict tables. Without wildcards, a value is unsupported when every
/// combination of the other variables is listed as a conflict; with
/// wildcards, supports are searched for within a budget.
pub struct ConflictsProp {
    scope: Vec<VarId>,
    tuples: Vec<Vec<Value>>,
    starred: bool,
    local: Local,
}

impl ConflictsProp {
    pub fn new(c: &Constraint, scope: &[VarId], tuples: &[Vec<Value>], starred: bool) -> ConflictsProp {
        let mut ts = tuples.to_vec();
        ts.sort();
        ts.dedup();
        ConflictsProp { scope: scope.to_vec(), tuples: ts, starred, local: Local::new(c) }
    }
}

impl Propagator for ConflictsProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        let distinct_scope = self.scope.iter().collect::<HashSet<_>>().len() == self.scope.len();
        if self.starred || !distinct_scope {
            self.local.enumerate(s, CONFLICT_BUDGET)?;
            return Ok(());
        }
        let k = self.scope.len();
        let scope = &self.scope;
        let valid: Vec<&Vec<Value>> = self
            .tuples
            .iter()
            .filter(|t| t.iter().zip(scope).all(|(&c, &x)| s.contains(x, c)))
            .collect();
        let sizes: Vec<u128> = scope.iter().map(|&x| s.size(x) as u128).collect();
        let total: u128 = sizes.iter().fold(1u128, |a, &b| a.saturating_mul(b));
        if valid.len() as u128 >= total {
            return Err(Wipeout);
        }
        for p in 0..k {
            let others = total / sizes[p];
            if valid.len() as u128 >= others {
                let mut counts: std::collections::HashMap<Value, u128> = std::collections::HashMap::new();
                for t in &valid {
                    *counts.entry(t[p]).or_insert(0) += 1;
                }
                for (v, n) in counts {
                    if n >= others {
                        s.remove(scope[p], v)?;
                    }
                }
            }
        }
        Ok(())
    }
}
