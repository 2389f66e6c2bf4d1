//! Count, nValues and cardinality.

use std::collections::{BTreeSet, HashSet};

use xcore::{Condition, Value, VarId};

use crate::arith::condition_window;
use crate::engine::Propagator;
use crate::store::{DomainStore, PResult, Wipeout};

/// Union of domains, or `None` once it exceeds `cap` values.
fn union_upto(s: &DomainStore, scope: &[VarId], cap: u64) -> Option<BTreeSet<Value>> {
    let mut u = BTreeSet::new();
    for &x in scope {
        if s.size(x) > cap {
            return None;
        }
        u.extend(s.values(x));
        if u.len() as u64 > cap {
            return None;
        }
    }
    Some(u)
}

pub struct CountProp {
    scope: Vec<VarId>,
    values: Vec<Value>,
    condition: Condition,
}

impl CountProp {
    pub fn new(scope: &[VarId], values: &[Value], condition: &Condition) -> CountProp {
        CountProp { scope: scope.to_vec(), values: values.to_vec(), condition: condition.clone() }
    }
}

impl Propagator for CountProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        let values = &self.values;
        let sure = |s: &DomainStore, x: VarId| s.value(x).is_some_and(|v| values.contains(&v));
        let possible = |s: &DomainStore, x: VarId| values.iter().any(|&v| s.contains(x, v));
        let n_sure = self.scope.iter().filter(|&&x| sure(s, x)).count() as i128;
        let n_possible = self.scope.iter().filter(|&&x| possible(s, x)).count() as i128;
        let (a, b) = condition_window(&self.condition, s, n_sure, n_possible)?;
        if n_sure == b {
            for &x in &self.scope {
                if !sure(s, x) {
                    for &v in values {
                        s.remove(x, v)?;
                    }
                }
            }
        } else if n_possible == a {
            let mut keep = values.clone();
            keep.sort_unstable();
            for &x in &self.scope {
                if possible(s, x) {
                    s.intersect_sorted(x, &keep)?;
                }
            }
        }
        Ok(())
    }
}

/// Widest union computed when bounding the number of distinct values.
const UNION_CAP: u64 = 1 << 16;

pub struct NValuesProp {
    scope: Vec<VarId>,
    condition: Condition,
}

impl NValuesProp {
    pub fn new(scope: &[VarId], condition: &Condition) -> NValuesProp {
        NValuesProp { scope: scope.to_vec(), condition: condition.clone() }
    }
}

impl Propagator for NValuesProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        let fixed: BTreeSet<Value> = self.scope.iter().filter_map(|&x| s.value(x)).collect();
        let open: Vec<VarId> = {
            let set: BTreeSet<VarId> = self.scope.iter().copied().filter(|&x| !s.is_fixed(x)).collect();
            set.into_iter().collect()
        };
        let lb = if self.scope.is_empty() { 0 } else { fixed.len().max(1) as i128 };
        let mut ub = (fixed.len() + open.len()) as i128;
        if let Some(u) = union_upto(s, &self.scope, UNION_CAP) {
            ub = ub.min(u.len() as i128);
        }
        let (a, b) = condition_window(&self.condition, s, lb, ub)?;
        if open.is_empty() {
            return Ok(());
        }
        let fixed_vals: Vec<Value> = fixed.iter().copied().collect();
        if b == fixed.len() as i128 && !fixed.is_empty() {
            for &x in &open {
                s.intersect_sorted(x, &fixed_vals)?;
            }
        } else if a == (fixed.len() + open.len()) as i128 {
            for &x in &open {
                for &v in &fixed_vals {
                    s.remove(x, v)?;
                }
            }
        }
        Ok(())
    }
}

pub struct CardinalityProp {
    scope: Vec<VarId>,
    values: Vec<Value>,
    occurs: Vec<(Value, Value)>,
    closed: bool,
}

impl CardinalityProp {
    pub fn new(scope: &[VarId], values: &[Value], occurs: &[(Value, Value)], closed: bool) -> CardinalityProp {
        CardinalityProp { scope: scope.to_vec(), values: values.to_vec(), occurs: occurs.to_vec(), closed }
    }
}

impl Propagator for CardinalityProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        if self.closed {
            let mut keep = self.values.clone();
            keep.sort_unstable();
            for &x in &self.scope {
                s.intersect_sorted(x, &keep)?;
            }
            let n = self.scope.len() as i128;
            let lo: i128 = self.occurs.iter().map(|o| o.0 as i128).sum();
            let hi: i128 = self.occurs.iter().map(|o| o.1 as i128).sum();
            if n < lo || n > hi {
                return Err(Wipeout);
            }
        }
        loop {
            let mut changed = false;
            for (k, &v) in self.values.iter().enumerate() {
                let (lo, hi) = self.occurs[k];
                let sure = self.scope.iter().filter(|&&x| s.value(x) == Some(v)).count() as Value;
                let possible = self.scope.iter().filter(|&&x| s.contains(x, v)).count() as Value;
                if sure > hi || possible < lo {
                    return Err(Wipeout);
                }
                if sure == hi && possible > sure {
                    let open: HashSet<VarId> =
                        self.scope.iter().copied().filter(|&x| s.contains(x, v) && !s.is_fixed(x)).collect();
                    for x in open {
                        changed |= s.remove(x, v)?;
                    }
                } else if possible == lo && possible > sure {
                    let open: HashSet<VarId> =
                        self.scope.iter().copied().filter(|&x| s.contains(x, v) && !s.is_fixed(x)).collect();
                    for x in open {
                        changed |= s.assign(x, v)?;
                    }
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }
}
