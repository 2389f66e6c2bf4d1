//! Difference constraints and circuits.

use std::collections::HashSet;

use xcore::{Value, VarId};

use crate::engine::Propagator;
use crate::store::{DomainStore, PResult, Wipeout};

/// Removes the value of every fixed variable from the others until stable.
pub(crate) fn eliminate_singletons(s: &mut DomainStore, scope: &[VarId], except: Option<Value>) -> PResult {
    let mut done = vec![false; scope.len()];
    loop {
        let mut progress = false;
        for i in 0..scope.len() {
            if done[i] || !s.is_fixed(scope[i]) {
                continue;
            }
            done[i] = true;
            let v = s.min(scope[i]);
            if Some(v) == except {
                continue;
            }
            for (j, &y) in scope.iter().enumerate() {
                if j != i && y != scope[i] {
                    s.remove(y, v)?;
                } else if j != i {
                    // the same variable twice can never differ from itself
                    return Err(Wipeout);
                }
            }
            progress = true;
        }
        if !progress {
            return Ok(());
        }
    }
}

/// Fails when the variables that cannot take the excepted value need more
/// distinct values than their domains offer together.
fn pigeonhole(s: &DomainStore, scope: &[VarId], except: Option<Value>) -> PResult {
    let strict: Vec<VarId> = scope.iter().copied().filter(|&x| except.is_none_or(|e| !s.contains(x, e))).collect();
    if strict.len() <= 1 {
        return Ok(());
    }
    let mut union: HashSet<Value> = HashSet::new();
    for &x in &strict {
        if s.size(x) as usize >= strict.len() {
            return Ok(());
        }
        union.extend(s.values(x));
        if union.len() >= strict.len() {
            return Ok(());
        }
    }
    Err(Wipeout)
}

pub struct AllDifferentProp {
    scope: Vec<VarId>,
    except: Option<Value>,
}

impl AllDifferentProp {
    pub fn new(scope: &[VarId], except: Option<Value>) -> AllDifferentProp {
        AllDifferentProp { scope: scope.to_vec(), except }
    }
}

impl Propagator for AllDifferentProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        eliminate_singletons(s, &self.scope, self.except)?;
        pigeonhole(s, &self.scope, self.except)
    }
}

/// Pairwise list difference: when two lists agree on every position but one,
/// the remaining position must differ.
pub struct AllDifferentListProp {
    lists: Vec<Vec<VarId>>,
}

impl AllDifferentListProp {
    pub fn new(lists: &[Vec<VarId>]) -> AllDifferentListProp {
        AllDifferentListProp { lists: lists.to_vec() }
    }
}

impl Propagator for AllDifferentListProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        for a in 0..self.lists.len() {
            for b in a + 1..self.lists.len() {
                let (la, lb) = (&self.lists[a], &self.lists[b]);
                let mut open = None;
                let mut differ = false;
                for p in 0..la.len() {
                    let (x, y) = (la[p], lb[p]);
                    if x == y {
                        continue;
                    }
                    match (s.value(x), s.value(y)) {
                        (Some(u), Some(v)) if u == v => {}
                        (Some(_), Some(_)) => {
                            differ = true;
                            break;
                        }
                        _ => {
                            if s.max(x) < s.min(y) || s.max(y) < s.min(x) {
                                differ = true;
                                break;
                            }
                            if open.is_some() {
                                open = None;
                                differ = true;
                                break;
                            }
                            open = Some(p);
                        }
                    }
                }
                if differ {
                    continue;
                }
                match open {
                    None => return Err(Wipeout),
                    Some(p) => {
                        let (x, y) = (la[p], lb[p]);
                        if let Some(u) = s.value(x) {
                            s.remove(y, u)?;
                        } else if let Some(v) = s.value(y) {
                            s.remove(x, v)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Successor-list circuit where self-loops mark nodes left out.
pub struct CircuitProp {
    scope: Vec<VarId>,
}

impl CircuitProp {
    pub fn new(scope: &[VarId]) -> CircuitProp {
        CircuitProp { scope: scope.to_vec() }
    }
}

impl Propagator for CircuitProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        let n = self.scope.len();
        for &x in &self.scope {
            s.set_min(x, 0)?;
            s.set_max(x, n as Value - 1)?;
        }
        eliminate_singletons(s, &self.scope, None)?;
        pigeonhole(s, &self.scope, None)?;
        let succ = |s: &DomainStore, i: usize| s.value(self.scope[i]).map(|v| v as usize);
        // a node entered from elsewhere is active
        for i in 0..n {
            if let Some(j) = succ(s, i) {
                if j != i {
                    s.remove(self.scope[j], j as Value)?;
                }
            }
        }
        let mandatory: Vec<bool> = (0..n).map(|i| !s.contains(self.scope[i], i as Value)).collect();
        let mut has_pred = vec![false; n];
        for i in 0..n {
            if let Some(j) = succ(s, i) {
                if j != i {
                    has_pred[j] = true;
                }
            }
        }
        for start in 0..n {
            match succ(s, start) {
                Some(j) if j != start => {}
                _ => continue,
            }
            let mut chain = vec![start];
            let mut cur = start;
            let mut closed = false;
            while let Some(next) = succ(s, cur) {
                if next == start {
                    closed = true;
                    break;
                }
                if next == cur || chain.contains(&next) {
                    return Err(Wipeout);
                }
                chain.push(next);
                cur = next;
            }
            if closed {
                for k in 0..n {
                    if !chain.contains(&k) {
                        s.assign(self.scope[k], k as Value)?;
                    }
                }
                return Ok(());
            }
            // open path start -> ... -> cur: closing it now must cover every mandatory node
            if !has_pred[start] && (0..n).any(|k| mandatory[k] && !chain.contains(&k)) {
                s.remove(self.scope[cur], start as Value)?;
            }
        }
        Ok(())
    }
}
