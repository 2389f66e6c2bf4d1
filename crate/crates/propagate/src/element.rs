//! Element, channel and instantiation.

use std::collections::BTreeSet;

use xcore::{ChannelTarget, Constraint, Term, Value, VarId};

use crate::alldiff::eliminate_singletons;
use crate::engine::{Local, Propagator};
use crate::store::{DomainStore, PResult, Wipeout};

/// Channel scopes small enough to filter by full enumeration.
const CHANNEL_BUDGET: u64 = 4096;

fn term_contains(s: &DomainStore, t: &Term, v: Value) -> bool {
    match t {
        Term::Val(k) => *k == v,
        Term::Var(x) => s.contains(*x, v),
    }
}

fn term_values(s: &DomainStore, t: &Term) -> Vec<Value> {
    match t {
        Term::Val(k) => vec![*k],
        Term::Var(x) => s.values(*x),
    }
}

fn term_intersect(s: &mut DomainStore, t: &Term, keep: &[Value]) -> PResult {
    match t {
        Term::Val(k) => {
            if keep.binary_search(k).is_ok() {
                Ok(())
            } else {
                Err(Wipeout)
            }
        }
        Term::Var(x) => s.intersect_sorted(*x, keep).map(|_| ()),
    }
}

/// `list[index] = value`.
pub struct ElementProp {
    list: Vec<Term>,
    index: VarId,
    value: Term,
}

impl ElementProp {
    pub fn new(list: &[Term], index: VarId, value: &Term) -> ElementProp {
        ElementProp { list: list.to_vec(), index, value: *value }
    }
}

impl Propagator for ElementProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        s.set_min(self.index, 0)?;
        s.set_max(self.index, self.list.len() as Value - 1)?;
        let value_dom = term_values(s, &self.value);
        let mut idx = Vec::new();
        let mut reach: BTreeSet<Value> = BTreeSet::new();
        for i in s.values(self.index) {
            let t = &self.list[i as usize];
            let common: Vec<Value> = value_dom.iter().copied().filter(|&v| term_contains(s, t, v)).collect();
            if !common.is_empty() {
                idx.push(i);
                reach.extend(common);
            }
        }
        s.intersect_sorted(self.index, &idx)?;
        let reach: Vec<Value> = reach.into_iter().collect();
        term_intersect(s, &self.value, &reach)?;
        if let Some(i) = s.value(self.index) {
            let t = self.list[i as usize];
            let vals = term_values(s, &self.value);
            term_intersect(s, &t, &vals)?;
            let vals = term_values(s, &t);
            term_intersect(s, &self.value, &vals)?;
        }
        Ok(())
    }
}

pub struct ChannelProp {
    list: Vec<VarId>,
    target: ChannelTarget,
    local: Local,
}

impl ChannelProp {
    pub fn new(c: &Constraint, list: &[VarId], target: &ChannelTarget) -> ChannelProp {
        ChannelProp { list: list.to_vec(), target: target.clone(), local: Local::new(c) }
    }

    /// `xs[i] = j` needs `ys[j] = i` possible; with `both`, the converse too.
    fn link(s: &mut DomainStore, xs: &[VarId], ys: &[VarId], both: bool) -> PResult {
        let (n, m) = (xs.len() as Value, ys.len() as Value);
        for &x in xs {
            s.set_min(x, 0)?;
            s.set_max(x, m - 1)?;
        }
        if both {
            for &y in ys {
                s.set_min(y, 0)?;
                s.set_max(y, n - 1)?;
            }
        }
        loop {
            let before = s.changes();
            for (i, &x) in xs.iter().enumerate() {
                let keep: Vec<Value> = s.values(x).into_iter().filter(|&j| s.contains(ys[j as usize], i as Value)).collect();
                s.intersect_sorted(x, &keep)?;
                if let Some(j) = s.value(x) {
                    s.assign(ys[j as usize], i as Value)?;
                }
            }
            if both {
                for (j, &y) in ys.iter().enumerate() {
                    let keep: Vec<Value> =
                        s.values(y).into_iter().filter(|&i| s.contains(xs[i as usize], j as Value)).collect();
                    s.intersect_sorted(y, &keep)?;
                }
                eliminate_singletons(s, ys, None)?;
            }
            eliminate_singletons(s, xs, None)?;
            if s.changes() == before {
                return Ok(());
            }
        }
    }
}

impl Propagator for ChannelProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        match &self.target {
            ChannelTarget::SelfInverse => {
                let xs = self.list.clone();
                ChannelProp::link(s, &xs, &xs, true)?;
            }
            ChannelTarget::List(ys) => {
                let both = ys.len() == self.list.len();
                ChannelProp::link(s, &self.list.clone(), &ys.clone(), both)?;
            }
            ChannelTarget::Value(k) => {
                let k = *k;
                let n = self.list.len() as Value;
                for &x in &self.list {
                    s.set_min(x, 0)?;
                    s.set_max(x, 1)?;
                }
                s.set_min(k, 0)?;
                s.set_max(k, n - 1)?;
                if let Some(i) = self.list.iter().position(|&x| s.value(x) == Some(1)) {
                    s.assign(k, i as Value)?;
                }
                let keep: Vec<Value> =
                    s.values(k).into_iter().filter(|&i| s.contains(self.list[i as usize], 1)).collect();
                s.intersect_sorted(k, &keep)?;
                for (i, &x) in self.list.iter().enumerate() {
                    if !s.contains(k, i as Value) {
                        s.remove(x, 1)?;
                    }
                }
                if let Some(i) = s.value(k) {
                    for (j, &x) in self.list.iter().enumerate() {
                        s.assign(x, (j as Value == i) as Value)?;
                    }
                }
            }
        }
        self.local.enumerate(s, CHANNEL_BUDGET)?;
        Ok(())
    }
}

pub struct InstantiationProp {
    scope: Vec<VarId>,
    values: Vec<Value>,
}

impl InstantiationProp {
    pub fn new(scope: &[VarId], values: &[Value]) -> InstantiationProp {
        InstantiationProp { scope: scope.to_vec(), values: values.to_vec() }
    }
}

impl Propagator for InstantiationProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        for (&x, &v) in self.scope.iter().zip(&self.values) {
            s.assign(x, v)?;
        }
        Ok(())
    }
}
