//! Constraint-oriented propagation queue.

use std::collections::{BTreeSet, HashMap, VecDeque};

use xcore::{check_constraint, Constraint, Instance, Value, VarId};

use crate::build::make_propagator;
use crate::store::{DomainStore, PResult, Wipeout};

/// A filtering algorithm for one constraint.
pub trait Propagator: Send {
    /// Removes unsupported values. Must never remove a value that belongs to
    /// some solution of the constraint within the current domains.
    fn propagate(&mut self, s: &mut DomainStore) -> PResult;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropagationResult {
    /// Nothing changed.
    Fixpoint,
    /// Some domains shrank; the set is never empty.
    Changed(BTreeSet<VarId>),
    /// The given constraint has no solution left.
    Inconsistent(usize),
}

/// Largest domain tested value by value once a single variable is left.
const LAST_VAR_LIMIT: u64 = 4096;

/// A constraint rewritten over its own scope, for direct checks.
pub(crate) struct Local {
    pub scope: Vec<VarId>,
    pub constraint: Constraint,
}

impl Local {
    pub fn new(c: &Constraint) -> Local {
        let scope = c.scope();
        let index: HashMap<VarId, usize> = scope.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let constraint = c.map_vars(&|v| VarId(index[&v] as u32));
        Local { scope, constraint }
    }

    pub fn holds(&self, values: &[Value]) -> bool {
        check_constraint(&self.constraint, values)
    }

    /// Exact filtering by enumerating the cartesian product of the current
    /// domains. Returns `Ok(false)` without touching anything when the
    /// product exceeds `budget`.
    pub fn enumerate(&self, s: &mut DomainStore, budget: u64) -> Result<bool, Wipeout> {
        let mut product: u64 = 1;
        for &v in &self.scope {
            product = product.saturating_mul(s.size(v));
            if product > budget {
                return Ok(false);
            }
        }
        let doms: Vec<Vec<Value>> = self.scope.iter().map(|&v| s.values(v)).collect();
        let mut supported: Vec<Vec<bool>> = doms.iter().map(|d| vec![false; d.len()]).collect();
        let k = doms.len();
        let mut idx = vec![0usize; k];
        let mut tuple: Vec<Value> = doms.iter().map(|d| d[0]).collect();
        'outer: loop {
            if self.holds(&tuple) {
                for p in 0..k {
                    supported[p][idx[p]] = true;
                }
            }
            let mut p = k;
            loop {
                if p == 0 {
                    break 'outer;
                }
                p -= 1;
                idx[p] += 1;
                if idx[p] < doms[p].len() {
                    tuple[p] = doms[p][idx[p]];
                    break;
                }
                idx[p] = 0;
                tuple[p] = doms[p][0];
            }
        }
        for p in 0..k {
            let keep: Vec<Value> =
                doms[p].iter().zip(&supported[p]).filter(|(_, &ok)| ok).map(|(&v, _)| v).collect();
            s.intersect_sorted(self.scope[p], &keep)?;
        }
        Ok(true)
    }

    /// Completeness floor plus value-by-value filtering of a last free variable.
    pub fn finish(&self, s: &mut DomainStore) -> PResult {
        let mut free = None;
        for (i, &v) in self.scope.iter().enumerate() {
            if !s.is_fixed(v) {
                if free.is_some() {
                    return Ok(());
                }
                free = Some(i);
            }
        }
        let mut tuple: Vec<Value> = self.scope.iter().map(|&v| s.min(v)).collect();
        match free {
            None => {
                if self.holds(&tuple) {
                    Ok(())
                } else {
                    Err(Wipeout)
                }
            }
            Some(i) => {
                let v = self.scope[i];
                if s.size(v) > LAST_VAR_LIMIT {
                    return Ok(());
                }
                let mut keep = Vec::new();
                for x in s.values(v) {
                    tuple[i] = x;
                    if self.holds(&tuple) {
                        keep.push(x);
                    }
                }
                s.intersect_sorted(v, &keep).map(|_| ())
            }
        }
    }
}

struct Posted {
    prop: Box<dyn Propagator>,
    local: Local,
}

impl Posted {
    fn new(c: &Constraint) -> Posted {
        Posted { prop: make_propagator(c), local: Local::new(c) }
    }

    fn run(&mut self, s: &mut DomainStore) -> PResult {
        self.prop.propagate(s)?;
        self.local.finish(s)
    }
}

/// Propagation engine: FIFO of dirty constraints over a fixed constraint list.
pub struct Engine {
    posted: Vec<Posted>,
    watchers: Vec<Vec<usize>>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    runs: u64,
}

impl Engine {
    pub fn new(n_vars: usize, constraints: &[Constraint]) -> Engine {
        let mut e = Engine {
            posted: Vec::new(),
            watchers: vec![Vec::new(); n_vars],
            queue: VecDeque::new(),
            queued: Vec::new(),
            runs: 0,
        };
        for c in constraints {
            e.add(c);
        }
        e
    }

    pub fn from_instance(inst: &Instance) -> Engine {
        let cs: Vec<Constraint> = inst.constraints.iter().map(|p| p.constraint.clone()).collect();
        Engine::new(inst.n_vars(), &cs)
    }

    pub fn len(&self) -> usize {
        self.posted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.posted.is_empty()
    }

    /// Number of propagator executions so far.
    pub fn runs(&self) -> u64 {
        self.runs
    }

    pub fn add(&mut self, c: &Constraint) -> usize {
        let id = self.posted.len();
        let p = Posted::new(c);
        for &v in &p.local.scope {
            self.watchers[v.index()].push(id);
        }
        self.posted.push(p);
        self.queued.push(false);
        id
    }

    /// Replaces constraint `id`, keeping its id; the new constraint must have
    /// the same scope.
    pub fn replace(&mut self, id: usize, c: &Constraint) {
        let p = Posted::new(c);
        debug_assert_eq!(p.local.scope, self.posted[id].local.scope);
        self.posted[id] = p;
    }

    fn enqueue(&mut self, id: usize) {
        if !self.queued[id] {
            self.queued[id] = true;
            self.queue.push_back(id);
        }
    }

    /// Runs every constraint to a common fixpoint.
    pub fn fixpoint(&mut self, s: &mut DomainStore) -> PropagationResult {
        for id in 0..self.posted.len() {
            self.enqueue(id);
        }
        self.drain(s)
    }

    /// Runs to fixpoint starting from the constraints watching `dirty`.
    pub fn fixpoint_from(&mut self, s: &mut DomainStore, dirty: &[VarId]) -> PropagationResult {
        for &v in dirty {
            for k in 0..self.watchers[v.index()].len() {
                let id = self.watchers[v.index()][k];
                self.enqueue(id);
            }
        }
        self.drain(s)
    }

    /// Runs only constraint `id` (and whatever it wakes up).
    pub fn fixpoint_one(&mut self, s: &mut DomainStore, id: usize) -> PropagationResult {
        self.enqueue(id);
        self.drain(s)
    }

    fn drain(&mut self, s: &mut DomainStore) -> PropagationResult {
        s.clear_touched();
        let mut changed = BTreeSet::new();
        while let Some(id) = self.queue.pop_front() {
            self.queued[id] = false;
            self.runs += 1;
            let r = self.posted[id].run(s);
            let touched = s.take_touched();
            if r.is_err() {
                for q in self.queue.drain(..) {
                    self.queued[q] = false;
                }
                return PropagationResult::Inconsistent(id);
            }
            for v in touched {
                changed.insert(v);
                for k in 0..self.watchers[v.index()].len() {
                    let w = self.watchers[v.index()][k];
                    self.enqueue(w);
                }
            }
        }
        if changed.is_empty() {
            PropagationResult::Fixpoint
        } else {
            PropagationResult::Changed(changed)
        }
    }
}

/// Filters the store with a single constraint, to its own fixpoint.
pub fn propagate_one(c: &Constraint, s: &mut DomainStore) -> PropagationResult {
    let mut e = Engine::new(s.n_vars(), std::slice::from_ref(c));
    e.fixpoint(s)
}

/// Filters the store with all constraints to a common fixpoint.
pub fn fixpoint(cs: &[Constraint], s: &mut DomainStore) -> PropagationResult {
    let mut e = Engine::new(s.n_vars(), cs);
    e.fixpoint(s)
}
