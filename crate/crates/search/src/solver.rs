use std::time::Duration;

use thiserror::Error;
use xcore::{
    check_instance, Assignment, CheckError, CmpOp, Condition, Constraint, Expr, Instance, ModelError, Objective,
    ObjectiveForm, Sense, Status, Term, Value,
};
use xcore_propagate::{DomainStore, Engine, PropagationResult};

use crate::heuristic::{luby, select_weighted, Decision, Heuristic, VarOrder};
use crate::limits::{Clock, LimitHit, Limits};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("internal error: solution rejected by the checker (violated {violated:?}, out of domain {out_of_domain:?})")]
    Unverified { violated: Vec<usize>, out_of_domain: Vec<xcore::VarId> },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Stats {
    pub nodes: u64,
    pub fails: u64,
    pub restarts: u64,
    pub solutions: u64,
    pub propagations: u64,
    pub wall: Duration,
    pub cpu: Duration,
    /// The limit that ended the search, if any.
    pub limit: Option<LimitHit>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub status: Status,
    pub solution: Option<Assignment>,
    /// Objective value of `solution` for optimization runs.
    pub bound: Option<Value>,
    /// Every incumbent as (wall time since start, objective value).
    pub bound_log: Vec<(Duration, Value)>,
    pub stats: Stats,
}

/// Runs `solve_decision` or `solve_optimize` depending on the instance.
pub fn solve(inst: &Instance, limits: &Limits, h: &Heuristic) -> Result<SolveOutcome, SolveError> {
    if inst.is_cop() {
        solve_optimize(inst, limits, h)
    } else {
        solve_decision(inst, limits, h)
    }
}

pub fn solve_decision(inst: &Instance, limits: &Limits, h: &Heuristic) -> Result<SolveOutcome, SolveError> {
    if inst.is_cop() {
        return Err(SolveError::Usage("instance has an objective; use optimization".into()));
    }
    let mut tree = Tree::new(inst, limits, h)?;
    let (status, solution) = match tree.next() {
        Step::Solution(values) => {
            let a = verify(inst, values)?;
            tree.stats.solutions += 1;
            (Status::Sat, Some(a))
        }
        Step::Exhausted => (Status::Unsat, None),
        Step::Limit => (Status::Unknown, None),
    };
    Ok(SolveOutcome { status, solution, bound: None, bound_log: Vec::new(), stats: tree.finish() })
}

pub fn solve_optimize(inst: &Instance, limits: &Limits, h: &Heuristic) -> Result<SolveOutcome, SolveError> {
    let Some(obj) = inst.objective.clone() else {
        return Err(SolveError::Usage("instance has no objective; use satisfaction".into()));
    };
    let mut tree = Tree::new(inst, limits, h)?;
    let mut best: Option<(Assignment, Value)> = None;
    let mut log = Vec::new();
    let status = loop {
        match tree.next() {
            Step::Solution(values) => {
                let a = verify(inst, values)?;
                let value = obj.evaluate(&a.0).map_err(CheckError::from)?;
                if best.as_ref().is_some_and(|(_, b)| !obj.sense.better(value, *b)) {
                    continue;
                }
                tree.stats.solutions += 1;
                log.push((tree.clock.wall(), value));
                best = Some((a, value));
                match improvement(&obj, value) {
                    Some(c) => tree.tighten(&c),
                    // nothing can beat the extreme value
                    None => break Status::Opt,
                }
            }
            Step::Exhausted => break if best.is_some() { Status::Opt } else { Status::Unsat },
            Step::Limit => break if best.is_some() { Status::Best } else { Status::Unknown },
        }
    };
    let stats = tree.finish();
    let (solution, bound) = match best {
        Some((a, v)) => (Some(a), Some(v)),
        None => (None, None),
    };
    Ok(SolveOutcome { status, solution, bound, bound_log: log, stats })
}

fn verify(inst: &Instance, values: Vec<Value>) -> Result<Assignment, SolveError> {
    let a = Assignment(values);
    let v = check_instance(inst, &a)?;
    if !v.ok {
        return Err(SolveError::Unverified { violated: v.violated, out_of_domain: v.out_of_domain });
    }
    Ok(a)
}

/// Constraint requiring a strictly better objective than `value`.
fn improvement(obj: &Objective, value: Value) -> Option<Constraint> {
    let minimize = obj.sense == Sense::Minimize;
    if (minimize && value == Value::MIN) || (!minimize && value == Value::MAX) {
        return None;
    }
    let (op, target) = if minimize { (CmpOp::Lt, value) } else { (CmpOp::Gt, value) };
    let cmp = |e: Expr| {
        if minimize {
            Expr::lt(e, Expr::cst(target))
        } else {
            Expr::gt(e, Expr::cst(target))
        }
    };
    Some(match &obj.form {
        ObjectiveForm::Var(v) => Constraint::Sum { scope: vec![*v], coeffs: vec![1], condition: Condition::Cmp(op, Term::Val(target)) },
        ObjectiveForm::Sum { scope, coeffs } => {
            Constraint::Sum { scope: scope.clone(), coeffs: coeffs.clone(), condition: Condition::Cmp(op, Term::Val(target)) }
        }
        // below a maximum means every term below; above it means some term above
        ObjectiveForm::Maximum(es) if minimize => Constraint::Intension(Expr::and(es.iter().cloned().map(cmp).collect())),
        ObjectiveForm::Maximum(es) => Constraint::Intension(Expr::or(es.iter().cloned().map(cmp).collect())),
        ObjectiveForm::Minimum(es) if minimize => Constraint::Intension(Expr::or(es.iter().cloned().map(cmp).collect())),
        ObjectiveForm::Minimum(es) => Constraint::Intension(Expr::and(es.iter().cloned().map(cmp).collect())),
        ObjectiveForm::Expr(e) => Constraint::Intension(cmp(e.clone())),
    })
}

enum Step {
    Solution(Vec<Value>),
    Exhausted,
    Limit,
}

struct Frame {
    decision: Decision,
    right: bool,
}

struct Tree<'a> {
    engine: Engine,
    store: DomainStore,
    h: &'a Heuristic,
    limits: &'a Limits,
    clock: Clock,
    stats: Stats,
    scopes: Vec<Vec<usize>>,
    var_weight: Vec<f64>,
    stack: Vec<Frame>,
    root_failed: bool,
    at_solution: bool,
    bound: Option<usize>,
    luby_index: u64,
    fails_since_restart: u64,
}

impl<'a> Tree<'a> {
    fn new(inst: &Instance, limits: &'a Limits, h: &'a Heuristic) -> Result<Tree<'a>, SolveError> {
        if !limits.is_valid() {
            return Err(SolveError::Usage("no limit given; pass one or mark the run unbounded".into()));
        }
        inst.validate()?;
        let clock = Clock::start();
        let mut store = DomainStore::from_instance(inst);
        let mut engine = Engine::from_instance(inst);
        let scopes: Vec<Vec<usize>> =
            inst.constraints.iter().map(|p| p.constraint.scope().iter().map(|v| v.index()).collect()).collect();
        let mut var_weight = vec![0.0; inst.n_vars()];
        for s in &scopes {
            for &v in s {
                var_weight[v] += 1.0;
            }
        }
        let root_failed = matches!(engine.fixpoint(&mut store), PropagationResult::Inconsistent(_));
        Ok(Tree {
            engine,
            store,
            h,
            limits,
            clock,
            stats: Stats::default(),
            scopes,
            var_weight,
            stack: Vec::new(),
            root_failed,
            at_solution: false,
            bound: None,
            luby_index: 1,
            fails_since_restart: 0,
        })
    }

    fn finish(mut self) -> Stats {
        self.stats.wall = self.clock.wall();
        self.stats.cpu = self.clock.cpu();
        self.stats.propagations = self.engine.runs();
        self.stats
    }

    /// Installs or replaces the objective bound constraint.
    fn tighten(&mut self, c: &Constraint) {
        match self.bound {
            Some(id) => self.engine.replace(id, c),
            None => self.bound = Some(self.engine.add(c)),
        }
    }

    fn next(&mut self) -> Step {
        if self.root_failed {
            return Step::Exhausted;
        }
        if std::mem::take(&mut self.at_solution) && !self.backtrack() {
            return Step::Exhausted;
        }
        if self.stack.is_empty() && !self.propagate_bound() {
            self.root_failed = true;
            return Step::Exhausted;
        }
        loop {
            if let Some(hit) = self.clock.exceeded(self.limits, self.stats.nodes) {
                self.stats.limit = Some(hit);
                return Step::Limit;
            }
            if let Some(base) = self.h.restart_base {
                if self.fails_since_restart >= base.saturating_mul(luby(self.luby_index)) {
                    self.restart();
                    if !self.propagate_bound() {
                        self.root_failed = true;
                        return Step::Exhausted;
                    }
                }
            }
            let weights: &[f64] = if self.h.order == VarOrder::DomWdeg { &self.var_weight } else { &[] };
            match select_weighted(self.h, &self.store, weights) {
                None => {
                    self.at_solution = true;
                    let values = (0..self.store.n_vars()).map(|i| self.store.min(xcore::VarId(i as u32))).collect();
                    return Step::Solution(values);
                }
                Some(d) => {
                    self.stats.nodes += 1;
                    self.store.push_level();
                    self.stack.push(Frame { decision: d, right: false });
                    if !self.apply(d, false) && !self.backtrack() {
                        return Step::Exhausted;
                    }
                }
            }
        }
    }

    fn restart(&mut self) {
        while self.stack.pop().is_some() {
            self.store.pop_level();
        }
        self.stats.restarts += 1;
        self.luby_index += 1;
        self.fails_since_restart = 0;
    }

    fn propagate_bound(&mut self) -> bool {
        match self.bound {
            Some(id) => self.check(|e, s| e.fixpoint_one(s, id)),
            None => true,
        }
    }

    fn check(&mut self, run: impl FnOnce(&mut Engine, &mut DomainStore) -> PropagationResult) -> bool {
        match run(&mut self.engine, &mut self.store) {
            PropagationResult::Inconsistent(id) => {
                self.fail(Some(id));
                false
            }
            _ => true,
        }
    }

    fn fail(&mut self, culprit: Option<usize>) {
        self.stats.fails += 1;
        self.fails_since_restart += 1;
        if let Some(scope) = culprit.and_then(|id| self.scopes.get(id)) {
            for &v in scope {
                self.var_weight[v] += 1.0;
            }
        }
    }

    fn apply(&mut self, d: Decision, right: bool) -> bool {
        let r = if right { self.store.remove(d.var, d.value) } else { self.store.assign(d.var, d.value) };
        if r.is_err() {
            self.fail(None);
            return false;
        }
        let var = d.var;
        self.check(|e, s| e.fixpoint_from(s, &[var])) && self.propagate_bound()
    }

    /// Undoes decisions until an untried right branch propagates; false when none is left.
    fn backtrack(&mut self) -> bool {
        while let Some(f) = self.stack.pop() {
            self.store.pop_level();
            if f.right {
                continue;
            }
            self.store.push_level();
            self.stack.push(Frame { decision: f.decision, right: true });
            if self.apply(f.decision, true) {
                return true;
            }
        }
        false
    }
}
