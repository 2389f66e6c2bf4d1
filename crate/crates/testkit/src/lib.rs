//! Random small constraint cases and naive reference predicates.
//!
//! Every case has at most four variables with at most four values each, so
//! all assignments can be enumerated. [`naive_holds`] is written directly from
//! the form definitions and shares no code with the checker under test.

pub mod models;

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use xcore::{
    Assignment, Automaton, BinLoads, BinaryOp, ChannelTarget, CmpOp, Condition, Constraint, ConstraintKind,
    Direction, Domain, Expr, Instance, InstanceBuilder, Mdd, NaryOp, Term, UnaryOp, Value, VarId, STAR,
};

/// A constraint over variables `0..domains.len()`.
#[derive(Clone, Debug)]
pub struct Case {
    pub domains: Vec<Domain>,
    pub constraint: Constraint,
}

impl Case {
    pub fn instance(&self) -> Instance {
        let mut b = InstanceBuilder::new();
        for (i, d) in self.domains.iter().enumerate() {
            b.var(format!("x{i}"), d.clone());
        }
        b.post(self.constraint.clone());
        b.build().expect("generated case must be a valid instance")
    }

    /// Every assignment in the cartesian product of the domains.
    pub fn assignments(&self) -> Vec<Vec<Value>> {
        cartesian(&self.domains)
    }

    /// Assignments accepted by the naive predicate.
    pub fn naive_solutions(&self) -> Vec<Vec<Value>> {
        self.assignments().into_iter().filter(|a| naive_holds(&self.constraint, a)).collect()
    }
}

pub fn cartesian(domains: &[Domain]) -> Vec<Vec<Value>> {
    let mut out = vec![Vec::with_capacity(domains.len())];
    for d in domains {
        let mut next = Vec::with_capacity(out.len() * d.size() as usize);
        for prefix in &out {
            for v in d.iter() {
                let mut t = prefix.clone();
                t.push(v);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

pub fn assignment(values: &[Value]) -> Assignment {
    Assignment(values.to_vec())
}

struct Gen<'a, R: Rng> {
    rng: &'a mut R,
    domains: Vec<Domain>,
}

impl<'a, R: Rng> Gen<'a, R> {
    /// Random non-empty subset of `lo..=hi` with at most four values.
    fn dom_in(&mut self, lo: Value, hi: Value) -> Domain {
        let mut all: Vec<Value> = (lo..=hi).collect();
        all.shuffle(self.rng);
        let k = self.rng.gen_range(1..=all.len().min(4));
        Domain::from_values(all[..k].iter().copied())
    }

    fn var_in(&mut self, lo: Value, hi: Value) -> VarId {
        let d = self.dom_in(lo, hi);
        self.push(d)
    }

    fn push(&mut self, d: Domain) -> VarId {
        self.domains.push(d);
        VarId(self.domains.len() as u32 - 1)
    }

    fn vars(&mut self, n: usize, lo: Value, hi: Value) -> Vec<VarId> {
        (0..n).map(|_| self.var_in(lo, hi)).collect()
    }

    fn n(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    fn val(&mut self, lo: Value, hi: Value) -> Value {
        self.rng.gen_range(lo..=hi)
    }

    fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn cmp(&mut self) -> CmpOp {
        *[CmpOp::Lt, CmpOp::Le, CmpOp::Eq, CmpOp::Ne, CmpOp::Ge, CmpOp::Gt].choose(self.rng).unwrap()
    }

    fn direction(&mut self) -> Direction {
        if self.coin(0.5) {
            Direction::Increasing
        } else {
            Direction::Decreasing
        }
    }

    fn value_set(&mut self, lo: Value, hi: Value) -> Domain {
        self.dom_in(lo, hi)
    }

    /// Random condition; may add one variable when `allow_var`.
    fn condition(&mut self, lo: Value, hi: Value, allow_var: bool) -> Condition {
        match self.n(0, 5) {
            0 => Condition::In(self.value_set(lo, hi)),
            1 => Condition::NotIn(self.value_set(lo, hi)),
            2 | 3 if allow_var => {
                let op = self.cmp();
                Condition::Cmp(op, Term::Var(self.var_in(lo, hi)))
            }
            _ => {
                let op = self.cmp();
                Condition::Cmp(op, Term::Val(self.val(lo, hi)))
            }
        }
    }

    fn int_expr(&mut self, scope: &[VarId], depth: usize) -> Expr {
        let leaf = depth == 0 || self.coin(0.3);
        if leaf {
            return if self.coin(0.75) {
                Expr::Var(*scope.choose(self.rng).unwrap())
            } else {
                Expr::Const(self.val(-2, 3))
            };
        }
        let d = depth - 1;
        match self.n(0, 10) {
            0 => {
                let k = self.n(2, 3);
                Expr::add((0..k).map(|_| self.int_expr(scope, d)).collect())
            }
            1 => Expr::sub(self.int_expr(scope, d), self.int_expr(scope, d)),
            2 => Expr::nary(NaryOp::Mul, vec![self.int_expr(scope, d), self.int_expr(scope, d)]),
            3 => Expr::binary(BinaryOp::Div, self.int_expr(scope, d), self.int_expr(scope, d)),
            4 => Expr::binary(BinaryOp::Mod, self.int_expr(scope, d), self.int_expr(scope, d)),
            5 => Expr::binary(BinaryOp::Dist, self.int_expr(scope, d), self.int_expr(scope, d)),
            6 => Expr::unary(UnaryOp::Abs, self.int_expr(scope, d)),
            7 => Expr::unary(UnaryOp::Neg, self.int_expr(scope, d)),
            8 => Expr::nary(NaryOp::Min, vec![self.int_expr(scope, d), self.int_expr(scope, d)]),
            9 => Expr::nary(NaryOp::Max, vec![self.int_expr(scope, d), self.int_expr(scope, d)]),
            _ => Expr::ift(self.bool_expr(scope, d), self.int_expr(scope, d), self.int_expr(scope, d)),
        }
    }

    fn comparison(&mut self, scope: &[VarId], depth: usize) -> Expr {
        let op = *[BinaryOp::Lt, BinaryOp::Le, BinaryOp::Eq, BinaryOp::Ne, BinaryOp::Ge, BinaryOp::Gt]
            .choose(self.rng)
            .unwrap();
        Expr::binary(op, self.int_expr(scope, depth), self.int_expr(scope, depth))
    }

    fn bool_expr(&mut self, scope: &[VarId], depth: usize) -> Expr {
        if depth == 0 {
            return self.comparison(scope, 0);
        }
        let d = depth - 1;
        match self.n(0, 7) {
            0 | 1 => self.comparison(scope, d),
            2 => Expr::and(vec![self.bool_expr(scope, d), self.bool_expr(scope, d)]),
            3 => Expr::or(vec![self.bool_expr(scope, d), self.bool_expr(scope, d)]),
            4 => Expr::unary(UnaryOp::Not, self.bool_expr(scope, d)),
            5 => Expr::imp(self.bool_expr(scope, d), self.bool_expr(scope, d)),
            6 => Expr::binary(BinaryOp::Iff, self.bool_expr(scope, d), self.bool_expr(scope, d)),
            _ => {
                let set = self.value_set(-2, 4).values();
                Expr::In(Box::new(self.int_expr(scope, d)), set)
            }
        }
    }

    fn table(&mut self, arity: usize, starred: bool) -> Vec<Vec<Value>> {
        let k = self.n(0, 7);
        let mut ts: Vec<Vec<Value>> = (0..k)
            .map(|_| {
                (0..arity)
                    .map(|_| if starred && self.coin(0.25) { STAR } else { self.val(-1, 3) })
                    .collect()
            })
            .collect();
        ts.sort();
        ts.dedup();
        ts
    }

    fn automaton(&mut self) -> Automaton {
        let ns = self.n(1, 3);
        let mut transitions = Vec::new();
        for q in 0..ns {
            for v in 0..3 {
                if self.coin(0.6) {
                    transitions.push((q, v, self.n(0, ns - 1)));
                }
            }
        }
        let mut finals: Vec<usize> = (0..ns).filter(|_| self.coin(0.5)).collect();
        if finals.is_empty() {
            finals.push(ns - 1);
        }
        Automaton { states: (0..ns).map(|q| format!("q{q}")).collect(), start: 0, finals, transitions }
    }

    /// Layered diagram where every node has an incoming and an outgoing arc.
    fn mdd(&mut self, arity: usize) -> Mdd {
        let mut layers: Vec<Vec<usize>> = vec![vec![0]];
        let mut count = 1;
        for l in 1..=arity {
            let width = if l == arity { 1 } else { self.n(1, 2) };
            layers.push((count..count + width).collect());
            count += width;
        }
        let mut transitions = Vec::new();
        for l in 0..arity {
            let (src, dst) = (layers[l].clone(), layers[l + 1].clone());
            let mut used: Vec<HashSet<Value>> = vec![HashSet::new(); src.len()];
            let free_value = |g: &mut Self, s: usize, used: &mut Vec<HashSet<Value>>| -> Option<Value> {
                let options: Vec<Value> = (0..4).filter(|v| !used[s].contains(v)).collect();
                let v = *options.choose(g.rng)?;
                used[s].insert(v);
                Some(v)
            };
            for &d in &dst {
                let s = self.n(0, src.len() - 1);
                if let Some(v) = free_value(self, s, &mut used) {
                    transitions.push((src[s], v, d));
                }
            }
            for s in 0..src.len() {
                let extra = self.n(if used[s].is_empty() { 1 } else { 0 }, 2);
                for _ in 0..extra {
                    let d = *dst.choose(self.rng).unwrap();
                    if let Some(v) = free_value(self, s, &mut used) {
                        transitions.push((src[s], v, d));
                    }
                }
            }
        }
        Mdd { nodes: (0..count).map(|i| format!("n{i}")).collect(), root: 0, terminal: count - 1, transitions }
    }

    fn constraint(&mut self, kind: ConstraintKind) -> Constraint {
        match kind {
            ConstraintKind::Intension => {
                let n = self.n(1, 3);
                let scope = self.vars(n, -1, 3);
                Constraint::Intension(self.bool_expr(&scope, 2))
            }
            ConstraintKind::Extension => {
                let n = self.n(1, 3);
                let scope = self.vars(n, -1, 3);
                let starred = self.coin(0.5);
                Constraint::Extension {
                    tuples: Arc::new(self.table(n, starred)),
                    scope,
                    supports: self.coin(0.5),
                    starred,
                }
            }
            ConstraintKind::Regular => {
                let n = self.n(1, 4);
                let scope = self.vars(n, 0, 2);
                Constraint::Regular { scope, automaton: Arc::new(self.automaton()) }
            }
            ConstraintKind::Mdd => {
                let n = self.n(1, 3);
                let scope = self.vars(n, 0, 3);
                Constraint::Mdd { diagram: Arc::new(self.mdd(n)), scope }
            }
            ConstraintKind::AllDifferent => {
                let n = self.n(2, 4);
                let scope = self.vars(n, 0, 3);
                Constraint::AllDifferent { scope, except: if self.coin(0.3) { Some(0) } else { None } }
            }
            ConstraintKind::AllDifferentList => {
                let (k, len) = *[(2, 1), (2, 2), (3, 1), (4, 1)].choose(self.rng).unwrap();
                Constraint::AllDifferentList { lists: (0..k).map(|_| self.vars(len, 0, 2)).collect() }
            }
            ConstraintKind::AllEqual => {
                let n = self.n(1, 4);
                Constraint::AllEqual { scope: self.vars(n, 0, 3) }
            }
            ConstraintKind::Ordered => {
                let n = self.n(2, 4);
                Constraint::Ordered { scope: self.vars(n, 0, 3), strict: self.coin(0.5), direction: self.direction() }
            }
            ConstraintKind::Lex => {
                let (k, len) = *[(2, 1), (2, 2), (3, 1)].choose(self.rng).unwrap();
                Constraint::Lex {
                    lists: (0..k).map(|_| self.vars(len, 0, 2)).collect(),
                    strict: self.coin(0.5),
                    direction: self.direction(),
                }
            }
            ConstraintKind::Precedence => {
                let n = self.n(2, 4);
                let scope = self.vars(n, 0, 3);
                let mut values: Vec<Value> = (0..4).collect();
                values.shuffle(self.rng);
                values.truncate(self.n(2, 3));
                Constraint::Precedence { scope, values, covered: self.coin(0.3) }
            }
            ConstraintKind::Sum => {
                let n = self.n(1, 3);
                let scope = self.vars(n, -1, 3);
                let coeffs = (0..n).map(|_| self.val(-2, 2)).collect();
                Constraint::Sum { scope, coeffs, condition: self.condition(-2, 5, true) }
            }
            ConstraintKind::Count => {
                let n = self.n(1, 3);
                let scope = self.vars(n, 0, 3);
                let values = self.value_set(0, 3).values();
                Constraint::Count { scope, values, condition: self.condition(0, 3, true) }
            }
            ConstraintKind::NValues => {
                let n = self.n(1, 3);
                let scope = self.vars(n, 0, 3);
                Constraint::NValues { scope, condition: self.condition(0, 3, true) }
            }
            ConstraintKind::Cardinality => {
                let n = self.n(2, 4);
                let scope = self.vars(n, 0, 3);
                let values = self.value_set(0, 3).values();
                let occurs = values
                    .iter()
                    .map(|_| {
                        let lo = self.val(0, 2);
                        (lo, self.val(lo, n as Value))
                    })
                    .collect();
                Constraint::Cardinality { scope, values, occurs, closed: self.coin(0.3) }
            }
            ConstraintKind::Maximum | ConstraintKind::Minimum => {
                let n = self.n(1, 3);
                let scope = self.vars(n, -1, 3);
                let condition = self.condition(-1, 3, true);
                if kind == ConstraintKind::Maximum {
                    Constraint::Maximum { scope, condition }
                } else {
                    Constraint::Minimum { scope, condition }
                }
            }
            ConstraintKind::Element => {
                let len = self.n(1, 2);
                let list: Vec<Term> = (0..len)
                    .map(|_| if self.coin(0.6) { Term::Var(self.var_in(0, 3)) } else { Term::Val(self.val(0, 3)) })
                    .collect();
                let index = self.var_in(-1, len as Value);
                let value = if self.coin(0.7) { Term::Var(self.var_in(0, 3)) } else { Term::Val(self.val(0, 3)) };
                Constraint::Element { list, index, value }
            }
            ConstraintKind::Channel => match self.n(0, 2) {
                0 => {
                    let n = self.n(1, 4);
                    Constraint::Channel { list: self.vars(n, -1, n as Value), target: ChannelTarget::SelfInverse }
                }
                1 => {
                    let (n, m) = *[(1, 1), (1, 2), (2, 2), (1, 3)].choose(self.rng).unwrap();
                    let list = self.vars(n, -1, m as Value);
                    let other = self.vars(m, -1, n as Value);
                    Constraint::Channel { list, target: ChannelTarget::List(other) }
                }
                _ => {
                    let n = self.n(1, 3);
                    let list = self.vars(n, -1, 2);
                    let v = self.var_in(-1, n as Value);
                    Constraint::Channel { list, target: ChannelTarget::Value(v) }
                }
            },
            ConstraintKind::NoOverlap => {
                let (k, dims) = *[(2, 1), (3, 1), (4, 1), (2, 2)].choose(self.rng).unwrap();
                let origins = (0..k).map(|_| self.vars(dims, 0, 4)).collect();
                let lengths = (0..k).map(|_| (0..dims).map(|_| self.val(0, 3)).collect()).collect();
                Constraint::NoOverlap { origins, lengths, zero_ignored: self.coin(0.5) }
            }
            ConstraintKind::Cumulative => {
                let k = self.n(2, 3);
                let origins = self.vars(k, 0, 4);
                let lengths = (0..k).map(|_| self.val(0, 3)).collect();
                let heights = (0..k).map(|_| self.val(0, 3)).collect();
                let op = if self.coin(0.7) { CmpOp::Le } else { CmpOp::Lt };
                let rhs = if self.coin(0.3) { Term::Var(self.var_in(0, 5)) } else { Term::Val(self.val(0, 5)) };
                Constraint::Cumulative { origins, lengths, heights, condition: Condition::Cmp(op, rhs) }
            }
            ConstraintKind::BinPacking => {
                let n = self.n(2, 3);
                if self.coin(0.5) {
                    let scope = self.vars(n, 0, 3);
                    let sizes = (0..n).map(|_| self.val(0, 3)).collect();
                    let op = *[CmpOp::Le, CmpOp::Lt, CmpOp::Ge, CmpOp::Eq].choose(self.rng).unwrap();
                    let rhs = if self.coin(0.3) { Term::Var(self.var_in(0, 6)) } else { Term::Val(self.val(0, 6)) };
                    Constraint::BinPacking { scope, sizes, loads: BinLoads::Condition(Condition::Cmp(op, rhs)) }
                } else {
                    let bins = if n == 3 { 1 } else { self.n(1, 2) };
                    let scope = self.vars(n, -1, bins as Value);
                    let sizes: Vec<Value> = (0..n).map(|_| self.val(0, 3)).collect();
                    let loads = self.vars(bins, 0, 6);
                    Constraint::BinPacking { scope, sizes, loads: BinLoads::Loads(loads) }
                }
            }
            ConstraintKind::Knapsack => {
                let n = 2;
                let scope = self.vars(n, 0, 3);
                let weights = (0..n).map(|_| self.val(0, 3)).collect();
                let profits = (0..n).map(|_| self.val(0, 3)).collect();
                let limit = if self.coin(0.5) { Term::Var(self.var_in(0, 8)) } else { Term::Val(self.val(0, 8)) };
                Constraint::Knapsack { scope, weights, profits, limit, condition: self.condition(0, 10, true) }
            }
            ConstraintKind::Circuit => {
                let n = self.n(2, 4);
                Constraint::Circuit { scope: self.vars(n, 0, n as Value - 1) }
            }
            ConstraintKind::Instantiation => {
                let n = self.n(1, 4);
                let scope = self.vars(n, 0, 3);
                let values = (0..n).map(|_| self.val(0, 3)).collect();
                Constraint::Instantiation { scope, values }
            }
            ConstraintKind::Slide => {
                let n = self.n(3, 4);
                let scope = self.vars(n, 0, 3);
                let p = [VarId(0), VarId(1)];
                let template = match self.n(0, 3) {
                    0 => {
                        let op = *[BinaryOp::Lt, BinaryOp::Le, BinaryOp::Ne].choose(self.rng).unwrap();
                        Constraint::Intension(Expr::binary(op, Expr::Var(p[0]), Expr::Var(p[1])))
                    }
                    1 => Constraint::Sum {
                        scope: p.to_vec(),
                        coeffs: vec![1, 1],
                        condition: Condition::Cmp(self.cmp(), Term::Val(self.val(0, 6))),
                    },
                    2 => Constraint::AllDifferent { scope: p.to_vec(), except: None },
                    _ => Constraint::Extension {
                        scope: p.to_vec(),
                        tuples: Arc::new(self.table(2, false)),
                        supports: self.coin(0.5),
                        starred: false,
                    },
                };
                let circular = self.coin(0.5);
                let offset = self.n(1, 2);
                Constraint::Slide { scope, arity: 2, offset, circular, template: Box::new(template) }
            }
        }
    }
}

/// Random case of the given form.
pub fn random_case<R: Rng>(kind: ConstraintKind, rng: &mut R) -> Case {
    let mut g = Gen { rng, domains: Vec::new() };
    let constraint = g.constraint(kind);
    let case = Case { domains: g.domains, constraint };
    debug_assert!(case.domains.len() <= 4 && case.domains.iter().all(|d| d.size() <= 4));
    case
}

/// Every form exercised by the random corpus: the kernel plus the native list form.
pub fn all_kinds() -> Vec<ConstraintKind> {
    let mut v = ConstraintKind::KERNEL.to_vec();
    v.push(ConstraintKind::AllDifferentList);
    v
}

fn floor_div_i(a: i128, b: i128) -> i128 {
    let q = a / b;
    if a % b != 0 && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

/// Reference evaluator over `i128`; `None` when undefined.
pub fn naive_eval(e: &Expr, a: &[Value]) -> Option<i128> {
    let t = |x: bool| if x { 1 } else { 0 };
    Some(match e {
        Expr::Const(c) => *c as i128,
        Expr::Var(v) => a[v.index()] as i128,
        Expr::Unary(UnaryOp::Neg, x) => -naive_eval(x, a)?,
        Expr::Unary(UnaryOp::Abs, x) => naive_eval(x, a)?.abs(),
        Expr::Unary(UnaryOp::Not, x) => t(naive_eval(x, a)? == 0),
        Expr::Binary(BinaryOp::Imp, l, r) => {
            if naive_eval(l, a)? == 0 {
                1
            } else {
                t(naive_eval(r, a)? != 0)
            }
        }
        Expr::Binary(op, l, r) => {
            let x = naive_eval(l, a)?;
            let y = naive_eval(r, a)?;
            match op {
                BinaryOp::Sub => x - y,
                BinaryOp::Div if y == 0 => return None,
                BinaryOp::Div => floor_div_i(x, y),
                BinaryOp::Mod if y == 0 => return None,
                BinaryOp::Mod => x - y * floor_div_i(x, y),
                BinaryOp::Dist => (x - y).abs(),
                BinaryOp::Lt => t(x < y),
                BinaryOp::Le => t(x <= y),
                BinaryOp::Eq => t(x == y),
                BinaryOp::Ne => t(x != y),
                BinaryOp::Ge => t(x >= y),
                BinaryOp::Gt => t(x > y),
                BinaryOp::Iff => t((x == 0) == (y == 0)),
                BinaryOp::Imp => unreachable!(),
            }
        }
        Expr::Nary(NaryOp::And, xs) => {
            for x in xs {
                if naive_eval(x, a)? == 0 {
                    return Some(0);
                }
            }
            1
        }
        Expr::Nary(NaryOp::Or, xs) => {
            for x in xs {
                if naive_eval(x, a)? != 0 {
                    return Some(1);
                }
            }
            0
        }
        Expr::Nary(op, xs) => {
            let mut vals = Vec::new();
            for x in xs {
                vals.push(naive_eval(x, a)?);
            }
            match op {
                NaryOp::Add => vals.iter().sum(),
                NaryOp::Mul => vals.iter().product(),
                NaryOp::Min => *vals.iter().min()?,
                NaryOp::Max => *vals.iter().max()?,
                _ => unreachable!(),
            }
        }
        Expr::If(c, x, y) => {
            if naive_eval(c, a)? != 0 {
                naive_eval(x, a)?
            } else {
                naive_eval(y, a)?
            }
        }
        Expr::In(x, set) => {
            let v = naive_eval(x, a)?;
            t(set.iter().any(|&s| s as i128 == v))
        }
    })
}

fn cond(c: &Condition, lhs: i128, a: &[Value]) -> bool {
    match c {
        Condition::Cmp(op, rhs) => {
            let r = match rhs {
                Term::Val(v) => *v as i128,
                Term::Var(x) => a[x.index()] as i128,
            };
            match op {
                CmpOp::Lt => lhs < r,
                CmpOp::Le => lhs <= r,
                CmpOp::Eq => lhs == r,
                CmpOp::Ne => lhs != r,
                CmpOp::Ge => lhs >= r,
                CmpOp::Gt => lhs > r,
            }
        }
        Condition::In(d) => d.values().iter().any(|&v| v as i128 == lhs),
        Condition::NotIn(d) => !d.values().iter().any(|&v| v as i128 == lhs),
    }
}

fn term(t: &Term, a: &[Value]) -> Value {
    match t {
        Term::Val(v) => *v,
        Term::Var(x) => a[x.index()],
    }
}

fn word_reaches(start: usize, finals: &[usize], transitions: &[(usize, Value, usize)], word: &[Value]) -> bool {
    let mut current = vec![start];
    for &v in word {
        let mut next = Vec::new();
        for &(p, s, q) in transitions {
            if s == v && current.contains(&p) && !next.contains(&q) {
                next.push(q);
            }
        }
        current = next;
    }
    current.iter().any(|q| finals.contains(q))
}

fn before(x: Value, y: Value, strict: bool, dir: Direction) -> bool {
    let (x, y) = if dir == Direction::Increasing { (x, y) } else { (y, x) };
    if strict {
        x < y
    } else {
        x <= y
    }
}

/// Reference semantics of every form, straight from the definitions.
pub fn naive_holds(c: &Constraint, a: &[Value]) -> bool {
    let v = |x: &VarId| a[x.index()];
    match c {
        Constraint::Intension(e) => matches!(naive_eval(e, a), Some(r) if r != 0),
        Constraint::Extension { scope, tuples, supports, .. } => {
            let row: Vec<Value> = scope.iter().map(v).collect();
            let mut matched = false;
            for t in tuples.iter() {
                let mut ok = true;
                for k in 0..row.len() {
                    if t[k] != STAR && t[k] != row[k] {
                        ok = false;
                    }
                }
                matched |= ok;
            }
            matched == *supports
        }
        Constraint::Regular { scope, automaton } => {
            let w: Vec<Value> = scope.iter().map(v).collect();
            word_reaches(automaton.start, &automaton.finals, &automaton.transitions, &w)
        }
        Constraint::Mdd { scope, diagram } => {
            let w: Vec<Value> = scope.iter().map(v).collect();
            word_reaches(diagram.root, &[diagram.terminal], &diagram.transitions, &w)
        }
        Constraint::AllDifferent { scope, except } => {
            for i in 0..scope.len() {
                for j in i + 1..scope.len() {
                    let (x, y) = (v(&scope[i]), v(&scope[j]));
                    if x == y && Some(x) != *except {
                        return false;
                    }
                }
            }
            true
        }
        Constraint::AllDifferentList { lists } => {
            for i in 0..lists.len() {
                for j in i + 1..lists.len() {
                    if (0..lists[i].len()).all(|k| v(&lists[i][k]) == v(&lists[j][k])) {
                        return false;
                    }
                }
            }
            true
        }
        Constraint::AllEqual { scope } => scope.iter().all(|x| v(x) == v(&scope[0])),
        Constraint::Ordered { scope, strict, direction } => {
            (1..scope.len()).all(|i| before(v(&scope[i - 1]), v(&scope[i]), *strict, *direction))
        }
        Constraint::Lex { lists, strict, direction } => (1..lists.len()).all(|i| {
            let (p, q) = (&lists[i - 1], &lists[i]);
            for k in 0..p.len() {
                let (x, y) = (v(&p[k]), v(&q[k]));
                if x != y {
                    return before(x, y, true, *direction);
                }
            }
            !strict
        }),
        Constraint::Precedence { scope, values, covered } => {
            let w: Vec<Value> = scope.iter().map(v).collect();
            for k in 1..values.len() {
                for j in 0..w.len() {
                    if w[j] == values[k] && !w[..j].contains(&values[k - 1]) {
                        return false;
                    }
                }
            }
            !covered || values.iter().all(|x| w.contains(x))
        }
        Constraint::Sum { scope, coeffs, condition } => {
            let s: i128 = scope.iter().zip(coeffs).map(|(x, &c)| c as i128 * v(x) as i128).sum();
            cond(condition, s, a)
        }
        Constraint::Count { scope, values, condition } => {
            let n = scope.iter().filter(|x| values.iter().any(|&y| y == v(x))).count();
            cond(condition, n as i128, a)
        }
        Constraint::NValues { scope, condition } => {
            let mut w: Vec<Value> = scope.iter().map(v).collect();
            w.sort();
            w.dedup();
            cond(condition, w.len() as i128, a)
        }
        Constraint::Cardinality { scope, values, occurs, closed } => {
            if *closed && !scope.iter().all(|x| values.contains(&v(x))) {
                return false;
            }
            values.iter().zip(occurs).all(|(&val, &(lo, hi))| {
                let n = scope.iter().filter(|x| v(x) == val).count() as Value;
                n >= lo && n <= hi
            })
        }
        Constraint::Maximum { scope, condition } => {
            let m = scope.iter().map(v).fold(Value::MIN, Value::max);
            !scope.is_empty() && cond(condition, m as i128, a)
        }
        Constraint::Minimum { scope, condition } => {
            let m = scope.iter().map(v).fold(Value::MAX, Value::min);
            !scope.is_empty() && cond(condition, m as i128, a)
        }
        Constraint::Element { list, index, value } => {
            let i = v(index);
            (0..list.len() as Value).contains(&i) && term(&list[i as usize], a) == term(value, a)
        }
        Constraint::Channel { list, target } => {
            let xs: Vec<Value> = list.iter().map(v).collect();
            let n = xs.len() as Value;
            match target {
                ChannelTarget::SelfInverse => {
                    xs.iter().all(|x| (0..n).contains(x))
                        && (0..n).all(|i| (0..n).all(|j| (xs[i as usize] == j) == (xs[j as usize] == i)))
                }
                ChannelTarget::List(other) => {
                    let ys: Vec<Value> = other.iter().map(v).collect();
                    let m = ys.len() as Value;
                    let in_range = xs.iter().all(|x| (0..m).contains(x));
                    if n == m {
                        in_range
                            && ys.iter().all(|y| (0..n).contains(y))
                            && (0..n).all(|i| (0..m).all(|j| (xs[i as usize] == j) == (ys[j as usize] == i)))
                    } else {
                        in_range && (0..n).all(|i| (0..m).all(|j| xs[i as usize] != j || ys[j as usize] == i))
                    }
                }
                ChannelTarget::Value(k) => {
                    let k = v(k);
                    (0..n).contains(&k) && (0..n).all(|i| xs[i as usize] == if i == k { 1 } else { 0 })
                }
            }
        }
        Constraint::NoOverlap { origins, lengths, zero_ignored } => {
            for i in 0..origins.len() {
                for j in i + 1..origins.len() {
                    if *zero_ignored && (lengths[i].contains(&0) || lengths[j].contains(&0)) {
                        continue;
                    }
                    let mut apart = false;
                    for d in 0..origins[i].len() {
                        let (xi, xj) = (v(&origins[i][d]), v(&origins[j][d]));
                        if xi + lengths[i][d] <= xj || xj + lengths[j][d] <= xi {
                            apart = true;
                        }
                    }
                    if !apart {
                        return false;
                    }
                }
            }
            true
        }
        Constraint::Cumulative { origins, lengths, heights, condition } => {
            let starts: Vec<Value> = origins.iter().map(v).collect();
            let lo = starts.iter().copied().min().unwrap_or(0) - 1;
            let hi = starts.iter().zip(lengths).map(|(s, l)| s + l).max().unwrap_or(0);
            (lo..=hi).all(|t| {
                let used: i128 = (0..starts.len())
                    .filter(|&i| starts[i] <= t && t < starts[i] + lengths[i])
                    .map(|i| heights[i] as i128)
                    .sum();
                cond(condition, used, a)
            })
        }
        Constraint::BinPacking { scope, sizes, loads } => {
            let bins: Vec<Value> = scope.iter().map(v).collect();
            let load_of = |b: Value| -> i128 {
                bins.iter().zip(sizes).filter(|(&x, _)| x == b).map(|(_, &s)| s as i128).sum()
            };
            match loads {
                BinLoads::Condition(c) => bins.iter().all(|&b| cond(c, load_of(b), a)),
                BinLoads::Loads(ls) => {
                    bins.iter().all(|&b| b >= 0 && (b as usize) < ls.len())
                        && ls.iter().enumerate().all(|(b, l)| load_of(b as Value) == v(l) as i128)
                }
            }
        }
        Constraint::Knapsack { scope, weights, profits, limit, condition } => {
            let w: i128 = scope.iter().zip(weights).map(|(x, &c)| c as i128 * v(x) as i128).sum();
            let p: i128 = scope.iter().zip(profits).map(|(x, &c)| c as i128 * v(x) as i128).sum();
            w <= term(limit, a) as i128 && cond(condition, p, a)
        }
        Constraint::Circuit { scope } => {
            let s: Vec<Value> = scope.iter().map(v).collect();
            let n = s.len();
            if !s.iter().all(|&x| x >= 0 && (x as usize) < n) {
                return false;
            }
            let mut sorted = s.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != n {
                return false;
            }
            // count cycles of length >= 2 in the permutation
            let mut visited = vec![false; n];
            let mut long_cycles = 0;
            for i in 0..n {
                if visited[i] {
                    continue;
                }
                let mut len = 0;
                let mut j = i;
                while !visited[j] {
                    visited[j] = true;
                    j = s[j] as usize;
                    len += 1;
                }
                if len >= 2 {
                    long_cycles += 1;
                }
            }
            long_cycles == 1
        }
        Constraint::Instantiation { scope, values } => scope.iter().zip(values).all(|(x, &y)| v(x) == y),
        Constraint::Slide { scope, arity, offset, circular, template } => {
            let n = scope.len();
            let mut start = 0;
            while start < n && (*circular || start + arity <= n) {
                let window: Vec<Value> = (0..*arity).map(|p| v(&scope[(start + p) % n])).collect();
                if !naive_holds(template, &window) {
                    return false;
                }
                start += offset;
            }
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn cases_respect_size_limits() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for kind in all_kinds() {
            for _ in 0..50 {
                let c = random_case(kind, &mut rng);
                assert!(c.domains.len() <= 4, "{kind}: {:?}", c.domains);
                assert!(c.domains.iter().all(|d| d.size() <= 4 && !d.is_empty()));
                assert_eq!(c.constraint.kind(), kind);
                c.instance();
            }
        }
    }

    #[test]
    fn naive_floor_semantics() {
        assert_eq!(floor_div_i(-7, 2), -4);
        assert_eq!(floor_div_i(7, -2), -4);
        let e = Expr::binary(BinaryOp::Mod, Expr::Const(-7), Expr::Const(3));
        assert_eq!(naive_eval(&e, &[]), Some(2));
    }
}
