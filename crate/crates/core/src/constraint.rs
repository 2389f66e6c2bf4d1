//! The constraint vocabulary: the 24 forms of the XCSP3-core kernel plus
//! `AllDifferentList`, kept native for checking.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::domain::{Domain, Value, VarId, STAR};
use crate::expr::Expr;

/// Relational operator of a [`Condition`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn holds(self, l: Value, r: Value) -> bool {
        match self {
            CmpOp::Lt => l < r,
            CmpOp::Le => l <= r,
            CmpOp::Eq => l == r,
            CmpOp::Ne => l != r,
            CmpOp::Ge => l >= r,
            CmpOp::Gt => l > r,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CmpOp::Lt => "lt",
            CmpOp::Le => "le",
            CmpOp::Eq => "eq",
            CmpOp::Ne => "ne",
            CmpOp::Ge => "ge",
            CmpOp::Gt => "gt",
        }
    }

    pub fn from_name(s: &str) -> Option<CmpOp> {
        Some(match s {
            "lt" => CmpOp::Lt,
            "le" => CmpOp::Le,
            "eq" => CmpOp::Eq,
            "ne" => CmpOp::Ne,
            "ge" => CmpOp::Ge,
            "gt" => CmpOp::Gt,
            _ => return None,
        })
    }
}

/// A constant or a variable.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Val(Value),
    Var(VarId),
}

impl Term {
    pub fn value(self, a: &[Value]) -> Value {
        match self {
            Term::Val(v) => v,
            Term::Var(x) => a[x.index()],
        }
    }

    pub fn var(self) -> Option<VarId> {
        match self {
            Term::Var(x) => Some(x),
            Term::Val(_) => None,
        }
    }
}

/// Right-hand side of the counting/summing/connection forms: `lhs <op> rhs`,
/// `lhs in set` or `lhs notin set`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    Cmp(CmpOp, Term),
    In(Domain),
    NotIn(Domain),
}

impl Condition {
    pub fn eq(t: Term) -> Self {
        Condition::Cmp(CmpOp::Eq, t)
    }

    pub fn le(t: Term) -> Self {
        Condition::Cmp(CmpOp::Le, t)
    }

    pub fn ge(t: Term) -> Self {
        Condition::Cmp(CmpOp::Ge, t)
    }

    pub fn holds(&self, lhs: Value, a: &[Value]) -> bool {
        match self {
            Condition::Cmp(op, rhs) => op.holds(lhs, rhs.value(a)),
            Condition::In(set) => set.contains(lhs),
            Condition::NotIn(set) => !set.contains(lhs),
        }
    }

    pub fn var(&self) -> Option<VarId> {
        match self {
            Condition::Cmp(_, t) => t.var(),
            _ => None,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Deterministic finite automaton over integer symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automaton {
    pub states: Vec<String>,
    pub start: usize,
    pub finals: Vec<usize>,
    pub transitions: Vec<(usize, Value, usize)>,
}

impl Automaton {
    /// Builds an automaton from named states; states are declared in order of
    /// first appearance (start first).
    pub fn from_named(
        start: &str,
        finals: &[String],
        transitions: &[(String, Value, String)],
    ) -> Automaton {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut states = Vec::new();
        let mut id = |s: &str| -> usize {
            if let Some(&i) = index.get(s) {
                return i;
            }
            states.push(s.to_string());
            index.insert(s.to_string(), states.len() - 1);
            states.len() - 1
        };
        let start = id(start);
        let transitions = transitions
            .iter()
            .map(|(a, v, b)| {
                let a = id(a);
                (a, *v, id(b))
            })
            .collect();
        let finals = finals.iter().map(|f| id(f)).collect();
        Automaton { states, start, finals, transitions }
    }

    pub fn validate(&self) -> Result<(), String> {
        let n = self.states.len();
        if self.start >= n {
            return Err("start state is not declared".into());
        }
        if let Some(f) = self.finals.iter().find(|&&f| f >= n) {
            return Err(format!("final state {f} is not declared"));
        }
        let mut seen = HashSet::new();
        for &(a, v, b) in &self.transitions {
            if a >= n || b >= n {
                return Err(format!("transition ({a},{v},{b}) references an undeclared state"));
            }
            if !seen.insert((a, v)) {
                return Err(format!(
                    "automaton is not deterministic: two transitions from `{}` on {v}",
                    self.states[a]
                ));
            }
        }
        Ok(())
    }

    /// Runs the automaton on a word.
    pub fn accepts(&self, word: &[Value]) -> bool {
        let delta: HashMap<(usize, Value), usize> =
            self.transitions.iter().map(|&(a, v, b)| ((a, v), b)).collect();
        let mut q = self.start;
        for &v in word {
            match delta.get(&(q, v)) {
                Some(&next) => q = next,
                None => return false,
            }
        }
        self.finals.contains(&q)
    }
}

/// Multi-valued decision diagram given by its transitions; every path from
/// `root` to `terminal` has one arc per scope variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mdd {
    pub nodes: Vec<String>,
    pub root: usize,
    pub terminal: usize,
    pub transitions: Vec<(usize, Value, usize)>,
}

impl Mdd {
    /// Builds a diagram from named transitions. The root is the only node
    /// without incoming arcs, the terminal the only node without outgoing arcs.
    pub fn from_named(transitions: &[(String, Value, String)]) -> Result<Mdd, String> {
        let mut index: HashMap<&str, usize> = HashMap::new();
        let mut nodes: Vec<String> = Vec::new();
        let mut ts = Vec::with_capacity(transitions.len());
        for (a, v, b) in transitions {
            let mut ids = [0usize; 2];
            for (k, s) in [a.as_str(), b.as_str()].into_iter().enumerate() {
                ids[k] = *index.entry(s).or_insert_with(|| {
                    nodes.push(s.to_string());
                    nodes.len() - 1
                });
            }
            ts.push((ids[0], *v, ids[1]));
        }
        let mut has_in = vec![false; nodes.len()];
        let mut has_out = vec![false; nodes.len()];
        for &(a, _, b) in &ts {
            has_out[a] = true;
            has_in[b] = true;
        }
        let roots: Vec<usize> = (0..nodes.len()).filter(|&i| !has_in[i]).collect();
        let terms: Vec<usize> = (0..nodes.len()).filter(|&i| !has_out[i]).collect();
        if roots.len() != 1 || terms.len() != 1 {
            return Err(format!(
                "an MDD needs exactly one root and one terminal, found {} and {}",
                roots.len(),
                terms.len()
            ));
        }
        Ok(Mdd { nodes, root: roots[0], terminal: terms[0], transitions: ts })
    }

    /// Depth of every node reachable from the root, or an error when the
    /// diagram is not layered, not deterministic, or not of the given arity.
    pub fn layers(&self, arity: usize) -> Result<Vec<Option<usize>>, String> {
        let n = self.nodes.len();
        if self.root >= n || self.terminal >= n {
            return Err("root or terminal is not declared".into());
        }
        let mut out: Vec<Vec<(Value, usize)>> = vec![Vec::new(); n];
        let mut seen = HashSet::new();
        for &(a, v, b) in &self.transitions {
            if a >= n || b >= n {
                return Err(format!("transition ({a},{v},{b}) references an undeclared node"));
            }
            if !seen.insert((a, v)) {
                return Err(format!("two arcs leave `{}` with value {v}", self.nodes[a]));
            }
            out[a].push((v, b));
        }
        let mut depth: Vec<Option<usize>> = vec![None; n];
        depth[self.root] = Some(0);
        let mut frontier = vec![self.root];
        while let Some(a) = frontier.pop() {
            let d = depth[a].unwrap();
            for &(_, b) in &out[a] {
                match depth[b] {
                    None => {
                        depth[b] = Some(d + 1);
                        frontier.push(b);
                    }
                    Some(db) if db != d + 1 => {
                        return Err(format!("node `{}` is reached at two depths", self.nodes[b]))
                    }
                    _ => {}
                }
            }
        }
        if depth[self.terminal] != Some(arity) {
            return Err(format!("terminal is not at depth {arity}"));
        }
        if !out[self.terminal].is_empty() {
            return Err("terminal has outgoing arcs".into());
        }
        for (i, d) in depth.iter().enumerate() {
            if let Some(d) = d {
                if *d == arity && i != self.terminal {
                    return Err(format!("node `{}` at the last layer is not the terminal", self.nodes[i]));
                }
            }
        }
        Ok(depth)
    }

    pub fn accepts(&self, word: &[Value]) -> bool {
        let delta: HashMap<(usize, Value), usize> =
            self.transitions.iter().map(|&(a, v, b)| ((a, v), b)).collect();
        let mut q = self.root;
        for &v in word {
            match delta.get(&(q, v)) {
                Some(&next) => q = next,
                None => return false,
            }
        }
        q == self.terminal
    }
}

/// Loads side of a `binPacking`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BinLoads {
    /// Every used bin's load satisfies the condition.
    Condition(Condition),
    /// `loads[b]` is the load of bin `b`; items must go to bins `0..loads.len()`.
    Loads(Vec<VarId>),
}

/// Second argument of a `channel`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ChannelTarget {
    /// `list[i] = j <=> list[j] = i`
    SelfInverse,
    /// `list[i] = j => other[j] = i`, equivalence when both lists have the same length.
    List(Vec<VarId>),
    /// 0/1 list with exactly one 1, at the position given by the variable.
    Value(VarId),
}

pub type Tuples = Arc<Vec<Vec<Value>>>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    Intension(Expr),
    Extension {
        scope: Vec<VarId>,
        tuples: Tuples,
        supports: bool,
        starred: bool,
    },
    Regular {
        scope: Vec<VarId>,
        automaton: Arc<Automaton>,
    },
    Mdd {
        scope: Vec<VarId>,
        diagram: Arc<Mdd>,
    },
    AllDifferent {
        scope: Vec<VarId>,
        except: Option<Value>,
    },
    AllDifferentList {
        lists: Vec<Vec<VarId>>,
    },
    AllEqual {
        scope: Vec<VarId>,
    },
    Ordered {
        scope: Vec<VarId>,
        strict: bool,
        direction: Direction,
    },
    Lex {
        lists: Vec<Vec<VarId>>,
        strict: bool,
        direction: Direction,
    },
    /// Each value `values[k+1]` may only occur after an earlier occurrence of
    /// `values[k]`; with `covered`, every value occurs.
    Precedence {
        scope: Vec<VarId>,
        values: Vec<Value>,
        covered: bool,
    },
    Sum {
        scope: Vec<VarId>,
        coeffs: Vec<Value>,
        condition: Condition,
    },
    Count {
        scope: Vec<VarId>,
        values: Vec<Value>,
        condition: Condition,
    },
    NValues {
        scope: Vec<VarId>,
        condition: Condition,
    },
    Cardinality {
        scope: Vec<VarId>,
        values: Vec<Value>,
        occurs: Vec<(Value, Value)>,
        closed: bool,
    },
    Maximum {
        scope: Vec<VarId>,
        condition: Condition,
    },
    Minimum {
        scope: Vec<VarId>,
        condition: Condition,
    },
    Element {
        list: Vec<Term>,
        index: VarId,
        value: Term,
    },
    Channel {
        list: Vec<VarId>,
        target: ChannelTarget,
    },
    NoOverlap {
        origins: Vec<Vec<VarId>>,
        lengths: Vec<Vec<Value>>,
        zero_ignored: bool,
    },
    /// Resource usage at every time point satisfies `condition` (`le`/`lt` only).
    Cumulative {
        origins: Vec<VarId>,
        lengths: Vec<Value>,
        heights: Vec<Value>,
        condition: Condition,
    },
    BinPacking {
        scope: Vec<VarId>,
        sizes: Vec<Value>,
        loads: BinLoads,
    },
    /// `sum(weights*x) <= limit` and `sum(profits*x) <condition>`.
    Knapsack {
        scope: Vec<VarId>,
        weights: Vec<Value>,
        profits: Vec<Value>,
        limit: Term,
        condition: Condition,
    },
    Circuit {
        scope: Vec<VarId>,
    },
    Instantiation {
        scope: Vec<VarId>,
        values: Vec<Value>,
    },
    /// `template` is written over placeholder variables `%0..%arity`, applied to
    /// windows `scope[k*offset ..][..arity]`, wrapping around when `circular`.
    Slide {
        scope: Vec<VarId>,
        arity: usize,
        offset: usize,
        circular: bool,
        template: Box<Constraint>,
    },
}

/// Form name of a constraint.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintKind {
    Intension,
    Extension,
    Regular,
    Mdd,
    AllDifferent,
    AllDifferentList,
    AllEqual,
    Ordered,
    Lex,
    Precedence,
    Sum,
    Count,
    NValues,
    Cardinality,
    Maximum,
    Minimum,
    Element,
    Channel,
    NoOverlap,
    Cumulative,
    BinPacking,
    Knapsack,
    Circuit,
    Instantiation,
    Slide,
}

impl ConstraintKind {
    /// The 24 kernel forms (excludes the native `AllDifferentList`).
    pub const KERNEL: [ConstraintKind; 24] = [
        ConstraintKind::Intension,
        ConstraintKind::Extension,
        ConstraintKind::Regular,
        ConstraintKind::Mdd,
        ConstraintKind::AllDifferent,
        ConstraintKind::AllEqual,
        ConstraintKind::Ordered,
        ConstraintKind::Lex,
        ConstraintKind::Precedence,
        ConstraintKind::Sum,
        ConstraintKind::Count,
        ConstraintKind::NValues,
        ConstraintKind::Cardinality,
        ConstraintKind::Maximum,
        ConstraintKind::Minimum,
        ConstraintKind::Element,
        ConstraintKind::Channel,
        ConstraintKind::NoOverlap,
        ConstraintKind::Cumulative,
        ConstraintKind::BinPacking,
        ConstraintKind::Knapsack,
        ConstraintKind::Circuit,
        ConstraintKind::Instantiation,
        ConstraintKind::Slide,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstraintKind::Intension => "intension",
            ConstraintKind::Extension => "extension",
            ConstraintKind::Regular => "regular",
            ConstraintKind::Mdd => "mdd",
            ConstraintKind::AllDifferent => "allDifferent",
            ConstraintKind::AllDifferentList => "allDifferentList",
            ConstraintKind::AllEqual => "allEqual",
            ConstraintKind::Ordered => "ordered",
            ConstraintKind::Lex => "lex",
            ConstraintKind::Precedence => "precedence",
            ConstraintKind::Sum => "sum",
            ConstraintKind::Count => "count",
            ConstraintKind::NValues => "nValues",
            ConstraintKind::Cardinality => "cardinality",
            ConstraintKind::Maximum => "maximum",
            ConstraintKind::Minimum => "minimum",
            ConstraintKind::Element => "element",
            ConstraintKind::Channel => "channel",
            ConstraintKind::NoOverlap => "noOverlap",
            ConstraintKind::Cumulative => "cumulative",
            ConstraintKind::BinPacking => "binPacking",
            ConstraintKind::Knapsack => "knapsack",
            ConstraintKind::Circuit => "circuit",
            ConstraintKind::Instantiation => "instantiation",
            ConstraintKind::Slide => "slide",
        }
    }

    pub fn from_name(s: &str) -> Option<ConstraintKind> {
        ConstraintKind::KERNEL
            .iter()
            .chain(std::iter::once(&ConstraintKind::AllDifferentList))
            .copied()
            .find(|k| k.name() == s)
    }
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn push_term(out: &mut Vec<VarId>, t: &Term) {
    if let Term::Var(v) = t {
        out.push(*v);
    }
}

fn push_condition(out: &mut Vec<VarId>, c: &Condition) {
    if let Some(v) = c.var() {
        out.push(v);
    }
}

impl Constraint {
    pub fn kind(&self) -> ConstraintKind {
        match self {
            Constraint::Intension(_) => ConstraintKind::Intension,
            Constraint::Extension { .. } => ConstraintKind::Extension,
            Constraint::Regular { .. } => ConstraintKind::Regular,
            Constraint::Mdd { .. } => ConstraintKind::Mdd,
            Constraint::AllDifferent { .. } => ConstraintKind::AllDifferent,
            Constraint::AllDifferentList { .. } => ConstraintKind::AllDifferentList,
            Constraint::AllEqual { .. } => ConstraintKind::AllEqual,
            Constraint::Ordered { .. } => ConstraintKind::Ordered,
            Constraint::Lex { .. } => ConstraintKind::Lex,
            Constraint::Precedence { .. } => ConstraintKind::Precedence,
            Constraint::Sum { .. } => ConstraintKind::Sum,
            Constraint::Count { .. } => ConstraintKind::Count,
            Constraint::NValues { .. } => ConstraintKind::NValues,
            Constraint::Cardinality { .. } => ConstraintKind::Cardinality,
            Constraint::Maximum { .. } => ConstraintKind::Maximum,
            Constraint::Minimum { .. } => ConstraintKind::Minimum,
            Constraint::Element { .. } => ConstraintKind::Element,
            Constraint::Channel { .. } => ConstraintKind::Channel,
            Constraint::NoOverlap { .. } => ConstraintKind::NoOverlap,
            Constraint::Cumulative { .. } => ConstraintKind::Cumulative,
            Constraint::BinPacking { .. } => ConstraintKind::BinPacking,
            Constraint::Knapsack { .. } => ConstraintKind::Knapsack,
            Constraint::Circuit { .. } => ConstraintKind::Circuit,
            Constraint::Instantiation { .. } => ConstraintKind::Instantiation,
            Constraint::Slide { .. } => ConstraintKind::Slide,
        }
    }

    /// Every variable reference, in argument order, with repetitions.
    pub fn var_refs(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        match self {
            Constraint::Intension(e) => out = e.vars(),
            Constraint::Extension { scope, .. }
            | Constraint::Regular { scope, .. }
            | Constraint::Mdd { scope, .. }
            | Constraint::AllDifferent { scope, .. }
            | Constraint::AllEqual { scope }
            | Constraint::Ordered { scope, .. }
            | Constraint::Precedence { scope, .. }
            | Constraint::Cardinality { scope, .. }
            | Constraint::Circuit { scope }
            | Constraint::Instantiation { scope, .. }
            | Constraint::Slide { scope, .. } => out.extend_from_slice(scope),
            Constraint::AllDifferentList { lists } | Constraint::Lex { lists, .. } => {
                lists.iter().for_each(|l| out.extend_from_slice(l))
            }
            Constraint::Sum { scope, condition, .. }
            | Constraint::Count { scope, condition, .. }
            | Constraint::NValues { scope, condition }
            | Constraint::Maximum { scope, condition }
            | Constraint::Minimum { scope, condition } => {
                out.extend_from_slice(scope);
                push_condition(&mut out, condition);
            }
            Constraint::Element { list, index, value } => {
                list.iter().for_each(|t| push_term(&mut out, t));
                out.push(*index);
                push_term(&mut out, value);
            }
            Constraint::Channel { list, target } => {
                out.extend_from_slice(list);
                match target {
                    ChannelTarget::SelfInverse => {}
                    ChannelTarget::List(l) => out.extend_from_slice(l),
                    ChannelTarget::Value(v) => out.push(*v),
                }
            }
            Constraint::NoOverlap { origins, .. } => origins.iter().for_each(|o| out.extend_from_slice(o)),
            Constraint::Cumulative { origins, condition, .. } => {
                out.extend_from_slice(origins);
                push_condition(&mut out, condition);
            }
            Constraint::BinPacking { scope, loads, .. } => {
                out.extend_from_slice(scope);
                match loads {
                    BinLoads::Condition(c) => push_condition(&mut out, c),
                    BinLoads::Loads(l) => out.extend_from_slice(l),
                }
            }
            Constraint::Knapsack { scope, limit, condition, .. } => {
                out.extend_from_slice(scope);
                push_term(&mut out, limit);
                push_condition(&mut out, condition);
            }
        }
        out
    }

    /// Distinct variables of the constraint, in first-occurrence order.
    pub fn scope(&self) -> Vec<VarId> {
        let mut seen = HashSet::new();
        let mut refs = self.var_refs();
        refs.retain(|v| seen.insert(*v));
        refs
    }

    /// Rewrites every variable reference.
    pub fn map_vars(&self, f: &dyn Fn(VarId) -> VarId) -> Constraint {
        let m = |s: &Vec<VarId>| s.iter().map(|&v| f(v)).collect::<Vec<_>>();
        let mt = |t: &Term| match t {
            Term::Var(v) => Term::Var(f(*v)),
            other => *other,
        };
        let mc = |c: &Condition| match c {
            Condition::Cmp(op, t) => Condition::Cmp(*op, mt(t)),
            other => other.clone(),
        };
        match self {
            Constraint::Intension(e) => Constraint::Intension(e.map_vars(f)),
            Constraint::Extension { scope, tuples, supports, starred } => Constraint::Extension {
                scope: m(scope),
                tuples: tuples.clone(),
                supports: *supports,
                starred: *starred,
            },
            Constraint::Regular { scope, automaton } => {
                Constraint::Regular { scope: m(scope), automaton: automaton.clone() }
            }
            Constraint::Mdd { scope, diagram } => Constraint::Mdd { scope: m(scope), diagram: diagram.clone() },
            Constraint::AllDifferent { scope, except } => {
                Constraint::AllDifferent { scope: m(scope), except: *except }
            }
            Constraint::AllDifferentList { lists } => {
                Constraint::AllDifferentList { lists: lists.iter().map(m).collect() }
            }
            Constraint::AllEqual { scope } => Constraint::AllEqual { scope: m(scope) },
            Constraint::Ordered { scope, strict, direction } => {
                Constraint::Ordered { scope: m(scope), strict: *strict, direction: *direction }
            }
            Constraint::Lex { lists, strict, direction } => Constraint::Lex {
                lists: lists.iter().map(m).collect(),
                strict: *strict,
                direction: *direction,
            },
            Constraint::Precedence { scope, values, covered } => {
                Constraint::Precedence { scope: m(scope), values: values.clone(), covered: *covered }
            }
            Constraint::Sum { scope, coeffs, condition } => {
                Constraint::Sum { scope: m(scope), coeffs: coeffs.clone(), condition: mc(condition) }
            }
            Constraint::Count { scope, values, condition } => {
                Constraint::Count { scope: m(scope), values: values.clone(), condition: mc(condition) }
            }
            Constraint::NValues { scope, condition } => {
                Constraint::NValues { scope: m(scope), condition: mc(condition) }
            }
            Constraint::Cardinality { scope, values, occurs, closed } => Constraint::Cardinality {
                scope: m(scope),
                values: values.clone(),
                occurs: occurs.clone(),
                closed: *closed,
            },
            Constraint::Maximum { scope, condition } => {
                Constraint::Maximum { scope: m(scope), condition: mc(condition) }
            }
            Constraint::Minimum { scope, condition } => {
                Constraint::Minimum { scope: m(scope), condition: mc(condition) }
            }
            Constraint::Element { list, index, value } => Constraint::Element {
                list: list.iter().map(mt).collect(),
                index: f(*index),
                value: mt(value),
            },
            Constraint::Channel { list, target } => Constraint::Channel {
                list: m(list),
                target: match target {
                    ChannelTarget::SelfInverse => ChannelTarget::SelfInverse,
                    ChannelTarget::List(l) => ChannelTarget::List(m(l)),
                    ChannelTarget::Value(v) => ChannelTarget::Value(f(*v)),
                },
            },
            Constraint::NoOverlap { origins, lengths, zero_ignored } => Constraint::NoOverlap {
                origins: origins.iter().map(m).collect(),
                lengths: lengths.clone(),
                zero_ignored: *zero_ignored,
            },
            Constraint::Cumulative { origins, lengths, heights, condition } => Constraint::Cumulative {
                origins: m(origins),
                lengths: lengths.clone(),
                heights: heights.clone(),
                condition: mc(condition),
            },
            Constraint::BinPacking { scope, sizes, loads } => Constraint::BinPacking {
                scope: m(scope),
                sizes: sizes.clone(),
                loads: match loads {
                    BinLoads::Condition(c) => BinLoads::Condition(mc(c)),
                    BinLoads::Loads(l) => BinLoads::Loads(m(l)),
                },
            },
            Constraint::Knapsack { scope, weights, profits, limit, condition } => Constraint::Knapsack {
                scope: m(scope),
                weights: weights.clone(),
                profits: profits.clone(),
                limit: mt(limit),
                condition: mc(condition),
            },
            Constraint::Circuit { scope } => Constraint::Circuit { scope: m(scope) },
            Constraint::Instantiation { scope, values } => {
                Constraint::Instantiation { scope: m(scope), values: values.clone() }
            }
            Constraint::Slide { scope, arity, offset, circular, template } => Constraint::Slide {
                scope: m(scope),
                arity: *arity,
                offset: *offset,
                circular: *circular,
                template: template.clone(),
            },
        }
    }

    /// Instances of a `slide` template, one per window.
    pub fn slide_windows(
        scope: &[VarId],
        arity: usize,
        offset: usize,
        circular: bool,
        template: &Constraint,
    ) -> Vec<Constraint> {
        let n = scope.len();
        let mut out = Vec::new();
        if offset == 0 || arity == 0 || n == 0 {
            return out;
        }
        let mut start = 0;
        while start < n {
            if !circular && start + arity > n {
                break;
            }
            let window: Vec<VarId> = (0..arity).map(|p| scope[(start + p) % n]).collect();
            out.push(template.map_vars(&|v| window[v.index()]));
            start += offset;
        }
        out
    }

    /// Checks shape invariants against the instance's variables.
    pub fn validate(&self, domain_of: &dyn Fn(VarId) -> Option<Domain>) -> Result<(), String> {
        for v in self.var_refs() {
            if domain_of(v).is_none() {
                return Err(format!("unknown variable {v}"));
            }
        }
        let same_len = |what: &str, a: usize, b: usize| -> Result<(), String> {
            if a == b {
                Ok(())
            } else {
                Err(format!("length mismatch: {what} has {b} entries for a scope of {a}"))
            }
        };
        match self {
            Constraint::Intension(e) => {
                e.type_check(domain_of)?;
                if !e.is_boolean(domain_of) {
                    return Err(format!("intension expression `{e}` is not boolean"));
                }
            }
            Constraint::Extension { scope, tuples, starred, .. } => {
                for t in tuples.iter() {
                    same_len("tuple", scope.len(), t.len())?;
                    if !starred && t.contains(&STAR) {
                        return Err("starred tuple in a table not declared as starred".into());
                    }
                }
            }
            Constraint::Regular { automaton, .. } => automaton.validate()?,
            Constraint::Mdd { scope, diagram } => {
                diagram.layers(scope.len())?;
            }
            Constraint::AllDifferentList { lists } | Constraint::Lex { lists, .. } => {
                if let Some(first) = lists.first() {
                    for l in lists {
                        same_len("list", first.len(), l.len())?;
                    }
                }
            }
            Constraint::Precedence { values, .. } => {
                let distinct: HashSet<_> = values.iter().collect();
                if distinct.len() != values.len() {
                    return Err("precedence values must be distinct".into());
                }
            }
            Constraint::Sum { scope, coeffs, .. } => same_len("coeffs", scope.len(), coeffs.len())?,
            Constraint::Cardinality { values, occurs, .. } => {
                same_len("occurs", values.len(), occurs.len())?;
                let distinct: HashSet<_> = values.iter().collect();
                if distinct.len() != values.len() {
                    return Err("cardinality values must be distinct".into());
                }
                if occurs.iter().any(|(lo, hi)| lo > hi) {
                    return Err("empty occurrence range".into());
                }
            }
            Constraint::Element { list, .. } => {
                if list.is_empty() {
                    return Err("element over an empty list".into());
                }
            }
            Constraint::Channel { list, target } => match target {
                ChannelTarget::List(other) if other.len() < list.len() => {
                    return Err("channel: the first list cannot be longer than the second".into())
                }
                _ => {}
            },
            Constraint::NoOverlap { origins, lengths, .. } => {
                same_len("lengths", origins.len(), lengths.len())?;
                let dims = origins.first().map_or(0, |o| o.len());
                for (o, l) in origins.iter().zip(lengths) {
                    same_len("origin", dims, o.len())?;
                    same_len("length", dims, l.len())?;
                }
                if lengths.iter().flatten().any(|&l| l < 0) {
                    return Err("negative length".into());
                }
            }
            Constraint::Cumulative { origins, lengths, heights, condition } => {
                same_len("lengths", origins.len(), lengths.len())?;
                same_len("heights", origins.len(), heights.len())?;
                if lengths.iter().chain(heights).any(|&l| l < 0) {
                    return Err("negative length or height".into());
                }
                if !matches!(condition, Condition::Cmp(CmpOp::Le | CmpOp::Lt, _)) {
                    return Err("cumulative only supports le/lt conditions".into());
                }
            }
            Constraint::BinPacking { scope, sizes, .. } => same_len("sizes", scope.len(), sizes.len())?,
            Constraint::Knapsack { scope, weights, profits, .. } => {
                same_len("weights", scope.len(), weights.len())?;
                same_len("profits", scope.len(), profits.len())?;
            }
            Constraint::Instantiation { scope, values } => same_len("values", scope.len(), values.len())?,
            Constraint::Slide { scope, arity, offset, template, .. } => {
                if *arity == 0 || *offset == 0 || *arity > scope.len() {
                    return Err("slide needs 0 < arity <= |scope| and a positive offset".into());
                }
                if template.kind() == ConstraintKind::Slide {
                    return Err("nested slide".into());
                }
                if template.var_refs().iter().any(|v| v.index() >= *arity) {
                    return Err("slide template refers past its arity".into());
                }
                let circular = matches!(self, Constraint::Slide { circular: true, .. });
                for w in Constraint::slide_windows(scope, *arity, *offset, circular, template) {
                    w.validate(domain_of)?;
                }
            }
            Constraint::AllDifferent { .. }
            | Constraint::AllEqual { .. }
            | Constraint::Ordered { .. }
            | Constraint::Count { .. }
            | Constraint::NValues { .. }
            | Constraint::Maximum { .. }
            | Constraint::Minimum { .. }
            | Constraint::Circuit { .. } => {}
        }
        Ok(())
    }

    /// Pairwise starred-table encoding of an `AllDifferentList`: for every
    /// pair of lists, a table listing, per position, the value pairs that
    /// differ with every other cell starred.
    pub fn all_different_list_tables(
        lists: &[Vec<VarId>],
        domain_of: &dyn Fn(VarId) -> Domain,
    ) -> Vec<Constraint> {
        let mut out = Vec::new();
        for a in 0..lists.len() {
            for b in a + 1..lists.len() {
                let (la, lb) = (&lists[a], &lists[b]);
                let k = la.len();
                let mut tuples = Vec::new();
                for p in 0..k {
                    for va in domain_of(la[p]).iter() {
                        for vb in domain_of(lb[p]).iter() {
                            if va != vb {
                                let mut t = vec![STAR; 2 * k];
                                t[p] = va;
                                t[k + p] = vb;
                                tuples.push(t);
                            }
                        }
                    }
                }
                let mut scope = la.clone();
                scope.extend_from_slice(lb);
                out.push(Constraint::Extension {
                    scope,
                    tuples: Arc::new(tuples),
                    supports: true,
                    starred: true,
                });
            }
        }
        out
    }
}

/// Occurrence count per value, used by several checkers.
pub(crate) fn occurrences(values: impl IntoIterator<Item = Value>) -> BTreeMap<Value, usize> {
    let mut m = BTreeMap::new();
    for v in values {
        *m.entry(v).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn automaton_rejects_nondeterminism() {
        let a = Automaton::from_named(
            "a",
            &["b".to_string()],
            &[("a".into(), 0, "b".into()), ("a".into(), 0, "a".into())],
        );
        assert!(a.validate().is_err());
    }

    #[test]
    fn mdd_layers() {
        let t = |a: &str, v, b: &str| (a.to_string(), v, b.to_string());
        let m = Mdd::from_named(&[t("r", 0, "n1"), t("r", 1, "n2"), t("n1", 1, "t"), t("n2", 0, "t")]).unwrap();
        assert!(m.layers(2).is_ok());
        assert!(m.layers(3).is_err());
        assert!(m.accepts(&[0, 1]));
        assert!(!m.accepts(&[0, 0]));
        let skewed = Mdd::from_named(&[t("r", 0, "t"), t("r", 1, "n"), t("n", 0, "t")]).unwrap();
        assert!(skewed.layers(2).is_err());
    }

    #[test]
    fn slide_windows_wrap() {
        let tpl = Constraint::Intension(Expr::lt(Expr::var(VarId(0)), Expr::var(VarId(1))));
        let scope: Vec<VarId> = (10..14).map(VarId).collect();
        let open = Constraint::slide_windows(&scope, 2, 1, false, &tpl);
        assert_eq!(open.len(), 3);
        let closed = Constraint::slide_windows(&scope, 2, 1, true, &tpl);
        assert_eq!(closed.len(), 4);
        assert_eq!(closed[3].scope(), vec![VarId(13), VarId(10)]);
    }
}
