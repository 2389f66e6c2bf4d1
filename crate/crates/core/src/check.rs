//! Semantics of every constraint form on a full assignment.

use std::collections::{HashMap, HashSet};

use crate::constraint::{occurrences, BinLoads, ChannelTarget, Constraint, Direction};
use crate::domain::{Value, STAR};

fn ordered_pair(a: Value, b: Value, strict: bool, dir: Direction) -> bool {
    match (dir, strict) {
        (Direction::Increasing, false) => a <= b,
        (Direction::Increasing, true) => a < b,
        (Direction::Decreasing, false) => a >= b,
        (Direction::Decreasing, true) => a > b,
    }
}

fn lex_pair(a: &[Value], b: &[Value], strict: bool, dir: Direction) -> bool {
    let (x, y) = match dir {
        Direction::Increasing => (a, b),
        Direction::Decreasing => (b, a),
    };
    match x.cmp(y) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => !strict,
        std::cmp::Ordering::Greater => false,
    }
}

fn linear(coeffs: &[Value], values: impl Iterator<Item = Value>) -> Option<Value> {
    coeffs
        .iter()
        .zip(values)
        .try_fold(0 as Value, |acc, (&c, v)| acc.checked_add(c.checked_mul(v)?))
}

/// `true` iff the full assignment `a` (indexed by variable id) satisfies `c`.
///
/// Evaluation errors inside intension constraints (division by zero,
/// overflow) make the constraint unsatisfied.
pub fn check_constraint(c: &Constraint, a: &[Value]) -> bool {
    let val = |v: &crate::domain::VarId| a[v.index()];
    match c {
        Constraint::Intension(e) => matches!(e.eval(a), Ok(v) if v != 0),
        Constraint::Extension { scope, tuples, supports, .. } => {
            let found = tuples.iter().any(|t| {
                t.iter().zip(scope).all(|(&cell, x)| cell == STAR || cell == val(x))
            });
            found == *supports
        }
        Constraint::Regular { scope, automaton } => {
            automaton.accepts(&scope.iter().map(val).collect::<Vec<_>>())
        }
        Constraint::Mdd { scope, diagram } => diagram.accepts(&scope.iter().map(val).collect::<Vec<_>>()),
        Constraint::AllDifferent { scope, except } => {
            let mut seen = HashSet::new();
            scope
                .iter()
                .map(val)
                .filter(|v| Some(*v) != *except)
                .all(|v| seen.insert(v))
        }
        Constraint::AllDifferentList { lists } => {
            let mut seen = HashSet::new();
            lists.iter().all(|l| seen.insert(l.iter().map(val).collect::<Vec<_>>()))
        }
        Constraint::AllEqual { scope } => scope.windows(2).all(|w| val(&w[0]) == val(&w[1])),
        Constraint::Ordered { scope, strict, direction } => {
            scope.windows(2).all(|w| ordered_pair(val(&w[0]), val(&w[1]), *strict, *direction))
        }
        Constraint::Lex { lists, strict, direction } => {
            let rows: Vec<Vec<Value>> = lists.iter().map(|l| l.iter().map(val).collect()).collect();
            rows.windows(2).all(|w| lex_pair(&w[0], &w[1], *strict, *direction))
        }
        Constraint::Precedence { scope, values, covered } => {
            let seq: Vec<Value> = scope.iter().map(val).collect();
            let first = |v: Value| seq.iter().position(|&x| x == v);
            let firsts: Vec<Option<usize>> = values.iter().map(|&v| first(v)).collect();
            if *covered && firsts.iter().any(|f| f.is_none()) {
                return false;
            }
            firsts.windows(2).all(|w| match (w[0], w[1]) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some(i), Some(j)) => i < j,
            })
        }
        Constraint::Sum { scope, coeffs, condition } => match linear(coeffs, scope.iter().map(val)) {
            Some(s) => condition.holds(s, a),
            None => false,
        },
        Constraint::Count { scope, values, condition } => {
            let n = scope.iter().filter(|x| values.contains(&val(x))).count() as Value;
            condition.holds(n, a)
        }
        Constraint::NValues { scope, condition } => {
            let n = scope.iter().map(val).collect::<HashSet<_>>().len() as Value;
            condition.holds(n, a)
        }
        Constraint::Cardinality { scope, values, occurs, closed } => {
            let occ = occurrences(scope.iter().map(val));
            if *closed && occ.keys().any(|v| !values.contains(v)) {
                return false;
            }
            values.iter().zip(occurs).all(|(v, &(lo, hi))| {
                let n = *occ.get(v).unwrap_or(&0) as Value;
                lo <= n && n <= hi
            })
        }
        Constraint::Maximum { scope, condition } => match scope.iter().map(val).max() {
            Some(m) => condition.holds(m, a),
            None => false,
        },
        Constraint::Minimum { scope, condition } => match scope.iter().map(val).min() {
            Some(m) => condition.holds(m, a),
            None => false,
        },
        Constraint::Element { list, index, value } => {
            let i = val(index);
            if i < 0 || i as usize >= list.len() {
                return false;
            }
            list[i as usize].value(a) == value.value(a)
        }
        Constraint::Channel { list, target } => check_channel(list.iter().map(val).collect(), target, a),
        Constraint::NoOverlap { origins, lengths, zero_ignored } => {
            let n = origins.len();
            let ignored = |i: usize| *zero_ignored && lengths[i].contains(&0);
            for i in 0..n {
                for j in i + 1..n {
                    if ignored(i) || ignored(j) {
                        continue;
                    }
                    let separated = (0..origins[i].len()).any(|d| {
                        let (oi, oj) = (val(&origins[i][d]), val(&origins[j][d]));
                        oi + lengths[i][d] <= oj || oj + lengths[j][d] <= oi
                    });
                    if !separated {
                        return false;
                    }
                }
            }
            true
        }
        Constraint::Cumulative { origins, lengths, heights, condition } => {
            // usage only rises at task starts; idle instants always exist
            let starts: Vec<Value> = origins.iter().map(val).collect();
            starts.iter().all(|&t| {
                let usage: Value = (0..starts.len())
                    .filter(|&i| starts[i] <= t && t < starts[i] + lengths[i])
                    .map(|i| heights[i])
                    .sum();
                condition.holds(usage, a)
            }) && condition.holds(0, a)
        }
        Constraint::BinPacking { scope, sizes, loads } => {
            let mut load: HashMap<Value, Value> = HashMap::new();
            for (x, &s) in scope.iter().zip(sizes) {
                *load.entry(val(x)).or_insert(0) += s;
            }
            match loads {
                BinLoads::Condition(cond) => load.values().all(|&l| cond.holds(l, a)),
                BinLoads::Loads(ls) => {
                    load.keys().all(|&b| b >= 0 && (b as usize) < ls.len())
                        && ls
                            .iter()
                            .enumerate()
                            .all(|(b, l)| *load.get(&(b as Value)).unwrap_or(&0) == val(l))
                }
            }
        }
        Constraint::Knapsack { scope, weights, profits, limit, condition } => {
            let w = linear(weights, scope.iter().map(val));
            let p = linear(profits, scope.iter().map(val));
            match (w, p) {
                (Some(w), Some(p)) => w <= limit.value(a) && condition.holds(p, a),
                _ => false,
            }
        }
        Constraint::Circuit { scope } => check_circuit(&scope.iter().map(val).collect::<Vec<_>>()),
        Constraint::Instantiation { scope, values } => scope.iter().zip(values).all(|(x, &v)| val(x) == v),
        Constraint::Slide { scope, arity, offset, circular, template } => {
            Constraint::slide_windows(scope, *arity, *offset, *circular, template)
                .iter()
                .all(|w| check_constraint(w, a))
        }
    }
}

fn check_channel(xs: Vec<Value>, target: &ChannelTarget, a: &[Value]) -> bool {
    let n = xs.len() as Value;
    match target {
        ChannelTarget::SelfInverse => xs.iter().enumerate().all(|(i, &j)| {
            (0..n).contains(&j) && xs[j as usize] == i as Value
        }),
        ChannelTarget::List(other) => {
            let ys: Vec<Value> = other.iter().map(|v| a[v.index()]).collect();
            let m = ys.len() as Value;
            let forward = xs.iter().enumerate().all(|(i, &j)| (0..m).contains(&j) && ys[j as usize] == i as Value);
            if xs.len() == ys.len() {
                forward && ys.iter().enumerate().all(|(j, &i)| (0..n).contains(&i) && xs[i as usize] == j as Value)
            } else {
                forward
            }
        }
        ChannelTarget::Value(v) => {
            let k = a[v.index()];
            xs.iter().all(|&x| x == 0 || x == 1)
                && xs.iter().filter(|&&x| x == 1).count() == 1
                && (0..n).contains(&k)
                && xs[k as usize] == 1
        }
    }
}

/// Successor-list circuit: self-loops mark absent nodes, the remaining nodes
/// must form exactly one cycle of length at least 2.
pub(crate) fn check_circuit(succ: &[Value]) -> bool {
    let n = succ.len();
    if succ.iter().any(|&s| s < 0 || s as usize >= n) {
        return false;
    }
    let mut seen = HashSet::new();
    if !succ.iter().all(|&s| seen.insert(s)) {
        return false;
    }
    let active: Vec<usize> = (0..n).filter(|&i| succ[i] as usize != i).collect();
    let Some(&start) = active.first() else {
        return false;
    };
    let mut len = 0;
    let mut cur = start;
    loop {
        cur = succ[cur] as usize;
        len += 1;
        if cur == start || len > n {
            break;
        }
    }
    cur == start && len == active.len()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::constraint::{Automaton, CmpOp, Condition, Term};
    use crate::domain::VarId;

    fn vars(n: u32) -> Vec<VarId> {
        (0..n).map(VarId).collect()
    }

    #[test]
    fn all_different_examples() {
        let c = Constraint::AllDifferent { scope: vars(3), except: None };
        assert!(check_constraint(&c, &[1, 2, 3]));
        assert!(!check_constraint(&c, &[1, 2, 1]));
        let c = Constraint::AllDifferent { scope: vars(3), except: Some(0) };
        assert!(check_constraint(&c, &[0, 2, 0]));
        assert!(!check_constraint(&c, &[0, 2, 2]));
    }

    #[test]
    fn starred_tuple_matches_anything() {
        let c = Constraint::Extension {
            scope: vars(2),
            tuples: Arc::new(vec![vec![1, STAR]]),
            supports: true,
            starred: true,
        };
        assert!(check_constraint(&c, &[1, 5]));
        assert!(!check_constraint(&c, &[2, 5]));
    }

    #[test]
    fn circuit_examples() {
        let c = Constraint::Circuit { scope: vars(3) };
        assert!(check_constraint(&c, &[1, 2, 0]));
        assert!(!check_constraint(&c, &[1, 0, 0]));
        assert!(!check_constraint(&c, &[0, 1, 2]));
        // node 0 is absent, 1 and 2 form the circuit
        assert!(check_constraint(&c, &[0, 2, 1]));
        let c4 = Constraint::Circuit { scope: vars(4) };
        assert!(!check_constraint(&c4, &[1, 0, 3, 2]));
    }

    #[test]
    fn regular_runs_automaton() {
        let t = |a: &str, v, b: &str| (a.to_string(), v, b.to_string());
        let a = Automaton::from_named("a", &["b".into()], &[t("a", 0, "a"), t("a", 1, "b"), t("b", 0, "b")]);
        let c = Constraint::Regular { scope: vars(3), automaton: Arc::new(a) };
        assert!(check_constraint(&c, &[0, 1, 0]));
        assert!(!check_constraint(&c, &[1, 1, 0]));
        assert!(!check_constraint(&c, &[0, 0, 0]));
    }

    #[test]
    fn precedence_chain() {
        let c = Constraint::Precedence { scope: vars(4), values: vec![0, 1, 2], covered: false };
        assert!(check_constraint(&c, &[0, 0, 1, 0]));
        assert!(check_constraint(&c, &[0, 1, 2, 1]));
        assert!(!check_constraint(&c, &[1, 0, 0, 0]));
        assert!(!check_constraint(&c, &[0, 2, 1, 0]));
        let covered = Constraint::Precedence { scope: vars(4), values: vec![0, 1, 2], covered: true };
        assert!(!check_constraint(&covered, &[0, 0, 1, 0]));
    }

    #[test]
    fn channel_lengths() {
        // p = positions of values 0..2 in v (length 4)
        let p = vars(2);
        let v: Vec<VarId> = (2..6).map(VarId).collect();
        let c = Constraint::Channel { list: p, target: ChannelTarget::List(v) };
        assert!(check_constraint(&c, &[3, 0, 1, 0, 0, 0]));
        assert!(!check_constraint(&c, &[3, 0, 1, 0, 0, 1]));
        let inv = Constraint::Channel { list: vars(3), target: ChannelTarget::SelfInverse };
        assert!(check_constraint(&inv, &[1, 0, 2]));
        assert!(!check_constraint(&inv, &[1, 2, 0]));
    }

    #[test]
    fn sum_with_set_condition() {
        let c = Constraint::Sum {
            scope: vars(3),
            coeffs: vec![1, 1, 1],
            condition: Condition::In(crate::domain::Domain::from_values([1, 2])),
        };
        assert!(check_constraint(&c, &[0, 1, 1]));
        assert!(!check_constraint(&c, &[1, 1, 1]));
        assert!(!check_constraint(&c, &[0, 0, 0]));
        let c = Constraint::Sum { scope: vars(2), coeffs: vec![2, -1], condition: Condition::Cmp(CmpOp::Eq, Term::Var(VarId(2))) };
        assert!(check_constraint(&c, &[3, 1, 5]));
    }

    #[test]
    fn cumulative_profile() {
        let c = Constraint::Cumulative {
            origins: vars(2),
            lengths: vec![2, 2],
            heights: vec![2, 1],
            condition: Condition::le(Term::Val(2)),
        };
        assert!(check_constraint(&c, &[0, 2]));
        assert!(!check_constraint(&c, &[0, 1]));
    }
}
