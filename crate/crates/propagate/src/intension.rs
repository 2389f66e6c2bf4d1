//! Intension filtering: exact enumeration on small scopes, interval
//! reasoning per value otherwise.

use xcore::{BinaryOp, Constraint, Expr, NaryOp, UnaryOp, Value, VarId};

use crate::engine::{Local, Propagator};
use crate::store::{DomainStore, PResult, Wipeout};

/// Largest cartesian product filtered by enumeration.
const ENUM_BUDGET: u64 = 4096;
/// Largest domain probed value by value with interval evaluation.
const PROBE_LIMIT: u64 = 64;

struct Part {
    expr: Expr,
    local: Local,
}

pub struct IntensionProp {
    parts: Vec<Part>,
}

impl IntensionProp {
    pub fn new(e: &Expr) -> IntensionProp {
        let conjuncts = match e {
            Expr::Nary(NaryOp::And, args) => args.clone(),
            other => vec![other.clone()],
        };
        let parts = conjuncts
            .into_iter()
            .map(|expr| Part { local: Local::new(&Constraint::Intension(expr.clone())), expr })
            .collect();
        IntensionProp { parts }
    }
}

impl Propagator for IntensionProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        for part in &self.parts {
            if part.local.enumerate(s, ENUM_BUDGET)? {
                continue;
            }
            if eval_interval(&part.expr, s, None).hi == 0 {
                return Err(Wipeout);
            }
            for &v in &part.local.scope {
                if s.is_fixed(v) || s.size(v) > PROBE_LIMIT {
                    continue;
                }
                for x in s.values(v) {
                    if eval_interval(&part.expr, s, Some((v, x))).hi == 0 {
                        s.remove(v, x)?;
                    }
                }
            }
            part.local.finish(s)?;
        }
        Ok(())
    }
}

/// Closed integer interval, wide enough to never overflow on sums of `i64`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: i128,
    pub hi: i128,
}

impl Interval {
    fn new(lo: i128, hi: i128) -> Interval {
        Interval { lo, hi }
    }

    fn point(v: i128) -> Interval {
        Interval { lo: v, hi: v }
    }

    fn boolean(lo: bool, hi: bool) -> Interval {
        Interval { lo: lo as i128, hi: hi as i128 }
    }

    const BOOL: Interval = Interval { lo: 0, hi: 1 };

    fn union(self, o: Interval) -> Interval {
        Interval::new(self.lo.min(o.lo), self.hi.max(o.hi))
    }

    fn is_true(self) -> bool {
        self.lo > 0 || self.hi < 0
    }

    fn is_false(self) -> bool {
        self.lo == 0 && self.hi == 0
    }

    fn from_corners(c: [i128; 4]) -> Interval {
        Interval::new(*c.iter().min().unwrap(), *c.iter().max().unwrap())
    }
}

fn fdiv(a: i128, b: i128) -> i128 {
    let q = a / b;
    if a % b != 0 && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_interval(a: Interval, b: Interval) -> Interval {
    let part = |lo: i128, hi: i128| {
        Interval::from_corners([fdiv(a.lo, lo), fdiv(a.lo, hi), fdiv(a.hi, lo), fdiv(a.hi, hi)])
    };
    let neg = (b.lo <= -1).then(|| part(b.lo, b.hi.min(-1)));
    let pos = (b.hi >= 1).then(|| part(b.lo.max(1), b.hi));
    match (neg, pos) {
        (Some(n), Some(p)) => n.union(p),
        (Some(n), None) => n,
        (None, Some(p)) => p,
        // only a zero divisor: undefined everywhere, any interval is sound
        (None, None) => Interval::point(0),
    }
}

fn mod_interval(a: Interval, b: Interval) -> Interval {
    if b.lo > 0 {
        if a.lo >= 0 && a.hi < b.lo {
            return a;
        }
        if a.lo >= 0 {
            return Interval::new(0, (b.hi - 1).min(a.hi));
        }
        Interval::new(0, b.hi - 1)
    } else if b.hi < 0 {
        Interval::new(b.lo + 1, 0)
    } else {
        let m = b.lo.abs().max(b.hi.abs());
        Interval::new(-(m - 1).max(0), (m - 1).max(0))
    }
}

/// Interval enclosing every defined value of `e` over the current domains,
/// with `fix` overriding one variable.
pub fn eval_interval(e: &Expr, s: &DomainStore, fix: Option<(VarId, Value)>) -> Interval {
    let rec = |x: &Expr| eval_interval(x, s, fix);
    match e {
        Expr::Const(c) => Interval::point(*c as i128),
        Expr::Var(v) => match fix {
            Some((w, x)) if w == *v => Interval::point(x as i128),
            _ => Interval::new(s.min(*v) as i128, s.max(*v) as i128),
        },
        Expr::Unary(op, a) => {
            let a = rec(a);
            match op {
                UnaryOp::Neg => Interval::new(-a.hi, -a.lo),
                UnaryOp::Abs => abs(a),
                UnaryOp::Not => Interval::boolean(a.is_false(), !a.is_true()),
            }
        }
        Expr::Binary(op, l, r) => {
            let a = rec(l);
            let b = rec(r);
            match op {
                BinaryOp::Sub => Interval::new(a.lo.saturating_sub(b.hi), a.hi.saturating_sub(b.lo)),
                BinaryOp::Div => div_interval(a, b),
                BinaryOp::Mod => mod_interval(a, b),
                BinaryOp::Dist => abs(Interval::new(a.lo.saturating_sub(b.hi), a.hi.saturating_sub(b.lo))),
                BinaryOp::Lt => Interval::boolean(a.hi < b.lo, a.lo < b.hi),
                BinaryOp::Le => Interval::boolean(a.hi <= b.lo, a.lo <= b.hi),
                BinaryOp::Gt => Interval::boolean(a.lo > b.hi, a.hi > b.lo),
                BinaryOp::Ge => Interval::boolean(a.lo >= b.hi, a.hi >= b.lo),
                BinaryOp::Eq => {
                    let disjoint = a.hi < b.lo || b.hi < a.lo;
                    let same_point = a.lo == a.hi && b.lo == b.hi && a.lo == b.lo;
                    Interval::boolean(same_point, !disjoint)
                }
                BinaryOp::Ne => {
                    let disjoint = a.hi < b.lo || b.hi < a.lo;
                    let same_point = a.lo == a.hi && b.lo == b.hi && a.lo == b.lo;
                    Interval::boolean(disjoint, !same_point)
                }
                BinaryOp::Imp => {
                    Interval::boolean(a.is_false() || b.is_true(), !(a.is_true() && b.is_false()))
                }
                BinaryOp::Iff => {
                    let known = |x: Interval| {
                        if x.is_true() {
                            Some(true)
                        } else if x.is_false() {
                            Some(false)
                        } else {
                            None
                        }
                    };
                    match (known(a), known(b)) {
                        (Some(x), Some(y)) => Interval::boolean(x == y, x == y),
                        _ => Interval::BOOL,
                    }
                }
            }
        }
        Expr::Nary(op, args) => {
            let vals: Vec<Interval> = args.iter().map(rec).collect();
            match op {
                NaryOp::Add => vals.iter().fold(Interval::point(0), |acc, x| {
                    Interval::new(acc.lo.saturating_add(x.lo), acc.hi.saturating_add(x.hi))
                }),
                NaryOp::Mul => vals.iter().fold(Interval::point(1), |acc, x| {
                    Interval::from_corners([
                        acc.lo.saturating_mul(x.lo),
                        acc.lo.saturating_mul(x.hi),
                        acc.hi.saturating_mul(x.lo),
                        acc.hi.saturating_mul(x.hi),
                    ])
                }),
                NaryOp::Min => vals
                    .iter()
                    .copied()
                    .reduce(|a, b| Interval::new(a.lo.min(b.lo), a.hi.min(b.hi)))
                    .unwrap_or(Interval::point(0)),
                NaryOp::Max => vals
                    .iter()
                    .copied()
                    .reduce(|a, b| Interval::new(a.lo.max(b.lo), a.hi.max(b.hi)))
                    .unwrap_or(Interval::point(0)),
                NaryOp::And => {
                    Interval::boolean(vals.iter().all(|x| x.is_true()), !vals.iter().any(|x| x.is_false()))
                }
                NaryOp::Or => {
                    Interval::boolean(vals.iter().any(|x| x.is_true()), !vals.iter().all(|x| x.is_false()))
                }
            }
        }
        Expr::If(c, a, b) => {
            let c = rec(c);
            if c.is_true() {
                rec(a)
            } else if c.is_false() {
                rec(b)
            } else {
                rec(a).union(rec(b))
            }
        }
        Expr::In(a, set) => {
            let a = rec(a);
            let inside: Vec<i128> =
                set.iter().map(|&v| v as i128).filter(|&v| a.lo <= v && v <= a.hi).collect();
            let all = a.hi - a.lo < inside.len() as i128;
            Interval::boolean(!inside.is_empty() && all, !inside.is_empty())
        }
    }
}

fn abs(a: Interval) -> Interval {
    if a.lo >= 0 {
        a
    } else if a.hi <= 0 {
        Interval::new(-a.hi, -a.lo)
    } else {
        Interval::new(0, a.hi.max(-a.lo))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use xcore::Domain;

    #[test]
    fn interval_bounds() {
        let s = DomainStore::new(&[Domain::range(-3, 5), Domain::range(2, 4)]);
        let x = Expr::var(VarId(0));
        let y = Expr::var(VarId(1));
        let sum = Expr::add(vec![x.clone(), y.clone()]);
        assert_eq!(eval_interval(&sum, &s, None), Interval::new(-1, 9));
        let d = Expr::binary(BinaryOp::Div, x.clone(), y.clone());
        assert_eq!(eval_interval(&d, &s, None), Interval::new(-2, 2));
        let m = Expr::binary(BinaryOp::Mod, x.clone(), y.clone());
        assert_eq!(eval_interval(&m, &s, None), Interval::new(0, 3));
        let lt = Expr::lt(y, Expr::cst(2));
        assert!(eval_interval(&lt, &s, None).is_false());
        let eq = Expr::eq(x, Expr::cst(7));
        assert!(eval_interval(&eq, &s, Some((VarId(0), 1))).is_false());
    }
}
