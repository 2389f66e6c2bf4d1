//! Linear sums, knapsack relaxations and maximum/minimum, on bounds.

use xcore::{CmpOp, Condition, Term, Value, VarId};

use crate::engine::Propagator;
use crate::store::{DomainStore, PResult, Wipeout};

/// Bounds-propagation rounds per call; stopping early is always sound.
const MAX_ROUNDS: usize = 256;

fn clamp(v: i128) -> Value {
    v.clamp(Value::MIN as i128 + 1, Value::MAX as i128) as Value
}

fn fdiv(a: i128, b: i128) -> i128 {
    let q = a / b;
    if a % b != 0 && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn cdiv(a: i128, b: i128) -> i128 {
    -fdiv(-a, b)
}

pub(crate) fn set_min(s: &mut DomainStore, x: VarId, v: i128) -> Result<bool, Wipeout> {
    if v > s.max(x) as i128 {
        return Err(Wipeout);
    }
    s.set_min(x, clamp(v))
}

pub(crate) fn set_max(s: &mut DomainStore, x: VarId, v: i128) -> Result<bool, Wipeout> {
    if v < s.min(x) as i128 {
        return Err(Wipeout);
    }
    s.set_max(x, clamp(v))
}

/// Allowed window for a quantity `q in [qlo, qhi]` constrained by `c`,
/// narrowing a variable right-hand side on the way.
pub(crate) fn condition_window(
    c: &Condition,
    s: &mut DomainStore,
    qlo: i128,
    qhi: i128,
) -> Result<(i128, i128), Wipeout> {
    const INF: i128 = i128::MAX / 4;
    let w = match c {
        Condition::Cmp(op, t) => {
            if let Term::Var(r) = t {
                match op {
                    CmpOp::Eq => {
                        set_min(s, *r, qlo)?;
                        set_max(s, *r, qhi)?;
                    }
                    CmpOp::Le => {
                        set_min(s, *r, qlo)?;
                    }
                    CmpOp::Lt => {
                        set_min(s, *r, qlo + 1)?;
                    }
                    CmpOp::Ge => {
                        set_max(s, *r, qhi)?;
                    }
                    CmpOp::Gt => {
                        set_max(s, *r, qhi - 1)?;
                    }
                    CmpOp::Ne => {}
                }
            }
            let (rlo, rhi) = match t {
                Term::Val(v) => (*v as i128, *v as i128),
                Term::Var(r) => (s.min(*r) as i128, s.max(*r) as i128),
            };
            match op {
                CmpOp::Eq => (rlo, rhi),
                CmpOp::Le => (-INF, rhi),
                CmpOp::Lt => (-INF, rhi - 1),
                CmpOp::Ge => (rlo, INF),
                CmpOp::Gt => (rlo + 1, INF),
                CmpOp::Ne => (-INF, INF),
            }
        }
        Condition::In(set) => match (set.min(), set.max()) {
            (Some(a), Some(b)) => (a as i128, b as i128),
            _ => return Err(Wipeout),
        },
        Condition::NotIn(_) => (-INF, INF),
    };
    if w.0 > w.1 || w.1 < qlo || w.0 > qhi {
        return Err(Wipeout);
    }
    Ok(w)
}

/// `lo <= sum(c * x) <= hi`, on bounds.
pub(crate) fn linear_bounds(s: &mut DomainStore, terms: &[(Value, VarId)], lo: i128, hi: i128) -> PResult {
    for _ in 0..MAX_ROUNDS {
        let contrib = |s: &DomainStore, c: Value, x: VarId| -> (i128, i128) {
            let (a, b) = (c as i128 * s.min(x) as i128, c as i128 * s.max(x) as i128);
            (a.min(b), a.max(b))
        };
        let (mut smin, mut smax) = (0i128, 0i128);
        for &(c, x) in terms {
            let (a, b) = contrib(s, c, x);
            smin += a;
            smax += b;
        }
        if smin > hi || smax < lo {
            return Err(Wipeout);
        }
        let mut changed = false;
        for &(c, x) in terms {
            if c == 0 {
                continue;
            }
            let (a, b) = contrib(s, c, x);
            // c*x <= hi - (smin - a) and c*x >= lo - (smax - b)
            let up = hi.saturating_sub(smin - a);
            let down = lo.saturating_sub(smax - b);
            let c = c as i128;
            if c > 0 {
                changed |= set_max(s, x, fdiv(up, c))?;
                changed |= set_min(s, x, cdiv(down, c))?;
            } else {
                changed |= set_min(s, x, cdiv(up, c))?;
                changed |= set_max(s, x, fdiv(down, c))?;
            }
        }
        if !changed {
            return Ok(());
        }
    }
    Ok(())
}

/// `sum(c * x) <condition>`, with a variable right-hand side folded in.
pub struct LinearProp {
    terms: Vec<(Value, VarId)>,
    condition: Condition,
}

impl LinearProp {
    pub fn new(scope: &[VarId], coeffs: &[Value], condition: &Condition) -> LinearProp {
        let mut terms: Vec<(Value, VarId)> = coeffs.iter().copied().zip(scope.iter().copied()).collect();
        let condition = match condition {
            Condition::Cmp(op, Term::Var(r)) => {
                terms.push((-1, *r));
                Condition::Cmp(*op, Term::Val(0))
            }
            other => other.clone(),
        };
        LinearProp { terms, condition }
    }
}

impl Propagator for LinearProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        const INF: i128 = i128::MAX / 4;
        let (lo, hi) = match &self.condition {
            Condition::Cmp(op, Term::Val(k)) => {
                let k = *k as i128;
                match op {
                    CmpOp::Eq => (k, k),
                    CmpOp::Le => (-INF, k),
                    CmpOp::Lt => (-INF, k - 1),
                    CmpOp::Ge => (k, INF),
                    CmpOp::Gt => (k + 1, INF),
                    CmpOp::Ne => return Ok(()),
                }
            }
            Condition::In(set) => match (set.min(), set.max()) {
                (Some(a), Some(b)) => (a as i128, b as i128),
                _ => return Err(Wipeout),
            },
            _ => return Ok(()),
        };
        linear_bounds(s, &self.terms, lo, hi)
    }
}

/// Knapsack as its two linear relaxations.
pub struct KnapsackProp {
    weight: LinearProp,
    profit: LinearProp,
}

impl KnapsackProp {
    pub fn new(scope: &[VarId], weights: &[Value], profits: &[Value], limit: Term, condition: &Condition) -> Self {
        KnapsackProp {
            weight: LinearProp::new(scope, weights, &Condition::Cmp(CmpOp::Le, limit)),
            profit: LinearProp::new(scope, profits, condition),
        }
    }
}

impl Propagator for KnapsackProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        self.weight.propagate(s)?;
        self.profit.propagate(s)
    }
}

/// `max(scope) <condition>` or `min(scope) <condition>`.
pub struct ExtremumProp {
    scope: Vec<VarId>,
    condition: Condition,
    maximum: bool,
}

impl ExtremumProp {
    pub fn new(scope: &[VarId], condition: &Condition, maximum: bool) -> ExtremumProp {
        ExtremumProp { scope: scope.to_vec(), condition: condition.clone(), maximum }
    }
}

impl Propagator for ExtremumProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        if self.scope.is_empty() {
            return Err(Wipeout);
        }
        let mins = self.scope.iter().map(|&x| s.min(x) as i128);
        let maxs = self.scope.iter().map(|&x| s.max(x) as i128);
        let (qlo, qhi) = if self.maximum {
            (mins.max().unwrap(), maxs.max().unwrap())
        } else {
            (mins.min().unwrap(), maxs.min().unwrap())
        };
        let (a, b) = condition_window(&self.condition, s, qlo, qhi)?;
        if self.maximum {
            for &x in &self.scope {
                set_max(s, x, b)?;
            }
            let reach: Vec<VarId> = self.scope.iter().copied().filter(|&x| s.max(x) as i128 >= a).collect();
            match reach.as_slice() {
                [] => return Err(Wipeout),
                [x] => {
                    set_min(s, *x, a)?;
                }
                _ => {}
            }
        } else {
            for &x in &self.scope {
                set_min(s, x, a)?;
            }
            let reach: Vec<VarId> = self.scope.iter().copied().filter(|&x| s.min(x) as i128 <= b).collect();
            match reach.as_slice() {
                [] => return Err(Wipeout),
                [x] => {
                    set_max(s, *x, b)?;
                }
                _ => {}
            }
        }
        Ok(())
    }
}
