//! Comparison constraints: allEqual, ordered, lex, precedence.

use xcore::{Direction, Value, VarId};

use crate::engine::Propagator;
use crate::store::{DomainStore, PResult, Wipeout};

pub struct AllEqualProp {
    scope: Vec<VarId>,
}

impl AllEqualProp {
    pub fn new(scope: &[VarId]) -> AllEqualProp {
        AllEqualProp { scope: scope.to_vec() }
    }
}

impl Propagator for AllEqualProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        let Some(&first) = self.scope.first() else {
            return Ok(());
        };
        let lo = self.scope.iter().map(|&x| s.min(x)).max().unwrap();
        let hi = self.scope.iter().map(|&x| s.max(x)).min().unwrap();
        if lo > hi {
            return Err(Wipeout);
        }
        for &x in &self.scope {
            s.set_min(x, lo)?;
            s.set_max(x, hi)?;
        }
        let mut common = s.values(first);
        for &x in &self.scope[1..] {
            common.retain(|&v| s.contains(x, v));
        }
        for &x in &self.scope {
            s.intersect_sorted(x, &common)?;
        }
        Ok(())
    }
}

/// `a <= b - gap` on bounds.
fn less_eq(s: &mut DomainStore, a: VarId, b: VarId, gap: Value) -> Result<bool, Wipeout> {
    let x = s.set_max(a, s.max(b) - gap)?;
    let y = s.set_min(b, s.min(a) + gap)?;
    Ok(x || y)
}

pub struct OrderedProp {
    scope: Vec<VarId>,
    gap: Value,
}

impl OrderedProp {
    /// Variables in the order they must increase.
    pub fn new(scope: &[VarId], strict: bool, direction: Direction) -> OrderedProp {
        let mut scope = scope.to_vec();
        if direction == Direction::Decreasing {
            scope.reverse();
        }
        OrderedProp { scope, gap: strict as Value }
    }
}

impl Propagator for OrderedProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        loop {
            let mut changed = false;
            for w in self.scope.windows(2) {
                changed |= less_eq(s, w[0], w[1], self.gap)?;
            }
            for w in self.scope.windows(2).rev() {
                changed |= less_eq(s, w[0], w[1], self.gap)?;
            }
            if !changed {
                return Ok(());
            }
        }
    }
}

/// Lexicographic ordering of consecutive lists.
pub struct LexProp {
    lists: Vec<Vec<VarId>>,
    strict: bool,
}

impl LexProp {
    pub fn new(lists: &[Vec<VarId>], strict: bool, direction: Direction) -> LexProp {
        let mut lists = lists.to_vec();
        if direction == Direction::Decreasing {
            lists.reverse();
        }
        LexProp { lists, strict }
    }

    /// `a <=lex b` (or `<lex`): skip the fixed equal prefix, then the first
    /// open position must be ordered.
    fn pair(&self, s: &mut DomainStore, a: &[VarId], b: &[VarId]) -> PResult {
        for p in 0..a.len() {
            let (x, y) = (a[p], b[p]);
            if x == y {
                continue;
            }
            if s.is_fixed(x) && s.is_fixed(y) && s.min(x) == s.min(y) {
                continue;
            }
            let last = p + 1 == a.len() || (p + 1..a.len()).all(|q| a[q] == b[q]);
            let gap = if self.strict && last { 1 } else { 0 };
            less_eq(s, x, y, gap)?;
            return Ok(());
        }
        if self.strict {
            Err(Wipeout)
        } else {
            Ok(())
        }
    }
}

impl Propagator for LexProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        for i in 1..self.lists.len() {
            let (a, b) = (self.lists[i - 1].clone(), self.lists[i].clone());
            self.pair(s, &a, &b)?;
        }
        Ok(())
    }
}

/// Value precedence chain.
pub struct PrecedenceProp {
    scope: Vec<VarId>,
    values: Vec<Value>,
    covered: bool,
}

impl PrecedenceProp {
    pub fn new(scope: &[VarId], values: &[Value], covered: bool) -> PrecedenceProp {
        PrecedenceProp { scope: scope.to_vec(), values: values.to_vec(), covered }
    }
}

impl Propagator for PrecedenceProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        let n = self.scope.len();
        if n == 0 {
            return Ok(());
        }
        loop {
            let mut changed = false;
            for k in 1..self.values.len() {
                let (prev, cur) = (self.values[k - 1], self.values[k]);
                // earliest position where the preceding value may appear
                let first = (0..n).find(|&p| s.contains(self.scope[p], prev)).unwrap_or(n);
                for p in 0..=first.min(n - 1) {
                    changed |= s.remove(self.scope[p], cur)?;
                }
            }
            if self.covered {
                for &v in &self.values {
                    let holders: Vec<usize> = (0..n).filter(|&p| s.contains(self.scope[p], v)).collect();
                    match holders.as_slice() {
                        [] => return Err(Wipeout),
                        [p] => changed |= s.assign(self.scope[*p], v)?,
                        _ => {}
                    }
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }
}
