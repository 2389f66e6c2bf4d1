//! noOverlap, cumulative and binPacking.

use std::collections::HashMap;

use xcore::{BinLoads, CmpOp, Condition, Term, Value, VarId};

use crate::arith::{set_max, set_min};
use crate::engine::Propagator;
use crate::store::{DomainStore, PResult, Wipeout};

/// Disjunctive boxes, pairwise.
pub struct NoOverlapProp {
    origins: Vec<Vec<VarId>>,
    lengths: Vec<Vec<Value>>,
    ignored: Vec<bool>,
}

impl NoOverlapProp {
    pub fn new(origins: &[Vec<VarId>], lengths: &[Vec<Value>], zero_ignored: bool) -> NoOverlapProp {
        let ignored = lengths.iter().map(|l| zero_ignored && l.contains(&0)).collect();
        NoOverlapProp { origins: origins.to_vec(), lengths: lengths.to_vec(), ignored }
    }

    /// Whether `a + len <= b` is still possible.
    fn can_precede(s: &DomainStore, a: VarId, len: Value, b: VarId) -> bool {
        s.min(a) as i128 + len as i128 <= s.max(b) as i128
    }
}

impl Propagator for NoOverlapProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        let n = self.origins.len();
        loop {
            let before = s.changes();
            for i in 0..n {
                for j in i + 1..n {
                    if self.ignored[i] || self.ignored[j] {
                        continue;
                    }
                    // (first, its length, second) for every open disjunct
                    let mut open = Vec::new();
                    for d in 0..self.origins[i].len() {
                        let (oi, oj) = (self.origins[i][d], self.origins[j][d]);
                        let (li, lj) = (self.lengths[i][d], self.lengths[j][d]);
                        if Self::can_precede(s, oi, li, oj) {
                            open.push((oi, li, oj));
                        }
                        if Self::can_precede(s, oj, lj, oi) {
                            open.push((oj, lj, oi));
                        }
                        if open.len() > 1 {
                            break;
                        }
                    }
                    match open.as_slice() {
                        [] => return Err(Wipeout),
                        [(a, l, b)] => {
                            set_max(s, *a, s.max(*b) as i128 - *l as i128)?;
                            set_min(s, *b, s.min(*a) as i128 + *l as i128)?;
                        }
                        _ => {}
                    }
                }
            }
            if s.changes() == before {
                return Ok(());
            }
        }
    }
}

/// Resource profile as disjoint `(start, end, usage)` segments.
fn profile(parts: &[(i128, i128, i128)]) -> Vec<(i128, i128, i128)> {
    let mut events: Vec<(i128, i128)> = Vec::new();
    for &(a, b, h) in parts {
        events.push((a, h));
        events.push((b, -h));
    }
    events.sort_unstable();
    let mut out = Vec::new();
    let mut usage = 0i128;
    let mut k = 0;
    while k < events.len() {
        let t = events[k].0;
        while k < events.len() && events[k].0 == t {
            usage += events[k].1;
            k += 1;
        }
        if k < events.len() && usage > 0 {
            out.push((t, events[k].0, usage));
        }
    }
    out
}

/// Time-table filtering over compulsory parts.
pub struct CumulativeProp {
    origins: Vec<VarId>,
    lengths: Vec<Value>,
    heights: Vec<Value>,
    limit: Term,
    strict: bool,
}

impl CumulativeProp {
    pub fn new(origins: &[VarId], lengths: &[Value], heights: &[Value], condition: &Condition) -> CumulativeProp {
        let (limit, strict) = match condition {
            Condition::Cmp(CmpOp::Lt, t) => (*t, true),
            Condition::Cmp(_, t) => (*t, false),
            _ => (Term::Val(Value::MAX), false),
        };
        CumulativeProp { origins: origins.to_vec(), lengths: lengths.to_vec(), heights: heights.to_vec(), limit, strict }
    }

    fn compulsory(&self, s: &DomainStore, i: usize) -> Option<(i128, i128, i128)> {
        let (lst, ect) = (s.max(self.origins[i]) as i128, s.min(self.origins[i]) as i128 + self.lengths[i] as i128);
        (lst < ect && self.heights[i] > 0 && self.lengths[i] > 0).then_some((lst, ect, self.heights[i] as i128))
    }
}

impl Propagator for CumulativeProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        let gap = self.strict as i128;
        // the idle instant needs 0 within the limit
        if let Term::Var(r) = self.limit {
            set_min(s, r, gap)?;
        }
        let cap_of = |s: &DomainStore| -> i128 {
            match self.limit {
                Term::Val(v) => v as i128 - gap,
                Term::Var(r) => s.max(r) as i128 - gap,
            }
        };
        if cap_of(s) < 0 {
            return Err(Wipeout);
        }
        let n = self.origins.len();
        loop {
            let before = s.changes();
            let parts: Vec<Option<(i128, i128, i128)>> = (0..n).map(|i| self.compulsory(s, i)).collect();
            let all: Vec<(i128, i128, i128)> = parts.iter().flatten().copied().collect();
            let peak = profile(&all).iter().map(|p| p.2).max().unwrap_or(0);
            if let Term::Var(r) = self.limit {
                set_min(s, r, peak + gap)?;
            }
            let cap = cap_of(s);
            if peak > cap {
                return Err(Wipeout);
            }
            for i in 0..n {
                let (l, h) = (self.lengths[i] as i128, self.heights[i] as i128);
                if l == 0 || h == 0 {
                    continue;
                }
                let others: Vec<(i128, i128, i128)> =
                    (0..n).filter(|&j| j != i).filter_map(|j| parts[j]).collect();
                let conflicts: Vec<(i128, i128, i128)> =
                    profile(&others).into_iter().filter(|p| p.2 + h > cap).collect();
                if conflicts.is_empty() {
                    continue;
                }
                let o = self.origins[i];
                let mut t = s.min(o) as i128;
                for &(a, b, _) in &conflicts {
                    if a < t + l && b > t {
                        t = b;
                    }
                }
                set_min(s, o, t)?;
                let mut t = s.max(o) as i128;
                for &(a, b, _) in conflicts.iter().rev() {
                    if a < t + l && b > t {
                        t = a - l;
                    }
                }
                set_max(s, o, t)?;
            }
            if s.changes() == before {
                return Ok(());
            }
        }
    }
}

pub struct BinPackingProp {
    scope: Vec<VarId>,
    sizes: Vec<Value>,
    loads: BinLoads,
}

impl BinPackingProp {
    pub fn new(scope: &[VarId], sizes: &[Value], loads: &BinLoads) -> BinPackingProp {
        BinPackingProp { scope: scope.to_vec(), sizes: sizes.to_vec(), loads: loads.clone() }
    }

    /// Capacity for monotone conditions with non-negative sizes.
    fn capacity(&self, s: &mut DomainStore, sure_peak: i128) -> Result<Option<i128>, Wipeout> {
        let BinLoads::Condition(Condition::Cmp(op @ (CmpOp::Le | CmpOp::Lt), t)) = &self.loads else {
            return Ok(None);
        };
        if self.sizes.iter().any(|&z| z < 0) {
            return Ok(None);
        }
        let gap = (*op == CmpOp::Lt) as i128;
        Ok(Some(match t {
            Term::Val(v) => *v as i128 - gap,
            Term::Var(r) => {
                if sure_peak >= 0 {
                    set_min(s, *r, sure_peak + gap)?;
                }
                s.max(*r) as i128 - gap
            }
        }))
    }

    fn sure_loads(&self, s: &DomainStore) -> HashMap<Value, i128> {
        let mut m = HashMap::new();
        for (&x, &z) in self.scope.iter().zip(&self.sizes) {
            if let Some(b) = s.value(x) {
                *m.entry(b).or_insert(0) += z as i128;
            }
        }
        m
    }

    fn capacity_rule(&self, s: &mut DomainStore) -> PResult {
        loop {
            let before = s.changes();
            let sure = self.sure_loads(s);
            let peak = sure.values().copied().max().unwrap_or(-1);
            let Some(cap) = self.capacity(s, peak)? else {
                return Ok(());
            };
            if peak > cap {
                return Err(Wipeout);
            }
            for (&x, &z) in self.scope.iter().zip(&self.sizes) {
                if s.is_fixed(x) || s.size(x) > 1 << 16 {
                    continue;
                }
                let z = z as i128;
                s.retain(x, |b| sure.get(&b).copied().unwrap_or(0) + z <= cap)?;
            }
            if s.changes() == before {
                break;
            }
        }
        // every item sits in some bin that can hold at most `cap`
        let Some(cap) = self.capacity(s, -1)? else {
            return Ok(());
        };
        let total: i128 = self.sizes.iter().map(|&z| z as i128).sum();
        let mut bins: std::collections::BTreeSet<Value> = std::collections::BTreeSet::new();
        for &x in &self.scope {
            if s.size(x) > 1 << 16 {
                return Ok(());
            }
            bins.extend(s.values(x));
        }
        if total > cap.max(0) * bins.len() as i128 {
            return Err(Wipeout);
        }
        Ok(())
    }

    fn loads_rule(&self, s: &mut DomainStore, loads: &[VarId]) -> PResult {
        let nb = loads.len() as Value;
        for &x in &self.scope {
            s.set_min(x, 0)?;
            s.set_max(x, nb - 1)?;
        }
        loop {
            let before = s.changes();
            // per bin: load bounds from fixed items plus the signed sizes of the possible ones
            let mut lo = vec![0i128; loads.len()];
            let mut hi = vec![0i128; loads.len()];
            for (&x, &z) in self.scope.iter().zip(&self.sizes) {
                let z = z as i128;
                for b in s.values(x) {
                    let b = b as usize;
                    if s.is_fixed(x) {
                        lo[b] += z;
                        hi[b] += z;
                    } else if z < 0 {
                        lo[b] += z;
                    } else {
                        hi[b] += z;
                    }
                }
            }
            for (b, &l) in loads.iter().enumerate() {
                set_min(s, l, lo[b])?;
                set_max(s, l, hi[b])?;
            }
            for (&x, &z) in self.scope.iter().zip(&self.sizes) {
                if s.is_fixed(x) {
                    continue;
                }
                let z = z as i128;
                // bounds of the other items in bin b, given x goes there
                let keep: Vec<Value> = s
                    .values(x)
                    .into_iter()
                    .filter(|&b| {
                        let (l, h) = (lo[b as usize] - z.min(0), hi[b as usize] - z.max(0));
                        let load = loads[b as usize];
                        l + z <= s.max(load) as i128 && h + z >= s.min(load) as i128
                    })
                    .collect();
                s.intersect_sorted(x, &keep)?;
            }
            if s.changes() == before {
                return Ok(());
            }
        }
    }
}

impl Propagator for BinPackingProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        match &self.loads {
            BinLoads::Condition(_) => self.capacity_rule(s),
            BinLoads::Loads(ls) => {
                let ls = ls.clone();
                self.loads_rule(s, &ls)
            }
        }
    }
}
