//! Trailed domain store.

use std::collections::HashMap;

use xcore::{Domain, Instance, Value, VarId};

/// Raised when a domain becomes empty.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Wipeout;

pub type PResult = Result<(), Wipeout>;

/// Largest value span stored as an explicit sparse set; wider contiguous
/// domains are kept as bounds only.
const SPARSE_SPAN: u64 = 1 << 16;

#[derive(Clone, Debug)]
enum Positions {
    Dense(Vec<u32>),
    Map(HashMap<Value, u32>),
}

#[derive(Clone, Debug)]
enum Repr {
    Sparse { dense: Vec<Value>, pos: Positions },
    Interval,
}

#[derive(Clone, Debug)]
struct VarDom {
    base: Value,
    repr: Repr,
    size: u64,
    lo: Value,
    hi: Value,
}

impl VarDom {
    fn new(d: &Domain) -> VarDom {
        let lo = d.min().expect("empty domain");
        let hi = d.max().unwrap();
        let span = (hi as i128 - lo as i128 + 1) as u64;
        if d.intervals().len() == 1 && span > SPARSE_SPAN {
            return VarDom { base: lo, repr: Repr::Interval, size: span, lo, hi };
        }
        let dense: Vec<Value> = d.iter().collect();
        let pos = if span <= SPARSE_SPAN {
            let mut p = vec![u32::MAX; span as usize];
            for (i, &v) in dense.iter().enumerate() {
                p[(v - lo) as usize] = i as u32;
            }
            Positions::Dense(p)
        } else {
            Positions::Map(dense.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect())
        };
        VarDom { base: lo, size: dense.len() as u64, repr: Repr::Sparse { dense, pos }, lo, hi }
    }

    fn position(&self, v: Value) -> Option<usize> {
        match &self.repr {
            Repr::Sparse { pos: Positions::Dense(p), .. } => {
                let off = v.checked_sub(self.base)?;
                if off < 0 {
                    return None;
                }
                p.get(off as usize).filter(|&&i| i != u32::MAX).map(|&i| i as usize)
            }
            Repr::Sparse { pos: Positions::Map(m), .. } => m.get(&v).map(|&i| i as usize),
            Repr::Interval => None,
        }
    }

    fn contains(&self, v: Value) -> bool {
        if v < self.lo || v > self.hi {
            return false;
        }
        match &self.repr {
            Repr::Interval => true,
            Repr::Sparse { .. } => self.position(v).is_some_and(|p| (p as u64) < self.size),
        }
    }

    fn set_pos(&mut self, v: Value, i: usize) {
        let base = self.base;
        if let Repr::Sparse { pos, .. } = &mut self.repr {
            match pos {
                Positions::Dense(p) => p[(v - base) as usize] = i as u32,
                Positions::Map(m) => {
                    m.insert(v, i as u32);
                }
            }
        }
    }

    /// Swaps `v` out of the live prefix. Caller guarantees membership.
    fn swap_out(&mut self, v: Value) {
        let i = self.position(v).unwrap();
        let last = self.size as usize - 1;
        let w = match &mut self.repr {
            Repr::Sparse { dense, .. } => {
                dense.swap(i, last);
                dense[i]
            }
            Repr::Interval => unreachable!(),
        };
        self.set_pos(w, i);
        self.set_pos(v, last);
        self.size -= 1;
    }

    fn live(&self) -> &[Value] {
        match &self.repr {
            Repr::Sparse { dense, .. } => &dense[..self.size as usize],
            Repr::Interval => &[],
        }
    }

    /// Re-establishes `lo`/`hi` after removals, scanning the cheaper way.
    fn fix_bounds(&mut self) {
        if self.size == 0 || matches!(self.repr, Repr::Interval) {
            return;
        }
        let span = (self.hi as i128 - self.lo as i128 + 1) as u64;
        if self.size * 4 < span {
            let live = self.live();
            let (lo, hi) = (*live.iter().min().unwrap(), *live.iter().max().unwrap());
            self.lo = lo;
            self.hi = hi;
        } else {
            let mut lo = self.lo;
            while !self.contains(lo) {
                lo += 1;
            }
            let mut hi = self.hi;
            while !self.contains(hi) {
                hi -= 1;
            }
            self.lo = lo;
            self.hi = hi;
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct TrailEntry {
    var: u32,
    size: u64,
    lo: Value,
    hi: Value,
}

/// Current domains of every variable with a trail for exact undo.
#[derive(Clone, Debug)]
pub struct DomainStore {
    doms: Vec<VarDom>,
    trail: Vec<TrailEntry>,
    levels: Vec<usize>,
    saved: Vec<u64>,
    level_stamp: u64,
    next_stamp: u64,
    touched: Vec<VarId>,
    touched_flag: Vec<bool>,
    changes: u64,
}

impl DomainStore {
    pub fn new(domains: &[Domain]) -> DomainStore {
        DomainStore {
            doms: domains.iter().map(VarDom::new).collect(),
            trail: Vec::new(),
            levels: Vec::new(),
            saved: vec![0; domains.len()],
            level_stamp: 1,
            next_stamp: 2,
            touched: Vec::new(),
            touched_flag: vec![false; domains.len()],
            changes: 0,
        }
    }

    pub fn from_instance(inst: &Instance) -> DomainStore {
        let ds: Vec<Domain> = inst.variables.iter().map(|v| v.domain.clone()).collect();
        DomainStore::new(&ds)
    }

    pub fn n_vars(&self) -> usize {
        self.doms.len()
    }

    #[inline]
    pub fn size(&self, v: VarId) -> u64 {
        self.doms[v.index()].size
    }

    #[inline]
    pub fn min(&self, v: VarId) -> Value {
        self.doms[v.index()].lo
    }

    #[inline]
    pub fn max(&self, v: VarId) -> Value {
        self.doms[v.index()].hi
    }

    #[inline]
    pub fn contains(&self, v: VarId, val: Value) -> bool {
        self.doms[v.index()].contains(val)
    }

    #[inline]
    pub fn is_fixed(&self, v: VarId) -> bool {
        self.doms[v.index()].size == 1
    }

    /// Value of a fixed variable.
    pub fn value(&self, v: VarId) -> Option<Value> {
        self.is_fixed(v).then(|| self.min(v))
    }

    /// `false` for bounds-only domains, where interior removals are ignored.
    pub fn has_holes(&self, v: VarId) -> bool {
        matches!(self.doms[v.index()].repr, Repr::Sparse { .. })
    }

    /// Current values in increasing order.
    pub fn values(&self, v: VarId) -> Vec<Value> {
        let d = &self.doms[v.index()];
        match d.repr {
            Repr::Interval => (d.lo..=d.hi).collect(),
            Repr::Sparse { .. } => {
                let span = (d.hi as i128 - d.lo as i128 + 1) as u64;
                if d.size * 8 < span {
                    let mut out = d.live().to_vec();
                    out.sort_unstable();
                    out
                } else {
                    (d.lo..=d.hi).filter(|&x| d.contains(x)).collect()
                }
            }
        }
    }

    pub fn domain(&self, v: VarId) -> Domain {
        let d = &self.doms[v.index()];
        match d.repr {
            Repr::Interval => Domain::range(d.lo, d.hi),
            Repr::Sparse { .. } => Domain::from_values(d.live().iter().copied()),
        }
    }

    pub fn domains(&self) -> Vec<Domain> {
        (0..self.doms.len()).map(|i| self.domain(VarId(i as u32))).collect()
    }

    /// Monotone counter of domain modifications, for change detection.
    pub fn changes(&self) -> u64 {
        self.changes
    }

    fn save(&mut self, v: VarId) {
        let i = v.index();
        if self.saved[i] != self.level_stamp {
            self.saved[i] = self.level_stamp;
            let d = &self.doms[i];
            self.trail.push(TrailEntry { var: v.0, size: d.size, lo: d.lo, hi: d.hi });
        }
        if !self.touched_flag[i] {
            self.touched_flag[i] = true;
            self.touched.push(v);
        }
        self.changes += 1;
    }

    pub fn remove(&mut self, v: VarId, val: Value) -> Result<bool, Wipeout> {
        let d = &self.doms[v.index()];
        if !d.contains(val) {
            return Ok(false);
        }
        if matches!(d.repr, Repr::Interval) {
            if val == d.lo {
                return self.set_min(v, val + 1);
            }
            if val == d.hi {
                return self.set_max(v, val - 1);
            }
            return Ok(false);
        }
        if d.size == 1 {
            return Err(Wipeout);
        }
        self.save(v);
        let d = &mut self.doms[v.index()];
        d.swap_out(val);
        if val == d.lo || val == d.hi {
            d.fix_bounds();
        }
        Ok(true)
    }

    pub fn set_min(&mut self, v: VarId, m: Value) -> Result<bool, Wipeout> {
        let d = &self.doms[v.index()];
        if m <= d.lo {
            return Ok(false);
        }
        if m > d.hi {
            return Err(Wipeout);
        }
        self.save(v);
        let d = &mut self.doms[v.index()];
        match d.repr {
            Repr::Interval => {
                d.size = (d.hi - m + 1) as u64;
                d.lo = m;
            }
            Repr::Sparse { .. } => {
                let span = (m as i128 - d.lo as i128) as u64;
                if span < d.size {
                    for x in d.lo..m {
                        if d.contains(x) {
                            d.swap_out(x);
                        }
                    }
                } else {
                    let mut i = d.size as usize;
                    while i > 0 {
                        i -= 1;
                        let x = d.live()[i];
                        if x < m {
                            d.swap_out(x);
                        }
                    }
                }
                d.lo = m;
                d.fix_bounds();
            }
        }
        Ok(true)
    }

    pub fn set_max(&mut self, v: VarId, m: Value) -> Result<bool, Wipeout> {
        let d = &self.doms[v.index()];
        if m >= d.hi {
            return Ok(false);
        }
        if m < d.lo {
            return Err(Wipeout);
        }
        self.save(v);
        let d = &mut self.doms[v.index()];
        match d.repr {
            Repr::Interval => {
                d.size = (m - d.lo + 1) as u64;
                d.hi = m;
            }
            Repr::Sparse { .. } => {
                let span = (d.hi as i128 - m as i128) as u64;
                if span < d.size {
                    for x in m + 1..=d.hi {
                        if d.contains(x) {
                            d.swap_out(x);
                        }
                    }
                } else {
                    let mut i = d.size as usize;
                    while i > 0 {
                        i -= 1;
                        let x = d.live()[i];
                        if x > m {
                            d.swap_out(x);
                        }
                    }
                }
                d.hi = m;
                d.fix_bounds();
            }
        }
        Ok(true)
    }

    pub fn assign(&mut self, v: VarId, val: Value) -> Result<bool, Wipeout> {
        if !self.contains(v, val) {
            return Err(Wipeout);
        }
        if self.is_fixed(v) {
            return Ok(false);
        }
        let a = self.set_min(v, val)?;
        let b = self.set_max(v, val)?;
        Ok(a || b)
    }

    /// Keeps only values accepted by `keep`.
    pub fn retain(&mut self, v: VarId, keep: impl Fn(Value) -> bool) -> Result<bool, Wipeout> {
        let vals = self.values(v);
        let mut changed = false;
        if !vals.iter().any(|&x| keep(x)) {
            return Err(Wipeout);
        }
        for x in vals {
            if !keep(x) {
                changed |= self.remove(v, x)?;
            }
        }
        Ok(changed)
    }

    /// Restricts a domain to a sorted value list.
    pub fn intersect_sorted(&mut self, v: VarId, allowed: &[Value]) -> Result<bool, Wipeout> {
        self.retain(v, |x| allowed.binary_search(&x).is_ok())
    }

    pub fn level(&self) -> usize {
        self.levels.len()
    }

    pub fn push_level(&mut self) {
        self.levels.push(self.trail.len());
        self.level_stamp = self.next_stamp;
        self.next_stamp += 1;
    }

    /// Undoes every change since the matching [`push_level`](Self::push_level).
    pub fn pop_level(&mut self) {
        let mark = self.levels.pop().expect("pop_level without push_level");
        while self.trail.len() > mark {
            let e = self.trail.pop().unwrap();
            let d = &mut self.doms[e.var as usize];
            d.size = e.size;
            d.lo = e.lo;
            d.hi = e.hi;
        }
        self.level_stamp = self.next_stamp;
        self.next_stamp += 1;
        self.changes += 1;
    }

    /// Variables modified since the last call.
    pub fn take_touched(&mut self) -> Vec<VarId> {
        for v in &self.touched {
            self.touched_flag[v.index()] = false;
        }
        std::mem::take(&mut self.touched)
    }

    pub fn clear_touched(&mut self) {
        self.take_touched();
    }
}
