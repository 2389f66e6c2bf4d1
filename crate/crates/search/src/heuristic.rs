use xcore::{Value, VarId};
use xcore_propagate::DomainStore;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum VarOrder {
    /// Smallest domain first.
    #[default]
    Dom,
    /// Smallest domain over summed failure weight of the constraints on the variable.
    DomWdeg,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Heuristic {
    pub order: VarOrder,
    /// Luby restarts with this many failures per unit; off when `None`.
    pub restart_base: Option<u64>,
}

impl Heuristic {
    pub fn wdeg() -> Heuristic {
        Heuristic { order: VarOrder::DomWdeg, restart_base: None }
    }

    pub fn with_restarts(mut self, base: u64) -> Heuristic {
        self.restart_base = Some(base.max(1));
        self
    }
}

/// Branching choice: the left branch assigns `value`, the right one removes it.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub var: VarId,
    pub value: Value,
}

/// Smallest-domain variable (ties to the smallest id) with its smallest value.
/// `None` when every variable is fixed.
pub fn select_branch(h: &Heuristic, s: &DomainStore) -> Option<Decision> {
    select_weighted(h, s, &[])
}

/// As `select_branch`, with per-variable failure weights for the weighted order.
pub(crate) fn select_weighted(h: &Heuristic, s: &DomainStore, var_weight: &[f64]) -> Option<Decision> {
    let mut best: Option<(f64, VarId)> = None;
    for i in 0..s.n_vars() {
        let v = VarId(i as u32);
        let size = s.size(v);
        if size <= 1 {
            continue;
        }
        let score = match h.order {
            VarOrder::DomWdeg if !var_weight.is_empty() => size as f64 / var_weight[i].max(1.0),
            _ => size as f64,
        };
        if best.is_none_or(|(b, _)| score < b) {
            best = Some((score, v));
        }
    }
    best.map(|(_, v)| Decision { var: v, value: s.min(v) })
}

/// The Luby sequence 1, 1, 2, 1, 1, 2, 4, ... (1-based).
pub fn luby(i: u64) -> u64 {
    let mut i = i.max(1);
    loop {
        let mut k = 1u32;
        while (1u64 << k) - 1 < i {
            k += 1;
        }
        if i == (1u64 << k) - 1 {
            return 1u64 << (k - 1);
        }
        i -= (1u64 << (k - 1)) - 1;
    }
}
