//! Regular and MDD filtering over the layered unfolding.

use std::collections::HashSet;

use xcore::{Automaton, Mdd, Value, VarId};

use crate::engine::Propagator;
use crate::store::{DomainStore, PResult, Wipeout};

/// Layered reachability filter shared by `regular` and `mdd`.
pub struct LayeredProp {
    scope: Vec<VarId>,
    n_states: usize,
    start: usize,
    accepting: Vec<bool>,
    out: Vec<Vec<(Value, usize)>>,
}

impl LayeredProp {
    pub fn regular(scope: &[VarId], a: &Automaton) -> LayeredProp {
        let n = a.states.len();
        let mut accepting = vec![false; n];
        for &f in &a.finals {
            accepting[f] = true;
        }
        LayeredProp::build(scope, n, a.start, accepting, &a.transitions)
    }

    pub fn mdd(scope: &[VarId], m: &Mdd) -> LayeredProp {
        let n = m.nodes.len();
        let mut accepting = vec![false; n];
        accepting[m.terminal] = true;
        LayeredProp::build(scope, n, m.root, accepting, &m.transitions)
    }

    fn build(
        scope: &[VarId],
        n_states: usize,
        start: usize,
        accepting: Vec<bool>,
        transitions: &[(usize, Value, usize)],
    ) -> LayeredProp {
        let mut out = vec![Vec::new(); n_states];
        for &(a, v, b) in transitions {
            out[a].push((v, b));
        }
        LayeredProp { scope: scope.to_vec(), n_states, start, accepting, out }
    }
}

impl Propagator for LayeredProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        let k = self.scope.len();
        let n = self.n_states;
        let mut fwd = vec![vec![false; n]; k + 1];
        fwd[0][self.start] = true;
        for i in 0..k {
            let x = self.scope[i];
            for q in 0..n {
                if fwd[i][q] {
                    for &(v, r) in &self.out[q] {
                        if s.contains(x, v) {
                            fwd[i + 1][r] = true;
                        }
                    }
                }
            }
        }
        let mut bwd = vec![vec![false; n]; k + 1];
        for q in 0..n {
            bwd[k][q] = fwd[k][q] && self.accepting[q];
        }
        if !bwd[k].iter().any(|&b| b) {
            return Err(Wipeout);
        }
        let mut supported: Vec<HashSet<Value>> = vec![HashSet::new(); k];
        for i in (0..k).rev() {
            let x = self.scope[i];
            for q in 0..n {
                if !fwd[i][q] {
                    continue;
                }
                for &(v, r) in &self.out[q] {
                    if bwd[i + 1][r] && s.contains(x, v) {
                        bwd[i][q] = true;
                        supported[i].insert(v);
                    }
                }
            }
        }
        for i in 0..k {
            let mut keep: Vec<Value> = supported[i].iter().copied().collect();
            keep.sort_unstable();
            s.intersect_sorted(self.scope[i], &keep)?;
        }
        Ok(())
    }
}
