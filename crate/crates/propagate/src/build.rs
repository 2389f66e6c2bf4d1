//! Maps each constraint form to its filtering algorithm.

use xcore::{Constraint, ConstraintKind};

use crate::alldiff::{AllDifferentListProp, AllDifferentProp, CircuitProp};
use crate::arith::{ExtremumProp, KnapsackProp, LinearProp};
use crate::automaton::LayeredProp;
use crate::counting::{CardinalityProp, CountProp, NValuesProp};
use crate::element::{ChannelProp, ElementProp, InstantiationProp};
use crate::engine::{Local, Propagator};
use crate::intension::IntensionProp;
use crate::order::{AllEqualProp, LexProp, OrderedProp, PrecedenceProp};
use crate::scheduling::{BinPackingProp, CumulativeProp, NoOverlapProp};
use crate::store::{DomainStore, PResult};
use crate::table::{ConflictsProp, SupportsProp};

/// Windows of a slide, each with its own propagator, run until none changes.
struct SlideProp {
    windows: Vec<(Box<dyn Propagator>, Local)>,
}

impl Propagator for SlideProp {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        loop {
            let before = s.changes();
            for (p, local) in &mut self.windows {
                p.propagate(s)?;
                local.finish(s)?;
            }
            if s.changes() == before {
                return Ok(());
            }
        }
    }
}

/// Exact filtering first when a variable occurs twice, since the dedicated
/// algorithms of the arc-consistent forms assume distinct positions.
struct Aliased {
    local: Local,
    inner: Box<dyn Propagator>,
}

/// Product of domain sizes up to which aliased scopes are enumerated.
const ALIAS_BUDGET: u64 = 1 << 14;

impl Propagator for Aliased {
    fn propagate(&mut self, s: &mut DomainStore) -> PResult {
        self.local.enumerate(s, ALIAS_BUDGET)?;
        self.inner.propagate(s)
    }
}

pub fn make_propagator(c: &Constraint) -> Box<dyn Propagator> {
    let inner = dedicated(c);
    let gac = matches!(
        c.kind(),
        ConstraintKind::Extension | ConstraintKind::Regular | ConstraintKind::Mdd | ConstraintKind::Element
    );
    if gac && c.var_refs().len() != c.scope().len() {
        Box::new(Aliased { local: Local::new(c), inner })
    } else {
        inner
    }
}

fn dedicated(c: &Constraint) -> Box<dyn Propagator> {
    match c {
        Constraint::Intension(e) => Box::new(IntensionProp::new(e)),
        Constraint::Extension { scope, tuples, supports: true, .. } => Box::new(SupportsProp::new(scope, tuples)),
        Constraint::Extension { scope, tuples, supports: false, starred } => {
            Box::new(ConflictsProp::new(c, scope, tuples, *starred))
        }
        Constraint::Regular { scope, automaton } => Box::new(LayeredProp::regular(scope, automaton)),
        Constraint::Mdd { scope, diagram } => Box::new(LayeredProp::mdd(scope, diagram)),
        Constraint::AllDifferent { scope, except } => Box::new(AllDifferentProp::new(scope, *except)),
        Constraint::AllDifferentList { lists } => Box::new(AllDifferentListProp::new(lists)),
        Constraint::AllEqual { scope } => Box::new(AllEqualProp::new(scope)),
        Constraint::Ordered { scope, strict, direction } => Box::new(OrderedProp::new(scope, *strict, *direction)),
        Constraint::Lex { lists, strict, direction } => Box::new(LexProp::new(lists, *strict, *direction)),
        Constraint::Precedence { scope, values, covered } => Box::new(PrecedenceProp::new(scope, values, *covered)),
        Constraint::Sum { scope, coeffs, condition } => Box::new(LinearProp::new(scope, coeffs, condition)),
        Constraint::Count { scope, values, condition } => Box::new(CountProp::new(scope, values, condition)),
        Constraint::NValues { scope, condition } => Box::new(NValuesProp::new(scope, condition)),
        Constraint::Cardinality { scope, values, occurs, closed } => {
            Box::new(CardinalityProp::new(scope, values, occurs, *closed))
        }
        Constraint::Maximum { scope, condition } => Box::new(ExtremumProp::new(scope, condition, true)),
        Constraint::Minimum { scope, condition } => Box::new(ExtremumProp::new(scope, condition, false)),
        Constraint::Element { list, index, value } => Box::new(ElementProp::new(list, *index, value)),
        Constraint::Channel { list, target } => Box::new(ChannelProp::new(c, list, target)),
        Constraint::NoOverlap { origins, lengths, zero_ignored } => {
            Box::new(NoOverlapProp::new(origins, lengths, *zero_ignored))
        }
        Constraint::Cumulative { origins, lengths, heights, condition } => {
            Box::new(CumulativeProp::new(origins, lengths, heights, condition))
        }
        Constraint::BinPacking { scope, sizes, loads } => Box::new(BinPackingProp::new(scope, sizes, loads)),
        Constraint::Knapsack { scope, weights, profits, limit, condition } => {
            Box::new(KnapsackProp::new(scope, weights, profits, *limit, condition))
        }
        Constraint::Circuit { scope } => Box::new(CircuitProp::new(scope)),
        Constraint::Instantiation { scope, values } => Box::new(InstantiationProp::new(scope, values)),
        Constraint::Slide { scope, arity, offset, circular, template } => {
            let windows = Constraint::slide_windows(scope, *arity, *offset, *circular, template)
                .iter()
                .map(|w| (make_propagator(w), Local::new(w)))
                .collect();
            Box::new(SlideProp { windows })
        }
    }
}

/// Consistency level each form's propagator guarantees at fixpoint, on top of
/// the check of fully fixed scopes and the filtering of a last open variable.
pub fn propagator_strength_report() -> Vec<(ConstraintKind, &'static str)> {
    use ConstraintKind::*;
    let gac = "generalized arc consistency";
    let bounds = "bounds consistency";
    let mut out = Vec::new();
    for k in ConstraintKind::KERNEL.iter().copied().chain([AllDifferentList]) {
        let level = match k {
            Extension | Regular | Mdd | Element | Instantiation => gac,
            Channel => "generalized arc consistency on small scopes, pairwise links otherwise",
            Intension => "generalized arc consistency on small scopes, interval probing otherwise",
            AllDifferent => "singleton elimination with a pigeonhole check",
            AllDifferentList => "pairwise last-position elimination",
            AllEqual => "domain intersection",
            Ordered | Lex => bounds,
            Precedence => "first-occurrence filtering",
            Sum | Count | NValues | Cardinality | Maximum | Minimum | Knapsack | BinPacking => bounds,
            Cumulative => "time-table filtering",
            NoOverlap => "pairwise disjunctive filtering",
            Circuit => "subcycle elimination with singleton elimination",
            Slide => "per-window filtering of the template",
        };
        out.push((k, level));
    }
    out
}
