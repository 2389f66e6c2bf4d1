use std::collections::BTreeMap;

use serde::Serialize;
use xcore::{Status, Value};

use crate::{RunRecord, ScoreError};

/// Known answer for an instance, when available.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GroundTruth {
    Unsat,
    Sat,
    Optimum(Value),
}

/// Why a run got no points regardless of the rules.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Flag {
    /// Claimed optimum beaten by another solver's bound.
    ContradictedOptimum { solver: String, claimed: Value, better: Value },
    /// Answer contradicts the known ground truth.
    WrongAnswer { solver: String, status: String, bound: Option<Value> },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct InstanceScore {
    pub points: BTreeMap<String, f64>,
    pub flags: Vec<Flag>,
}

fn common_instance(runs: &[RunRecord]) -> Result<Option<&str>, ScoreError> {
    let Some(first) = runs.first() else { return Ok(None) };
    let mut seen = BTreeMap::new();
    for r in runs {
        if r.instance != first.instance {
            return Err(ScoreError::MixedInstances(first.instance.clone(), r.instance.clone()));
        }
        if seen.insert(r.solver.as_str(), ()).is_some() {
            return Err(ScoreError::DuplicateRun { solver: r.solver.clone(), instance: r.instance.clone() });
        }
        r.validate()?;
    }
    Ok(Some(&first.instance))
}

fn integrity(instance: &str, runs: &[&RunRecord]) -> Result<(), ScoreError> {
    let names = |f: &dyn Fn(Status) -> bool| -> Vec<String> {
        runs.iter().filter(|r| f(r.status)).map(|r| r.solver.clone()).collect()
    };
    let unsat = names(&|s| s == Status::Unsat);
    let solved = names(&|s| s.has_solution());
    if !unsat.is_empty() && !solved.is_empty() {
        return Err(ScoreError::Integrity { instance: instance.into(), unsat, solved });
    }
    Ok(())
}

fn wrong(r: &RunRecord) -> Flag {
    Flag::WrongAnswer { solver: r.solver.clone(), status: r.status.name().into(), bound: r.bound }
}

/// One point per solver that decided the instance.
pub fn score_csp(runs: &[RunRecord], truth: Option<GroundTruth>) -> Result<InstanceScore, ScoreError> {
    let Some(instance) = common_instance(runs)? else { return Ok(InstanceScore::default()) };
    let mut score = InstanceScore::default();
    let mut kept = Vec::new();
    for r in runs {
        let contradicts = match truth {
            Some(GroundTruth::Unsat) => r.status.has_solution(),
            Some(GroundTruth::Sat | GroundTruth::Optimum(_)) => r.status == Status::Unsat,
            None => false,
        };
        if contradicts {
            score.flags.push(wrong(r));
            score.points.insert(r.solver.clone(), 0.0);
        } else {
            kept.push(r);
        }
    }
    integrity(instance, &kept)?;
    for r in kept {
        let decided = matches!(r.status, Status::Sat | Status::Unsat);
        score.points.insert(r.solver.clone(), if decided { 1.0 } else { 0.0 });
    }
    Ok(score)
}

/// Points on an optimization instance.
///
/// Unsatisfiability reports earn 1. A bound beaten by another solver's earns
/// 0, and so does a claimed optimum beaten that way (flagged). A proved
/// optimum earns 1; an unproved best bound earns 1, or 0.5 when some solver
/// proved that same bound optimal.
pub fn score_cop(runs: &[RunRecord], truth: Option<GroundTruth>) -> Result<InstanceScore, ScoreError> {
    let Some(instance) = common_instance(runs)? else { return Ok(InstanceScore::default()) };
    let sense = runs[0].sense.ok_or_else(|| runs[0].invalid("optimization run without a sense"))?;
    if runs.iter().any(|r| r.sense != Some(sense)) {
        return Err(ScoreError::MixedSense(instance.into()));
    }
    let mut score = InstanceScore::default();
    let mut kept = Vec::new();
    for r in runs {
        let contradicts = match (truth, r.status, r.bound) {
            (Some(GroundTruth::Unsat), s, _) => s.has_solution(),
            (Some(GroundTruth::Sat | GroundTruth::Optimum(_)), Status::Unsat, _) => true,
            (Some(GroundTruth::Optimum(v)), Status::Opt, Some(b)) => b != v,
            (Some(GroundTruth::Optimum(v)), _, Some(b)) => sense.better(b, v),
            _ => false,
        };
        if contradicts {
            score.flags.push(wrong(r));
            score.points.insert(r.solver.clone(), 0.0);
        } else {
            kept.push(r);
        }
    }
    integrity(instance, &kept)?;
    if kept.iter().any(|r| r.status == Status::Sat && r.bound.is_none()) {
        let r = kept.iter().find(|r| r.status == Status::Sat && r.bound.is_none()).unwrap();
        return Err(r.invalid("solution on an optimization instance without a bound"));
    }
    let best = kept.iter().filter_map(|r| r.bound).reduce(|a, b| if sense.better(b, a) { b } else { a });
    let proved_best = kept.iter().any(|r| r.status == Status::Opt && r.bound == best);
    for r in kept {
        let pts = match (r.status, r.bound, best) {
            (Status::Unsat, _, _) => 1.0,
            (Status::Opt, Some(b), Some(top)) if sense.better(top, b) => {
                score.flags.push(Flag::ContradictedOptimum { solver: r.solver.clone(), claimed: b, better: top });
                0.0
            }
            (_, Some(b), Some(top)) if sense.better(top, b) => 0.0,
            (Status::Opt, Some(_), _) => 1.0,
            (_, Some(_), _) if proved_best => 0.5,
            (_, Some(_), _) => 1.0,
            _ => 0.0,
        };
        score.points.insert(r.solver.clone(), pts);
    }
    Ok(score)
}
