use std::collections::BTreeMap;

use serde::Serialize;

use crate::points::{score_cop, score_csp, Flag, GroundTruth};
use crate::{RunRecord, ScoreError};

/// Points per solver and instance for one track.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ScoreTable {
    pub track: String,
    pub totals: BTreeMap<String, f64>,
    /// solver -> instance -> points
    pub points: BTreeMap<String, BTreeMap<String, f64>>,
    pub flags: Vec<Flag>,
}

impl ScoreTable {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("score tables serialize")
    }

    /// `solver,instance,points` rows in solver then instance order.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["solver", "instance", "points"]).expect("in-memory write");
        for (s, row) in &self.points {
            for (i, p) in row {
                w.write_record([s.as_str(), i.as_str(), &p.to_string()]).expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    pub fn totals_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["solver", "total"]).expect("in-memory write");
        for (s, t) in &self.totals {
            w.write_record([s.as_str(), &t.to_string()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }
}

/// Scores every instance of a single track. Instances whose runs carry a
/// sense are optimization instances.
pub fn score_runs(runs: &[RunRecord], truth: &BTreeMap<String, GroundTruth>) -> Result<ScoreTable, ScoreError> {
    let mut table = ScoreTable::default();
    let Some(first) = runs.first() else { return Ok(table) };
    table.track = first.track.clone();
    let mut by_instance: BTreeMap<&str, Vec<RunRecord>> = BTreeMap::new();
    for r in runs {
        if r.track != first.track {
            return Err(ScoreError::MixedTracks(first.track.clone(), r.track.clone()));
        }
        by_instance.entry(&r.instance).or_default().push(r.clone());
    }
    for (instance, mut group) in by_instance {
        group.sort_by(|a, b| a.solver.cmp(&b.solver));
        let gt = truth.get(instance).copied();
        let score = if group.iter().any(|r| r.sense.is_some()) {
            score_cop(&group, gt)?
        } else {
            score_csp(&group, gt)?
        };
        for (s, p) in score.points {
            *table.totals.entry(s.clone()).or_default() += p;
            table.points.entry(s).or_default().insert(instance.to_string(), p);
        }
        table.flags.extend(score.flags);
    }
    Ok(table)
}
