use std::io::BufRead;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use xcore::{Sense, Status, Value};

use crate::ScoreError;

/// One solver run on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub solver: String,
    pub instance: String,
    pub track: String,
    #[serde(serialize_with = "status_out", deserialize_with = "status_in")]
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Value>,
    /// Absent for satisfaction instances.
    #[serde(default, serialize_with = "sense_out", deserialize_with = "sense_in")]
    pub sense: Option<Sense>,
    /// Seconds.
    pub elapsed: f64,
}

impl RunRecord {
    pub fn new(solver: &str, instance: &str, track: &str, status: Status, bound: Option<Value>, sense: Option<Sense>) -> Self {
        RunRecord {
            solver: solver.into(),
            instance: instance.into(),
            track: track.into(),
            status,
            bound,
            sense,
            elapsed: 0.0,
        }
    }

    pub(crate) fn invalid(&self, message: &str) -> ScoreError {
        ScoreError::InvalidRecord { solver: self.solver.clone(), instance: self.instance.clone(), message: message.into() }
    }

    /// Bound presence must match the status.
    pub fn validate(&self) -> Result<(), ScoreError> {
        match (self.status, self.bound) {
            (Status::Opt | Status::Best, None) => Err(self.invalid("status requires a bound")),
            (Status::Unsat | Status::Unknown, Some(_)) => Err(self.invalid("status carries no bound")),
            (Status::Opt | Status::Best, Some(_)) if self.sense.is_none() => {
                Err(self.invalid("bound reported on a satisfaction instance"))
            }
            _ if !self.elapsed.is_finite() || self.elapsed < 0.0 => Err(self.invalid("elapsed must be a non-negative number")),
            _ => Ok(()),
        }
    }
}

fn status_out<S: Serializer>(s: &Status, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(s.name())
}

fn status_in<'de, D: Deserializer<'de>>(de: D) -> Result<Status, D::Error> {
    String::deserialize(de)?.parse().map_err(serde::de::Error::custom)
}

fn sense_out<S: Serializer>(s: &Option<Sense>, ser: S) -> Result<S::Ok, S::Error> {
    match s {
        Some(s) => ser.serialize_str(s.name()),
        None => ser.serialize_none(),
    }
}

fn sense_in<'de, D: Deserializer<'de>>(de: D) -> Result<Option<Sense>, D::Error> {
    match Option::<String>::deserialize(de)?.as_deref() {
        None => Ok(None),
        Some("minimize") => Ok(Some(Sense::Minimize)),
        Some("maximize") => Ok(Some(Sense::Maximize)),
        Some(other) => Err(serde::de::Error::custom(format!("unknown sense `{other}`"))),
    }
}

/// Reads line-delimited JSON records; blank lines are skipped.
pub fn read_runs(r: impl BufRead) -> Result<Vec<RunRecord>, ScoreError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| ScoreError::Parse { line: i + 1, message: e.to_string() })?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RunRecord =
            serde_json::from_str(&line).map_err(|e| ScoreError::Parse { line: i + 1, message: e.to_string() })?;
        rec.validate()?;
        out.push(rec);
    }
    Ok(out)
}
