//! Point rules for satisfaction and optimization instances, and the ranking
//! of solvers within a track.

mod points;
mod rank;
mod record;
mod table;

pub use points::{score_cop, score_csp, Flag, GroundTruth, InstanceScore};
pub use rank::{is_mini_track, rank, Medal, Ranked, SolverFlags};
pub use record::{read_runs, RunRecord};
pub use table::{score_runs, ScoreTable};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ScoreError {
    #[error("runs mix instances `{0}` and `{1}`")]
    MixedInstances(String, String),
    #[error("instance `{0}` mixes optimization senses")]
    MixedSense(String),
    #[error("runs mix tracks `{0}` and `{1}`")]
    MixedTracks(String, String),
    #[error("solver `{solver}` has several runs on instance `{instance}`")]
    DuplicateRun { solver: String, instance: String },
    #[error("run of `{solver}` on `{instance}`: {message}")]
    InvalidRecord { solver: String, instance: String, message: String },
    #[error("instance `{instance}`: {unsat:?} report unsatisfiable while {solved:?} report solutions")]
    Integrity { instance: String, unsat: Vec<String>, solved: Vec<String> },
    #[error("track `{0}` is a mini track but no main-track ranks were supplied")]
    MissingMainRanks(String),
    #[error("variant group `{group}` spans teams {teams:?}")]
    MixedTeams { group: String, teams: Vec<String> },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
