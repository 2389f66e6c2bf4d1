//! Depth-first search for satisfaction and branch-and-bound for optimization.

mod heuristic;
mod limits;
mod solver;

pub use heuristic::{luby, select_branch, Decision, Heuristic, VarOrder};
pub use limits::{process_cpu_time, LimitHit, Limits};
pub use solver::{solve, solve_decision, solve_optimize, SolveError, SolveOutcome, Stats};
