//! Model representation for the XCSP3-core constraint kernel: domains,
//! expressions, the constraint vocabulary, instances and solution checking.

pub mod check;
pub mod constraint;
pub mod domain;
pub mod error;
pub mod expr;
pub mod instance;
pub mod status;

pub use check::check_constraint;
pub use constraint::{
    Automaton, BinLoads, ChannelTarget, CmpOp, Condition, Constraint, ConstraintKind, Direction, Mdd, Term, Tuples,
};
pub use domain::{Domain, Value, VarId, Variable, STAR};
pub use error::{CheckError, EvalError, ModelError};
pub use expr::{BinaryOp, Expr, NaryOp, UnaryOp};
pub use instance::{
    check_instance, objective_value, Assignment, Instance, InstanceBuilder, Objective, ObjectiveForm, Posted, Sense,
    Verdict, REDUNDANT, SYMMETRY_BREAKING,
};
pub use status::Status;
