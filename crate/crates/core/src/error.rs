use thiserror::Error;

use crate::domain::VarId;

/// Failure while evaluating an expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero in `{expr}`")]
    DivisionByZero { expr: String },
    #[error("integer overflow in `{expr}`")]
    Overflow { expr: String },
    #[error("`{expr}` has no operands")]
    EmptyOperands { expr: String },
}

/// Structural problem in a model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("variable `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("variable ids must be dense: found {found} at position {position}")]
    NonDenseIds { position: usize, found: VarId },
    #[error("domain of `{0}` contains the reserved wildcard value")]
    ReservedValue(String),
    #[error("constraint {index}: unknown variable {var}")]
    UnknownVariable { index: usize, var: VarId },
    #[error("constraint {index}: {message}")]
    Invalid { index: usize, message: String },
    #[error("objective: {0}")]
    Objective(String),
}

/// Problem with an assignment as a whole (as opposed to a violated constraint).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("assignment has {got} values but the instance has {expected} variables")]
    WrongLength { expected: usize, got: usize },
    #[error("instance has no objective")]
    NoObjective,
    #[error(transparent)]
    Eval(#[from] EvalError),
}
