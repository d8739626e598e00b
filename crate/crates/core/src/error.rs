use thiserror::Error;

/// Errors raised by the belief calculus, frame construction and the solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("focal set is empty; m(∅) must be 0")]
    EmptyFocalSet,

    #[error("masses sum to {sum}, expected exactly 1")]
    MassNotNormalized { sum: String },

    #[error("negative mass {mass}")]
    NegativeMass { mass: String },

    #[error("event belongs to a different frame (size {found}, expected {expected})")]
    FrameMismatch { expected: usize, found: usize },

    #[error("outcome index {index} outside frame of size {size}")]
    OutcomeOutOfRange { index: usize, size: usize },

    #[error("conditioning impossible: {0}")]
    ConditioningImpossible(String),

    #[error("{what} {size} exceeds the limit of {limit}")]
    FrameTooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("duplicate variable name `{0}`")]
    DuplicateVariableName(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable `{variable}` has no value {value}")]
    UnknownValue { variable: String, value: String },

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
