use thiserror::Error;

use crate::algebra::tower::Split;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An inversion met a zero divisor; the tower level must be split.
    #[error("zero divisor met at tower level {}", .0.level)]
    ZeroDivisor(Box<Split>),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("polynomial has a repeated factor")]
    NotSquarefree,
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("undetermined at truncation order {0}")]
    Undetermined(usize),
    #[error("curve is not reduced")]
    NotReduced,
    #[error("non-isolated singularity")]
    NonIsolated,
    #[error("axis factor present: {0} divides the polynomial")]
    AxisFactor(&'static str),
    #[error("truncation exhausted before branches separated")]
    TruncationExhausted,
    #[error("tower components disagree: {0}")]
    AmbiguousEmbedding(String),
    #[error("branches are not comparable: {0}")]
    Incomparable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
