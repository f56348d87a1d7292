use thiserror::Error;

use crate::canonical::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid canonical spec: {}", join_violations(.0))]
    InvalidSpec(Vec<Violation>),

    #[error("expected {expected} parameter values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("missing eigenvalue or non-recoverable input: {0}")]
    NonRecoverable(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
