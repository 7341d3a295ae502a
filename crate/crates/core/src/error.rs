use std::io;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A data row failed validation. `row` is the 1-based line number in the
    /// source file (the header is line 1).
    #[error("row {row}, column `{column}`: {message}")]
    Cell {
        row: usize,
        column: String,
        message: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("duplicate case_id `{case_id}` at row {row}")]
    DuplicateCase { case_id: String, row: usize },

    #[error("unknown {kind} label `{label}`")]
    UnknownLabel { kind: &'static str, label: String },

    #[error("unknown interest group `{0}`")]
    UnknownInterestGroup(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Both outcome classes are required but only one is present.
    #[error("single-class labels: {0}")]
    SingleClass(String),

    #[error("empty split: {0}")]
    EmptySplit(String),

    #[error("row has {found} features, model expects {expected}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("logistic fit did not converge: {0}")]
    NonConvergence(String),

    #[error("degenerate domain `{domain}`: {reason}")]
    DegenerateDomain { domain: String, reason: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
