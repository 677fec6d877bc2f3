//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A variable or node name was not found where it was required.
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A probability table failed validation.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// Conditioning on an event of probability zero.
    #[error("conditioning event has probability {0}, cannot renormalize")]
    DegenerateEvent(f64),

    /// A documented size limit was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Input shapes do not match what the operation requires.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Fourier-Motzkin elimination hit its inequality ceiling.
    #[error(
        "elimination aborted: {count} inequalities after eliminating {eliminated} of {total} coordinates (ceiling {ceiling})"
    )]
    EliminationAborted {
        count: usize,
        eliminated: usize,
        total: usize,
        ceiling: usize,
    },

    /// A searched-for crossing or object does not exist.
    #[error("not found: {0}")]
    NotFound(String),

    /// Malformed JSON input.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    /// File I/O failure.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
