use std::time::Duration;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A domain value failed a construction invariant (interval, variable,
    /// target range, grid spec, config field).
    #[error("validation error: {0}")]
    Validation(String),

    /// Shrinking removed every interval of a target range.
    #[error("target range is empty after shrinking by margin {margin}")]
    EmptyTarget { margin: f64 },

    /// Expression source could not be parsed. `offset` is a byte offset
    /// into the source text.
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    /// An identifier in an expression does not name a declared variable.
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    /// A call in an expression does not name a supported function.
    #[error("unknown function `{0}`")]
    UnknownFunction(String),

    /// A point had the wrong number of coordinates for the model.
    #[error("arity mismatch: model takes {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    /// The external model process exited or closed its output stream.
    #[error("model process died: {0}")]
    ProcessDied(String),

    /// The external model violated the line protocol.
    #[error("model protocol error: {0}")]
    Protocol(String),

    /// The external model did not answer within the per-call timeout.
    #[error("model call timed out after {0:?}")]
    Timeout(Duration),

    /// The requested grid has more points than the configured cap.
    #[error("grid of {points} points exceeds the cap of {cap}")]
    GridTooLarge { points: u128, cap: u64 },

    /// Two identical training points carry different labels; a tree with
    /// pure leaves cannot exist.
    #[error("contradictory training data: identical points with different labels")]
    ContradictoryData,

    /// No candidate granularity reached the requested TPR threshold.
    #[error("no granularity candidate reached mean TPR {threshold}; candidates: {details}")]
    NoQualifyingGranularity { threshold: f64, details: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for config/validation problems,
    /// 3 for model protocol problems, 4 when no granularity qualifies.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_)
            | Error::EmptyTarget { .. }
            | Error::Syntax { .. }
            | Error::UnknownVariable(_)
            | Error::UnknownFunction(_)
            | Error::ArityMismatch { .. }
            | Error::GridTooLarge { .. }
            | Error::Io(_)
            | Error::Json(_) => 2,
            Error::ProcessDied(_)
            | Error::Protocol(_)
            | Error::Timeout(_)
            | Error::ContradictoryData => 3,
            Error::NoQualifyingGranularity { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
