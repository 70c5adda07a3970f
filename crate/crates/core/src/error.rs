use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole: gamma is undefined at non-positive integer {0}")]
    Pole(f64),

    /// Quantum-number or configuration invariant violated.
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("no convergence: {what} (last change {last_change:e} after {nodes} nodes)")]
    NoConvergence { what: String, nodes: usize, last_change: f64 },

    #[error("empty superlevel set at relative level {0}")]
    EmptySuperlevel(f64),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Pole(_) | Error::Invalid(_) | Error::EmptySuperlevel(_) => 2,
            Error::NoConvergence { .. } => 3,
            Error::Io(_) | Error::Json(_) => 4,
        }
    }
}
