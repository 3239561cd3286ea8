//! Error type shared by all linking computations.

use crate::quadrature::LinkEstimate;

/// Errors raised by curve construction, linking computations, and file I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The integrand was evaluated at (or unacceptably near) a point where
    /// the two curves touch.
    #[error("singularity: {0}")]
    Singularity(String),

    /// The refinement budget ran out before the target error was met.
    /// Carries the best estimate obtained so far.
    #[error("convergence failure: {message} (best value {})", best.value)]
    Convergence {
        message: String,
        best: LinkEstimate,
    },

    /// A projection direction was not generic for the given polygon pair.
    #[error("degenerate projection: {0}")]
    Degenerate(String),

    /// Input could not be parsed. The message includes line/column when the
    /// underlying parser provides them.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!(
            "{} at line {} column {}",
            e,
            e.line(),
            e.column()
        ))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
