use thiserror::Error;

/// Errors raised by the constructions and verifiers in this crate.
///
/// Each variant maps onto one CLI exit class (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    /// Caller violated a documented precondition.
    #[error("usage error: {0}")]
    Usage(String),

    /// An enumeration or search ran past its configured budget.
    #[error("resource limit: {0}")]
    Resource(String),

    /// A randomized or bounded search finished without a result.
    #[error("not found: {0}")]
    NotFound(String),

    /// The parameters are well formed but no construction exists at this size.
    #[error("infeasible: {needed} parts need distinct H-words but only {available} are available ({detail})")]
    Infeasible {
        needed: usize,
        available: usize,
        detail: String,
    },

    /// A produced object failed its independent verifier.
    #[error("verification failed: {0}")]
    Verification(String),

    /// An internal invariant did not hold; indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    /// Process exit code: 1 verification, 2 usage, 3 resource / not found.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) | Error::Internal(_) => 1,
            Error::Usage(_) | Error::Format(_) | Error::Json(_) | Error::Infeasible { .. } => 2,
            Error::Resource(_) | Error::NotFound(_) | Error::Io(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
