use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite state at step {step} (t = {time})")]
    NonFinite { step: usize, time: f64 },

    #[error("eigensolver did not converge for index {index} after {iterations} iterations (matrix dimension {dim})")]
    Eigensolver {
        index: usize,
        iterations: usize,
        dim: usize,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for failures that come from a solver rather than from the caller's input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(self, Error::NonFinite { .. } | Error::Eigensolver { .. })
    }
}
