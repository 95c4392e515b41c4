use thiserror::Error;

/// Failures raised by constructors and computations.
///
/// Mathematical check failures are never errors; certificates carry them as
/// data. Errors are reserved for malformed input, violated hypotheses, and
/// numerical machinery giving up.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("linear program solver failed: {0}")]
    Solver(String),
    #[error("root finder failed at {point}: worst residual {residual:e}")]
    RootFinder { point: String, residual: f64 },
    #[error("reconstruction hypothesis violated: {0}")]
    Reconstruction(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for failures of the numerical machinery (solver, root finder),
    /// as opposed to bad input.
    pub fn is_computational(&self) -> bool {
        matches!(self, Error::Solver(_) | Error::RootFinder { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
