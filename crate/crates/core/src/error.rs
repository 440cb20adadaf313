use thiserror::Error;

/// Errors produced by the inference toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error(
        "eigensolver did not converge after {iterations} iterations ({converged} of {requested} eigenvalues converged)"
    )]
    NonConvergence {
        iterations: usize,
        converged: usize,
        requested: usize,
    },

    #[error("statistic degenerate on {degenerate} of {total} replicates (first failure: {reason})")]
    DegenerateReplicates {
        degenerate: usize,
        total: usize,
        reason: String,
    },

    #[error("population parameter unavailable: {0}")]
    UnavailableParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidModel(_) => "invalid_model",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::DegenerateInput(_) => "degenerate_input",
            Error::NonConvergence { .. } => "non_convergence",
            Error::DegenerateReplicates { .. } => "degenerate_replicates",
            Error::UnavailableParameter(_) => "unavailable_parameter",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
