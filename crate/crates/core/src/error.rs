//! Error type shared across the library.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on caller-supplied data failed.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Adaptive quadrature stopped before reaching the requested accuracy.
    #[error("quadrature did not converge: achieved error {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    /// The model does not supply the requested capability (e.g. the
    /// synthetic spectrum has no eigenfunctions to evaluate).
    #[error("model '{model}' does not support {capability}")]
    Capability { model: String, capability: String },

    /// A complexified evaluation was requested outside the model's
    /// analyticity radius.
    #[error("|Y| = {requested:.6} exceeds the analyticity radius {radius:.6}")]
    RadiusExceeded { requested: f64, radius: f64 },

    /// The continuation tail bound exceeds the configured fraction of the
    /// partial sum, so the truncated evaluation cannot be trusted.
    #[error("continuation tail bound {bound:.3e} exceeds 1e-8 of the partial sum magnitude {partial:.3e}")]
    TailBound { bound: f64, partial: f64 },

    /// Configuration file syntax or semantics error, with location.
    #[error("config error at line {line}, column {column}: {message}")]
    Config {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code contract used by the CLI: 2 for configuration
    /// errors, 3 for missing model capabilities, 4 for numerical
    /// non-convergence, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidInput(_) => 2,
            Error::Capability { .. } | Error::RadiusExceeded { .. } => 3,
            Error::QuadratureNonConvergence { .. } | Error::TailBound { .. } => 4,
            _ => 1,
        }
    }
}
