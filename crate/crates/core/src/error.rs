use thiserror::Error;

/// Errors raised by decomposition, synthesis and the file formats.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension {0} is odd")]
    OddDimension(usize),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not unitary: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    NotUnitary { residual: f64, tolerance: f64 },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("Heron iteration did not converge in {iterations} steps (last step {last_step:.3e})")]
    NonConvergence { iterations: usize, last_step: f64 },

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("decomposition failed at {stage}: residual {residual:.3e} exceeds {tolerance:.3e}")]
    DecompositionFailed {
        stage: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("matrix is not a permutation matrix")]
    NotPermutation,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
