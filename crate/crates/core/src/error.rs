//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("bad bipartition: matrix is {rows}x{cols}, expected {expected}x{expected}")]
    BadBipartition {
        rows: usize,
        cols: usize,
        expected: usize,
    },

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("Bloch norm exceeds 1 (norm {0})")]
    BlochNormExceedsOne(f64),

    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("unitarity violated (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("not unital (translation norm {0:.3e})")]
    NotUnital(f64),

    #[error("not completely positive: {0}")]
    NotCompletelyPositive(String),

    #[error("dilation preconditions not met: {0}")]
    DilationPrecondition(String),

    #[error("invalid mixture: {0}")]
    InvalidMixture(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
