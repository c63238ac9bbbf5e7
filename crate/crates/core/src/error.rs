use thiserror::Error;

/// Errors raised by constructors, verifiers and searches.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("matrix side {side} exceeds the size cap {max}")]
    SizeCap { side: usize, max: usize },

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("{0} is not a supported prime")]
    NotPrime(usize),

    #[error("no Graeco-Latin square of order six exists")]
    NoGraecoLatinSix,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
