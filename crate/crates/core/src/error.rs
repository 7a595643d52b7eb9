use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not unitary: max |U^dagger U - 1| = {defect:e}")]
    NotUnitary { defect: f64 },

    #[error("matrix is not Hermitian: max |A - A^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("map does not preserve Hermiticity: deviation {0:e}")]
    NotHermiticityPreserving(f64),

    #[error("map does not preserve the trace: deviation {0:e}")]
    NotTracePreserving(f64),

    #[error("map is not unital: max |h(1) - 1| = {0:e}")]
    NotUnital(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid map parameters: {0}")]
    InvalidParameters(String),

    #[error(
        "homogeneous part is singular: smallest singular value {smallest:e}, kernel dimension {kernel_dimension}"
    )]
    Singular {
        smallest: f64,
        kernel_dimension: usize,
    },

    #[error(
        "invertibility criteria disagree near the rank threshold: kernel {kernel_dimension}, \
         basis-image rank {basis_image_rank}, mean-map kernel {mean_kernel_dimension}"
    )]
    InconsistentVerdict {
        kernel_dimension: usize,
        basis_image_rank: usize,
        mean_kernel_dimension: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
