use thiserror::Error;

/// Failures raised by the solvers, the residual metric and the constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension must be at least 1")]
    EmptyDimension,

    #[error("band value `{0}` is not finite")]
    NonFinite(&'static str),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("unsupported size {size}: this path requires at least {min}")]
    UnsupportedSize { size: usize, min: usize },

    #[error("dense path limited to n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },

    #[error("pivot breakdown at A₁₁ diagonal")]
    SingularBlock,

    #[error("corner system breakdown: {0}")]
    CornerBreakdown(&'static str),

    #[error("zero pivot at row {row} in unpivoted banded LU")]
    ZeroPivot { row: usize },

    #[error("matrix is singular to working precision (column {column})")]
    SingularMatrix { column: usize },

    #[error("relative residual is undefined for a zero right-hand side")]
    ZeroRhs,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// True for failures caused by the numbers rather than by the shape of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularBlock
                | Error::CornerBreakdown(_)
                | Error::ZeroPivot { .. }
                | Error::SingularMatrix { .. }
                | Error::ZeroRhs
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
