use thiserror::Error;

/// Errors raised by constructors, checkers and certification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not skew-symmetric (max deviation {deviation:e})")]
    NotSkewSymmetric { deviation: f64 },

    #[error("matrix is not orthogonal (max deviation of Q·Qᵀ from I is {deviation:e})")]
    NotOrthogonal { deviation: f64 },

    #[error("invariant factor {value} outside [0, 1]")]
    LambdaOutOfRange { value: f64 },

    #[error("{blocks} canonical 2x2 blocks do not fit in dimension {dim}")]
    TooManyBlocks { blocks: usize, dim: usize },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid combination: {0}")]
    InvalidCombination(String),

    #[error("invalid family parameters: {0}")]
    InvalidParams(String),

    #[error("operator is not a density operator: {0}")]
    NotAState(String),

    #[error("expectation value has non-negligible imaginary part {imag:e}")]
    ComplexExpectation { imag: f64 },

    #[error("witness has not been certified")]
    Uncertified,

    #[error("no analytic kernel family is known for this witness construction")]
    NoKernelFamily,

    #[error("sampled vector is not a product zero of the witness (expectation {value:e})")]
    NotAKernelState { value: f64 },

    #[error("trace {trace} lies below the lower bound {bound} although the state satisfied its conditions")]
    BoundViolated { trace: f64, bound: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
