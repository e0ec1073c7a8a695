use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("supertrace is undefined in odd dimension (n = {0})")]
    OddDimension(usize),

    #[error("truncation overflow: term of degree {degree} exceeds bound {bound}")]
    TruncationOverflow { degree: usize, bound: usize },

    #[error("jet precision exhausted: {0}")]
    InsufficientPrecision(String),

    #[error("grading bound violated: order {order} of theta_{j} exceeds {bound} under {preset}")]
    GradingViolation {
        preset: String,
        j: usize,
        order: i64,
        bound: i64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("series did not converge: {0}")]
    NonConvergence(String),

    #[error("matrix has an eigenvalue on the closed negative real axis")]
    BranchCut,

    #[error("singular denominator: {0}")]
    Singular(String),

    #[error("flux quantization violated: {0}")]
    FluxQuantization(String),

    #[error("eigensolver failed: {0}")]
    Eigensolve(String),

    #[error("Landau series tail not bounded below {tol:e} within {terms} terms")]
    TailUnbounded { tol: f64, terms: usize },

    #[error("format error: {0}")]
    Format(String),
}
