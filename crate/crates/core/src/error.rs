use thiserror::Error;

/// Errors raised by the library. Solver non-convergence is not an error; it is
/// reported through [`crate::sdp::SolveStatus`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("binomial coefficient C({0}, {1}) overflows the supported range")]
    BasisOverflow(usize, usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty data set")]
    EmptyData,

    #[error("non-finite value in input at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("moment index {0} is outside the known moment set")]
    MissingMoment(String),

    #[error("singular covariance: direction {direction:?} has eigenvalue {eigenvalue:e} (max {max_eigenvalue:e})")]
    SingularCovariance {
        direction: Vec<f64>,
        eigenvalue: f64,
        max_eigenvalue: f64,
    },

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("relaxation order {order} too small for constraint degree {degree}")]
    OrderTooSmall { order: usize, degree: usize },

    #[error("invalid program: {0}")]
    InvalidProgram(String),

    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("solver did not reach optimality: {0}")]
    NotOptimal(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("both classes must be present (positives {positives}, negatives {negatives})")]
    SingleClass { positives: usize, negatives: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
