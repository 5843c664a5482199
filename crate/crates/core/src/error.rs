use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("eigensolver did not converge (dim {dim}, |M|_F = {norm:.3e})")]
    NoConvergence { dim: usize, norm: f64 },

    #[error("matrix exponential overflow (|M|_1 = {norm:.3e})")]
    ExpOverflow { norm: f64 },

    #[error("matrix is singular: {0}")]
    Singular(String),

    #[error("PT symmetry violated at node {node} (x = {x}): residual {residual:.3e}")]
    PtViolation { node: usize, x: f64, residual: f64 },

    #[error("weight must be diagonal and positive: {0}")]
    InvalidWeight(String),

    #[error("{name} is not antisymmetric (residual {residual:.3e})")]
    NotAntisymmetric { name: &'static str, residual: f64 },

    #[error("signature mismatch: ({p1}, {q1}) vs ({p2}, {q2})")]
    SignatureMismatch { p1: usize, q1: usize, p2: usize, q2: usize },

    #[error("operators do not anticommute (residual {0:.3e})")]
    NotAnticommuting(f64),

    #[error("operator is not an involution (residual {0:.3e})")]
    NotInvolution(f64),

    #[error("coupling matrix is not PT-symmetric: {0}")]
    NotPtSymmetric(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
