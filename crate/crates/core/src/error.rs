use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix must be square with d >= 1 (got {entries} entries for d = {d})")]
    NotSquare { d: usize, entries: usize },

    #[error("dimension {d} does not factor as {left} x {right}")]
    BadFactorization { d: usize, left: usize, right: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: |a[{row}][{col}] - conj(a[{col}][{row}])| = {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("matrix is not unitary: ||U^H U - I||_F = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("trace {trace} is not 1 within tolerance")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("numerically singular draw in {0}")]
    SingularDraw(&'static str),

    #[error("dimension {d} unsupported: {reason}")]
    UnsupportedDimension { d: usize, reason: &'static str },

    #[error("rejection sampler exceeded {attempts} attempts")]
    AttemptsExceeded { attempts: u64 },

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("CDF is not monotone onto [0, 1]: {0}")]
    BadCdf(String),
}
