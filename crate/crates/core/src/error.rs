use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M†| = {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{name} = {value} is outside {allowed}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        allowed: &'static str,
    },

    #[error("amplitudes are not normalised (sum of squares = {0})")]
    NotNormalized(f64),

    #[error("Rényi order α = {0} is outside (0,1) ∪ (1,∞)")]
    AlphaOutOfDomain(f64),

    #[error("Kraus operators are not complete (max |Σ K†K - I| = {0:e})")]
    CompletenessViolation(f64),

    #[error("vectors have different sums ({0} vs {1})")]
    SumMismatch(f64, f64),

    #[error("no sign change of f - target on [{a}, {b}] (f(a) - t = {fa:e}, f(b) - t = {fb:e})")]
    NoSignChange { a: f64, b: f64, fa: f64, fb: f64 },

    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
