use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("coefficient C_{index}(n={n}, a={a}) overflows f64 (ln|C| = {log_magnitude})")]
    CoefficientOverflow {
        n: u32,
        a: f64,
        index: usize,
        log_magnitude: f64,
    },

    #[error("quadrature refinement pair disagrees: coarse = {coarse}, fine = {fine} (tolerance {tol:e})")]
    QuadratureNotConverged { coarse: String, fine: String, tol: f64 },

    #[error("oscillatory tail bound {bound:e} exceeds requested tolerance {tol:e}")]
    TailBoundExceeded { bound: f64, tol: f64 },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
