use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare { op: &'static str, rows: usize, cols: usize },

    /// An exactly zero pivot in LU. In the Padé context this means `q_m` of the
    /// scaled argument is singular, which cannot happen after correct scaling.
    #[error("singular Padé denominator: zero pivot in column {column}")]
    SingularPade { column: usize },

    #[error("non-finite input")]
    NonFinite,

    #[error("Schur QR iteration did not converge after {iterations} iterations (active window {lo}..={hi})")]
    NoConvergence { iterations: usize, lo: usize, hi: usize },

    #[error("ill-separated Sylvester operands: min |λ+μ| = {separation:e} is below {tolerance:e}")]
    IllSeparated { separation: f64, tolerance: f64 },

    #[error("unsupported Padé degree {0}; expected one of 3, 5, 7, 9, 13")]
    UnsupportedDegree(usize),

    #[error("matrix H is not symmetric (max |h_ij - h_ji| = {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("polynomial root finding did not converge (degree {degree})")]
    RootFinding { degree: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
