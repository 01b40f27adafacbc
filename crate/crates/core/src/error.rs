use thiserror::Error;

/// Errors produced by the hspan library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HspanError {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("non-finite entry at position {index}")]
    NonFinite { index: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: ||A - A*||_F = {residual:e} exceeds {bound:e}")]
    NotHermitian { residual: f64, bound: f64 },

    #[error(
        "matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e} below {bound:e}"
    )]
    NotPsd { min_eigenvalue: f64, bound: f64 },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("instance too large: {what} needs {required} but the budget is {budget}")]
    InstanceTooLarge {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl HspanError {
    pub(crate) fn dim(op: &'static str, detail: impl Into<String>) -> Self {
        HspanError::Dimension {
            op,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, HspanError>;
