use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        got: String,
    },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid tolerance {0}: must lie strictly between 0 and 1")]
    InvalidTolerance(f64),

    #[error("no solution: range condition fails (residual {residual:.3e})")]
    RangeCondition { residual: f64 },

    #[error("operator is singular but an invertible one is required")]
    Singular,

    #[error("operator is not a member of {set} (residual {residual:.3e})")]
    NotMember { set: &'static str, residual: f64 },

    #[error("missing input: {0}")]
    MissingInput(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

impl Error {
    pub(crate) fn dims(context: &'static str, expected: impl ToString, got: impl ToString) -> Self {
        Error::DimensionMismatch {
            context,
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }

    /// True for errors caused by malformed or inconsistent inputs, as opposed
    /// to a failed mathematical precondition.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NonFinite
                | Error::DimensionMismatch { .. }
                | Error::NotHermitian { .. }
                | Error::NotPsd { .. }
                | Error::InvalidTolerance(_)
                | Error::MissingInput(_)
                | Error::InvalidArgument(_)
        )
    }
}
