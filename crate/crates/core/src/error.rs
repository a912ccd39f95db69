use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at {location}")]
    Pole { location: String },

    #[error("quadrature did not converge (residual estimate {residual:e} after {panels} panels)")]
    Convergence { residual: f64, panels: usize },

    #[error("accuracy target missed ({source_name}): estimate {estimate:e} exceeds tolerance {tol:e}")]
    Accuracy {
        source_name: String,
        estimate: f64,
        tol: f64,
    },

    #[error("boundary-ambiguous element: {0}")]
    BoundaryAmbiguous(String),

    #[error("ambiguous conjugacy bucket: {0}")]
    Ambiguity(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation error in `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("missing data: {0}")]
    Data(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: msg.into(),
        }
    }

    pub(crate) fn accuracy(source: impl Into<String>, estimate: f64, tol: f64) -> Self {
        Error::Accuracy {
            source_name: source.into(),
            estimate,
            tol,
        }
    }
}
