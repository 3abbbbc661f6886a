use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "argument {argument} is outside the Bessel evaluation regime (finite, |a| <= {limit})"
    )]
    Domain { argument: f64, limit: f64 },

    #[error("parse error in field `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("length mismatch: {what} has length {found}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("training diverged at step {step}: loss {loss:e} exceeds the divergence guard")]
    Divergence { step: usize, loss: f64 },

    #[error("data set is empty")]
    EmptyData,

    #[error("non-uniform sampling: {0}")]
    NonUniform(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures caused by limits or numerical blow-up rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_) | Error::Divergence { .. })
    }

    pub(crate) fn from_json(err: serde_json::Error) -> Self {
        let message = err.to_string();
        // serde names the offending field between backticks.
        let field = message
            .split('`')
            .nth(1)
            .map(str::to_owned)
            .unwrap_or_else(|| "<document>".to_owned());
        Error::Parse { field, message }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            what,
            expected,
            found,
        })
    }
}
