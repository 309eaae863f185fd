use thiserror::Error;

/// Errors surfaced by kernel, operator, norm and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A mathematical precondition on the input point or region failed.
    #[error("domain error: {0}")]
    Domain(String),
    /// A parameter is outside the range the estimates require.
    #[error("invalid parameter: {0}")]
    Param(String),
    /// A quadrature produced a non-finite accumulation.
    #[error("quadrature fault: {0}")]
    Quadrature(String),
    /// A sup-over-balls operation received an unusable ball family.
    #[error("ball family error: {0}")]
    Family(String),
    /// The requested check does not apply to the supplied exponent
    /// configuration; the message carries the classifier's explanation.
    #[error("configuration rejected: {0}")]
    Hypothesis(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed grid file {path}: {reason}")]
    Format { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn param(msg: impl Into<String>) -> Self {
        Error::Param(msg.into())
    }
}
