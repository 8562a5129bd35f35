//! Error type shared by the whole crate.

/// Crate-wide error type.
///
/// The variants mirror the failure classes of the public operations:
/// bad constructor arguments, points outside an operation's domain,
/// inconsistent run configurations, a function object that cannot supply
/// what an operation needs (e.g. not enough analytic derivatives), a
/// quadrature that produced non-finite values, and inequality constants
/// that degenerate to zero for particular parameter combinations.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error("integration error: {0}")]
    Integration(String),
    #[error("degenerate constant: {0}")]
    DegenerateConstant(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }
    pub fn integration(msg: impl Into<String>) -> Self {
        Error::Integration(msg.into())
    }
    pub fn io(msg: impl Into<String>) -> Self {
        Error::Io(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
