use thiserror::Error;

/// Failure classes shared by every layer of the crate.
///
/// The CLI maps these onto exit codes: validation and parse problems exit
/// with 2, truncation problems with 3 and broken invariants with 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("parse error at `{token}`: {message}")]
    Parse { token: String, message: String },
    #[error("truncation error: {0}")]
    Truncation(String),
    #[error("invariant violated: {what} (witness: {witness})")]
    Invariant { what: String, witness: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn truncation(msg: impl Into<String>) -> Self {
        Error::Truncation(msg.into())
    }

    pub fn invariant(what: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Invariant { what: what.into(), witness: witness.into() }
    }

    pub fn parse(token: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { token: token.into(), message: message.into() }
    }

    /// Prefixes the message with `ctx`, keeping the failure class.
    pub fn context(self, ctx: impl std::fmt::Display) -> Self {
        match self {
            Error::Validation(m) => Error::Validation(format!("{ctx}: {m}")),
            Error::Parse { token, message } => Error::Parse { token, message: format!("{ctx}: {message}") },
            Error::Truncation(m) => Error::Truncation(format!("{ctx}: {m}")),
            Error::Invariant { what, witness } => Error::Invariant { what: format!("{ctx}: {what}"), witness },
            Error::Dimension(m) => Error::Dimension(format!("{ctx}: {m}")),
            e => e,
        }
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Parse { .. } | Error::Io(_) | Error::Json(_) => 2,
            Error::Dimension(_) => 2,
            Error::Truncation(_) => 3,
            Error::Invariant { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
