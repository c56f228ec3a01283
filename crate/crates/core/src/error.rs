use thiserror::Error;

/// Errors surfaced by the library and mapped onto CLI exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("malformed value: {0}")]
    Validation(String),

    #[error("band window overflow: expression needs guard {needed} but window is {window}")]
    WindowOverflow { needed: i64, window: i64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("singular simplex value at quadrature node {node:?}")]
    SingularNode { node: Vec<f64> },

    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
