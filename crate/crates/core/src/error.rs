use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("layout error: {0}")]
    Layout(String),

    #[error("empty state: all amplitudes vanish")]
    EmptyState,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("cutoff too small: truncation loss {loss:.3e} exceeds bound {bound:.3e} at cutoff {cutoff}")]
    CutoffTooSmall { cutoff: u32, loss: f64, bound: f64 },

    #[error("unsupported rule: {0}")]
    UnsupportedRule(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
