use thiserror::Error;

/// Errors surfaced by every pipeline in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series constant term must equal 1")]
    NonUnitConstant,
    #[error("budget exceeded: {what} (completed through order {reached})")]
    Budget { what: String, reached: usize },
    #[error("size limit exceeded: {0}")]
    TooLarge(String),
    #[error("vertex {0} has odd degree; not an even subgraph")]
    OddVertex(String),
    #[error("integrity violation: {0}")]
    Integrity(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
