use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("carrier mismatch: {left} vs {right} points")]
    CarrierMismatch { left: usize, right: usize },

    #[error("{what} exceeds size cap: {actual} > {limit}")]
    SizeCap {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("no bottom element: {0}")]
    NoBottom(String),

    #[error("not a difference-restriction algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid etale space: {0}")]
    InvalidSpace(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("operation undefined: {0}")]
    Undefined(String),

    /// A theorem-backed postcondition did not hold. Indicates a bug.
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
