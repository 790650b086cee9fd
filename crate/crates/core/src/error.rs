use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("leaf-root mismatch: {0}")]
    LeafRootMismatch(String),
    #[error("signature {0} is outside the declared arity range")]
    OutOfRange(String),
    #[error("subgroup does not stabilize {0}")]
    NotStabilizer(String),
    #[error("color map is not injective")]
    NotInjective,
    #[error("unbounded request: {0}")]
    Unbounded(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
