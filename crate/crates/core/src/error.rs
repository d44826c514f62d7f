use thiserror::Error;

/// Errors raised by the tree, coloring and search layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid tree shape: {0}")]
    InvalidShape(String),

    #[error("leaf path has length {got}, expected {expected}")]
    PathLength { expected: usize, got: usize },

    #[error("digit {digit} out of range for branching {branching}")]
    DigitOutOfRange { digit: usize, branching: usize },

    #[error("leaf index {index} out of range (tree has {leaves} leaves)")]
    LeafOutOfRange { index: usize, leaves: usize },

    /// No k-branching subtree exists because k exceeds the branching factor.
    #[error("empty domain: no {k}-branching subtree of a {branching}-branching tree")]
    EmptyDomain { k: usize, branching: usize },

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("budget exceeded after {0} nodes")]
    BudgetExceeded(u64),
}

pub type Result<T, E = EngineError> = std::result::Result<T, E>;
