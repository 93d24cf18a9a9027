//! Error types shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Cartan type: {0}")]
    InvalidCartanType(String),
    #[error("lattice does not contain the root lattice: {0}")]
    LatticeNotContainingRoots(String),
    #[error("Weyl group too large: |W| = {size} exceeds cap {cap}")]
    GroupTooLarge { size: usize, cap: usize },
    #[error("formal group law axiom violated: {axiom} fails at degree {degree}")]
    FglAxiomViolation { axiom: &'static str, degree: u32 },
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("exact division failed: {0}")]
    NotDivisible(String),
    #[error("element is not a unit (constant term not invertible)")]
    NotAUnit,
    #[error("division failed while computing {0}; regularity violated or internal bug")]
    DivisionFailed(String),
    #[error("precision exhausted: needed {needed}, have {have}")]
    PrecisionLoss { needed: u32, have: u32 },
    #[error("element is not in the Demazure algebra: coefficient at {word} does not clear denominators")]
    NotInDemazureAlgebra { word: String },
    #[error("relation check failed: {0}")]
    RelationFailed(String),
    #[error("GKM function does not clear denominators at {0}; not in the Schubert span")]
    DenominatorNotCleared(String),
    #[error("algebra closure exceeded budget: {0}")]
    ClosureBudgetExceeded(String),
    #[error("idempotent splitting exceeded budget: {0}")]
    SplitBudgetExceeded(String),
    #[error("cache entry corrupt: {key}")]
    CacheCorrupt { key: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
