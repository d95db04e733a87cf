//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("objects live over different rings")]
    RingMismatch,

    #[error("modules belong to different algebras")]
    AlgebraMismatch,

    #[error("sublattice is not saturated")]
    NotSaturated,

    #[error("subspace is not invariant under the algebra action")]
    NotInvariant,

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("costandard normalization failed: {0}")]
    Normalization(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A computation contradicted a consequence of the verified structure.
    /// Reaching this is a bug in the input data or in the engine, never a
    /// legitimate refutation.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}
