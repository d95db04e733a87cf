//! Exact-arithmetic toolkit for split quasi-hereditary algebras over ℚ, 𝔽_p
//! and ℤ.
//!
//! The crate decides whether an algebra given by structure constants, a
//! poset and candidate standard modules is split quasi-hereditary, and then
//! computes the derived structure: costandard modules, Δ/∇-filtrations with
//! replayable certificates, characteristic tilting modules via universal
//! extensions, Ringel duals, and mod-p base-change verification for
//! integral structures.
//!
//! Everything is computed with exact scalars (arbitrary-precision integers
//! and fractions, prime-field residues); there is no floating point.

pub mod algebra;
pub mod base_change;
pub mod error;
pub mod homology;
pub mod linalg;
pub mod module;
pub mod poset;
pub mod qh;
pub mod quiver;
pub mod ringel;
pub mod samples;
pub mod specfile;
pub mod tilting;

pub use error::Error;
pub use linalg::{GroundRing, Matrix, Scalar};
