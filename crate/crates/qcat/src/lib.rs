//! Combinatorics of finite quasi-categories.
//!
//! Finite truncated simplicial sets with explicit face and degeneracy tables,
//! nerves and homotopy categories, horn filling, replayable anodyne
//! certificates, several combinatorial models of mapping spaces, and integral
//! homology. The `qc` binary exposes the same operations on JSON files.

pub mod anodyne;
pub mod category;
pub mod cli;
pub mod corpus;
pub mod equivalence;
pub mod error;
pub mod homology;
pub mod homotopy;
pub mod horn;
pub mod mapping;
pub mod sset;

pub use error::{QcError, Result};
