//! Partial Hadamard matrices, partial permutations and grids of projections.
//!
//! The crate covers the passage from an `M × N` partial Hadamard matrix to the
//! submagic grid of its row quotients, the classical points of commuting
//! grids, pre-Latin squares and their semigroups, and the completion of
//! partial Hadamard matrices and submagic grids to full ones.
//!
//! All public indices are 1-based.

pub mod error;
pub mod exec;
pub mod hcompletion;
pub mod linalg;
pub mod pperm;
pub mod prelatin;
pub mod submagic;
pub mod torus;
pub mod verify;

pub use error::{Error, Obstruction, Result};
pub use exec::Execution;
pub use pperm::{PartialPermutation, Semigroup};
pub use prelatin::PreLatinSquare;
pub use submagic::{GridReport, ProjGrid};
pub use torus::{TorusMatrix, TorusScalar};
