//! Event structures with dynamic causality: the structure families, their
//! semantics, translations between them, equivalence checks, and exhaustive
//! search over small structures.

pub mod cli;
pub mod corpus;
pub mod equiv;
pub mod error;
pub mod kernel;
pub mod search;
pub mod semantics;
pub mod translate;

pub use error::{Error, Result};
pub use kernel::{parse_structure, serialize, Family, Structure};
