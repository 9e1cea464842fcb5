//! Permutation group engine with orbital-graph tools and constructions of
//! diagonal and twisted-wreath style primitive actions.

pub mod constructions;
pub mod diagonal;
pub mod error;
pub mod function_model;
pub mod orbital;
pub mod perm;
pub mod verifiers;

pub use error::{Budget, Error, Result};
pub use perm::{PermGroup, Permutation};
