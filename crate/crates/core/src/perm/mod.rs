//! Permutations and permutation groups.

mod blocks;
pub mod centralizer;
pub mod cosets;
pub mod genfile;
mod group;
mod permutation;
pub mod search;
mod subgroups;
pub mod table;

pub use blocks::{minimal_block, Primitivity};
pub use centralizer::{centralizer_by_enumeration, centralizer_of_subgroup};
pub use cosets::{coset_action, CosetAction};
pub use group::PermGroup;
pub use permutation::Permutation;
pub use search::{find_alt5_subgroup, Alt5Copy};
pub use table::{Automorphism, ElementTable};
