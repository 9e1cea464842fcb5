//! One checker per claim, each producing a [`VerificationReport`].

use std::fmt;

pub mod cf;
pub mod ex42;
pub mod prop31;
pub mod report;
pub mod sd;

pub use report::{Claim, Provenance, VerificationReport};

/// How a two-point stabilizer is obtained in the implicit model.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Scan a complement and multiply by the known normal part.
    #[default]
    Fast,
    /// Scan the whole of `ι(T) × L` and compare with the fast result.
    Oracle,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Fast => "fast",
            Mode::Oracle => "oracle",
        })
    }
}
