use thiserror::Error;

/// Errors raised by the group engine and the constructions built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("generator list is empty")]
    NoGenerators,

    /// The operation would exceed its enumeration budget.
    #[error("infeasible: {what} exceeds budget of {budget} operations")]
    Infeasible { what: String, budget: u64 },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("group is not transitive")]
    NotTransitive,

    /// A randomized search gave up. This never proves nonexistence.
    #[error("not found: {0}")]
    NotFound(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Cost cap for operations that enumerate elements, cosets or candidates.
///
/// One unit is one enumerated object (an element, a coset, a search node or
/// a scanned candidate).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(20_000_000);

    pub fn ensure(&self, needed: u64, what: impl Into<String>) -> Result<()> {
        if needed > self.0 {
            Err(Error::Infeasible {
                what: what.into(),
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }

    pub fn exceeded(&self, what: impl Into<String>) -> Error {
        Error::Infeasible {
            what: what.into(),
            budget: self.0,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}
