//! Finite abstract separation systems and trees of tangles.
//!
//! The crate models universes of oriented separations (involution, partial
//! order, total join/meet, submodular order function), enumerates profiles
//! (consistent orientations closed under taking corners), and builds tree
//! sets that efficiently distinguish every distinguishable pair of profiles.
//! The construction quotients a separation system by the profile set it has
//! to distinguish, lifts a canonical tree set back out of the quotient, and
//! stitches the per-order results together level by level.
//!
//! Everything is exact integer/set arithmetic; no floats, no randomness
//! outside the explicitly seeded generators in [`randgen`]. The [`oracle`]
//! module re-derives every claim from definitions alone so the fast paths
//! can be checked against it.

pub mod bits;
pub mod cli;
pub mod instances;
pub mod limits;
pub mod oracle;
pub mod profiles;
pub mod quotient;
pub mod randgen;
pub mod regularization;
pub mod system;
pub mod tangletree;
pub mod treeio;

pub use limits::Limits;
pub use system::{CornerStrategy, CornerSystem, SepId, SubSystem, Universe};

use system::SepId as Sep;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("operation requires an order function")]
    MissingOrderFunction,
    #[error("separation {0} is not in the system")]
    NotInSystem(Sep),
    #[error("{what} limit exceeded: requested {requested}, limit {limit} (override with SEPSYS_LIMITS)")]
    LimitExceeded { what: &'static str, limit: u32, requested: u32 },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis violation in {context}: {detail}")]
    Hypothesis { context: &'static str, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn hypothesis(context: &'static str, detail: impl Into<String>) -> Self {
        Error::Hypothesis { context, detail: detail.into() }
    }
}
