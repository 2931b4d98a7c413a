//! Orbit enumeration for group actions on spaces of forms.
//!
//! The centerpiece is `orbits_filtration`: given a stable chain of
//! submodules 0 = W_0 < W_1 < ... < W_l < V, orbits of G on an invariant
//! affine patch X (with X + W_l = X) are enumerated by first solving the
//! quotient problem on X/W_1 and then splitting each fiber, a coset of W_1,
//! into orbits of the parent's stabilizer. Orbit counts can be verified
//! independently against `burnside_count`, and the naive baseline
//! `orbit_partition_naive` serves as ground truth on small spaces.

pub mod burnside;
pub mod canon;
pub mod filtration;
pub mod group;
pub mod ocf;
pub(crate) mod patch;
pub mod run;

pub use burnside::burnside_count;
pub use canon::{is_equivalent, stabilizer};
pub use filtration::Filtration;
pub use group::{GroupSpec, StabChain};
pub use ocf::{read_ocf1, write_ocf1, OcfHeader, OcfRecord};
pub use run::{
    expected_stabilizer, orbit_partition_naive, orbit_partition_naive_with, orbits_filtration,
    orbits_filtration_stream, AffinePatch, LevelStats, OrbitRecord, RunOptions, RunStats,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OrbitalError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("invalid patch: {0}")]
    InvalidPatch(String),
    #[error("patch of size {size} exceeds enumeration limit {limit}")]
    ThresholdExceeded { size: u128, limit: u64 },
    #[error("group has no conjugacy-class access; Burnside count unavailable")]
    NoClasses,
    #[error("Burnside sum {0} is not divisible by the group order {1}")]
    NonIntegral(String, String),
    #[error("orbit records are inconsistent: {0}")]
    InconsistentRecords(String),
    #[error("group order {0} does not fit the enumeration engine (must fit u64)")]
    OrderTooLarge(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("format error: {0}")]
    Format(String),
    #[error("algebra error: {0}")]
    Sym(#[from] symspace::SymError),
}
