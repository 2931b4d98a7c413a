//! Zeta functions of hypersurfaces over small finite fields.
//!
//! The counting layer produces |X(F_{q^k})| either by direct enumeration or,
//! for cubic fourfolds over F_2, by projecting from a line so that the blown-up
//! hypersurface fibers in conics over P^3. The algebra layer turns the counts
//! N_1..N_11 into the degree 22 Weil polynomial of the primitive middle
//! cohomology, its 2-adic Newton polygon, and the cyclotomic part that governs
//! the ranks of algebraic cycle groups.

pub mod count;
pub mod cyclo;
pub mod newton;
pub mod polyarith;
pub mod roots;
pub mod weil;

pub use count::{
    choose_good_line, count_points_conic, count_points_naive, count_points_naive_bounded,
    ConicFibration, DEFAULT_POINT_THRESHOLD,
};
pub use cyclo::{cyclotomic_polynomial, cyclotomic_split, k3_part, RankData};
pub use newton::{newton_height, NewtonData};
pub use polyarith::{form_mul, twice_integral};
pub use roots::{roots_deg3, RootTables};
pub use weil::{
    galkin_shinder_lines, q_polynomial, weil_from_counts, PointCounts, QPolynomial,
    SignProvenance, WeilPolynomial,
};

use thiserror::Error;

/// Failures surfaced by the counting and Weil-polynomial pipeline. Callers
/// batching many hypersurfaces should quarantine the failing input and move on.
#[derive(Debug, Error)]
pub enum ZetaError {
    #[error("enumerating {points} points exceeds the threshold {threshold}")]
    ThresholdExceeded { points: u128, threshold: u128 },
    #[error("hypersurface contains no rational line")]
    NoLine,
    #[error("functional-equation sign is ambiguous: both candidates pass the unit-circle sieve")]
    SignAmbiguous,
    #[error("point counts are inconsistent: {0}")]
    BadCounts(String),
    #[error("{0} is not an integer")]
    NonIntegral(String),
    #[error(transparent)]
    Field(#[from] ffla::FieldError),
}
