//! Geometry of projective hypersurfaces given by coefficient vectors:
//! formal derivatives in characteristic p, smoothness by rank tests,
//! singular-point search over extensions, lines and planes on a
//! hypersurface, and point counts of plane-conic fibers in characteristic 2.

pub mod calculus;
pub mod conic;
pub mod incidence;
pub mod smooth;
pub mod subvariety;

pub use calculus::{eval_ext, partials, restrict};
pub use conic::{conic_fiber_points, conic_points, fiber_points_from_values, ConicData};
pub use incidence::{disjoint_plane_pairs, lines_on, planes_on, restriction_masks, IncidenceTable};
pub use smooth::{is_smooth, singular_points};
pub use subvariety::{
    linear_subvarieties, lines_in_projective_space, planes_in_projective_space,
    projective_points, LinearSubvariety,
};
