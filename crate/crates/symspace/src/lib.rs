//! The space `Sym^d(F_q^m)` of degree-d forms in m variables as a
//! `GL_m(F_q)`-representation.
//!
//! Pieces:
//! - [`MonomialBasis`]: the fixed graded-reverse-lexicographic monomial order
//!   that every coefficient vector, serialized form, and orbit file refers to.
//! - [`Form`]: a coefficient vector over `F_q`, bit-packed when q = 2.
//! - [`act`] / [`sym_matrix`]: the substitution action and its induced matrix
//!   on the whole space.
//! - [`Subspace`] / [`QuotientMap`]: echelon-canonical subspaces, quotients
//!   with a canonical section, and induced matrices on quotients.
//! - [`power_product_subspace`]: spans of products of powers of linear forms
//!   (Waring-type subspaces) used to build group-stable filtrations.
//! - [`find_submodules`]: randomized meataxe-style search for proper stable
//!   subspaces when no filtration is known in advance.
//!
//! Action convention, fixed once for every crate in the workspace: `act(g, f)`
//! is `f ∘ g`, the form `x ↦ f(g·x)`, so variable `x_j` is replaced by the
//! linear form with coefficients in row j of g. This is a right action:
//! `act(g·h, f) = act(h, act(g, f))`, and consequently the induced matrices
//! compose contravariantly, `sym_matrix(h·g) = sym_matrix(g)·sym_matrix(h)`.

pub mod action;
pub mod basis;
pub mod form;
pub mod submodule;
pub mod subspace;
#[cfg(test)]
pub(crate) mod testutil;

pub use action::{act, sym_bitmatrix, sym_matrix, SymCache};
pub use basis::MonomialBasis;
pub use form::Form;
pub use submodule::find_submodules;
pub use subspace::{is_g_stable, power_product_subspace, PowerPattern, QuotientMap, Subspace};

/// Errors for form construction, parsing, and the group action.
#[derive(Debug, thiserror::Error)]
pub enum SymError {
    #[error("matrix is singular; the action is only defined for invertible elements")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("pattern degrees sum to {got}, expected {want}")]
    PatternDegree { got: u32, want: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}
