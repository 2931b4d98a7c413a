//! Finite-field arithmetic and dense linear algebra over `F_q` (q = p^e ≤ 2^16),
//! plus group-theoretic primitives for `GL_m(F_q)`: exact order and conjugacy
//! classes with centralizer-formula sizes.
//!
//! Two matrix families are provided:
//!
//! - [`BitMatrix`]: rows bit-packed into 64-bit words, for `F_2`. This is the
//!   workhorse of every counting loop downstream.
//! - [`GfMatrix`]: dense `u16` entries over an arbitrary [`Field`], used for
//!   q > 2 and for conjugacy-class representatives.
//!
//! All types are immutable-after-construction in the sense relied upon by the
//! concurrent callers: a `Field` can be shared freely across threads.

pub mod bitmat;
pub mod field;
pub mod gfmat;
pub mod gl;

pub use bitmat::{BitEchelon, BitMatrix};
pub use field::{Field, FieldError};
pub use gfmat::GfMatrix;
pub use gl::{brute_force_gl, conjugacy_classes, gl_generators, gl_order, gl_order_u64, split_prime_power, ConjClass};

/// Errors shared by the linear-algebra entry points.
#[derive(Debug, thiserror::Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
}
