//! Shared helpers for this crate's tests.

use std::sync::Arc;

use ffla::{Field, GfMatrix};
use rand::Rng;

use crate::basis::MonomialBasis;
use crate::form::Form;

pub(crate) fn random_gl(field: &Arc<Field>, m: usize, rng: &mut impl Rng) -> GfMatrix {
    let q = field.q() as u16;
    loop {
        let g = GfMatrix::from_fn(Arc::clone(field), m, m, |_, _| rng.gen_range(0..q));
        if g.rank() == m {
            return g;
        }
    }
}

pub(crate) fn random_form(basis: &Arc<MonomialBasis>, field: &Arc<Field>, rng: &mut impl Rng) -> Form {
    let q = field.q() as u16;
    let coeffs: Vec<u16> = (0..basis.size()).map(|_| rng.gen_range(0..q)).collect();
    Form::from_coeffs(Arc::clone(basis), Arc::clone(field), &coeffs)
}
