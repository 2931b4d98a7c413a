//! The substitution action of `GL_m(F_q)` on forms and its induced matrix on
//! the whole space `Sym^d(F_q^m)`.
//!
//! `act(g, f)` is `f ∘ g`: variable `x_j` is replaced by the linear form with
//! coefficients `g[j][0..m]` (row j). The group multiplications compose as a
//! right action, `act(g·h, f) = act(h, act(g, f))`, so the induced matrices
//! satisfy `sym_matrix(h·g) = sym_matrix(g) · sym_matrix(h)`; both identities
//! are pinned by tests. Everything here is the slow, obviously-correct
//! expansion path; bulk work happens through the induced matrices.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use ffla::{BitMatrix, Field, GfMatrix};

use crate::basis::MonomialBasis;
use crate::form::Form;
use crate::SymError;

/// Multiply a polynomial (exponent vector → coefficient) by a linear form.
pub(crate) fn mul_linear(
    field: &Field,
    poly: &HashMap<Vec<u8>, u16>,
    lin: &[u16],
) -> HashMap<Vec<u8>, u16> {
    let mut out: HashMap<Vec<u8>, u16> = HashMap::with_capacity(poly.len() * 2);
    for (e, &c) in poly {
        for (i, &l) in lin.iter().enumerate() {
            if l == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] += 1;
            let v = field.mul(c, l);
            let slot = out.entry(e2).or_insert(0);
            *slot = field.add(*slot, v);
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Expand `∏ linᵢ^{expᵢ}` as (exponent vector → coefficient).
pub(crate) fn expand_product(
    field: &Field,
    m: usize,
    factors: &[(&[u16], u8)],
) -> HashMap<Vec<u8>, u16> {
    let mut poly = HashMap::from([(vec![0u8; m], 1u16)]);
    for &(lin, e) in factors {
        for _ in 0..e {
            poly = mul_linear(field, &poly, lin);
        }
    }
    poly
}

/// The image of monomial `idx` under substitution by g, as a sparse polynomial.
fn act_monomial(g: &GfMatrix, basis: &MonomialBasis, idx: usize) -> HashMap<Vec<u8>, u16> {
    let factors: Vec<(&[u16], u8)> = basis
        .exponent(idx)
        .iter()
        .enumerate()
        .filter(|&(_, &e)| e > 0)
        .map(|(j, &e)| (g.row(j), e))
        .collect();
    expand_product(g.field(), basis.m(), &factors)
}

fn check_action_args(g: &GfMatrix, basis: &MonomialBasis, field: &Field) -> Result<(), SymError> {
    let m = basis.m();
    if g.rows() != m || g.cols() != m {
        return Err(SymError::Dimension(format!(
            "matrix is {}x{}, space has {m} variables",
            g.rows(),
            g.cols()
        )));
    }
    if g.field().q() != field.q() {
        return Err(SymError::Dimension(format!(
            "matrix over F_{}, form over F_{}",
            g.field().q(),
            field.q()
        )));
    }
    if g.rank() != m {
        return Err(SymError::Singular);
    }
    Ok(())
}

/// Substitute `x ↦ g·x` into f. Rejects singular g.
pub fn act(g: &GfMatrix, f: &Form) -> Result<Form, SymError> {
    let basis = f.basis();
    let field = f.field();
    check_action_args(g, basis, field)?;
    let mut acc: HashMap<Vec<u8>, u16> = HashMap::new();
    for (idx, c) in f.support() {
        for (mono, v) in act_monomial(g, basis, idx) {
            let slot = acc.entry(mono).or_insert(0);
            *slot = field.add(*slot, field.mul(v, c));
        }
    }
    let mut out = Form::zero(Arc::clone(basis), Arc::clone(field));
    for (mono, v) in acc {
        if v != 0 {
            let i = basis.index_of(&mono).expect("substitution preserves degree");
            out.set_coeff(i, v);
        }
    }
    Ok(out)
}

/// The matrix of `act(g, ·)` on coefficient vectors: column i holds the
/// coefficients of the image of monomial i. Requires invertible g.
pub fn sym_matrix(g: &GfMatrix, basis: &Arc<MonomialBasis>) -> GfMatrix {
    check_action_args(g, basis, g.field()).expect("sym_matrix requires an invertible element");
    let n = basis.size();
    let field = g.field();
    let mut s = GfMatrix::zero(Arc::clone(field), n, n);
    for col in 0..n {
        for (mono, v) in act_monomial(g, basis, col) {
            if v != 0 {
                let row = basis.index_of(&mono).expect("substitution preserves degree");
                s.set(row, col, v);
            }
        }
    }
    s
}

/// Bit-matrix version of [`sym_matrix`] for q = 2.
pub fn sym_bitmatrix(g: &GfMatrix, basis: &Arc<MonomialBasis>) -> BitMatrix {
    assert_eq!(g.field().q(), 2, "bit matrices require q = 2");
    let s = sym_matrix(g, basis);
    BitMatrix::from_fn(basis.size(), basis.size(), |r, c| s.get(r, c) == 1)
}

/// Lazy per-element cache of induced matrices. Reads are shared; a miss
/// computes outside the lock and inserts once.
pub struct SymCache {
    basis: Arc<MonomialBasis>,
    map: RwLock<HashMap<GfMatrix, Arc<GfMatrix>>>,
}

impl SymCache {
    pub fn new(basis: Arc<MonomialBasis>) -> Self {
        Self { basis, map: RwLock::new(HashMap::new()) }
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn get(&self, g: &GfMatrix) -> Arc<GfMatrix> {
        if let Some(hit) = self.map.read().unwrap().get(g) {
            return Arc::clone(hit);
        }
        let computed = Arc::new(sym_matrix(g, &self.basis));
        let mut w = self.map.write().unwrap();
        Arc::clone(w.entry(g.clone()).or_insert(computed))
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
