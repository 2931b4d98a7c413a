//! Subspaces of `Sym^d(F_q^m)` in canonical reduced echelon form, spans of
//! power products of linear forms, quotient maps with canonical sections, and
//! the stability check used to validate filtrations.

use std::collections::HashMap;
use std::sync::Arc;

use ffla::{Field, GfMatrix};

use crate::action::{act, expand_product};
use crate::basis::MonomialBasis;
use crate::form::Form;
use crate::SymError;

/// Incrementally maintained reduced row echelon basis over F_q.
/// Rows are kept fully reduced and sorted by pivot, so two equal subspaces
/// always hold bit-identical rows.
pub(crate) struct EchelonAccum {
    field: Arc<Field>,
    n: usize,
    rows: Vec<Vec<u16>>,
    pivots: Vec<usize>,
}

impl EchelonAccum {
    pub fn new(field: Arc<Field>, n: usize) -> Self {
        Self { field, n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Clear the pivot coordinates of v: afterwards v is the canonical
    /// representative of its coset modulo the current row space.
    pub fn reduce(&self, v: &mut [u16]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for i in 0..self.n {
                    let t = self.field.mul(c, row[i]);
                    v[i] = self.field.sub(v[i], t);
                }
            }
        }
    }

    /// Insert v; returns false when v was already in the span.
    pub fn insert(&mut self, mut v: Vec<u16>) -> bool {
        debug_assert_eq!(v.len(), self.n);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = self.field.inv(v[p]);
        for c in v.iter_mut() {
            *c = self.field.mul(*c, inv);
        }
        // Eliminate the new pivot from every existing row.
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                for i in 0..self.n {
                    let t = self.field.mul(c, v[i]);
                    row[i] = self.field.sub(row[i], t);
                }
            }
        }
        let at = self.pivots.partition_point(|&x| x < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    pub fn into_parts(self) -> (Vec<Vec<u16>>, Vec<usize>) {
        (self.rows, self.pivots)
    }
}

/// A subspace of `Sym^d(F_q^m)`, stored as its unique reduced echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: Arc<MonomialBasis>,
    field: Arc<Field>,
    rows: Vec<Vec<u16>>,
    pivots: Vec<usize>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.field.q() == other.field.q() && self.rows == other.rows
    }
}
impl Eq for Subspace {}

impl Subspace {
    pub fn zero(basis: Arc<MonomialBasis>, field: Arc<Field>) -> Self {
        Self { basis, field, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(basis: Arc<MonomialBasis>, field: Arc<Field>) -> Self {
        let n = basis.size();
        let rows = (0..n)
            .map(|i| {
                let mut r = vec![0u16; n];
                r[i] = 1;
                r
            })
            .collect();
        Self { basis, field, rows, pivots: (0..n).collect() }
    }

    pub fn from_rows(
        basis: Arc<MonomialBasis>,
        field: Arc<Field>,
        rows: impl IntoIterator<Item = Vec<u16>>,
    ) -> Self {
        let mut acc = EchelonAccum::new(Arc::clone(&field), basis.size());
        for r in rows {
            acc.insert(r);
        }
        let (rows, pivots) = acc.into_parts();
        Self { basis, field, rows, pivots }
    }

    pub fn from_forms(forms: &[Form]) -> Self {
        let basis = Arc::clone(forms[0].basis());
        let field = Arc::clone(forms[0].field());
        Self::from_rows(basis, field, forms.iter().map(|f| f.to_vec()))
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.size()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vec(&self, i: usize) -> &[u16] {
        &self.rows[i]
    }

    pub fn basis_form(&self, i: usize) -> Form {
        Form::from_coeffs(Arc::clone(&self.basis), Arc::clone(&self.field), &self.rows[i])
    }

    /// Canonical coset representative: v with all pivot coordinates cleared.
    pub fn reduce_vec(&self, v: &mut [u16]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for i in 0..v.len() {
                    let t = self.field.mul(c, row[i]);
                    v[i] = self.field.sub(v[i], t);
                }
            }
        }
    }

    pub fn contains_vec(&self, v: &[u16]) -> bool {
        let mut r = v.to_vec();
        self.reduce_vec(&mut r);
        r.iter().all(|&c| c == 0)
    }

    pub fn contains(&self, f: &Form) -> bool {
        self.contains_vec(&f.to_vec())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains_vec(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let rows = self.rows.iter().chain(&other.rows).cloned();
        Subspace::from_rows(Arc::clone(&self.basis), Arc::clone(&self.field), rows)
    }

    /// Echelon basis as a dim × N matrix.
    pub fn row_matrix(&self) -> GfMatrix {
        GfMatrix::from_fn(Arc::clone(&self.field), self.dim(), self.ambient_dim(), |r, c| {
            self.rows[r][c]
        })
    }

    /// The quotient map V → V/self with the canonical (pivot-free) section.
    pub fn quotient(&self) -> QuotientMap {
        let n = self.ambient_dim();
        let free: Vec<usize> = (0..n).filter(|i| !self.pivots.contains(i)).collect();
        let u = free.len();
        // Column i of proj = canonical representative of e_i, restricted to
        // the free coordinates.
        let mut proj = GfMatrix::zero(Arc::clone(&self.field), u, n);
        for i in 0..n {
            let mut e = vec![0u16; n];
            e[i] = 1;
            self.reduce_vec(&mut e);
            for (r, &f) in free.iter().enumerate() {
                proj.set(r, i, e[f]);
            }
        }
        let mut sect = GfMatrix::zero(Arc::clone(&self.field), n, u);
        for (c, &f) in free.iter().enumerate() {
            sect.set(f, c, 1);
        }
        QuotientMap { kernel: self.clone(), free, proj, sect }
    }
}

/// Patterns of products of powers of linear forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PowerPattern {
    /// span of `l₁^{e₁} ⋯ l_k^{e_k}` over all tuples of nonzero linear forms.
    Product(Vec<u8>),
    /// span of `l₁^a·l₂^b + l₁^b·l₂^a` over all pairs of nonzero linear forms.
    SymmetricPair(u8, u8),
}

impl PowerPattern {
    fn degree(&self) -> u32 {
        match self {
            PowerPattern::Product(es) => es.iter().map(|&e| e as u32).sum(),
            PowerPattern::SymmetricPair(a, b) => *a as u32 + *b as u32,
        }
    }
}

/// All nonzero linear forms, as coefficient vectors.
fn nonzero_linear_forms(field: &Field, m: usize) -> Vec<Vec<u16>> {
    let q = field.q() as u64;
    let total = q.pow(m as u32);
    (1..total)
        .map(|code| {
            let mut v = Vec::with_capacity(m);
            let mut c = code;
            for _ in 0..m {
                v.push((c % q) as u16);
                c /= q;
            }
            v
        })
        .collect()
}

fn insert_poly(
    acc: &mut EchelonAccum,
    basis: &MonomialBasis,
    poly: &HashMap<Vec<u8>, u16>,
) {
    let mut row = vec![0u16; basis.size()];
    for (mono, &c) in poly {
        if c != 0 {
            row[basis.index_of(mono).expect("degree matches basis")] = c;
        }
    }
    acc.insert(row);
}

/// Span of the pattern over all tuples of nonzero linear forms, as a
/// canonical Subspace. Patterns must have total degree d.
pub fn power_product_subspace(
    basis: &Arc<MonomialBasis>,
    field: &Arc<Field>,
    pattern: &PowerPattern,
) -> Result<Subspace, SymError> {
    if pattern.degree() != basis.d() {
        return Err(SymError::PatternDegree { got: pattern.degree(), want: basis.d() });
    }
    let m = basis.m();
    let lines = nonzero_linear_forms(field, m);
    let mut acc = EchelonAccum::new(Arc::clone(field), basis.size());
    match pattern {
        PowerPattern::Product(exps) => {
            let k = exps.len();
            let mut choice = vec![0usize; k];
            loop {
                let factors: Vec<(&[u16], u8)> =
                    choice.iter().zip(exps).map(|(&c, &e)| (lines[c].as_slice(), e)).collect();
                let poly = expand_product(field, m, &factors);
                insert_poly(&mut acc, basis, &poly);
                // Advance the odometer over tuples.
                let mut pos = 0;
                loop {
                    if pos == k {
                        let (rows, pivots) = acc.into_parts();
                        return Ok(Subspace {
                            basis: Arc::clone(basis),
                            field: Arc::clone(field),
                            rows,
                            pivots,
                        });
                    }
                    choice[pos] += 1;
                    if choice[pos] < lines.len() {
                        break;
                    }
                    choice[pos] = 0;
                    pos += 1;
                }
            }
        }
        PowerPattern::SymmetricPair(a, b) => {
            for l1 in &lines {
                for l2 in &lines {
                    let p1 = expand_product(field, m, &[(l1, *a), (l2, *b)]);
                    let p2 = expand_product(field, m, &[(l1, *b), (l2, *a)]);
                    let mut sum = p1;
                    for (mono, c) in p2 {
                        let slot = sum.entry(mono).or_insert(0);
                        *slot = field.add(*slot, c);
                    }
                    insert_poly(&mut acc, basis, &sum);
                }
            }
            let (rows, pivots) = acc.into_parts();
            Ok(Subspace { basis: Arc::clone(basis), field: Arc::clone(field), rows, pivots })
        }
    }
}

/// The quotient V → V/W. The section picks the canonical coset representative
/// (all pivot coordinates of W zero), so projection ∘ section = identity and
/// section ∘ projection reduces modulo W.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    kernel: Subspace,
    free: Vec<usize>,
    proj: GfMatrix,
    sect: GfMatrix,
}

impl QuotientMap {
    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.kernel.ambient_dim()
    }

    /// Ambient coordinates that survive into the quotient, ascending.
    pub fn free_coords(&self) -> &[usize] {
        &self.free
    }

    pub fn proj_matrix(&self) -> &GfMatrix {
        &self.proj
    }

    pub fn sect_matrix(&self) -> &GfMatrix {
        &self.sect
    }

    pub fn project_vec(&self, v: &[u16]) -> Vec<u16> {
        let mut r = v.to_vec();
        self.kernel.reduce_vec(&mut r);
        self.free.iter().map(|&i| r[i]).collect()
    }

    pub fn project_form(&self, f: &Form) -> Vec<u16> {
        self.project_vec(&f.to_vec())
    }

    /// The canonical representative of the coset u.
    pub fn section_vec(&self, u: &[u16]) -> Vec<u16> {
        debug_assert_eq!(u.len(), self.dim());
        let mut v = vec![0u16; self.ambient_dim()];
        for (&c, &i) in u.iter().zip(&self.free) {
            v[i] = c;
        }
        v
    }

    pub fn section_form(&self, u: &[u16]) -> Form {
        Form::from_coeffs(
            Arc::clone(self.kernel.basis()),
            Arc::clone(self.kernel.field()),
            &self.section_vec(u),
        )
    }

    /// The induced matrix proj·S·sect on the quotient. Well-defined as an
    /// action matrix only when the kernel is S-stable.
    pub fn induced(&self, s: &GfMatrix) -> GfMatrix {
        self.proj.mul(s).mul(&self.sect)
    }
}

/// True iff act(g, w) lies in W for every generator g and basis vector w.
/// Generators that are singular or mis-sized make this false.
pub fn is_g_stable(w: &Subspace, generators: &[GfMatrix]) -> bool {
    for g in generators {
        for i in 0..w.dim() {
            match act(g, &w.basis_form(i)) {
                Ok(img) => {
                    if !w.contains(&img) {
                        return false;
                    }
                }
                Err(_) => return false,
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_form, random_gl};
    use ffla::gl::gl_generators;
    use rand::{Rng, SeedableRng};

    #[test]
    fn echelon_form_is_canonical() {
        let basis = MonomialBasis::new(4, 2);
        let field = Field::get(3, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20);
        for _ in 0..40 {
            let rows: Vec<Vec<u16>> =
                (0..5).map(|_| random_form(&basis, &field, &mut rng).to_vec()).collect();
            let w = Subspace::from_rows(Arc::clone(&basis), Arc::clone(&field), rows.clone());
            // Re-span with random invertible combinations and a shuffle.
            let k = w.dim();
            if k == 0 {
                continue;
            }
            let g = random_gl(&field, k, &mut rng);
            let new_rows: Vec<Vec<u16>> = (0..k)
                .map(|r| {
                    let mut v = vec![0u16; basis.size()];
                    for c in 0..k {
                        let coef = g.get(r, c);
                        for (i, slot) in v.iter_mut().enumerate() {
                            *slot = field.add(*slot, field.mul(coef, w.basis_vec(c)[i]));
                        }
                    }
                    v
                })
                .collect();
            let w2 = Subspace::from_rows(Arc::clone(&basis), Arc::clone(&field), new_rows);
            assert_eq!(w, w2);
            assert_eq!(w.row_matrix().rank(), w.dim());
        }
    }

    #[test]
    fn waring_span_dimensions() {
        let f2 = Field::get(2, 1).unwrap();
        let cubics = MonomialBasis::new(6, 3);
        let w1 = power_product_subspace(&cubics, &f2, &PowerPattern::Product(vec![3])).unwrap();
        assert_eq!(w1.dim(), 21);
        let w2 = power_product_subspace(&cubics, &f2, &PowerPattern::Product(vec![1, 2])).unwrap();
        assert_eq!(w2.dim(), 36);
        assert!(w1.is_subspace_of(&w2));

        let quartics = MonomialBasis::new(4, 4);
        let w =
            power_product_subspace(&quartics, &f2, &PowerPattern::SymmetricPair(3, 1)).unwrap();
        assert_eq!(w.dim(), 20);
    }

    #[test]
    fn pattern_degree_mismatch_rejected() {
        let basis = MonomialBasis::new(4, 3);
        let f2 = Field::get(2, 1).unwrap();
        let err = power_product_subspace(&basis, &f2, &PowerPattern::Product(vec![2, 2]));
        assert!(matches!(err, Err(SymError::PatternDegree { got: 4, want: 3 })));
    }

    #[test]
    fn waring_spans_are_stable() {
        let f2 = Field::get(2, 1).unwrap();
        let gens = gl_generators(&f2, 6);
        let cubics = MonomialBasis::new(6, 3);
        for pattern in [PowerPattern::Product(vec![3]), PowerPattern::Product(vec![1, 2])] {
            let w = power_product_subspace(&cubics, &f2, &pattern).unwrap();
            assert!(is_g_stable(&w, &gens), "{pattern:?}");
        }
        let quartics = MonomialBasis::new(4, 4);
        let w =
            power_product_subspace(&quartics, &f2, &PowerPattern::SymmetricPair(3, 1)).unwrap();
        assert!(is_g_stable(&w, &gl_generators(&f2, 4)));
    }

    #[test]
    fn random_subspaces_are_not_stable_and_full_space_is() {
        let f2 = Field::get(2, 1).unwrap();
        let cubics = MonomialBasis::new(6, 3);
        let gens = gl_generators(&f2, 6);
        let full = Subspace::full(Arc::clone(&cubics), Arc::clone(&f2));
        assert!(is_g_stable(&full, &gens));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let rows: Vec<Vec<u16>> =
                (0..10).map(|_| random_form(&cubics, &f2, &mut rng).to_vec()).collect();
            let w = Subspace::from_rows(Arc::clone(&cubics), Arc::clone(&f2), rows);
            if w.dim() == 10 {
                assert!(!is_g_stable(&w, &gens));
            }
        }
    }

    #[test]
    fn quotient_dimensions_and_identities() {
        let f2 = Field::get(2, 1).unwrap();
        let cubics = MonomialBasis::new(6, 3);
        let w1 = power_product_subspace(&cubics, &f2, &PowerPattern::Product(vec![3])).unwrap();
        let q = w1.quotient();
        assert_eq!(q.dim(), 56 - 21);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
        for _ in 0..1000 {
            // projection ∘ section = identity on the quotient.
            let u: Vec<u16> = (0..q.dim()).map(|_| rng.gen_range(0..2)).collect();
            assert_eq!(q.project_vec(&q.section_vec(&u)), u);
            // section ∘ projection differs from the input by an element of W.
            let v = random_form(&cubics, &f2, &mut rng).to_vec();
            let back = q.section_vec(&q.project_vec(&v));
            let diff: Vec<u16> = v.iter().zip(&back).map(|(&a, &b)| f2.sub(a, b)).collect();
            assert!(w1.contains_vec(&diff));
            // Equal cosets project and section identically.
            let mut shifted = v.clone();
            let wi = rng.gen_range(0..w1.dim());
            for (s, &wv) in shifted.iter_mut().zip(w1.basis_vec(wi)) {
                *s = f2.add(*s, wv);
            }
            assert_eq!(q.project_vec(&v), q.project_vec(&shifted));
        }
        // The matrices implement the same maps.
        for _ in 0..50 {
            let v = random_form(&cubics, &f2, &mut rng).to_vec();
            assert_eq!(q.proj_matrix().apply(&v), q.project_vec(&v));
            let u: Vec<u16> = (0..q.dim()).map(|_| rng.gen_range(0..2)).collect();
            assert_eq!(q.sect_matrix().apply(&u), q.section_vec(&u));
        }
    }

    #[test]
    fn quotient_by_zero_is_identity() {
        let basis = MonomialBasis::new(3, 2);
        let f3 = Field::get(3, 1).unwrap();
        let z = Subspace::zero(Arc::clone(&basis), Arc::clone(&f3));
        let q = z.quotient();
        assert_eq!(q.dim(), basis.size());
        assert!(q.proj_matrix().is_identity());
        assert!(q.sect_matrix().is_identity());
    }

    #[test]
    fn induced_matrix_commutes_with_projection() {
        let f2 = Field::get(2, 1).unwrap();
        let cubics = MonomialBasis::new(6, 3);
        let w2 = power_product_subspace(&cubics, &f2, &PowerPattern::Product(vec![1, 2])).unwrap();
        let q = w2.quotient();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for g in gl_generators(&f2, 6) {
            let s = crate::action::sym_matrix(&g, &cubics);
            let bar = q.induced(&s);
            for _ in 0..20 {
                let v = random_form(&cubics, &f2, &mut rng).to_vec();
                // π(S v) = S̄ (π v): the square commutes because W₂ is stable.
                assert_eq!(q.project_vec(&s.apply(&v)), bar.apply(&q.project_vec(&v)));
            }
        }
    }

    #[test]
    fn containment_and_sum() {
        let f2 = Field::get(2, 1).unwrap();
        let cubics = MonomialBasis::new(6, 3);
        let w1 = power_product_subspace(&cubics, &f2, &PowerPattern::Product(vec![3])).unwrap();
        let w2 = power_product_subspace(&cubics, &f2, &PowerPattern::Product(vec![1, 2])).unwrap();
        assert_eq!(w1.sum(&w2), w2, "W₁ ⊆ W₂ so the sum is W₂");
        let cube = Form::parse(&cubics, &f2, "x0^3 + x1^3 + x2^3").unwrap();
        assert!(w1.contains(&cube), "sums of cubes are in the cube span");
    }
}
