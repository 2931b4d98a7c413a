//! Lines and planes lying on a hypersurface, decided by vanishing of
//! restriction forms, with a precomputed parity-mask table for the bulk
//! q = 2 case.

use crate::calculus::{expand_monomial, restrict};
use crate::subvariety::{
    lines_in_projective_space, planes_in_projective_space, LinearSubvariety,
};
use ffla::Field;
use std::sync::Arc;
use symspace::{Form, MonomialBasis};

/// All lines of P^{m-1} lying on V(f): restriction identically zero, so
/// containment holds over the closure, not just on rational points.
pub fn lines_on(f: &Form) -> Vec<LinearSubvariety> {
    subvarieties_on(f, 1)
}

/// All planes of P^{m-1} lying on V(f).
pub fn planes_on(f: &Form) -> Vec<LinearSubvariety> {
    subvarieties_on(f, 2)
}

fn subvarieties_on(f: &Form, dim: usize) -> Vec<LinearSubvariety> {
    let field = f.field();
    let m = f.basis().m();
    linear_subvarieties(field, m, dim)
        .into_iter()
        .filter(|s| restrict(f, s.rows()).is_zero())
        .collect()
}

use crate::subvariety::linear_subvarieties;

/// Number of unordered pairs of distinct planes from the list that do not
/// meet: combined rank 6 of the stacked bases.
pub fn disjoint_plane_pairs(field: &Arc<Field>, planes: &[LinearSubvariety]) -> u64 {
    let mut count = 0u64;
    for i in 0..planes.len() {
        for j in (i + 1)..planes.len() {
            if planes[i].disjoint_from(field, &planes[j]) {
                count += 1;
            }
        }
    }
    count
}

/// Containment table for every line and plane of P^{m-1}(F_2) against forms
/// of one fixed degree: coefficient r of the restriction of a packed f to
/// subvariety s is the parity of (mask[s][r] AND f), so one AND/popcount per
/// restriction coefficient decides containment.
pub struct IncidenceTable {
    field: Arc<Field>,
    words: usize,
    lines: Vec<LinearSubvariety>,
    line_masks: Vec<Vec<u64>>,
    planes: Vec<LinearSubvariety>,
    plane_masks: Vec<Vec<u64>>,
    /// Bit j of word j/64 in row i: planes i and j are disjoint.
    plane_disjoint: Vec<Vec<u64>>,
}

impl IncidenceTable {
    pub fn new(basis: &Arc<MonomialBasis>, field: &Arc<Field>) -> Self {
        assert_eq!(field.q(), 2, "the mask table packs parities, so q = 2");
        let m = basis.m();
        let lines = lines_in_projective_space(field, m);
        let planes = if m >= 3 {
            planes_in_projective_space(field, m)
        } else {
            Vec::new()
        };
        let words = basis.size().div_ceil(64);
        let line_masks = lines
            .iter()
            .map(|l| masks_for(basis, field, l, 2, words))
            .collect();
        let plane_masks = planes
            .iter()
            .map(|p| masks_for(basis, field, p, 3, words))
            .collect();
        let prow = planes.len().div_ceil(64);
        let mut plane_disjoint = vec![vec![0u64; prow]; planes.len()];
        for i in 0..planes.len() {
            for j in (i + 1)..planes.len() {
                if planes[i].disjoint_from(field, &planes[j]) {
                    plane_disjoint[i][j / 64] |= 1 << (j % 64);
                    plane_disjoint[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        IncidenceTable {
            field: Arc::clone(field),
            words,
            lines,
            line_masks,
            planes,
            plane_masks,
            plane_disjoint,
        }
    }

    pub fn lines(&self) -> &[LinearSubvariety] {
        &self.lines
    }

    pub fn planes(&self) -> &[LinearSubvariety] {
        &self.planes
    }

    fn contained(&self, masks: &[u64], bits: &[u64]) -> bool {
        masks
            .chunks_exact(self.words)
            .all(|mask| {
                let ones: u32 = mask.iter().zip(bits).map(|(m, b)| (m & b).count_ones()).sum();
                ones % 2 == 0
            })
    }

    pub fn line_indices_on(&self, f: &Form) -> Vec<usize> {
        let bits = f.bits().expect("table requires packed q = 2 forms");
        (0..self.lines.len())
            .filter(|&i| self.contained(&self.line_masks[i], bits))
            .collect()
    }

    pub fn plane_indices_on(&self, f: &Form) -> Vec<usize> {
        let bits = f.bits().expect("table requires packed q = 2 forms");
        (0..self.planes.len())
            .filter(|&i| self.contained(&self.plane_masks[i], bits))
            .collect()
    }

    pub fn n_lines_on(&self, f: &Form) -> u64 {
        self.line_indices_on(f).len() as u64
    }

    pub fn n_planes_on(&self, f: &Form) -> u64 {
        self.plane_indices_on(f).len() as u64
    }

    /// Number of unordered disjoint pairs among the planes on f, from the
    /// precomputed pair table.
    pub fn disjoint_pairs_on(&self, f: &Form) -> u64 {
        let idx = self.plane_indices_on(f);
        let mut count = 0u64;
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[(a + 1)..] {
                if self.plane_disjoint[i][j / 64] >> (j % 64) & 1 == 1 {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
}

/// One parity mask per coefficient of the restriction to s, flattened into
/// `rbasis.size()` blocks of `basis.size().div_ceil(64)` words: coefficient r
/// of f restricted to s is the parity of `mask[r] AND f.bits()`. Requires q = 2.
pub fn restriction_masks(
    basis: &Arc<MonomialBasis>,
    field: &Arc<Field>,
    s: &LinearSubvariety,
) -> Vec<u64> {
    assert_eq!(field.q(), 2, "parity masks need q = 2");
    masks_for(basis, field, s, s.rows().len(), basis.size().div_ceil(64))
}

/// One parity mask per coefficient of the restriction to s: bit i of mask r
/// is set when monomial i of the ambient basis contributes to restriction
/// coefficient r (contributions are 0/1 since q = 2).
fn masks_for(
    basis: &Arc<MonomialBasis>,
    field: &Arc<Field>,
    s: &LinearSubvariety,
    k: usize,
    words: usize,
) -> Vec<u64> {
    let rbasis = MonomialBasis::new(k, basis.d());
    let mut masks = vec![0u64; rbasis.size() * words];
    for i in 0..basis.size() {
        for (exp, _) in expand_monomial(field, basis.exponent(i), s.rows()) {
            let r = rbasis.index_of(&exp).unwrap();
            masks[r * words + i / 64] ^= 1 << (i % 64);
        }
    }
    masks
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f2_cubic_sixvars() -> (Arc<MonomialBasis>, Arc<Field>) {
        (MonomialBasis::new(6, 3), Field::get(2, 1).unwrap())
    }

    #[test]
    fn triple_hyperplane_carries_all_lines_of_its_zero_locus() {
        let (b, f2) = f2_cubic_sixvars();
        let cube = Form::parse(&b, &f2, "x0^3").unwrap();
        // Lines on x0^3 = lines of the P^4 cut out by x0 = 0.
        assert_eq!(lines_on(&cube).len(), 155);
        let fermat =
            Form::parse(&b, &f2, "x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3").unwrap();
        let fermat_lines = lines_on(&fermat);
        assert!(fermat_lines.len() >= 1 && fermat_lines.len() % 2 == 1);
    }

    #[test]
    fn table_agrees_with_restriction_filter() {
        let (b, f2) = f2_cubic_sixvars();
        let table = IncidenceTable::new(&b, &f2);
        assert_eq!(table.lines().len(), 651);
        assert_eq!(table.planes().len(), 1395);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..25 {
            let f = Form::from_u64(Arc::clone(&b), Arc::clone(&f2), rng.gen::<u64>() >> 8);
            let slow_lines = lines_on(&f);
            let fast: Vec<_> = table
                .line_indices_on(&f)
                .into_iter()
                .map(|i| table.lines()[i].clone())
                .collect();
            assert_eq!(fast, slow_lines);
            let slow_planes = planes_on(&f);
            assert_eq!(table.n_planes_on(&f), slow_planes.len() as u64);
            assert_eq!(
                table.disjoint_pairs_on(&f),
                disjoint_plane_pairs(&f2, &slow_planes)
            );
        }
    }

    #[test]
    fn containment_matches_point_evaluation_over_extensions() {
        // A line lies on V(f) iff f vanishes on all its F_{q^k}-points for
        // every k; for a cubic, k up to 3 already has more points than roots.
        let (b, f2) = f2_cubic_sixvars();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let lines = lines_in_projective_space(&f2, 6);
        for _ in 0..10 {
            let f = Form::from_u64(Arc::clone(&b), Arc::clone(&f2), rng.gen::<u64>() >> 8);
            for line in lines.iter().step_by(7) {
                let contained = restrict(&f, line.rows()).is_zero();
                let mut vanishes_everywhere = true;
                for k in 1..=3u32 {
                    let ext = Field::get(2, k).unwrap();
                    for pt in line.points(&f2, &ext) {
                        if crate::calculus::eval_ext(&f, &ext, &pt) != 0 {
                            vanishes_everywhere = false;
                        }
                    }
                }
                assert_eq!(contained, vanishes_everywhere);
            }
        }
    }

    #[test]
    fn coordinate_planes_are_disjoint_and_self_pairs_never_count() {
        let f2 = Field::get(2, 1).unwrap();
        let a = LinearSubvariety::span(
            &f2,
            &[
                vec![0, 0, 0, 1, 0, 0],
                vec![0, 0, 0, 0, 1, 0],
                vec![0, 0, 0, 0, 0, 1],
            ],
        )
        .unwrap();
        let b = LinearSubvariety::span(
            &f2,
            &[
                vec![1, 0, 0, 0, 0, 0],
                vec![0, 1, 0, 0, 0, 0],
                vec![0, 0, 1, 0, 0, 0],
            ],
        )
        .unwrap();
        assert_eq!(disjoint_plane_pairs(&f2, &[a.clone(), b.clone()]), 1);
        assert_eq!(disjoint_plane_pairs(&f2, &[a.clone(), a.clone()]), 0);
        // A repeated plane pairs once with each distinct disjoint partner.
        assert_eq!(disjoint_plane_pairs(&f2, &[a, b.clone(), b]), 2);
    }

    #[test]
    fn line_counts_on_random_cubic_fourfolds_are_odd() {
        let (b, f2) = f2_cubic_sixvars();
        let table = IncidenceTable::new(&b, &f2);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let f = Form::from_u64(Arc::clone(&b), Arc::clone(&f2), rng.gen::<u64>() >> 8);
            if f.is_zero() {
                continue;
            }
            let n = table.n_lines_on(&f);
            assert!(n >= 1 && n % 2 == 1, "{f} has {n} lines");
        }
    }
}
