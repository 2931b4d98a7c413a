//! Randomized discovery of proper nonzero G-stable subspaces (meataxe-style
//! spinning), for building filtrations when none is supplied.
//!
//! Strategy per attempt: draw a random element R of the matrix algebra
//! generated by the induced action matrices, then spin each kernel vector of
//! R under the action (a submodule) and each kernel vector of Rᵀ under the
//! transposed action (whose span is a quotient-side submodule; its
//! annihilator is a submodule). Sums of finds are also submodules and are
//! added. Best-effort: an empty result does not prove irreducibility, though
//! for char > d it is the expected outcome.

use std::sync::Arc;

use ffla::{Field, GfMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::sym_matrix;
use crate::basis::MonomialBasis;
use crate::subspace::{is_g_stable, Subspace};

fn mat_add_scaled(a: &GfMatrix, b: &GfMatrix, c: u16) -> GfMatrix {
    let f = a.field().clone();
    GfMatrix::from_fn(Arc::clone(a.field()), a.rows(), a.cols(), |r, col| {
        f.add(a.get(r, col), f.mul(c, b.get(r, col)))
    })
}

/// Close the span of `seeds` under `mats`.
fn spin(field: &Arc<Field>, n: usize, mats: &[GfMatrix], seeds: &[Vec<u16>]) -> Vec<Vec<u16>> {
    let mut acc = crate::subspace::EchelonAccum::new(Arc::clone(field), n);
    let mut queue: Vec<Vec<u16>> = Vec::new();
    for s in seeds {
        if acc.insert(s.clone()) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        if acc.dim() == n {
            break;
        }
        for m in mats {
            let w = m.apply(&v);
            if acc.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    acc.into_parts().0
}

/// Search for proper nonzero G-stable subspaces of `Sym^d(F_q^m)`.
/// Deterministic for a fixed seed. Every returned subspace is verified
/// stable; the list is sorted by dimension and duplicate-free.
pub fn find_submodules(
    generators: &[GfMatrix],
    basis: &Arc<MonomialBasis>,
    field: &Arc<Field>,
    attempts: u32,
    seed: u64,
) -> Vec<Subspace> {
    let n = basis.size();
    let q = field.q() as u16;
    let action: Vec<GfMatrix> = generators.iter().map(|g| sym_matrix(g, basis)).collect();
    let dual: Vec<GfMatrix> = action.iter().map(|s| s.transpose()).collect();
    let identity = GfMatrix::identity(Arc::clone(field), n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Vec<Subspace> = Vec::new();

    let consider = |rows: Vec<Vec<u16>>, found: &mut Vec<Subspace>| {
        if rows.is_empty() || rows.len() >= n {
            return;
        }
        let w = Subspace::from_rows(Arc::clone(basis), Arc::clone(field), rows);
        if w.dim() == 0 || w.dim() == n || found.contains(&w) {
            return;
        }
        if is_g_stable(&w, generators) {
            found.push(w);
        }
    };

    for _ in 0..attempts {
        // Random algebra element: a short random-coefficient combination of
        // random words in the action matrices, plus a multiple of I.
        let zero = GfMatrix::zero(Arc::clone(field), n, n);
        let mut r = mat_add_scaled(&zero, &identity, rng.gen_range(0..q));
        for _ in 0..rng.gen_range(2..=4usize) {
            let mut word = action[rng.gen_range(0..action.len())].clone();
            for _ in 0..rng.gen_range(0..=3usize) {
                word = word.mul(&action[rng.gen_range(0..action.len())]);
            }
            let c = rng.gen_range(1..q.max(2));
            r = mat_add_scaled(&r, &word, c);
        }

        // Primal side: spins of kernel vectors are submodules.
        let ker = r.kernel();
        for i in 0..ker.rows() {
            let rows = spin(field, n, &action, &[ker.row(i).to_vec()]);
            consider(rows, &mut found);
        }
        // Dual side: the annihilator of a transposed spin is a submodule.
        let kert = r.transpose().kernel();
        for i in 0..kert.rows() {
            let dspan = spin(field, n, &dual, &[kert.row(i).to_vec()]);
            if dspan.is_empty() || dspan.len() >= n {
                continue;
            }
            let dmat =
                GfMatrix::from_fn(Arc::clone(field), dspan.len(), n, |rr, cc| dspan[rr][cc]);
            let perp = dmat.kernel();
            let rows: Vec<Vec<u16>> = (0..perp.rows()).map(|i| perp.row(i).to_vec()).collect();
            consider(rows, &mut found);
        }
    }

    // Sums of submodules are submodules; take the pairwise closure.
    let mut grew = true;
    while grew {
        grew = false;
        let snapshot = found.clone();
        for i in 0..snapshot.len() {
            for j in (i + 1)..snapshot.len() {
                let s = snapshot[i].sum(&snapshot[j]);
                if s.dim() < n && !found.contains(&s) {
                    found.push(s);
                    grew = true;
                }
            }
        }
    }

    found.sort_by_key(|w| w.dim());
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use ffla::gl::gl_generators;

    #[test]
    fn rediscovers_the_cubic_filtration_subspaces() {
        let f2 = Field::get(2, 1).unwrap();
        let basis = MonomialBasis::new(6, 3);
        let gens = gl_generators(&f2, 6);
        let found = find_submodules(&gens, &basis, &f2, 40, 424242);
        let dims: Vec<usize> = found.iter().map(|w| w.dim()).collect();
        assert!(dims.contains(&21), "expected a 21-dimensional submodule, got {dims:?}");
        assert!(dims.contains(&36), "expected a 36-dimensional submodule, got {dims:?}");
        for w in &found {
            assert!(is_g_stable(w, &gens));
        }
    }

    #[test]
    fn rediscovers_the_quartic_submodule() {
        let f2 = Field::get(2, 1).unwrap();
        let basis = MonomialBasis::new(4, 4);
        let gens = gl_generators(&f2, 4);
        let found = find_submodules(&gens, &basis, &f2, 40, 99);
        let dims: Vec<usize> = found.iter().map(|w| w.dim()).collect();
        assert!(dims.contains(&20), "expected a 20-dimensional submodule, got {dims:?}");
    }

    #[test]
    fn finds_nothing_when_char_exceeds_degree() {
        let f5 = Field::get(5, 1).unwrap();
        let basis = MonomialBasis::new(3, 3);
        let gens = gl_generators(&f5, 3);
        let found = find_submodules(&gens, &basis, &f5, 25, 7);
        assert!(found.is_empty(), "Sym³ in char 5 is irreducible; got dims {:?}",
            found.iter().map(|w| w.dim()).collect::<Vec<_>>());
    }
}
