//! Dense matrices over an arbitrary table-range field `F_q`, entries stored
//! as `u16` field values row-major. Used for q > 2 and for conjugacy-class
//! representatives; the `F_2` hot paths live in [`crate::bitmat`].

use std::sync::Arc;

use crate::field::Field;
use crate::LinAlgError;

#[derive(Clone)]
pub struct GfMatrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl PartialEq for GfMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data && self.field == other.field
    }
}
impl Eq for GfMatrix {}

impl std::hash::Hash for GfMatrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl std::fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "GfMatrix {}x{} over F_{} [", self.rows, self.cols, self.field.q())?;
        for r in 0..self.rows {
            let line: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  {}", line.join(" "))?;
        }
        write!(f, "]")
    }
}

impl GfMatrix {
    pub fn zero(field: Arc<Field>, rows: usize, cols: usize) -> Self {
        GfMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_fn(field: Arc<Field>, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u16) -> Self {
        let mut m = Self::zero(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u16) {
        debug_assert!((v as u32) < self.field.q());
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// dst += s · src (row operation).
    fn add_scaled_row(&mut self, dst: usize, src: usize, s: u16) {
        if s == 0 {
            return;
        }
        let f = Arc::clone(&self.field);
        for c in 0..self.cols {
            let v = f.mul(s, self.data[src * self.cols + c]);
            let d = &mut self.data[dst * self.cols + c];
            *d = f.add(*d, v);
        }
    }

    fn scale_row(&mut self, r: usize, s: u16) {
        let f = Arc::clone(&self.field);
        for c in 0..self.cols {
            let d = &mut self.data[r * self.cols + c];
            *d = f.mul(*d, s);
        }
    }

    /// In-place unique reduced row-echelon form; returns (rank, pivot columns).
    pub fn rref(&mut self) -> (usize, Vec<usize>) {
        let f = Arc::clone(&self.field);
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(pr) = (rank..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            self.swap_rows(rank, pr);
            let inv = f.inv(self.get(rank, c));
            self.scale_row(rank, inv);
            for r in 0..self.rows {
                if r != rank {
                    let v = self.get(r, c);
                    if v != 0 {
                        let neg = f.neg(v);
                        self.add_scaled_row(r, rank, neg);
                    }
                }
            }
            pivots.push(c);
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        (rank, pivots)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().0
    }

    /// Rows spanning the null space of `v ↦ M·v`.
    pub fn kernel(&self) -> GfMatrix {
        let mut m = self.clone();
        let (rank, pivots) = m.rref();
        let f = Arc::clone(&self.field);
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut ker = GfMatrix::zero(Arc::clone(&self.field), free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            ker.set(i, fc, 1);
            for r in 0..rank {
                let v = m.get(r, fc);
                if v != 0 {
                    ker.set(i, pivots[r], f.neg(v));
                }
            }
        }
        ker
    }

    /// Solve `M·x = b` for one solution.
    pub fn solve(&self, b: &[u16]) -> Result<Option<Vec<u16>>, LinAlgError> {
        if b.len() != self.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "solve: rhs length {} vs {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = GfMatrix::zero(Arc::clone(&self.field), self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let (_, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u16; self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Ok(Some(x))
    }

    pub fn mul(&self, rhs: &GfMatrix) -> GfMatrix {
        assert_eq!(self.cols, rhs.rows);
        let f = &self.field;
        let mut out = GfMatrix::zero(Arc::clone(&self.field), self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = f.mul(a, rhs.get(k, c));
                    let d = &mut out.data[r * rhs.cols + c];
                    *d = f.add(*d, v);
                }
            }
        }
        out
    }

    /// `M·v` for a column vector.
    pub fn apply(&self, v: &[u16]) -> Vec<u16> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u16;
                for c in 0..self.cols {
                    acc = f.add(acc, f.mul(self.get(r, c), v[c]));
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> GfMatrix {
        GfMatrix::from_fn(Arc::clone(&self.field), self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn invert(&self) -> Option<GfMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = GfMatrix::zero(Arc::clone(&self.field), n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let (rank, pivots) = aug.rref();
        if rank < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(GfMatrix::from_fn(Arc::clone(&self.field), n, n, |r, c| aug.get(r, n + c)))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == u16::from(r == c)))
    }

    /// Direct sum: block-diagonal concatenation.
    pub fn direct_sum(&self, other: &GfMatrix) -> GfMatrix {
        let (n1, n2) = (self.rows, other.rows);
        assert_eq!(self.rows, self.cols);
        assert_eq!(other.rows, other.cols);
        GfMatrix::from_fn(Arc::clone(&self.field), n1 + n2, n1 + n2, |r, c| {
            if r < n1 && c < n1 {
                self.get(r, c)
            } else if r >= n1 && c >= n1 {
                other.get(r - n1, c - n1)
            } else {
                0
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_matrix(f: &Arc<Field>, rows: usize, cols: usize, rng: &mut impl Rng) -> GfMatrix {
        let q = f.q() as u16;
        GfMatrix::from_fn(Arc::clone(f), rows, cols, |_, _| rng.gen_range(0..q))
    }

    #[test]
    fn rref_rank_nullity_over_f3_and_f4() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for (p, e) in [(3, 1), (2, 2), (5, 1)] {
            let f = Field::get(p, e).unwrap();
            for _ in 0..300 {
                let rows = rng.gen_range(1..10);
                let cols = rng.gen_range(1..10);
                let m = random_matrix(&f, rows, cols, &mut rng);
                let mut r1 = m.clone();
                let (rank, _) = r1.rref();
                let mut r2 = r1.clone();
                r2.rref();
                assert_eq!(r1, r2);
                assert_eq!(rank + m.kernel().rows(), cols);
                let ker = m.kernel();
                for i in 0..ker.rows() {
                    assert!(m.apply(ker.row(i)).iter().all(|&x| x == 0));
                }
            }
        }
    }

    #[test]
    fn inverse_round_trip_f3() {
        let f = Field::get(3, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
        let mut found = 0;
        while found < 50 {
            let m = random_matrix(&f, 4, 4, &mut rng);
            if let Some(inv) = m.invert() {
                assert!(m.mul(&inv).is_identity());
                found += 1;
            }
        }
    }

    #[test]
    fn solve_consistency() {
        let f = Field::get(3, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let rows = rng.gen_range(1..8);
            let cols = rng.gen_range(1..8);
            let m = random_matrix(&f, rows, cols, &mut rng);
            let x0: Vec<u16> = (0..cols).map(|_| rng.gen_range(0..f.q() as u16)).collect();
            let b = m.apply(&x0);
            let x = m.solve(&b).unwrap().expect("consistent by construction");
            assert_eq!(m.apply(&x), b);
        }
    }
}
