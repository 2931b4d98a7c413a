//! Dense `F_2` matrices with rows bit-packed into 64-bit words, plus an
//! incremental echelon basis used for span/membership/coset bookkeeping.
//!
//! Vector convention: vectors are column vectors packed LSB-first (coordinate
//! `i` at bit `i` of word `i / 64`); `apply` computes `M·v`, so
//! `a.mul(&b).apply(v) == a.apply(b.apply(v))`.

use crate::LinAlgError;

pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// Row-major bit-packed matrix over `F_2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        write!(f, "]")
    }
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let wpr = words_for(cols);
        BitMatrix { rows, cols, wpr, data: vec![0; rows * wpr] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from single-word rows; requires `cols ≤ 64`.
    pub fn from_rows64(rows: &[u64], cols: usize) -> Self {
        assert!(cols <= 64);
        let mut m = Self::zero(rows.len(), cols);
        for (i, &r) in rows.iter().enumerate() {
            m.data[i] = r;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
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
    pub fn words_per_row(&self) -> usize {
        self.wpr
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.wpr + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        let w = &mut self.data[r * self.wpr + c / 64];
        if bit {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.wpr..(r + 1) * self.wpr]
    }

    /// Single-word row accessor; requires `cols ≤ 64`.
    #[inline]
    pub fn row64(&self, r: usize) -> u64 {
        debug_assert!(self.wpr == 1);
        self.data[r]
    }

    pub fn set_row(&mut self, r: usize, words: &[u64]) {
        self.data[r * self.wpr..(r + 1) * self.wpr].copy_from_slice(words);
    }

    #[inline]
    fn xor_row_into(&mut self, dst: usize, src: usize) {
        let (d, s) = (dst * self.wpr, src * self.wpr);
        for k in 0..self.wpr {
            let v = self.data[s + k];
            self.data[d + k] ^= v;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.wpr {
            self.data.swap(a * self.wpr + k, b * self.wpr + k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// In-place reduction to the unique reduced row-echelon form.
    /// Returns the rank and the pivot columns in increasing order.
    pub fn rref(&mut self) -> (usize, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(pr) = (rank..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(rank, pr);
            for r in 0..self.rows {
                if r != rank && self.get(r, c) {
                    self.xor_row_into(r, rank);
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

    /// Rows spanning the null space of `v ↦ M·v` (dimension `cols − rank`).
    pub fn kernel(&self) -> BitMatrix {
        let mut m = self.clone();
        let (rank, pivots) = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut ker = BitMatrix::zero(free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            ker.set(i, fc, true);
            for r in 0..rank {
                if m.get(r, fc) {
                    ker.set(i, pivots[r], true);
                }
            }
        }
        ker
    }

    /// Solve `M·x = b`; `b` has one bit per row. Returns any solution.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>, LinAlgError> {
        if b.len() != words_for(self.rows).max(1) && !(self.rows == 0 && b.is_empty()) {
            return Err(LinAlgError::DimensionMismatch(format!(
                "solve: rhs has {} words, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        // Augment with b as an extra column.
        let mut aug = BitMatrix::zero(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for k in 0..self.wpr {
                aug.data[r * aug.wpr + k] = self.data[r * self.wpr + k];
            }
            // Clear any spill past self.cols, then set the rhs bit.
            let rhs = (b[r / 64] >> (r % 64)) & 1 == 1;
            aug.set(r, self.cols, rhs);
        }
        let (_, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None); // inconsistent: pivot in the augmented column
        }
        let mut x = vec![0u64; words_for(self.cols).max(1)];
        for (r, &pc) in pivots.iter().enumerate() {
            if aug.get(r, self.cols) {
                x[pc / 64] |= 1 << (pc % 64);
            }
        }
        Ok(Some(x))
    }

    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = BitMatrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            let o = r * out.wpr;
            for (k, &w) in self.row_words(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let j = k * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    let s = j * rhs.wpr;
                    for t in 0..rhs.wpr {
                        out.data[o + t] ^= rhs.data[s + t];
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for (k, &w) in self.row_words(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let c = k * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    out.set(c, r, true);
                }
            }
        }
        out
    }

    pub fn invert(&self) -> Option<BitMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = BitMatrix::zero(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                if self.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            aug.set(r, n + r, true);
        }
        let (rank, pivots) = aug.rref();
        if rank < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = BitMatrix::zero(n, n);
        for r in 0..n {
            for c in 0..n {
                if aug.get(r, n + c) {
                    inv.set(r, c, true);
                }
            }
        }
        Some(inv)
    }

    /// `M·v` for a packed vector (length `words_for(cols)`).
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; words_for(self.rows).max(1)];
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (k, &w) in self.row_words(r).iter().enumerate() {
                acc ^= w & v[k];
            }
            if acc.count_ones() & 1 == 1 {
                out[r / 64] |= 1 << (r % 64);
            }
        }
        out
    }

    /// `M·v` when both dimensions fit one word.
    #[inline]
    pub fn apply64(&self, v: u64) -> u64 {
        debug_assert!(self.wpr == 1 && self.rows <= 64);
        let mut out = 0u64;
        for r in 0..self.rows {
            out |= (((self.data[r] & v).count_ones() as u64) & 1) << r;
        }
        out
    }

    /// Column cache for repeated `apply64`: `M·v = XOR of columns at v's set bits`.
    pub fn to_cols64(&self) -> Cols64 {
        assert!(self.rows <= 64 && self.cols <= 64);
        let mut cols = vec![0u64; self.cols];
        for r in 0..self.rows {
            let mut w = self.data[r * self.wpr];
            while w != 0 {
                let c = w.trailing_zeros() as usize;
                w &= w - 1;
                cols[c] |= 1 << r;
            }
        }
        Cols64 { cols }
    }
}

/// Column-major view of a ≤64×≤64 bit matrix for the hot apply loop.
#[derive(Clone, Debug)]
pub struct Cols64 {
    pub cols: Vec<u64>,
}

impl Cols64 {
    #[inline(always)]
    pub fn apply(&self, v: u64) -> u64 {
        let mut acc = 0u64;
        let mut w = v;
        while w != 0 {
            let i = w.trailing_zeros() as usize;
            w &= w - 1;
            acc ^= self.cols[i];
        }
        acc
    }
}

/// Incrementally maintained reduced echelon basis of a subspace of `F_2^n`.
///
/// Rows are kept fully reduced with strictly increasing pivots, so two equal
/// subspaces always hold bit-identical bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitEchelon {
    n: usize,
    wpr: usize,
    rows: Vec<u64>,
    pivots: Vec<usize>,
}

impl BitEchelon {
    pub fn new(n: usize) -> Self {
        BitEchelon { n, wpr: words_for(n).max(1), rows: Vec::new(), pivots: Vec::new() }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }
    #[inline]
    pub fn ambient(&self) -> usize {
        self.n
    }
    #[inline]
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.wpr..(i + 1) * self.wpr]
    }

    /// Reduce `v` against the basis (eliminating its bits at pivot columns).
    /// The result is the canonical coset representative of `v + W`.
    pub fn reduce(&self, v: &mut [u64]) {
        for (i, &p) in self.pivots.iter().enumerate() {
            if (v[p / 64] >> (p % 64)) & 1 == 1 {
                for k in 0..self.wpr {
                    v[k] ^= self.rows[i * self.wpr + k];
                }
            }
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Insert `v` into the span. Returns true when `v` was independent.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = lowest_set_bit(&w) else {
            return false;
        };
        // Eliminate the new pivot from existing rows to stay fully reduced.
        for i in 0..self.dim() {
            if (self.rows[i * self.wpr + p / 64] >> (p % 64)) & 1 == 1 {
                for k in 0..self.wpr {
                    let x = w[k];
                    self.rows[i * self.wpr + k] ^= x;
                }
            }
        }
        let at = self.pivots.partition_point(|&x| x < p);
        self.pivots.insert(at, p);
        let idx = at * self.wpr;
        for (k, &x) in w.iter().enumerate() {
            self.rows.insert(idx + k, x);
        }
        true
    }

    /// The basis as a canonical RREF matrix (rows sorted by pivot).
    pub fn to_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::zero(self.dim(), self.n);
        for i in 0..self.dim() {
            m.set_row(i, self.row(i));
        }
        m
    }

    /// Coordinates of a member vector w.r.t. this basis: because the basis is
    /// reduced, they are exactly the bits of `v` at the pivot columns.
    pub fn coords_of(&self, v: &[u64]) -> u64 {
        debug_assert!(self.dim() <= 64);
        let mut out = 0u64;
        for (i, &p) in self.pivots.iter().enumerate() {
            out |= ((v[p / 64] >> (p % 64)) & 1) << i;
        }
        out
    }

    /// Inverse of `coords_of` on members: XOR of basis rows at set bits.
    pub fn from_coords(&self, mut coords: u64, out: &mut [u64]) {
        out.fill(0);
        while coords != 0 {
            let i = coords.trailing_zeros() as usize;
            coords &= coords - 1;
            for k in 0..self.wpr {
                out[k] ^= self.rows[i * self.wpr + k];
            }
        }
    }
}

fn lowest_set_bit(v: &[u64]) -> Option<usize> {
    for (k, &w) in v.iter().enumerate() {
        if w != 0 {
            return Some(k * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}
