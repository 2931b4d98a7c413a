//! Linear subvarieties of projective space in canonical form, and streaming
//! enumeration of projective points over any of the table-backed fields.

use ffla::Field;
use std::sync::Arc;

/// A linear subvariety of P^{ambient}: the projectivization of a linear
/// subspace of F_q^{ambient+1}, held as the reduced row echelon basis of that
/// subspace so equal subvarieties compare bitwise equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearSubvariety {
    ambient: usize,
    rows: Vec<Vec<u16>>,
}

impl LinearSubvariety {
    /// Span of the given vectors in F_q^m, as a subvariety of P^{m-1}.
    /// Returns None when the span is zero.
    pub fn span(field: &Arc<Field>, vectors: &[Vec<u16>]) -> Option<Self> {
        let m = vectors.first()?.len();
        let mut rows: Vec<Vec<u16>> = Vec::new();
        for v in vectors {
            assert_eq!(v.len(), m, "ragged input");
            rows.push(v.clone());
        }
        rref(field, &mut rows);
        if rows.is_empty() {
            return None;
        }
        Some(LinearSubvariety {
            ambient: m - 1,
            rows,
        })
    }

    pub(crate) fn from_canonical_rows(ambient: usize, rows: Vec<Vec<u16>>) -> Self {
        LinearSubvariety { ambient, rows }
    }

    /// Projective dimension of the ambient space.
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Projective dimension: 0 = point, 1 = line, 2 = plane.
    pub fn dim(&self) -> usize {
        self.rows.len() - 1
    }

    /// Echelon basis of the underlying linear subspace.
    pub fn rows(&self) -> &[Vec<u16>] {
        &self.rows
    }

    pub fn contains_point(&self, field: &Arc<Field>, pt: &[u16]) -> bool {
        let mut v = pt.to_vec();
        reduce_against(field, &self.rows, &mut v);
        v.iter().all(|&x| x == 0)
    }

    /// Whether the two subvarieties share no projective point: the stacked
    /// bases must have full combined rank.
    pub fn disjoint_from(&self, field: &Arc<Field>, other: &Self) -> bool {
        assert_eq!(self.ambient, other.ambient);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        let want = self.rows.len() + other.rows.len();
        if want > self.ambient + 1 {
            return false;
        }
        rref(field, &mut rows);
        rows.len() == want
    }

    /// The F-points of the subvariety, for F the given field or an extension
    /// of it (coordinates of the basis are embedded).
    pub fn points(&self, base: &Arc<Field>, ext: &Arc<Field>) -> Vec<Vec<u16>> {
        let k = self.rows.len();
        let m = self.ambient + 1;
        let emb: Vec<Vec<u16>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&c| ext.embed_from(base, c)).collect())
            .collect();
        projective_points(ext, k)
            .map(|t| {
                let mut p = vec![0u16; m];
                for (i, &ti) in t.iter().enumerate() {
                    if ti == 0 {
                        continue;
                    }
                    for j in 0..m {
                        p[j] = ext.add(p[j], ext.mul(ti, emb[i][j]));
                    }
                }
                p
            })
            .collect()
    }
}

/// In-place reduced row echelon form; zero rows are dropped.
pub(crate) fn rref(field: &Arc<Field>, rows: &mut Vec<Vec<u16>>) {
    let m = rows.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    for col in 0..m {
        let Some(src) = (pivot_row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(pivot_row, src);
        let inv = field.inv(rows[pivot_row][col]);
        if inv != 1 {
            for c in col..m {
                rows[pivot_row][c] = field.mul(rows[pivot_row][c], inv);
            }
        }
        for r in 0..rows.len() {
            if r != pivot_row && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in col..m {
                    let s = field.mul(f, rows[pivot_row][c]);
                    rows[r][c] = field.sub(rows[r][c], s);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
}

fn reduce_against(field: &Arc<Field>, basis: &[Vec<u16>], v: &mut [u16]) {
    for row in basis {
        let lead = row.iter().position(|&x| x != 0).unwrap();
        if v[lead] != 0 {
            let f = v[lead];
            for c in lead..v.len() {
                let s = field.mul(f, row[c]);
                v[c] = field.sub(v[c], s);
            }
        }
    }
}

/// All subvarieties of projective dimension k in P^{m-1}(F_q), each exactly
/// once in canonical echelon form: one matrix per choice of pivot columns and
/// free entries.
pub fn linear_subvarieties(field: &Arc<Field>, m: usize, k: usize) -> Vec<LinearSubvariety> {
    let r = k + 1;
    assert!(r <= m, "subvariety dimension exceeds ambient dimension");
    let q = field.q() as u16;
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..r).collect();
    loop {
        // Free positions: to the right of each row's pivot, off pivot columns.
        let mut free: Vec<(usize, usize)> = Vec::new();
        for (row, &p) in pivots.iter().enumerate() {
            for c in (p + 1)..m {
                if !pivots.contains(&c) {
                    free.push((row, c));
                }
            }
        }
        let mut vals = vec![0u16; free.len()];
        loop {
            let mut rows = vec![vec![0u16; m]; r];
            for (row, &p) in pivots.iter().enumerate() {
                rows[row][p] = 1;
            }
            for (&(row, col), &v) in free.iter().zip(&vals) {
                rows[row][col] = v;
            }
            out.push(LinearSubvariety::from_canonical_rows(m - 1, rows));
            // Next free-entry assignment (mixed radix over F_q).
            let mut i = 0;
            while i < vals.len() {
                vals[i] += 1;
                if vals[i] < q {
                    break;
                }
                vals[i] = 0;
                i += 1;
            }
            if i == vals.len() {
                break;
            }
        }
        // Next pivot combination in lexicographic order.
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] + (r - i) < m {
                pivots[i] += 1;
                for j in (i + 1)..r {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn lines_in_projective_space(field: &Arc<Field>, m: usize) -> Vec<LinearSubvariety> {
    linear_subvarieties(field, m, 1)
}

pub fn planes_in_projective_space(field: &Arc<Field>, m: usize) -> Vec<LinearSubvariety> {
    linear_subvarieties(field, m, 2)
}

/// Streaming enumeration of P^{m-1}(F), one normalized representative per
/// point: the first nonzero coordinate is 1.
pub fn projective_points(field: &Arc<Field>, m: usize) -> ProjectivePoints {
    ProjectivePoints {
        q: field.q() as u16,
        m,
        lead: 0,
        tail: vec![0u16; m.saturating_sub(1)],
        done: m == 0,
    }
}

pub struct ProjectivePoints {
    q: u16,
    m: usize,
    /// Index of the leading 1.
    lead: usize,
    /// Current values of the coordinates after the leading 1.
    tail: Vec<u16>,
    done: bool,
}

impl Iterator for ProjectivePoints {
    type Item = Vec<u16>;

    fn next(&mut self) -> Option<Vec<u16>> {
        if self.done {
            return None;
        }
        let mut p = vec![0u16; self.m];
        p[self.lead] = 1;
        let nt = self.m - 1 - self.lead;
        p[self.lead + 1..].copy_from_slice(&self.tail[..nt]);
        // Advance: mixed-radix increment of the tail, then next leading slot.
        let mut i = 0;
        loop {
            if i == nt {
                self.lead += 1;
                if self.lead == self.m {
                    self.done = true;
                }
                for t in &mut self.tail {
                    *t = 0;
                }
                break;
            }
            self.tail[i] += 1;
            if self.tail[i] < self.q {
                break;
            }
            self.tail[i] = 0;
            i += 1;
        }
        Some(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn gaussian(m: u64, k: u64, q: u64) -> u64 {
        // Number of k-dimensional linear subspaces of F_q^m.
        let mut num = 1u128;
        let mut den = 1u128;
        for i in 0..k {
            num *= (q.pow(m as u32) - q.pow(i as u32)) as u128;
            den *= (q.pow(k as u32) - q.pow(i as u32)) as u128;
        }
        (num / den) as u64
    }

    #[test]
    fn counts_match_gaussian_binomials() {
        let f2 = Field::get(2, 1).unwrap();
        assert_eq!(lines_in_projective_space(&f2, 6).len() as u64, 651);
        assert_eq!(gaussian(6, 2, 2), 651);
        assert_eq!(planes_in_projective_space(&f2, 6).len() as u64, 1395);
        assert_eq!(gaussian(6, 3, 2), 1395);
        assert_eq!(lines_in_projective_space(&f2, 5).len() as u64, 155);
        assert_eq!(lines_in_projective_space(&f2, 2).len(), 1);
        let f3 = Field::get(3, 1).unwrap();
        assert_eq!(
            lines_in_projective_space(&f3, 4).len() as u64,
            gaussian(4, 2, 3)
        );
    }

    #[test]
    fn subvarieties_are_distinct_and_canonical() {
        let f2 = Field::get(2, 1).unwrap();
        let lines = lines_in_projective_space(&f2, 4);
        let set: HashSet<_> = lines.iter().cloned().collect();
        assert_eq!(set.len(), lines.len());
        for l in &lines {
            assert_eq!(l.dim(), 1);
            assert_eq!(l.ambient(), 3);
            // Canonical: re-spanning returns the identical object.
            let respan = LinearSubvariety::span(&f2, l.rows()).unwrap();
            assert_eq!(&respan, l);
            // And so does spanning by a shuffled, scaled basis.
            let mixed = vec![
                {
                    let mut v = l.rows()[1].clone();
                    for (i, x) in l.rows()[0].iter().enumerate() {
                        v[i] = f2.add(v[i], *x);
                    }
                    v
                },
                l.rows()[0].clone(),
            ];
            assert_eq!(&LinearSubvariety::span(&f2, &mixed).unwrap(), l);
        }
    }

    #[test]
    fn projective_point_enumeration_is_complete() {
        for (p, e, m) in [(2, 1, 4), (2, 2, 3), (3, 1, 3), (5, 1, 2)] {
            let f = Field::get(p, e).unwrap();
            let q = f.q() as u64;
            let pts: Vec<_> = projective_points(&f, m).collect();
            let expected = (q.pow(m as u32) - 1) / (q - 1);
            assert_eq!(pts.len() as u64, expected);
            let set: HashSet<_> = pts.iter().cloned().collect();
            assert_eq!(set.len(), pts.len());
            for pt in &pts {
                let lead = pt.iter().position(|&x| x != 0).unwrap();
                assert_eq!(pt[lead], 1);
            }
        }
    }

    #[test]
    fn line_points_and_disjointness() {
        let f2 = Field::get(2, 1).unwrap();
        let a = LinearSubvariety::span(
            &f2,
            &[
                vec![1, 0, 0, 0, 0, 0],
                vec![0, 1, 0, 0, 0, 0],
                vec![0, 0, 1, 0, 0, 0],
            ],
        )
        .unwrap();
        let b = LinearSubvariety::span(
            &f2,
            &[
                vec![0, 0, 0, 1, 0, 0],
                vec![0, 0, 0, 0, 1, 0],
                vec![0, 0, 0, 0, 0, 1],
            ],
        )
        .unwrap();
        assert!(a.disjoint_from(&f2, &b));
        assert!(!a.disjoint_from(&f2, &a));
        assert_eq!(a.points(&f2, &f2).len(), 7);
        let f4 = Field::get(2, 2).unwrap();
        assert_eq!(a.points(&f2, &f4).len(), 21);
        for p in a.points(&f2, &f2) {
            assert!(a.contains_point(&f2, &p));
            assert!(!b.contains_point(&f2, &p));
        }
    }
}
