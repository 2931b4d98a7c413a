//! The fixed monomial order on `Sym^d(F_q^m)`.
//!
//! Monomials of total degree d in variables x₀ > x₁ > … > x_{m−1} are listed
//! in descending graded reverse-lexicographic order, so x₀^d comes first and
//! x_{m−1}^d last. Serialized coefficient strings and orbit files depend on
//! this order, so it is part of the on-disk contract and never changes.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

/// The monomial basis of `Sym^d` in m variables, with both directions of the
/// (exponent vector ↔ position) bijection.
#[derive(Debug)]
pub struct MonomialBasis {
    m: usize,
    d: u32,
    exps: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

/// Descending grevlex: a comes before b when, at the last coordinate where
/// they differ, a has the smaller exponent. (Total degrees are always equal.)
fn grevlex_desc(a: &[u8], b: &[u8]) -> Ordering {
    for i in (0..a.len()).rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Less,
            Ordering::Greater => return Ordering::Greater,
        }
    }
    Ordering::Equal
}

impl MonomialBasis {
    /// All degree-d monomials in m variables, in the fixed order.
    pub fn new(m: usize, d: u32) -> Arc<Self> {
        assert!(m >= 1 && d >= 1, "need at least one variable and degree 1");
        assert!(d <= u8::MAX as u32, "degree out of range");
        let mut exps = Vec::new();
        let mut cur = vec![0u8; m];
        fn rec(exps: &mut Vec<Vec<u8>>, cur: &mut Vec<u8>, pos: usize, rem: u8) {
            if pos + 1 == cur.len() {
                cur[pos] = rem;
                exps.push(cur.clone());
                return;
            }
            for e in 0..=rem {
                cur[pos] = e;
                rec(exps, cur, pos + 1, rem - e);
            }
            cur[pos] = 0;
        }
        rec(&mut exps, &mut cur, 0, d as u8);
        exps.sort_by(|a, b| grevlex_desc(a, b));
        let index = exps.iter().cloned().zip(0..).collect();
        Arc::new(Self { m, d, exps, index })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Number of monomials, C(d+m−1, d).
    pub fn size(&self) -> usize {
        self.exps.len()
    }

    pub fn exponent(&self, i: usize) -> &[u8] {
        &self.exps[i]
    }

    pub fn index_of(&self, exp: &[u8]) -> Option<usize> {
        self.index.get(exp).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> {
        self.exps.iter().map(|e| e.as_slice())
    }
}

impl PartialEq for MonomialBasis {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.d == other.d
    }
}
impl Eq for MonomialBasis {}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> u64 {
        let mut r = 1u64;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }

    #[test]
    fn sizes() {
        assert_eq!(MonomialBasis::new(6, 3).size(), 56);
        assert_eq!(MonomialBasis::new(4, 4).size(), 35);
        for m in 1..=6usize {
            assert_eq!(MonomialBasis::new(m, 1).size(), m);
            for d in 1..=5u32 {
                let b = MonomialBasis::new(m, d);
                assert_eq!(b.size() as u64, binom(d as u64 + m as u64 - 1, d as u64));
            }
        }
    }

    #[test]
    fn index_maps_are_inverse() {
        let b = MonomialBasis::new(5, 4);
        for i in 0..b.size() {
            assert_eq!(b.index_of(b.exponent(i)), Some(i));
        }
        assert_eq!(b.index_of(&[9, 0, 0, 0, 0]), None);
    }

    #[test]
    fn order_is_grevlex_descending() {
        // Degree 2 in three variables: the textbook sequence.
        let b = MonomialBasis::new(3, 2);
        let want: Vec<Vec<u8>> = vec![
            vec![2, 0, 0],
            vec![1, 1, 0],
            vec![0, 2, 0],
            vec![1, 0, 1],
            vec![0, 1, 1],
            vec![0, 0, 2],
        ];
        let got: Vec<Vec<u8>> = b.iter().map(|e| e.to_vec()).collect();
        assert_eq!(got, want);
        // First and last entries in general.
        let b = MonomialBasis::new(6, 3);
        assert_eq!(b.exponent(0), &[3, 0, 0, 0, 0, 0]);
        assert_eq!(b.exponent(55), &[0, 0, 0, 0, 0, 3]);
    }
}
