//! Smoothness decided by linear algebra on graded pieces of the gradient
//! ideal, plus enumeration of singular points over extension fields.

use crate::calculus::{eval_ext, partials};
use crate::subvariety::projective_points;
use ffla::Field;
use std::sync::Arc;
use symspace::{Form, MonomialBasis};

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

/// Whether V(f) is smooth over the algebraic closure.
///
/// V(f) is smooth iff the ideal (f, all partials) contains every monomial of
/// some degree e, i.e. its degree-e piece has full rank. Full rank persists
/// as e grows, and smoothness forces it by e = m(d-2)+1 when p does not
/// divide d and by e = (m-1)(d-2)+d otherwise, so the bounded scan decides.
pub fn is_smooth(f: &Form) -> bool {
    if f.is_zero() {
        return false;
    }
    let basis = f.basis();
    let field = f.field();
    let (m, d) = (basis.m(), basis.d() as usize);
    if d == 1 {
        return true;
    }
    let dp = partials(f);
    // A rational singular point settles the question without rank work.
    let n_points = ((field.q() as u64).pow(m as u32) - 1) / (field.q() as u64 - 1);
    if n_points <= 4096 {
        for pt in projective_points(field, m) {
            if f.eval(&pt) == 0 && dp.iter().all(|g| g.eval(&pt) == 0) {
                return false;
            }
        }
    }
    let e_max = if d as u32 % field.p() != 0 {
        m * (d - 2) + 1
    } else {
        (m - 1) * (d - 2) + d
    };
    let mut gens: Vec<&Form> = vec![f];
    gens.extend(dp.iter());
    for e in (d - 1)..=e_max.max(d - 1) {
        let cols = binom(e + m - 1, m - 1);
        let mut max_rows = 0usize;
        for g in &gens {
            let dg = g.basis().d() as usize;
            if e >= dg {
                max_rows += binom(e - dg + m - 1, m - 1);
            }
        }
        if max_rows < cols {
            continue;
        }
        if graded_piece_has_full_rank(&gens, field, m, e, cols) {
            return true;
        }
    }
    false
}

/// Rank test for the degree-e piece of the ideal the generators span: feed
/// every (monomial multiple of a generator) into an echelon basis and stop
/// as soon as the rank reaches the number of degree-e monomials.
fn graded_piece_has_full_rank(
    gens: &[&Form],
    field: &Arc<Field>,
    m: usize,
    e: usize,
    cols: usize,
) -> bool {
    let target = MonomialBasis::new(m, e as u32);
    debug_assert_eq!(target.size(), cols);
    if field.q() == 2 {
        let words = cols.div_ceil(64);
        let mut pivot_rows: Vec<Option<Vec<u64>>> = vec![None; cols];
        let mut rank = 0usize;
        let mut feed = |row: Vec<u64>| -> bool {
            let mut row = row;
            loop {
                let Some(lead) = row
                    .iter()
                    .enumerate()
                    .find(|(_, &w)| w != 0)
                    .map(|(wi, w)| wi * 64 + w.trailing_zeros() as usize)
                else {
                    return false;
                };
                match &pivot_rows[lead] {
                    Some(p) => {
                        for (r, w) in row.iter_mut().zip(p) {
                            *r ^= w;
                        }
                    }
                    None => {
                        pivot_rows[lead] = Some(row);
                        rank += 1;
                        return rank == cols;
                    }
                }
            }
        };
        for g in gens {
            let dg = g.basis().d() as usize;
            if e < dg || g.is_zero() {
                continue;
            }
            let support = g.support();
            let mut emit = |beta: &[u8]| -> bool {
                let mut row = vec![0u64; words];
                for (i, _) in &support {
                    let ge = g.basis().exponent(*i);
                    let sum: Vec<u8> = ge.iter().zip(beta).map(|(a, b)| a + b).collect();
                    let col = target.index_of(&sum).unwrap();
                    row[col / 64] ^= 1 << (col % 64);
                }
                feed(row)
            };
            if e == dg {
                if emit(&vec![0u8; m]) {
                    return true;
                }
            } else {
                let mb = MonomialBasis::new(m, (e - dg) as u32);
                for bi in 0..mb.size() {
                    if emit(mb.exponent(bi)) {
                        return true;
                    }
                }
            }
        }
        false
    } else {
        let mut pivot_rows: Vec<Option<Vec<u16>>> = vec![None; cols];
        let mut rank = 0usize;
        let mut feed = |row: Vec<u16>| -> bool {
            let mut row = row;
            loop {
                let Some(lead) = row.iter().position(|&x| x != 0) else {
                    return false;
                };
                match &pivot_rows[lead] {
                    Some(p) => {
                        let c = row[lead];
                        for (r, &w) in row.iter_mut().zip(p).skip(lead) {
                            *r = field.sub(*r, field.mul(c, w));
                        }
                    }
                    None => {
                        let inv = field.inv(row[lead]);
                        for r in row.iter_mut().skip(lead) {
                            *r = field.mul(*r, inv);
                        }
                        pivot_rows[lead] = Some(row);
                        rank += 1;
                        return rank == cols;
                    }
                }
            }
        };
        for g in gens {
            let dg = g.basis().d() as usize;
            if e < dg || g.is_zero() {
                continue;
            }
            let support = g.support();
            let mut emit = |beta: &[u8]| -> bool {
                let mut row = vec![0u16; cols];
                for (i, c) in &support {
                    let ge = g.basis().exponent(*i);
                    let sum: Vec<u8> = ge.iter().zip(beta).map(|(a, b)| a + b).collect();
                    let col = target.index_of(&sum).unwrap();
                    row[col] = field.add(row[col], *c);
                }
                feed(row)
            };
            if e == dg {
                if emit(&vec![0u8; m]) {
                    return true;
                }
            } else {
                let mb = MonomialBasis::new(m, (e - dg) as u32);
                for bi in 0..mb.size() {
                    if emit(mb.exponent(bi)) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// Normalized representatives of the singular points of V(f) with
/// coordinates in F_{q^k}, the degree-k extension of the coefficient field.
/// A point is singular when f and every partial vanish there.
pub fn singular_points(f: &Form, k: u32) -> Vec<Vec<u16>> {
    let basis = f.basis();
    let m = basis.m();
    let base = f.field();
    let ext = &Field::get(base.p(), base.e() * k).expect("extension field in range");
    let n_points = ((ext.q() as u64).pow(m as u32) - 1) / (ext.q() as u64 - 1);
    assert!(n_points <= 1 << 24, "point enumeration too large");
    if basis.d() == 1 {
        return if f.is_zero() {
            projective_points(ext, m).collect()
        } else {
            Vec::new()
        };
    }
    let dp = partials(f);
    projective_points(ext, m)
        .filter(|pt| {
            eval_ext(f, ext, pt) == 0 && dp.iter().all(|g| eval_ext(g, ext, pt) == 0)
        })
        .collect()
}
