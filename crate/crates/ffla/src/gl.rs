//! Group-theoretic primitives for `GL_m(F_q)`: exact order, a small standard
//! generating set, and the full list of conjugacy classes built from rational
//! canonical forms.
//!
//! A conjugacy class is indexed by a multiset of (monic irreducible ≠ x,
//! partition) pairs with total degree·weight m; its size comes from the
//! classical centralizer-order formula, so the group is never enumerated.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::field::Field;
use crate::gfmat::GfMatrix;

/// `|GL_m(F_q)| = ∏_{i=0}^{m-1} (q^m − q^i)`, exact.
pub fn gl_order(m: u32, q: u32) -> BigUint {
    let qm = BigUint::from(q).pow(m);
    let mut order = BigUint::one();
    let mut qi = BigUint::one();
    for _ in 0..m {
        order *= &qm - &qi;
        qi *= q;
    }
    order
}

pub fn gl_order_u64(m: u32, q: u32) -> Option<u64> {
    u64::try_from(&gl_order(m, q)).ok()
}

// ---------------------------------------------------------------------------
// Polynomials over F_q: little-endian coefficient vectors of u16 field values.
// ---------------------------------------------------------------------------

fn poly_mul(f: &Field, a: &[u16], b: &[u16]) -> Vec<u16> {
    let mut out = vec![0u16; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

fn poly_pow(f: &Field, a: &[u16], n: u32) -> Vec<u16> {
    let mut out = vec![1u16];
    for _ in 0..n {
        out = poly_mul(f, &out, a);
    }
    out
}

fn poly_divides(f: &Field, divisor: &[u16], target: &[u16]) -> bool {
    // Remainder of target by monic divisor; true when zero.
    let dd = divisor.len() - 1;
    debug_assert_eq!(divisor[dd], 1, "divisor must be monic");
    let mut r: Vec<u16> = target.to_vec();
    while r.len() > dd {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let dr = r.len() - 1;
            for i in 0..=dd {
                let v = f.mul(lead, divisor[i]);
                r[dr - dd + i] = f.sub(r[dr - dd + i], v);
            }
        }
        r.pop();
        while r.len() > dd && r.last() == Some(&0) {
            r.pop();
        }
    }
    r.iter().all(|&c| c == 0)
}

/// All monic irreducible polynomials over F_q of degree 1..=max_deg with
/// nonzero constant term (i.e. excluding x), grouped by nothing, sorted by
/// (degree, coefficient encoding).
pub fn monic_irreducibles(f: &Arc<Field>, max_deg: u32) -> Vec<Vec<u16>> {
    let q = f.q();
    let mut irr: Vec<Vec<u16>> = Vec::new();
    for d in 1..=max_deg {
        let count = (q as u64).pow(d);
        'cand: for n in 0..count {
            let mut poly = Vec::with_capacity(d as usize + 1);
            let mut v = n;
            for _ in 0..d {
                poly.push((v % q as u64) as u16);
                v /= q as u64;
            }
            poly.push(1);
            if poly[0] == 0 {
                continue; // divisible by x
            }
            for g in irr.iter().take_while(|g| g.len() - 1 <= (d / 2) as usize) {
                if poly_divides(f, g, &poly) {
                    continue 'cand;
                }
            }
            // Also reject products of two x-free factors... covered above; but
            // factors equal to x are excluded from `irr`, so test x separately.
            // (poly[0] ≠ 0 already rules x out.)
            irr.push(poly);
        }
        irr.sort_by_key(|g| g.len());
    }
    irr
}

// ---------------------------------------------------------------------------
// Partitions and the centralizer-order formula.
// ---------------------------------------------------------------------------

/// All partitions of n, parts in weakly decreasing order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            cur.push(part);
            rec(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Centralizer order of a matrix whose elementary divisors w.r.t. one
/// irreducible of degree d are `f^{λ_1}, f^{λ_2}, …` inside GL over F_q:
/// `z_λ(Q)` with `Q = q^d`, the standard formula
/// `Q^{Σ (λ'_j)²} · ∏_i φ_{m_i}(Q^{-1})` written integrally.
fn centralizer_block(q: u32, deg: u32, lambda: &[u32]) -> BigUint {
    let qq = BigUint::from(q).pow(deg);
    // Conjugate partition.
    let max_part = *lambda.iter().max().unwrap() as usize;
    let mut conj = vec![0u32; max_part];
    for &part in lambda {
        for j in 0..part as usize {
            conj[j] += 1;
        }
    }
    let sum_conj_sq: u64 = conj.iter().map(|&c| (c as u64) * (c as u64)).sum();
    // Multiplicities of part values.
    let mut mult = std::collections::BTreeMap::new();
    for &part in lambda {
        *mult.entry(part).or_insert(0u32) += 1;
    }
    let mut denom_exp = 0u64;
    let mut prod = BigUint::one();
    for (_, m) in mult {
        for j in 1..=m {
            denom_exp += j as u64;
            prod *= qq.pow(j) - BigUint::one();
        }
    }
    debug_assert!(sum_conj_sq >= denom_exp);
    qq.pow((sum_conj_sq - denom_exp) as u32) * prod
}

/// A conjugacy class of `GL_m(F_q)`.
#[derive(Clone, Debug)]
pub struct ConjClass {
    /// Block-diagonal representative built from companion matrices of f^λᵢ.
    pub rep: GfMatrix,
    pub size: BigUint,
    /// The defining multiset: (monic irreducible, partition) pairs.
    pub label: Vec<(Vec<u16>, Vec<u32>)>,
}

/// Companion matrix of a monic polynomial (column convention `M·v`).
fn companion(field: &Arc<Field>, g: &[u16]) -> GfMatrix {
    let k = g.len() - 1;
    debug_assert!(k >= 1 && g[k] == 1);
    let mut c = GfMatrix::zero(Arc::clone(field), k, k);
    for i in 1..k {
        c.set(i, i - 1, 1);
    }
    for i in 0..k {
        c.set(i, k - 1, field.neg(g[i]));
    }
    c
}

/// One representative per conjugacy class of `GL_m(F_q)`, with exact sizes.
/// The sizes sum to `gl_order(m, q)` (asserted).
pub fn conjugacy_classes(m: u32, q: u32) -> Vec<ConjClass> {
    let (p, e) = split_prime_power(q).expect("q must be a prime power");
    let field = Field::get(p, e).expect("field in table range");
    let irr = monic_irreducibles(&field, m);
    let parts_by_weight: Vec<Vec<Vec<u32>>> = (0..=m).map(partitions).collect();

    let order = gl_order(m, q);
    let mut classes = Vec::new();
    // Assign to each irreducible (in order) a partition (possibly empty),
    // consuming deg·|λ| of the remaining weight.
    fn rec(
        field: &Arc<Field>,
        q: u32,
        irr: &[Vec<u16>],
        parts_by_weight: &[Vec<Vec<u32>>],
        idx: usize,
        rem: u32,
        current: &mut Vec<(usize, Vec<u32>)>,
        order: &BigUint,
        classes: &mut Vec<ConjClass>,
    ) {
        if rem == 0 {
            let mut rep: Option<GfMatrix> = None;
            let mut centralizer = BigUint::one();
            let mut label = Vec::new();
            for (i, lambda) in current.iter() {
                let f_poly = &irr[*i];
                let deg = (f_poly.len() - 1) as u32;
                centralizer *= centralizer_block(q, deg, lambda);
                for &part in lambda {
                    let block = companion(field, &poly_pow(field, f_poly, part));
                    rep = Some(match rep {
                        None => block,
                        Some(r) => r.direct_sum(&block),
                    });
                }
                label.push((f_poly.clone(), lambda.clone()));
            }
            let rep = rep.expect("m ≥ 1 so the assignment is nonempty");
            debug_assert!((order % &centralizer).is_zero());
            classes.push(ConjClass { rep, size: order / centralizer, label });
            return;
        }
        if idx >= irr.len() {
            return;
        }
        let deg = (irr[idx].len() - 1) as u32;
        if deg > rem && irr[idx..].iter().all(|g| (g.len() - 1) as u32 > rem) {
            return; // sorted by degree: nothing later fits either
        }
        // Skip this irreducible.
        rec(field, q, irr, parts_by_weight, idx + 1, rem, current, order, classes);
        // Or assign it a partition of weight w with deg·w ≤ rem.
        let mut w = 1;
        while deg * w <= rem {
            for lambda in &parts_by_weight[w as usize] {
                current.push((idx, lambda.clone()));
                rec(field, q, irr, parts_by_weight, idx + 1, rem - deg * w, current, order, classes);
                current.pop();
            }
            w += 1;
        }
    }
    rec(&field, q, &irr, &parts_by_weight, 0, m, &mut Vec::new(), &order, &mut classes);

    let total: BigUint = classes.iter().map(|c| c.size.clone()).sum();
    assert_eq!(total, order, "class sizes must sum to |GL_{m}(F_{q})|");
    classes
}

/// Split a prime power `q = p^e`.
pub fn split_prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut v = q;
            let mut e = 0;
            while v % p == 0 {
                v /= p;
                e += 1;
            }
            return (v == 1).then_some((p, e));
        }
        p += 1;
    }
    Some((q, 1))
}

/// Standard generators of `GL_m(F_q)`: a primitive scaling of the first
/// coordinate, the coordinate cycle, and the two elementary transvections on
/// the first pair. (Redundant but safe; generation is asserted in tests.)
pub fn gl_generators(field: &Arc<Field>, m: usize) -> Vec<GfMatrix> {
    let mut gens = Vec::new();
    let alpha = field.generator();
    if alpha != 1 {
        let mut d = GfMatrix::identity(Arc::clone(field), m);
        d.set(0, 0, alpha);
        gens.push(d);
    }
    if m >= 2 {
        let cycle = GfMatrix::from_fn(Arc::clone(field), m, m, |r, c| u16::from(r == (c + 1) % m));
        gens.push(cycle);
        let mut t01 = GfMatrix::identity(Arc::clone(field), m);
        t01.set(0, 1, 1);
        gens.push(t01);
        let mut t10 = GfMatrix::identity(Arc::clone(field), m);
        t10.set(1, 0, 1);
        gens.push(t10);
    }
    gens
}

/// Every invertible m×m matrix over F_q, for small brute-force oracles.
pub fn brute_force_gl(field: &Arc<Field>, m: usize) -> Vec<GfMatrix> {
    let q = field.q() as u64;
    let cells = m * m;
    let total = q.pow(cells as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mat = GfMatrix::from_fn(Arc::clone(field), m, m, |r, c| {
            (code / q.pow((r * m + c) as u32) % q) as u16
        });
        if mat.rank() == m {
            out.push(mat);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashMap, HashSet, VecDeque};

    #[test]
    fn gl_order_small_values() {
        assert_eq!(gl_order(1, 5), BigUint::from(4u32));
        assert_eq!(gl_order(2, 2), BigUint::from(6u32));
        assert_eq!(gl_order(6, 2), BigUint::from(20_158_709_760u64));
    }

    #[test]
    fn gl_order_matches_brute_force_m_le_3() {
        for (m, q) in [(1u32, 2u32), (2, 2), (3, 2), (1, 3), (2, 3), (3, 3)] {
            let (p, e) = split_prime_power(q).unwrap();
            let field = Field::get(p, e).unwrap();
            let count = brute_force_gl(&field, m as usize).len();
            assert_eq!(BigUint::from(count), gl_order(m, q), "GL_{m}(F_{q})");
        }
    }

    #[test]
    fn conjugacy_classes_1_3() {
        let classes = conjugacy_classes(1, 3);
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|c| c.size == BigUint::one()));
    }

    #[test]
    fn conjugacy_class_sizes_sum_to_group_order() {
        // The constructor asserts the sum internally; exercise a spread of cases.
        for (m, q) in [(2u32, 2u32), (3, 2), (4, 2), (6, 2), (2, 3), (3, 3), (2, 4), (2, 5)] {
            let classes = conjugacy_classes(m, q);
            assert!(!classes.is_empty(), "GL_{m}(F_{q})");
        }
        assert_eq!(conjugacy_classes(2, 2).len(), 3);
    }

    /// Brute-force conjugation oracle: partition all of GL_m(F_q) into classes
    /// by closure under conjugation, then compare counts, sizes, and verify the
    /// representatives land in pairwise-distinct classes.
    #[test]
    fn conjugacy_classes_match_brute_force() {
        for (m, q) in [(2u32, 2u32), (3, 2), (2, 3), (3, 3)] {
            let (p, e) = split_prime_power(q).unwrap();
            let field = Field::get(p, e).unwrap();
            let all = brute_force_gl(&field, m as usize);
            let gens = gl_generators(&field, m as usize);
            let gen_invs: Vec<GfMatrix> = gens.iter().map(|g| g.invert().unwrap()).collect();

            let key = |mat: &GfMatrix| -> Vec<u16> {
                (0..m as usize).flat_map(|r| mat.row(r).to_vec()).collect()
            };
            let mut class_of: HashMap<Vec<u16>, usize> = HashMap::new();
            let mut sizes = Vec::new();
            for start in &all {
                if class_of.contains_key(&key(start)) {
                    continue;
                }
                let id = sizes.len();
                let mut queue = VecDeque::from([start.clone()]);
                class_of.insert(key(start), id);
                let mut size = 0usize;
                while let Some(x) = queue.pop_front() {
                    size += 1;
                    for (g, gi) in gens.iter().zip(&gen_invs) {
                        let y = g.mul(&x).mul(gi);
                        if !class_of.contains_key(&key(&y)) {
                            class_of.insert(key(&y), id);
                            queue.push_back(y);
                        }
                    }
                }
                sizes.push(size);
            }

            let classes = conjugacy_classes(m, q);
            assert_eq!(classes.len(), sizes.len(), "class count GL_{m}(F_{q})");
            let mut expected: Vec<usize> = sizes.clone();
            expected.sort_unstable();
            let mut got: Vec<usize> = classes.iter().map(|c| usize::try_from(&c.size).unwrap()).collect();
            got.sort_unstable();
            assert_eq!(got, expected, "class sizes GL_{m}(F_{q})");
            // Representatives are pairwise non-conjugate and sit in classes of
            // the right size.
            let mut seen = HashSet::new();
            for c in &classes {
                let id = class_of[&key(&c.rep)];
                assert!(seen.insert(id), "two representatives conjugate in GL_{m}(F_{q})");
                assert_eq!(BigUint::from(sizes[id]), c.size);
            }
        }
    }

    /// The documented generator set really generates: BFS closure reaches the
    /// whole group for every small case.
    #[test]
    fn generators_generate() {
        for (m, q) in [(1u32, 2u32), (1, 3), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (2, 5), (4, 2)] {
            let (p, e) = split_prime_power(q).unwrap();
            let field = Field::get(p, e).unwrap();
            let gens = gl_generators(&field, m as usize);
            let id = GfMatrix::identity(Arc::clone(&field), m as usize);
            let key = |mat: &GfMatrix| -> Vec<u16> {
                (0..m as usize).flat_map(|r| mat.row(r).to_vec()).collect()
            };
            let mut seen = HashSet::from([key(&id)]);
            let mut queue = VecDeque::from([id]);
            while let Some(x) = queue.pop_front() {
                for g in &gens {
                    let y = g.mul(&x);
                    if seen.insert(key(&y)) {
                        queue.push_back(y);
                    }
                }
            }
            assert_eq!(BigUint::from(seen.len()), gl_order(m, q), "⟨gens⟩ = GL_{m}(F_{q})");
        }
    }

    #[test]
    fn irreducible_counts_over_f2() {
        let f = Field::get(2, 1).unwrap();
        let irr = monic_irreducibles(&f, 6);
        let by_deg = |d: usize| irr.iter().filter(|g| g.len() - 1 == d).count();
        // Necklace counts, minus the excluded x in degree 1.
        assert_eq!(by_deg(1), 1);
        assert_eq!(by_deg(2), 1);
        assert_eq!(by_deg(3), 2);
        assert_eq!(by_deg(4), 3);
        assert_eq!(by_deg(5), 6);
        assert_eq!(by_deg(6), 9);
    }

    #[test]
    fn companion_blocks_are_invertible() {
        for (m, q) in [(4u32, 2u32), (3, 3)] {
            for c in conjugacy_classes(m, q) {
                assert_eq!(c.rep.rows(), m as usize);
                assert!(c.rep.invert().is_some(), "class reps lie in GL");
            }
        }
    }
}
