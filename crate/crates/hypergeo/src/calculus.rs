//! Formal partial derivatives, evaluation over extension fields, and
//! restriction of a form to a linear subvariety.

use ffla::Field;
use std::collections::HashMap;
use std::sync::Arc;
use symspace::{Form, MonomialBasis};

/// The m formal partial derivatives of f, as forms of degree d - 1.
/// Exponents are reduced mod p, so derivatives of p-th powers vanish.
pub fn partials(f: &Form) -> Vec<Form> {
    let basis = f.basis();
    let field = f.field();
    let (m, d) = (basis.m(), basis.d());
    assert!(d >= 2, "derivatives of linear forms are constants, not forms");
    let dbasis = MonomialBasis::new(m, d - 1);
    let mut out: Vec<Form> = (0..m)
        .map(|_| Form::zero(Arc::clone(&dbasis), Arc::clone(field)))
        .collect();
    let p = field.p() as u16;
    for (i, c) in f.support() {
        let exp = basis.exponent(i);
        for j in 0..m {
            if exp[j] == 0 {
                continue;
            }
            let mult = (exp[j] as u16) % p;
            if mult == 0 {
                continue;
            }
            let mut de = exp.to_vec();
            de[j] -= 1;
            let idx = dbasis.index_of(&de).unwrap();
            let cur = out[j].coeff(idx);
            out[j].set_coeff(idx, field.add(cur, field.mul(c, mult)));
        }
    }
    out
}

/// Evaluate f at a point with coordinates in an extension of its coefficient
/// field; coefficients are embedded, arithmetic happens in the extension.
pub fn eval_ext(f: &Form, ext: &Arc<Field>, point: &[u16]) -> u16 {
    let basis = f.basis();
    assert_eq!(point.len(), basis.m());
    let base = f.field();
    let mut total = 0u16;
    for (i, c) in f.support() {
        let mut term = ext.embed_from(base, c);
        for (j, &e) in basis.exponent(i).iter().enumerate() {
            if e > 0 {
                term = ext.mul(term, ext.pow(point[j], e as u64));
            }
        }
        total = ext.add(total, term);
    }
    total
}

/// Expansion of the restriction of the single monomial x^exp to the span of
/// the rows: substitute x_j = sum_t rows[t][j] s_t and collect, yielding a
/// map from s-exponent vectors to nonzero coefficients.
pub(crate) fn expand_monomial(
    field: &Arc<Field>,
    exp: &[u8],
    rows: &[Vec<u16>],
) -> HashMap<Vec<u8>, u16> {
    let k = rows.len();
    let mut terms: HashMap<Vec<u8>, u16> = HashMap::new();
    terms.insert(vec![0u8; k], 1);
    for (j, &e) in exp.iter().enumerate() {
        for _ in 0..e {
            let mut next: HashMap<Vec<u8>, u16> = HashMap::new();
            for (te, coef) in &terms {
                for (t, row) in rows.iter().enumerate() {
                    if row[j] == 0 {
                        continue;
                    }
                    let mut ne = te.clone();
                    ne[t] += 1;
                    let add = field.mul(*coef, row[j]);
                    let slot = next.entry(ne).or_insert(0);
                    *slot = field.add(*slot, add);
                }
            }
            terms = next;
        }
    }
    terms.retain(|_, c| *c != 0);
    terms
}

/// Restriction of f to the span of the given vectors: substitute
/// x = sum_t s_t rows[t] and collect, yielding a degree-d form in
/// rows.len() parameters.
pub fn restrict(f: &Form, rows: &[Vec<u16>]) -> Form {
    let basis = f.basis();
    let field = f.field();
    let m = basis.m();
    let k = rows.len();
    assert!(k >= 1, "restriction needs at least one spanning vector");
    for r in rows {
        assert_eq!(r.len(), m, "spanning vectors must have one entry per variable");
    }
    let rbasis = MonomialBasis::new(k, basis.d());
    let mut out = Form::zero(Arc::clone(&rbasis), Arc::clone(field));
    for (i, c) in f.support() {
        for (exp, coef) in expand_monomial(field, basis.exponent(i), rows) {
            let idx = rbasis.index_of(&exp).unwrap();
            let cur = out.coeff(idx);
            out.set_coeff(idx, field.add(cur, field.mul(c, coef)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_form(basis: &Arc<MonomialBasis>, field: &Arc<Field>, rng: &mut ChaCha8Rng) -> Form {
        let coeffs: Vec<u16> = (0..basis.size())
            .map(|_| rng.gen_range(0..field.q()) as u16)
            .collect();
        Form::from_coeffs(Arc::clone(basis), Arc::clone(field), &coeffs)
    }

    /// x_j * g for a degree-(d-1) form g, landing in the degree-d basis.
    fn times_var(g: &Form, j: usize, target: &Arc<MonomialBasis>) -> Form {
        let mut out = Form::zero(Arc::clone(target), Arc::clone(g.field()));
        for (i, c) in g.support() {
            let mut e = g.basis().exponent(i).to_vec();
            e[j] += 1;
            let idx = target.index_of(&e).unwrap();
            let cur = out.coeff(idx);
            out.set_coeff(idx, g.field().add(cur, c));
        }
        out
    }

    #[test]
    fn partial_examples_in_characteristic_two() {
        let b = MonomialBasis::new(3, 3);
        let f2 = Field::get(2, 1).unwrap();
        let cube = Form::parse(&b, &f2, "x0^3").unwrap();
        let dp = partials(&cube);
        assert_eq!(dp[0].to_string(), "x0^2");
        assert!(dp[1].is_zero() && dp[2].is_zero());

        let sq = Form::parse(&b, &f2, "x0^2*x1").unwrap();
        let dp = partials(&sq);
        assert!(dp[0].is_zero(), "2*x0*x1 vanishes in characteristic 2");
        assert_eq!(dp[1].to_string(), "x0^2");
    }

    #[test]
    fn euler_identity_on_random_cubics() {
        // Over F_2 with d = 3: sum_j x_j df/dx_j = 3f = f.
        let b = MonomialBasis::new(6, 3);
        let f2 = Field::get(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let f = random_form(&b, &f2, &mut rng);
            let dp = partials(&f);
            let mut acc = Form::zero(Arc::clone(&b), Arc::clone(&f2));
            for (j, g) in dp.iter().enumerate() {
                acc = acc.add(&times_var(g, j, &b));
            }
            assert_eq!(acc, f);
        }
    }

    #[test]
    fn euler_identity_over_odd_characteristic() {
        // Over F_5 with d = 3: sum_j x_j df/dx_j = 3f.
        let b = MonomialBasis::new(3, 3);
        let f5 = Field::get(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let f = random_form(&b, &f5, &mut rng);
            let dp = partials(&f);
            let mut acc = Form::zero(Arc::clone(&b), Arc::clone(&f5));
            for (j, g) in dp.iter().enumerate() {
                acc = acc.add(&times_var(g, j, &b));
            }
            assert_eq!(acc, f.scale(3));
        }
    }

    #[test]
    fn extension_evaluation_matches_and_extends() {
        let b = MonomialBasis::new(2, 2);
        let f2 = Field::get(2, 1).unwrap();
        let f4 = Field::get(2, 2).unwrap();
        let f = Form::parse(&b, &f2, "x0^2 + x0*x1 + x1^2").unwrap();
        // No projective zero over F_2.
        for pt in [[1, 0], [1, 1], [0, 1]] {
            assert_ne!(f.eval(&pt), 0);
            assert_eq!(eval_ext(&f, &f2, &pt), f.eval(&pt));
        }
        // Over F_4 the primitive cube roots of unity are zeros.
        let w = f4.generator();
        assert_eq!(eval_ext(&f, &f4, &[1, w]), 0);
        assert_eq!(eval_ext(&f, &f4, &[1, f4.mul(w, w)]), 0);
    }

    #[test]
    fn restriction_to_coordinate_plane_drops_variables() {
        let b = MonomialBasis::new(4, 3);
        let f2 = Field::get(2, 1).unwrap();
        let f = Form::parse(&b, &f2, "x0^3 + x0*x1^2 + x2^3 + x1*x2*x3").unwrap();
        let rows = vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]];
        let r = restrict(&f, &rows);
        let rb = Arc::clone(r.basis());
        assert_eq!(r, Form::parse(&rb, &f2, "x0^3 + x0*x1^2").unwrap());
    }

    #[test]
    fn restriction_commutes_with_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (p, e) in [(2u32, 1u32), (3, 1), (2, 2)] {
            let field = Field::get(p, e).unwrap();
            let b = MonomialBasis::new(5, 3);
            for _ in 0..40 {
                let f = random_form(&b, &field, &mut rng);
                let rows: Vec<Vec<u16>> = (0..2)
                    .map(|_| {
                        (0..5)
                            .map(|_| rng.gen_range(0..field.q()) as u16)
                            .collect()
                    })
                    .collect();
                let r = restrict(&f, &rows);
                for _ in 0..10 {
                    let t: Vec<u16> = (0..2)
                        .map(|_| rng.gen_range(0..field.q()) as u16)
                        .collect();
                    let mut amb = vec![0u16; 5];
                    for (ti, row) in t.iter().zip(&rows) {
                        for (a, rj) in amb.iter_mut().zip(row) {
                            *a = field.add(*a, field.mul(*ti, *rj));
                        }
                    }
                    assert_eq!(r.eval(&t), f.eval(&amb));
                }
            }
        }
    }
}
