//! Form products and half-integral coefficient handling shared by the
//! counting and Weil-polynomial layers.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use symspace::{Form, MonomialBasis};

use crate::ZetaError;

/// Product of two forms in the same variables. The result lives in the
/// monomial basis of degree deg(a) + deg(b).
pub fn form_mul(a: &Form, b: &Form) -> Form {
    let (ba, bb) = (a.basis(), b.basis());
    assert_eq!(ba.m(), bb.m(), "factors must share a variable set");
    let field = a.field();
    assert_eq!(field.q(), b.field().q(), "factors must share a field");
    let basis = MonomialBasis::new(ba.m(), ba.d() + bb.d());
    let mut out = Form::zero(Arc::clone(&basis), Arc::clone(field));
    for (i, ca) in a.support() {
        for (j, cb) in b.support() {
            let exp: Vec<u8> = ba
                .exponent(i)
                .iter()
                .zip(bb.exponent(j))
                .map(|(x, y)| x + y)
                .collect();
            let t = basis.index_of(&exp).expect("product stays in degree");
            out.set_coeff(t, field.add(out.coeff(t), field.mul(ca, cb)));
        }
    }
    out
}

/// Doubles each coefficient and checks the result is integral. This is the
/// on-disk representation of Weil polynomials, whose coefficients lie in
/// (1/2)Z: the integer coefficients of 2P, lowest degree first.
pub fn twice_integral(coeffs: &[BigRational]) -> Result<Vec<BigInt>, ZetaError> {
    let two = BigInt::from(2);
    coeffs
        .iter()
        .map(|c| {
            let d = c * BigRational::from_integer(two.clone());
            if d.denom().is_one() {
                Ok(d.to_integer())
            } else {
                Err(ZetaError::NonIntegral(format!("doubled coefficient {c}")))
            }
        })
        .collect()
}

/// Drops trailing zero coefficients so the last entry is the leading one.
pub(crate) fn poly_trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

pub(crate) fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Quotient and remainder with deg r < deg d; d must be trimmed and nonzero.
pub(crate) fn poly_divmod(
    n: &[BigRational],
    d: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    assert!(d.last().is_some_and(|c| !c.is_zero()));
    let mut r = n.to_vec();
    if n.len() < d.len() {
        return (Vec::new(), poly_trim(r));
    }
    let mut q = vec![BigRational::zero(); n.len() - d.len() + 1];
    let lead = d.last().unwrap();
    for k in (0..q.len()).rev() {
        let c = &r[k + d.len() - 1] / lead;
        if c.is_zero() {
            continue;
        }
        for (j, dj) in d.iter().enumerate() {
            let t = &c * dj;
            r[k + j] -= t;
        }
        q[k] = c;
    }
    (poly_trim(q), poly_trim(r))
}

pub(crate) fn poly_deriv(a: &[BigRational]) -> Vec<BigRational> {
    poly_trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(i.into()))
            .collect(),
    )
}
