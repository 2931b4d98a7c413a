//! Cyclotomic factorization of Weil polynomials, cycle ranks, and the
//! K3-part.
//!
//! Writing P = P_cyc·P_noncyc with P_cyc the maximal product of cyclotomic
//! polynomials dividing P, the multiplicity m of (t-1) and the degree n of
//! P_cyc are the Tate-class counts on the primitive middle cohomology. The
//! report layer adds one to each for the hyperplane-square class, giving
//! the algebraic and geometric ranks of the cycle groups.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::polyarith::{poly_divmod, poly_mul};
use crate::weil::WeilPolynomial;

/// The split P = P_cyc·P_noncyc together with m = mult_{t-1}(P) and
/// n = deg P_cyc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankData {
    p_cyc: Vec<BigInt>,
    p_noncyc: Vec<BigRational>,
    m: u32,
    n: u32,
}

impl RankData {
    /// Monic integer product of all cyclotomic factors, ascending degree.
    pub fn p_cyc(&self) -> &[BigInt] {
        &self.p_cyc
    }

    /// Monic cofactor without cyclotomic factors, ascending degree.
    pub fn p_noncyc(&self) -> &[BigRational] {
        &self.p_noncyc
    }

    /// Multiplicity of (t-1) in P.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Degree of the cyclotomic part.
    pub fn n(&self) -> u32 {
        self.n
    }
}

/// Coefficients of the j-th cyclotomic polynomial, ascending; memoized.
/// Computed as (t^j - 1) divided by the cyclotomics of the proper divisors.
pub fn cyclotomic_polynomial(j: u32) -> Vec<BigInt> {
    assert!(j >= 1);
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&j) {
        return hit.clone();
    }
    let mut quot = vec![BigRational::zero(); j as usize + 1];
    quot[0] = -BigRational::one();
    quot[j as usize] = BigRational::one();
    for d in 1..j {
        if j % d == 0 {
            let phi = rationals(&cyclotomic_polynomial(d));
            let (q, r) = poly_divmod(&quot, &phi);
            assert!(r.is_empty(), "t^j - 1 is the product of the Phi_d");
            quot = q;
        }
    }
    let out: Vec<BigInt> = quot.iter().map(|c| c.to_integer()).collect();
    cache.lock().unwrap().insert(j, out.clone());
    out
}

pub fn euler_phi(mut n: u32) -> u32 {
    let mut phi = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            phi *= p - 1;
            while n % p == 0 {
                n /= p;
                phi *= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

fn rationals(v: &[BigInt]) -> Vec<BigRational> {
    v.iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

/// Repeated exact trial division by every cyclotomic polynomial that could
/// divide a degree-22 polynomial: deg Phi_j = phi(j) <= 22 bounds j by
/// 2*22^2 since phi(j)^2 >= j/2.
pub fn cyclotomic_split(p: &WeilPolynomial) -> RankData {
    let mut rem: Vec<BigRational> = p.coeffs().to_vec();
    let mut p_cyc = vec![BigInt::one()];
    let mut m = 0;
    for j in 1..=968 {
        let deg = euler_phi(j) as usize;
        if deg + 1 > rem.len() {
            continue;
        }
        let phi_int = cyclotomic_polynomial(j);
        let phi = rationals(&phi_int);
        loop {
            let (q, r) = poly_divmod(&rem, &phi);
            if !r.is_empty() || q.is_empty() {
                break;
            }
            rem = q;
            p_cyc = int_mul(&p_cyc, &phi_int);
            if j == 1 {
                m += 1;
            }
            if rem.len() < phi.len() {
                break;
            }
        }
    }
    let n = (p_cyc.len() - 1) as u32;
    RankData {
        p_cyc,
        p_noncyc: rem,
        m,
        n,
    }
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// The monic degree-21 quotient of P by (t-1) when t = 1 is a root, None
/// otherwise. Dividing by (1-t) instead only flips the overall sign; the
/// monic choice is the canonical representative.
pub fn k3_part(p: &WeilPolynomial) -> Option<Vec<BigRational>> {
    let tm1 = vec![-BigRational::one(), BigRational::one()];
    let (q, r) = poly_divmod(p.coeffs(), &tm1);
    if r.is_empty() {
        Some(q)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(9), ints(&[1, 0, 0, 1, 0, 0, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
        // The first cyclotomic with a coefficient outside {-1, 0, 1}.
        let phi105 = cyclotomic_polynomial(105);
        assert_eq!(phi105[7], BigInt::from(-2));
        assert_eq!(phi105.len(), 49);
    }

    #[test]
    fn totient_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(2), 1);
        assert_eq!(euler_phi(46), 22);
        assert_eq!(euler_phi(66), 20);
        assert_eq!(euler_phi(69), 44);
        assert_eq!(euler_phi(968), 440);
    }

    fn weil_from_int_coeffs(v: Vec<BigInt>) -> WeilPolynomial {
        WeilPolynomial::from_coeffs(2, rationals(&v)).unwrap()
    }

    #[test]
    fn fully_cyclotomic_split() {
        let mut c = ints(&[1]);
        for _ in 0..22 {
            c = int_mul(&c, &ints(&[-1, 1]));
        }
        let p = weil_from_int_coeffs(c.clone());
        let rd = cyclotomic_split(&p);
        assert_eq!(rd.m(), 22);
        assert_eq!(rd.n(), 22);
        assert_eq!(rd.p_cyc(), c);
        assert_eq!(rd.p_noncyc(), rationals(&ints(&[1])));
    }

    #[test]
    fn two_cyclotomic_blocks() {
        // (t^9 - 1)(t^13 - 1) carries (t-1)^2 and the primitive factors.
        let mut t9 = vec![BigInt::from(-1)];
        t9.resize(9, BigInt::zero());
        t9.push(BigInt::one());
        let mut t13 = vec![BigInt::from(-1)];
        t13.resize(13, BigInt::zero());
        t13.push(BigInt::one());
        let p = weil_from_int_coeffs(int_mul(&t9, &t13));
        let rd = cyclotomic_split(&p);
        assert_eq!(rd.m(), 2);
        assert_eq!(rd.n(), 22);
        assert_eq!(rd.p_noncyc(), rationals(&ints(&[1])));
    }

    #[test]
    fn half_integer_cofactor_survives() {
        // (t-1)^2 (t^2+1)^9 (t^2 - t/2 + 1): the last factor has roots on
        // the unit circle but is not cyclotomic.
        let mut c = rationals(&ints(&[1]));
        for _ in 0..2 {
            c = poly_mul(&c, &rationals(&ints(&[-1, 1])));
        }
        for _ in 0..9 {
            c = poly_mul(&c, &rationals(&ints(&[1, 0, 1])));
        }
        let half = vec![
            BigRational::one(),
            BigRational::new((-1).into(), 2.into()),
            BigRational::one(),
        ];
        c = poly_mul(&c, &half);
        let p = WeilPolynomial::from_coeffs(2, c.clone()).unwrap();
        let rd = cyclotomic_split(&p);
        assert_eq!(rd.m(), 2);
        assert_eq!(rd.n(), 20);
        assert_eq!(rd.p_noncyc(), half);
        assert_eq!(poly_mul(&rationals(rd.p_cyc()), rd.p_noncyc()), c);
    }

    #[test]
    fn k3_part_requires_root_at_one() {
        let mut c = ints(&[1]);
        for _ in 0..22 {
            c = int_mul(&c, &ints(&[-1, 1]));
        }
        let p = weil_from_int_coeffs(c);
        let quot = k3_part(&p).unwrap();
        assert_eq!(quot.len(), 22);
        assert!(quot[21].is_one());
        let mut expect = rationals(&ints(&[1]));
        for _ in 0..21 {
            expect = poly_mul(&expect, &rationals(&ints(&[-1, 1])));
        }
        assert_eq!(quot, expect);

        let mut sq = ints(&[1]);
        for _ in 0..11 {
            sq = int_mul(&sq, &ints(&[1, 0, 1]));
        }
        assert_eq!(k3_part(&weil_from_int_coeffs(sq)), None);
    }
}
