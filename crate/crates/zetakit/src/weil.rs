//! Weil polynomials of cubic fourfolds from point counts.
//!
//! The eigenvalues of Frobenius on the 22-dimensional primitive part of
//! middle cohomology, divided by q^2, are the roots of a monic reciprocal
//! polynomial P with half-integer coefficients. Counting points over
//! F_{q^k} for k = 1..11 determines the top half of P through Newton's
//! identities; the bottom half mirrors it up to the functional-equation
//! sign, which is pinned down by the middle coefficient, by one or two
//! extra counts, or by a unit-circle sieve as a last resort.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::polyarith::{poly_deriv, poly_divmod, poly_trim};
use crate::ZetaError;

/// Projective point counts N_1..N_K of one hypersurface over F_{q^k}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCounts {
    q: u32,
    counts: Vec<u128>,
}

impl PointCounts {
    /// Rejects any N_k = 0: a cubic fourfold over a finite field always has
    /// a rational point (Chevalley–Warning), so a zero count is a bug
    /// upstream leaking through.
    pub fn new(q: u32, counts: Vec<u128>) -> Result<Self, ZetaError> {
        assert!(q >= 2);
        if let Some(k) = counts.iter().position(|&n| n == 0) {
            return Err(ZetaError::BadCounts(format!("N_{} = 0", k + 1)));
        }
        Ok(PointCounts { q, counts })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// N_k, 1-based.
    pub fn get(&self, k: u32) -> Option<u128> {
        self.counts.get(k as usize - 1).copied()
    }

    pub fn counts(&self) -> &[u128] {
        &self.counts
    }

    /// Whether every N_k fits inside |P^5(F_{q^k})|. Honest hypersurface
    /// counts always do; synthetic eigenvalue data used in tests need not,
    /// which is why this is a query and not a constructor invariant.
    pub fn within_ambient_bound(&self) -> bool {
        self.counts.iter().enumerate().all(|(i, &n)| {
            let qk = (self.q as u128).pow(i as u32 + 1);
            n <= (0..=5u32).map(|j| qk.pow(j)).sum()
        })
    }
}

/// How the functional-equation sign was settled; also records the highest
/// point count consumed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignProvenance {
    /// e_11 is nonzero, forcing sign +1; only N_1..N_11 were used.
    MiddleCoefficient,
    /// Resolved by computing e_k from N_k and comparing with its mirror
    /// e_{22-k}.
    HigherCount(u32),
    /// All mirror anchors vanish; the sign is the unique choice keeping
    /// every root of the completed polynomial on the unit circle.
    /// N_1..N_13 were used.
    UnitCircleSieve,
    /// Read off a complete coefficient list; no point counts consumed.
    Direct,
}

/// Monic degree-22 polynomial with half-integer coefficients whose roots
/// are the primitive middle-cohomology Frobenius eigenvalues divided by
/// q^2; satisfies coeff(22-i) = (-1)^eps coeff(i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilPolynomial {
    q: u32,
    coeffs: Vec<BigRational>,
    eps: u8,
    provenance: SignProvenance,
}

impl WeilPolynomial {
    /// Validates and wraps a complete coefficient list, lowest degree first.
    pub fn from_coeffs(q: u32, coeffs: Vec<BigRational>) -> Result<Self, ZetaError> {
        if coeffs.len() != 23 || !coeffs[22].is_one() {
            return Err(ZetaError::BadCounts(
                "expected a monic polynomial of degree 22".into(),
            ));
        }
        let two = BigRational::from_integer(2.into());
        for (i, c) in coeffs.iter().enumerate() {
            if !(c * &two).is_integer() {
                return Err(ZetaError::BadCounts(format!(
                    "coefficient {i} is not a half-integer"
                )));
            }
        }
        let eps = if coeffs[0].is_one() {
            0
        } else if (-&coeffs[0]).is_one() {
            1
        } else {
            return Err(ZetaError::BadCounts("constant term must be ±1".into()));
        };
        for i in 0..=11 {
            let mirrored = if eps == 0 {
                coeffs[22 - i].clone()
            } else {
                -&coeffs[22 - i]
            };
            if coeffs[i] != mirrored {
                return Err(ZetaError::BadCounts(format!(
                    "coefficients {i} and {} violate the functional equation",
                    22 - i
                )));
            }
        }
        Ok(WeilPolynomial {
            q,
            coeffs,
            eps,
            provenance: SignProvenance::Direct,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients c_0..c_22, lowest degree first.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn degree(&self) -> usize {
        22
    }

    pub fn eps(&self) -> u8 {
        self.eps
    }

    /// (-1)^eps.
    pub fn sign(&self) -> i8 {
        if self.eps == 0 {
            1
        } else {
            -1
        }
    }

    pub fn provenance(&self) -> SignProvenance {
        self.provenance
    }

    /// Highest k whose N_k entered the reconstruction; 0 when the
    /// polynomial was built from a coefficient list.
    pub fn counts_used(&self) -> u32 {
        match self.provenance {
            SignProvenance::MiddleCoefficient => 11,
            SignProvenance::HigherCount(k) => k,
            SignProvenance::UnitCircleSieve => 13,
            SignProvenance::Direct => 0,
        }
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }
}

/// Reconstructs the Weil polynomial from N_1..N_11, fetching N_12 (and
/// N_13) through `more` only when the sign of the functional equation
/// needs them; counts already present in `counts` are reused instead.
pub fn weil_from_counts(
    counts: &PointCounts,
    mut more: impl FnMut(u32) -> Result<u128, ZetaError>,
) -> Result<WeilPolynomial, ZetaError> {
    assert!(counts.len() >= 11, "need point counts N_1..N_11");
    let q = counts.q();
    let mut p = vec![BigRational::zero()];
    for k in 1..=11 {
        p.push(power_sum(q, k, counts.get(k).unwrap()));
    }
    let mut e = vec![BigRational::one()];
    for j in 1..=11 {
        e.push(newton_step(&e, &p, j));
    }
    let two = BigRational::from_integer(2.into());
    for (j, ej) in e.iter().enumerate().skip(1) {
        if !(ej * &two).is_integer() {
            return Err(ZetaError::BadCounts(format!(
                "coefficient e_{j} = {ej} is not a half-integer"
            )));
        }
    }
    let (eps, provenance) = if !e[11].is_zero() {
        // e_11 = (-1)^eps e_11 rules out the minus sign.
        (0, SignProvenance::MiddleCoefficient)
    } else {
        let mut fetch = |k: u32| match counts.get(k) {
            Some(n) => Ok(n),
            None => more(k),
        };
        p.push(power_sum(q, 12, fetch(12)?));
        e.push(newton_step(&e, &p, 12));
        match mirror_sign(&e[12], &e[10], 12)? {
            Some(eps) => (eps, SignProvenance::HigherCount(12)),
            None => {
                p.push(power_sum(q, 13, fetch(13)?));
                e.push(newton_step(&e, &p, 13));
                match mirror_sign(&e[13], &e[9], 13)? {
                    Some(eps) => (eps, SignProvenance::HigherCount(13)),
                    None => (sieve_sign(&e)?, SignProvenance::UnitCircleSieve),
                }
            }
        }
    };
    Ok(WeilPolynomial {
        q,
        coeffs: complete_coeffs(&e, eps),
        eps,
        provenance,
    })
}

/// p_k = (N_k - sum_{i=0..4} q^{ik}) / q^{2k}, the power sum of the
/// normalized primitive eigenvalues.
fn power_sum(q: u32, k: u32, n: u128) -> BigRational {
    let qk = BigInt::from(q).pow(k);
    let tail: BigInt = (0..=4u32).map(|i| qk.pow(i)).sum();
    BigRational::new(BigInt::from(n) - tail, qk.pow(2))
}

/// j e_j = sum_{i=1..j} (-1)^{i-1} e_{j-i} p_i.
fn newton_step(e: &[BigRational], p: &[BigRational], j: usize) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 1..=j {
        let term = &e[j - i] * &p[i];
        if i % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc / BigRational::from_integer(j.into())
}

/// e_hi must equal (-1)^eps e_lo. A nonzero mirror determines eps; two
/// zeros say nothing; anything else means the counts are inconsistent.
fn mirror_sign(e_hi: &BigRational, e_lo: &BigRational, k: usize) -> Result<Option<u8>, ZetaError> {
    if e_lo.is_zero() {
        if e_hi.is_zero() {
            Ok(None)
        } else {
            Err(ZetaError::BadCounts(format!(
                "e_{k} must vanish along with its mirror e_{}",
                22 - k
            )))
        }
    } else if e_hi == e_lo {
        Ok(Some(0))
    } else if e_hi == &(-e_lo) {
        Ok(Some(1))
    } else {
        Err(ZetaError::BadCounts(format!(
            "e_{k} matches neither of ±e_{}",
            22 - k
        )))
    }
}

/// c_{22-j} = (-1)^j e_j for the computed half, mirrored by the sign for
/// the rest.
fn complete_coeffs(e: &[BigRational], eps: u8) -> Vec<BigRational> {
    let mut c = vec![BigRational::zero(); 23];
    for j in 0..=11 {
        c[22 - j] = if j % 2 == 0 { e[j].clone() } else { -&e[j] };
    }
    for i in 0..=10 {
        c[i] = if eps == 0 {
            c[22 - i].clone()
        } else {
            -&c[22 - i]
        };
    }
    c
}

fn sieve_sign(e: &[BigRational]) -> Result<u8, ZetaError> {
    let survivors: Vec<u8> = [0, 1]
        .into_iter()
        .filter(|&eps| roots_on_unit_circle(&complete_coeffs(e, eps)))
        .collect();
    match survivors.as_slice() {
        [eps] => Ok(*eps),
        [_, _] => Err(ZetaError::SignAmbiguous),
        _ => Err(ZetaError::BadCounts(
            "neither sign keeps all roots on the unit circle".into(),
        )),
    }
}

/// Floating check with tolerance 1e-8, run on the square-free part so that
/// repeated roots cannot smear the numerics.
fn roots_on_unit_circle(coeffs: &[BigRational]) -> bool {
    durand_kerner(&square_free_part(coeffs))
        .iter()
        .all(|r| (r.norm() - 1.0).abs() <= 1e-8)
}

fn square_free_part(coeffs: &[BigRational]) -> Vec<f64> {
    let f = poly_trim(coeffs.to_vec());
    let g = poly_gcd(f.clone(), poly_deriv(&f));
    let (q, r) = poly_divmod(&f, &g);
    debug_assert!(r.is_empty());
    let lead = q.last().unwrap().clone();
    q.iter().map(|c| (c / &lead).to_f64().unwrap()).collect()
}

fn poly_gcd(mut a: Vec<BigRational>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    while !b.is_empty() {
        let (_, r) = poly_divmod(&a, &b);
        a = b;
        b = r;
    }
    // Monic normalization keeps the gcd canonical.
    let lead = a.last().expect("gcd of nonzero polynomials").clone();
    a.iter().map(|c| c / &lead).collect()
}

/// Weierstrass simultaneous iteration; expects a monic square-free input.
fn durand_kerner(monic: &[f64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32 + 1)).collect();
    for _ in 0..600 {
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut val = Complex64::new(*monic.last().unwrap(), 0.0);
            for &c in monic[..n].iter().rev() {
                val = val * roots[i] + c;
            }
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den *= roots[i] - roots[j];
                }
            }
            let w = val / den;
            roots[i] -= w;
            worst = worst.max(w.norm());
        }
        if worst < 1e-12 {
            break;
        }
    }
    roots
}

/// The integral untwisted factor: Q(t) = sign·P(q^2 t), normalized so that
/// Q(0) = 1; `sign` is the functional-equation sign of P.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPolynomial {
    q: u32,
    sign: i8,
    coeffs: Vec<BigInt>,
}

impl QPolynomial {
    pub fn from_parts(q: u32, sign: i8, coeffs: Vec<BigInt>) -> Result<Self, ZetaError> {
        if sign != 1 && sign != -1 {
            return Err(ZetaError::BadCounts("sign must be ±1".into()));
        }
        if coeffs.len() != 23 {
            return Err(ZetaError::BadCounts(
                "expected 23 coefficients of degree ≤ 22".into(),
            ));
        }
        if !coeffs[0].is_one() {
            return Err(ZetaError::BadCounts("constant term must be 1".into()));
        }
        Ok(QPolynomial { q, sign, coeffs })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Coefficients Q_0..Q_22, lowest degree first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    /// Coefficients of the Weil polynomial this factor came from:
    /// c_i = sign·Q_i / q^{2i}.
    pub fn weil_coeffs(&self) -> Vec<BigRational> {
        let qq = BigInt::from(self.q).pow(2);
        let sigma = BigInt::from(self.sign);
        let mut scale = BigInt::one();
        self.coeffs
            .iter()
            .map(|c| {
                let v = BigRational::new(c * &sigma, scale.clone());
                scale *= &qq;
                v
            })
            .collect()
    }
}

/// Rescales the Weil polynomial back to unnormalized eigenvalues:
/// Q_i = sign·c_i·q^{2i}, which half-integrality makes integral.
pub fn q_polynomial(p: &WeilPolynomial) -> Result<QPolynomial, ZetaError> {
    let qq = BigInt::from(p.q()).pow(2);
    let sigma = BigInt::from(p.sign());
    let mut scale = BigInt::one();
    let mut out = Vec::with_capacity(23);
    for (i, c) in p.coeffs().iter().enumerate() {
        let v = c * BigRational::from_integer(&sigma * &scale);
        if !v.is_integer() {
            return Err(ZetaError::NonIntegral(format!(
                "coefficient {i} of the untwisted factor"
            )));
        }
        out.push(v.to_integer());
        scale *= &qq;
    }
    QPolynomial::from_parts(p.q(), p.sign(), out)
}

/// Number of F_2-lines on a cubic fourfold from its point counts over F_2
/// and F_4 and the number of F_2-rational singular points, via the
/// symmetric-square identity specialized to q = 2:
/// (N_1^2 - 2(1+2^4)N_1 + N_2)/8 + 4·sing.
pub fn galkin_shinder_lines(n1: u128, n2: u128, sing: u128) -> Result<u128, ZetaError> {
    let num = (n1 * n1 + n2) as i128 - (34 * n1) as i128;
    if num % 8 != 0 {
        return Err(ZetaError::NonIntegral(format!(
            "({n1}^2 - 34·{n1} + {n2})/8"
        )));
    }
    let lines = num / 8 + (4 * sing) as i128;
    if lines < 0 {
        return Err(ZetaError::BadCounts(format!(
            "negative line count from N_1 = {n1}, N_2 = {n2}"
        )));
    }
    Ok(lines as u128)
}
