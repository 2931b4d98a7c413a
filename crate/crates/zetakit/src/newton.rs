//! Newton polygons of the untwisted factor and the height invariant.
//!
//! The p-adic valuations of the coefficients of Q determine a lower convex
//! hull from (0, 0) to (22, 44) whose slope multiset is symmetric about 2.
//! For cubic fourfolds the polygon is determined by a single integer: the
//! slopes come in the profile (2-1/h) x h, 2 x (22-2h), (2+1/h) x h, with
//! the supersingular polygon (all slopes 2) as the h = infinity limit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::weil::QPolynomial;
use crate::ZetaError;

/// Slope runs of the Newton polygon, ascending, multiplicities summing to
/// 22, and the height h; None encodes h = infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonData {
    slopes: Vec<(BigRational, u32)>,
    height: Option<u32>,
}

impl NewtonData {
    /// (slope, multiplicity) runs with strictly increasing slopes.
    pub fn slopes(&self) -> &[(BigRational, u32)] {
        &self.slopes
    }

    /// None encodes h = infinity.
    pub fn height(&self) -> Option<u32> {
        self.height
    }

    pub fn is_ordinary(&self) -> bool {
        self.height == Some(1)
    }

    pub fn is_supersingular(&self) -> bool {
        self.height.is_none()
    }
}

/// Valuations are taken at the base prime of q and normalized so v(q) = 1.
pub fn newton_height(q: &QPolynomial) -> Result<NewtonData, ZetaError> {
    let (p, e) = base_prime(q.q());
    let points: Vec<(i64, i64)> = q
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, valuation(c, p)))
        .collect();

    // Lower convex hull by monotone chain; collinear middle points merge.
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pt in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }

    let slopes: Vec<(BigRational, u32)> = hull
        .windows(2)
        .map(|w| {
            let run = w[1].0 - w[0].0;
            let slope = BigRational::new((w[1].1 - w[0].1).into(), (e * run).into());
            (slope, run as u32)
        })
        .collect();
    let total: u32 = slopes.iter().map(|(_, m)| m).sum();
    assert_eq!(total, 22, "polygon must span degrees 0..22");

    let four = BigRational::from_integer(4.into());
    let symmetric = (0..slopes.len()).all(|i| {
        let (s, m) = &slopes[i];
        let (s2, m2) = &slopes[slopes.len() - 1 - i];
        m == m2 && s + s2 == four
    });
    if !symmetric {
        return Err(ZetaError::BadCounts(
            "Newton slopes are not symmetric about 2".into(),
        ));
    }

    let two = BigRational::from_integer(2.into());
    let least = slopes[0].0.clone();
    let height = if least == two {
        None
    } else {
        let h = (&two - &least).recip();
        if !h.is_integer() {
            return Err(ZetaError::BadCounts(format!(
                "least slope {least} does not give an integer height"
            )));
        }
        let h = u32::try_from(h.to_integer()).ok().filter(|h| (1..=10).contains(h));
        let Some(h) = h else {
            return Err(ZetaError::BadCounts(format!(
                "least slope {least} gives a height outside 1..10"
            )));
        };
        let hr = BigRational::new(1.into(), (h as i64).into());
        let profile = vec![
            (&two - &hr, h),
            (two.clone(), 22 - 2 * h),
            (&two + &hr, h),
        ];
        if slopes != profile {
            return Err(ZetaError::BadCounts(
                "slope multiset is not the three-run profile of a height".into(),
            ));
        }
        Some(h)
    };

    Ok(NewtonData { slopes, height })
}

fn base_prime(q: u32) -> (u32, i64) {
    assert!(q >= 2);
    let p = (2..).find(|d| q % d == 0).unwrap();
    let mut e = 0i64;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    assert_eq!(rest, 1, "field size must be a prime power");
    (p, e)
}

fn valuation(c: &BigInt, p: u32) -> i64 {
    let p = BigInt::from(p);
    let mut c = c.clone();
    let mut v = 0;
    loop {
        let (d, r) = c.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        c = d;
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    /// Constant term 1 plus prescribed powers of two: (index, v_2).
    fn q_with(vals: &[(usize, u32)]) -> QPolynomial {
        let mut coeffs = vec![BigInt::zero(); 23];
        coeffs[0] = BigInt::one();
        for &(i, v) in vals {
            coeffs[i] = BigInt::from(2).pow(v);
        }
        QPolynomial::from_parts(2, 1, coeffs).unwrap()
    }

    #[test]
    fn all_slopes_two_is_supersingular() {
        // (1-4t)^22 has v_2(Q_i) = 2i exactly.
        let mut coeffs = vec![BigInt::one()];
        for _ in 0..22 {
            let mut next = vec![BigInt::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i] += c;
                next[i + 1] -= c * BigInt::from(4);
            }
            coeffs = next;
        }
        let q = QPolynomial::from_parts(2, 1, coeffs).unwrap();
        let nd = newton_height(&q).unwrap();
        assert_eq!(nd.slopes(), [(BigRational::from_integer(2.into()), 22)]);
        assert_eq!(nd.height(), None);
        assert!(nd.is_supersingular());
        assert!(!nd.is_ordinary());
    }

    #[test]
    fn ordinary_profile() {
        let mut vals: Vec<(usize, u32)> = (2..=20).map(|i| (i, 2 * i as u32)).collect();
        vals.push((1, 1));
        vals.push((21, 41));
        vals.push((22, 44));
        let nd = newton_height(&q_with(&vals)).unwrap();
        assert_eq!(nd.height(), Some(1));
        assert!(nd.is_ordinary());
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(nd.slopes(), [(r(1, 1), 1), (r(2, 1), 20), (r(3, 1), 1)]);
    }

    #[test]
    fn height_five_profile() {
        let nd = newton_height(&q_with(&[(5, 9), (17, 33), (22, 44)])).unwrap();
        assert_eq!(nd.height(), Some(5));
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(nd.slopes(), [(r(9, 5), 5), (r(2, 1), 12), (r(11, 5), 5)]);
    }

    #[test]
    fn asymmetric_polygon_is_rejected() {
        let err = newton_height(&q_with(&[(1, 1), (22, 44)]));
        assert!(matches!(err, Err(ZetaError::BadCounts(_))));
    }

    #[test]
    fn fractional_height_is_rejected() {
        // Symmetric slopes 8/5, 2, 12/5 would give h = 5/2.
        let err = newton_height(&q_with(&[(5, 8), (17, 32), (22, 44)]));
        assert!(matches!(err, Err(ZetaError::BadCounts(_))));
    }

    #[test]
    fn extra_slope_runs_are_rejected() {
        // Symmetric five-run polygon with least slope 3/2: not a height
        // profile even though 1/(2 - 3/2) = 2 is an integer.
        let err = newton_height(&q_with(&[(2, 3), (7, 12), (15, 28), (20, 39), (22, 44)]));
        assert!(matches!(err, Err(ZetaError::BadCounts(_))));
    }
}
