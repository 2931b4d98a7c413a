//! Plane-conic fibers in characteristic 2: the six coefficient forms of a
//! conic bundle over P^3 and the point-count classification of each fiber.

use crate::calculus::eval_ext;
use ffla::Field;
use std::sync::Arc;
use symspace::Form;

/// Coefficients of a conic bundle: the fiber over y in P^3 is the plane
/// conic A y4^2 + B y4 y5 + C y5^2 + D y4 + E y5 + F = 0, homogenized with a
/// third coordinate t as
///   A u^2 + B uv + C v^2 + D ut + E vt + F t^2
/// where A,B,C are linear, D,E quadratic, and F cubic in y.
#[derive(Clone, Debug)]
pub struct ConicData {
    pub a: Form,
    pub b: Form,
    pub c: Form,
    pub d: Form,
    pub e: Form,
    pub f: Form,
}

impl ConicData {
    pub fn new(a: Form, b: Form, c: Form, d: Form, e: Form, f: Form) -> Self {
        for (g, deg) in [(&a, 1), (&b, 1), (&c, 1), (&d, 2), (&e, 2), (&f, 3)] {
            assert_eq!(g.basis().m(), 4, "coefficient forms live on P^3");
            assert_eq!(g.basis().d(), deg, "degrees must be 1,1,1,2,2,3");
        }
        ConicData { a, b, c, d, e, f }
    }

    /// The six coefficients evaluated at a point of P^3 with coordinates in
    /// an extension field.
    pub fn values_at(&self, ext: &Arc<Field>, y: &[u16]) -> [u16; 6] {
        [
            eval_ext(&self.a, ext, y),
            eval_ext(&self.b, ext, y),
            eval_ext(&self.c, ext, y),
            eval_ext(&self.d, ext, y),
            eval_ext(&self.e, ext, y),
            eval_ext(&self.f, ext, y),
        ]
    }
}

/// Number of K-points of the plane conic
///   a u^2 + b uv + c v^2 + d ut + e vt + f t^2 = 0
/// over a field K of characteristic 2, by classification:
///   - zero form: the whole plane, q^2+q+1;
///   - no cross terms (b = d = e = 0): a perfect square, a double line, q+1;
///   - cross terms and nonzero discriminant a e^2 + b^2 f + c d^2 + b d e:
///     smooth conic, q+1;
///   - otherwise two distinct lines through the radical point (e, d, b):
///     2q+1 when they split over K, 1 when conjugate.
pub fn fiber_points_from_values(field: &Arc<Field>, vals: &[u16; 6]) -> u64 {
    assert_eq!(field.p(), 2, "classification table assumes characteristic 2");
    let q = field.q() as u64;
    let &[a, b, c, d, e, f] = vals;
    if vals.iter().all(|&v| v == 0) {
        return q * q + q + 1;
    }
    if b == 0 && d == 0 && e == 0 {
        return q + 1;
    }
    let disc = {
        let t1 = field.mul(a, field.sqr(e));
        let t2 = field.mul(field.sqr(b), f);
        let t3 = field.mul(c, field.sqr(d));
        let t4 = field.mul(field.mul(b, d), e);
        field.add(field.add(t1, t2), field.add(t3, t4))
    };
    if disc != 0 {
        return q + 1;
    }
    // Two distinct lines meeting at z = (e, d, b). Restrict to the
    // coordinate line missing a coordinate where z is nonzero; the cross
    // coefficient of the restriction is that entry of z, hence nonzero.
    let z = [e, d, b];
    let i = (0..3).find(|&i| z[i] != 0).unwrap();
    let diag = [a, c, f];
    let (j, k) = match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let (alpha, beta, gamma) = (diag[j], z[i], diag[k]);
    let split = if alpha == 0 || gamma == 0 {
        true
    } else {
        // alpha s^2 + beta s + gamma solvable iff Tr(alpha gamma / beta^2) = 0.
        let w = field.div(field.mul(alpha, gamma), field.sqr(beta));
        field.trace(w) == 0
    };
    if split {
        2 * q + 1
    } else {
        1
    }
}

/// Fiber point count of the conic bundle over y in P^3(K).
pub fn conic_fiber_points(conic: &ConicData, ext: &Arc<Field>, y: &[u16]) -> u64 {
    fiber_points_from_values(ext, &conic.values_at(ext, y))
}

/// Total K-points of the conic bundle: the sum of all fiber counts over
/// P^3(K).
pub fn conic_points(conic: &ConicData, ext: &Arc<Field>) -> u64 {
    crate::subvariety::projective_points(ext, 4)
        .map(|y| conic_fiber_points(conic, ext, &y))
        .sum()
}
