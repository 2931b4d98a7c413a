//! Point counting for hypersurfaces, with a conic-fibration fast path for
//! cubic fourfolds over F_2.
//!
//! Projecting a cubic fourfold X away from a line l on it turns the blow-up
//! Bl_l(X) into a bundle of conics over P^3. Fibers over points away from a
//! discriminant quintic surface are smooth conics with q+1 points each, so
//! |Bl_l(X)(F_q)| requires one fiber classification per rational point of the
//! discriminant. Choosing l so that the discriminant has a rational singular
//! point lets us sweep the discriminant by the pencil of lines through that
//! point, solving one cubic per line instead of testing every point of P^3.

use std::sync::{Arc, OnceLock};

use ffla::{Field, GfMatrix};
use hypergeo::{
    eval_ext, fiber_points_from_values, lines_in_projective_space, partials, projective_points,
    restrict, restriction_masks, ConicData, LinearSubvariety,
};
use symspace::{act, Form, MonomialBasis};

use crate::polyarith::form_mul;
use crate::roots::RootTables;
use crate::ZetaError;

/// Ceiling on the number of points a direct enumeration may visit.
pub const DEFAULT_POINT_THRESHOLD: u128 = 1 << 27;

fn projective_size(q: u128, m: u32) -> u128 {
    (q.pow(m) - 1) / (q - 1)
}

/// |Z(f)(F_{q^k})| by streaming over all points of the ambient projective
/// space, with the default visit ceiling.
pub fn count_points_naive(f: &Form, k: u32) -> Result<u128, ZetaError> {
    count_points_naive_bounded(f, k, DEFAULT_POINT_THRESHOLD)
}

/// |Z(f)(F_{q^k})| by direct enumeration, refusing to visit more than
/// `threshold` points.
pub fn count_points_naive_bounded(f: &Form, k: u32, threshold: u128) -> Result<u128, ZetaError> {
    assert!(k >= 1);
    let base = f.field();
    let m = f.basis().m();
    let ext = Field::get(base.p(), base.e() * k)?;
    let points = projective_size(ext.q() as u128, m as u32);
    if points > threshold {
        return Err(ZetaError::ThresholdExceeded { points, threshold });
    }
    let mut n = 0u128;
    for pt in projective_points(&ext, m) {
        if eval_ext(f, &ext, &pt) == 0 {
            n += 1;
        }
    }
    Ok(n)
}

/// The 651 lines of P^5 over F_2 with parity masks for testing containment in
/// a cubic hypersurface: the line lies on Z(f) iff all four masks meet the
/// coefficient bits of f evenly.
fn cubic_line_table() -> &'static [(LinearSubvariety, [u64; 4])] {
    static TABLE: OnceLock<Vec<(LinearSubvariety, [u64; 4])>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let f2 = Field::get(2, 1).unwrap();
        let basis = MonomialBasis::new(6, 3);
        lines_in_projective_space(&f2, 6)
            .into_iter()
            .map(|l| {
                let m = restriction_masks(&basis, &f2, &l);
                assert_eq!(m.len(), 4, "restriction of a cubic to a line has 4 coefficients");
                (l, [m[0], m[1], m[2], m[3]])
            })
            .collect()
    })
}

fn lines_on_cubic(f: &Form) -> impl Iterator<Item = &'static LinearSubvariety> {
    let bits = f.bits().expect("forms over F_2 are bit packed")[0];
    cubic_line_table()
        .iter()
        .filter(move |(_, masks)| masks.iter().all(|&m| (m & bits).count_ones() % 2 == 0))
        .map(|(line, _)| line)
}

/// An invertible matrix whose last columns span the given subspace, so that
/// substituting x = M*y moves it to the locus where the leading coordinates
/// vanish. The leading columns are standard basis vectors.
fn line_frame(field: &Arc<Field>, line: &LinearSubvariety) -> GfMatrix {
    let m = line.ambient() + 1;
    let mut spanning: Vec<Vec<u16>> = line.rows().to_vec();
    let mut completion: Vec<Vec<u16>> = Vec::new();
    for i in 0..m {
        let mut e = vec![0u16; m];
        e[i] = 1;
        let mut trial = spanning.clone();
        trial.push(e.clone());
        let g = GfMatrix::from_fn(Arc::clone(field), trial.len(), m, |r, c| trial[r][c]);
        if g.rank() == trial.len() {
            spanning.push(e.clone());
            completion.push(e);
        }
    }
    assert_eq!(completion.len(), m - line.rows().len());
    let tail = line.rows();
    let head = completion.len();
    GfMatrix::from_fn(Arc::clone(field), m, m, |r, c| {
        if c < head {
            completion[c][r]
        } else {
            tail[c - head][r]
        }
    })
}

/// The projection of a cubic fourfold away from a line contained in it.
pub struct ConicFibration {
    line: LinearSubvariety,
    frame: GfMatrix,
    conic: ConicData,
    delta: Form,
    base_point: Option<Vec<u16>>,
    cone: bool,
}

impl ConicFibration {
    /// Projects X = Z(f) away from a line on it. Takes a cubic form in six
    /// variables over F_2; panics if the line does not lie on X.
    pub fn new(f: &Form, line: &LinearSubvariety) -> Self {
        let field = f.field();
        assert_eq!(
            (f.basis().m(), f.basis().d(), field.q()),
            (6, 3, 2),
            "conic projection handles cubic fourfolds over F_2"
        );
        let frame = line_frame(field, line);
        let g = act(&frame, f).expect("coordinate frames are invertible");
        let b1 = MonomialBasis::new(4, 1);
        let b2 = MonomialBasis::new(4, 2);
        let b3 = MonomialBasis::new(4, 3);
        let mut a = Form::zero(Arc::clone(&b1), Arc::clone(field));
        let mut b = Form::zero(Arc::clone(&b1), Arc::clone(field));
        let mut c = Form::zero(Arc::clone(&b1), Arc::clone(field));
        let mut d = Form::zero(Arc::clone(&b2), Arc::clone(field));
        let mut e = Form::zero(Arc::clone(&b2), Arc::clone(field));
        let mut ff = Form::zero(Arc::clone(&b3), Arc::clone(field));
        // Sort the monomials of f(M*y) by their degree in the two line
        // coordinates y4, y5: f = A*y4^2 + B*y4*y5 + C*y5^2 + D*y4 + E*y5 + F.
        for (i, cf) in g.support() {
            let exp = g.basis().exponent(i).to_vec();
            let head = &exp[..4];
            let target = match (exp[4], exp[5]) {
                (2, 0) => &mut a,
                (1, 1) => &mut b,
                (0, 2) => &mut c,
                (1, 0) => &mut d,
                (0, 1) => &mut e,
                (0, 0) => &mut ff,
                _ => panic!("the chosen line does not lie on the hypersurface"),
            };
            let idx = target.basis().index_of(head).unwrap();
            let cur = target.coeff(idx);
            target.set_coeff(idx, field.add(cur, cf));
        }
        let cone = a.is_zero() && b.is_zero() && c.is_zero() && d.is_zero() && e.is_zero();
        let delta = form_mul(&a, &form_mul(&e, &e))
            .add(&form_mul(&form_mul(&b, &b), &ff))
            .add(&form_mul(&c, &form_mul(&d, &d)))
            .add(&form_mul(&form_mul(&b, &d), &e));
        let base_point = if cone {
            None
        } else {
            let dpart = partials(&delta);
            projective_points(field, 4)
                .find(|p| delta.eval(p) == 0 && dpart.iter().all(|g| g.eval(p) == 0))
        };
        let conic = ConicData::new(a, b, c, d, e, ff);
        ConicFibration {
            line: line.clone(),
            frame,
            conic,
            delta,
            base_point,
            cone,
        }
    }

    pub fn line(&self) -> &LinearSubvariety {
        &self.line
    }

    /// Substituting x = frame*y moves the line to Z(y0..y3).
    pub fn frame(&self) -> &GfMatrix {
        &self.frame
    }

    pub fn conic(&self) -> &ConicData {
        &self.conic
    }

    /// Discriminant quintic A*E^2 + B^2*F + C*D^2 + B*D*E on the P^3 base;
    /// fibers over its complement are smooth conics.
    pub fn delta(&self) -> &Form {
        &self.delta
    }

    /// A rational singular point of the discriminant surface, when one exists.
    pub fn base_point(&self) -> Option<&[u16]> {
        self.base_point.as_deref()
    }

    /// A..E all vanish: X is the cone with vertex the line over Z(F) in P^3.
    pub fn is_cone(&self) -> bool {
        self.cone
    }
}

fn linear_coeffs(l: &Form) -> [u16; 4] {
    let basis = l.basis();
    let mut out = [0u16; 4];
    for (j, slot) in out.iter_mut().enumerate() {
        let mut exp = [0u8; 4];
        exp[j] = 1;
        *slot = l.coeff(basis.index_of(&exp).unwrap());
    }
    out
}

/// The fiber of the projection over the common zero p of independent A, B, C
/// contains a residual line l' besides the center: restricted to the plane
/// spanned by the center and p, f degenerates to (center)^2 * l'. The
/// discriminant of l' then picks up a rational singular point, because the
/// fibration of l' contains the original line as a rank-1 conic.
fn construct_from(f: &Form, fib: &ConicFibration) -> Option<ConicFibration> {
    let field = f.field();
    let rows: Vec<[u16; 4]> = [&fib.conic.a, &fib.conic.b, &fib.conic.c]
        .iter()
        .map(|l| linear_coeffs(l))
        .collect();
    let abc = GfMatrix::from_fn(Arc::clone(field), 3, 4, |r, c| rows[r][c]);
    if abc.rank() != 3 {
        return None;
    }
    let ker = abc.kernel();
    let p: Vec<u16> = ker.row(0).to_vec();
    let dp = fib.conic.d.eval(&p);
    let ep = fib.conic.e.eval(&p);
    let fp = fib.conic.f.eval(&p);
    if dp == 0 && ep == 0 {
        // The fiber over p is a plane or empty; no residual line here.
        return None;
    }
    // Solve D(p)*u + E(p)*v + F(p)*s = 0; the solutions (s, u, v) parametrize
    // l' inside the span of (p, 0, 0), e4, e5 in the frame coordinates.
    let eqn = GfMatrix::from_fn(Arc::clone(field), 1, 3, |_, c| [fp, dp, ep][c]);
    let sol = eqn.kernel();
    assert_eq!(sol.rows(), 2);
    let mut basis_vectors = Vec::new();
    for i in 0..2 {
        let (s, u, v) = (sol.get(i, 0), sol.get(i, 1), sol.get(i, 2));
        let mut y = vec![0u16; 6];
        for (j, yj) in y.iter_mut().take(4).enumerate() {
            *yj = field.mul(s, p[j]);
        }
        y[4] = u;
        y[5] = v;
        basis_vectors.push(fib.frame.apply(&y));
    }
    let lprime = LinearSubvariety::span(field, &basis_vectors)?;
    if !restrict(f, lprime.rows()).is_zero() {
        return None;
    }
    let fibp = ConicFibration::new(f, &lprime);
    if fibp.cone || fibp.base_point.is_some() {
        Some(fibp)
    } else {
        None
    }
}

/// Fibration over a line chosen so that counting is exact and fast: a vertex
/// line of a cone if the first line works out that way, else a line whose
/// discriminant has a rational singular point (every smooth cubic fourfold
/// over F_2 admits one). Falls back to the first line on X when nothing
/// qualifies; the counting layer then enumerates the discriminant directly.
fn good_fibration(f: &Form) -> Result<ConicFibration, ZetaError> {
    let mut lines = lines_on_cubic(f);
    let Some(first) = lines.next() else {
        return Err(ZetaError::NoLine);
    };
    let fib0 = ConicFibration::new(f, first);
    if fib0.cone || fib0.base_point.is_some() {
        return Ok(fib0);
    }
    if let Some(fib) = construct_from(f, &fib0) {
        return Ok(fib);
    }
    for line in lines {
        let fib = ConicFibration::new(f, line);
        if fib.cone || fib.base_point.is_some() {
            return Ok(fib);
        }
    }
    Ok(fib0)
}

/// The line `count_points_conic` projects from.
pub fn choose_good_line(f: &Form) -> Result<LinearSubvariety, ZetaError> {
    good_fibration(f).map(|fib| fib.line)
}

/// |X(F_{2^k})| for a cubic fourfold X = Z(f) over F_2, via projection from a
/// line of X. Exact for every input; cost is roughly 4^k fiber
/// classifications when the discriminant has a rational singular point.
pub fn count_points_conic(f: &Form, k: u32) -> Result<u128, ZetaError> {
    let fib = good_fibration(f)?;
    count_via_fibration(f, &fib, k, false)
}

pub(crate) fn count_via_fibration(
    f: &Form,
    fib: &ConicFibration,
    k: u32,
    force_direct: bool,
) -> Result<u128, ZetaError> {
    assert!(k >= 1);
    let ext = Field::get(2, k)?;
    let q = ext.q() as u128;
    if fib.cone {
        // Every point of X off the vertex line lies on a unique ruling line
        // joining the vertex to the base surface Y = Z(F).
        let y = count_points_naive(&fib.conic.f, k)?;
        return Ok(y * q * q + q + 1);
    }
    let plane3 = 1 + q + q * q + q * q * q;
    let excess: i128 = if !force_direct && fib.base_point.is_some() {
        sweep_discriminant(fib, &ext)?
    } else {
        if fib.base_point.is_none() {
            eprintln!(
                "zetakit: no line with a rational singular discriminant point; \
                 enumerating the discriminant of P^3(F_{}) directly",
                ext.q()
            );
        }
        direct_discriminant(fib, &ext, DEFAULT_POINT_THRESHOLD)?
    };
    let bl = ((q + 1) * plane3) as i128 + excess;
    // Undo the blow-up. The exceptional divisor is the projectivized normal
    // bundle of the line; each rational singular point of X on the line
    // inflates it by a further q^3.
    let s = singular_on_line(f, &fib.line, &ext) as u128;
    let e_count = (1 + q) * (1 + q + q * q) + q * q * q * s;
    let x = bl - e_count as i128 + (q + 1) as i128;
    Ok(u128::try_from(x).expect("point counts are nonnegative"))
}

fn singular_on_line(f: &Form, line: &LinearSubvariety, ext: &Arc<Field>) -> u64 {
    let base = f.field();
    let dfs = partials(f);
    line.points(base, ext)
        .into_iter()
        .filter(|pt| dfs.iter().all(|g| eval_ext(g, ext, pt) == 0))
        .count() as u64
}

/// Sum of fiber(y) - (q+1) over rational points y of the discriminant
/// surface, enumerated point by point. Used when no projection center is
/// available on the discriminant.
fn direct_discriminant(
    fib: &ConicFibration,
    ext: &Arc<Field>,
    threshold: u128,
) -> Result<i128, ZetaError> {
    let points = projective_size(ext.q() as u128, 4);
    if points > threshold {
        return Err(ZetaError::ThresholdExceeded { points, threshold });
    }
    let qp1 = ext.q() as i128 + 1;
    let mut excess = 0i128;
    for y in projective_points(ext, 4) {
        if eval_ext(&fib.delta, ext, &y) == 0 {
            let vals = fib.conic.values_at(ext, &y);
            excess += fiber_points_from_values(ext, &vals) as i128 - qp1;
        }
    }
    Ok(excess)
}

/// Splits Q(a*p + b*v) into parts homogeneous in v: Q(a*p + b*v) =
/// sum_i a^(5-i) b^i R_i(v). Since p is a singular point of Z(Q), the parts
/// R_0 and R_1 vanish, which is checked, as is R_5 = Q.
fn polarize_quintic(delta: &Form, p: &[u16]) -> [Form; 4] {
    let field = delta.field();
    let basis = delta.basis();
    assert_eq!((basis.m(), basis.d(), field.q()), (4, 5, 2));
    let mut r0 = 0u16;
    let mut parts: Vec<Form> = (1..=5)
        .map(|deg| Form::zero(MonomialBasis::new(4, deg), Arc::clone(field)))
        .collect();
    for (idx, _) in delta.support() {
        let alpha = basis.exponent(idx).to_vec();
        // Each variable contributes (a*p_j + b*v_j)^alpha_j; the surviving
        // v-exponents beta_j are alpha_j where p_j = 0, and otherwise the
        // submasks of alpha_j (the binomial coefficient is odd by Lucas).
        let mut betas: Vec<Vec<u8>> = vec![Vec::new()];
        for (j, &aj) in alpha.iter().enumerate() {
            let choices: Vec<u8> = if p[j] == 0 {
                vec![aj]
            } else {
                (0..=aj).filter(|&bj| bj & aj == bj).collect()
            };
            betas = betas
                .into_iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |&bj| {
                        let mut next = prefix.clone();
                        next.push(bj);
                        next
                    })
                })
                .collect();
        }
        for beta in betas {
            let deg: usize = beta.iter().map(|&b| b as usize).sum();
            if deg == 0 {
                r0 ^= 1;
            } else {
                let part = &mut parts[deg - 1];
                let i = part.basis().index_of(&beta).unwrap();
                let cur = part.coeff(i);
                part.set_coeff(i, field.add(cur, 1));
            }
        }
    }
    assert_eq!(r0, 0, "projection center must lie on the discriminant");
    assert!(parts[0].is_zero(), "projection center must be singular");
    assert_eq!(
        parts[4].bits().unwrap(),
        delta.bits().unwrap(),
        "the degree-5 part is the quintic itself"
    );
    let r5 = parts.pop().unwrap();
    let r4 = parts.pop().unwrap();
    let r3 = parts.pop().unwrap();
    let r2 = parts.pop().unwrap();
    [r2, r3, r4, r5]
}

/// Sum of fiber(y) - (q+1) over rational points y of the discriminant,
/// swept by the pencil of lines through its rational singular point p. On
/// the line {t*p + v}, the quintic restricts to t^3*R2(v) + t^2*R3(v) +
/// t*R4(v) + R5(v) (the a^5 and a^4 b parts vanish at a double point), so
/// each line costs four form evaluations and one cubic root extraction.
fn sweep_discriminant(fib: &ConicFibration, ext: &Arc<Field>) -> Result<i128, ZetaError> {
    let p = fib.base_point.as_ref().unwrap();
    let q = ext.q();
    let lines = (q as u128) * (q as u128) + (q as u128) + 1;
    if lines > DEFAULT_POINT_THRESHOLD {
        return Err(ZetaError::ThresholdExceeded {
            points: lines,
            threshold: DEFAULT_POINT_THRESHOLD,
        });
    }
    let rs = polarize_quintic(&fib.delta, p);
    let tables = RootTables::get(ext);
    let qp1 = q as i128 + 1;
    let j0 = (0..4).find(|&j| p[j] != 0).unwrap();
    let free: Vec<usize> = (0..4).filter(|&j| j != j0).collect();

    // Restricted to the plane v[j0] = 0, each R_i is homogeneous of degree i
    // in the three free coordinates. Coefficient grids per chart of that P^2:
    // ca[r][e2][e3] after substituting z1 = 1, cb[r][e3] after z1 = 0, z2 = 1,
    // cc[r] at (0, 0, 1). Coefficients stay 0/1, so they embed unchanged.
    let mut ca = [[[0u16; 6]; 6]; 4];
    let mut cb = [[0u16; 6]; 4];
    let mut cc = [0u16; 4];
    let degs = [2usize, 3, 4, 5];
    for (r, form) in rs.iter().enumerate() {
        let basis = form.basis();
        for (i, _) in form.support() {
            let exp = basis.exponent(i);
            if exp[j0] != 0 {
                continue;
            }
            let (e1, e2, e3) = (
                exp[free[0]] as usize,
                exp[free[1]] as usize,
                exp[free[2]] as usize,
            );
            ca[r][e2][e3] ^= 1;
            if e1 == 0 {
                cb[r][e3] ^= 1;
                if e2 == 0 {
                    cc[r] ^= 1;
                }
            }
        }
    }

    let mut excess = 0i128;
    let pj: [u16; 4] = [p[0], p[1], p[2], p[3]];
    let mut fiber_excess = |y: &[u16; 4]| {
        let vals = fib.conic.values_at(ext, y);
        excess += fiber_points_from_values(ext, &vals) as i128 - qp1;
    };
    // The projection center is a rational point of the discriminant.
    fiber_excess(&pj);

    let handle_line = |v: [u16; 4], h: [u16; 4], fiber_excess: &mut dyn FnMut(&[u16; 4])| {
        // h holds the restricted quintic's cubic factor, constant term first.
        let point = |t: u16| {
            let mut y = v;
            for (j, yj) in y.iter_mut().enumerate() {
                if pj[j] != 0 {
                    *yj = ext.add(*yj, t);
                }
            }
            y
        };
        if h == [0; 4] {
            // The whole line lies on the discriminant.
            for t in 0..q as u16 {
                fiber_excess(&point(t));
            }
        } else {
            let (roots, n) = tables.roots_le3(h);
            for &t in &roots[..n] {
                fiber_excess(&point(t));
            }
        }
    };

    // Chart (1, x, y) of the plane v[j0] = 0.
    for x in 0..q as u16 {
        // Collapse the middle coordinate: axy[r][e3] = sum_e2 ca[r][e2][e3] x^e2.
        let mut axy = [[0u16; 6]; 4];
        for r in 0..4 {
            for e3 in 0..=degs[r] {
                let mut acc = 0u16;
                for e2 in (0..=degs[r] - e3).rev() {
                    acc = ext.add(ext.mul(acc, x), ca[r][e2][e3]);
                }
                axy[r][e3] = acc;
            }
        }
        for y in 0..q as u16 {
            let mut h = [0u16; 4];
            for r in 0..4 {
                let mut acc = 0u16;
                for e3 in (0..=degs[r]).rev() {
                    acc = ext.add(ext.mul(acc, y), axy[r][e3]);
                }
                h[r] = acc;
            }
            let mut v = [0u16; 4];
            v[free[0]] = 1;
            v[free[1]] = x;
            v[free[2]] = y;
            handle_line(v, [h[3], h[2], h[1], h[0]], &mut fiber_excess);
        }
    }
    // Chart (0, 1, y).
    for y in 0..q as u16 {
        let mut h = [0u16; 4];
        for r in 0..4 {
            let mut acc = 0u16;
            for e3 in (0..=degs[r]).rev() {
                acc = ext.add(ext.mul(acc, y), cb[r][e3]);
            }
            h[r] = acc;
        }
        let mut v = [0u16; 4];
        v[free[1]] = 1;
        v[free[2]] = y;
        handle_line(v, [h[3], h[2], h[1], h[0]], &mut fiber_excess);
    }
    // Chart (0, 0, 1).
    let mut v = [0u16; 4];
    v[free[2]] = 1;
    handle_line(v, [cc[3], cc[2], cc[1], cc[0]], &mut fiber_excess);

    Ok(excess)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cubic_basis() -> (Arc<MonomialBasis>, Arc<Field>) {
        (MonomialBasis::new(6, 3), Field::get(2, 1).unwrap())
    }

    fn random_cubic(rng: &mut impl Rng, basis: &Arc<MonomialBasis>, field: &Arc<Field>) -> Form {
        let word = rng.gen::<u64>() & ((1 << basis.size()) - 1);
        Form::from_u64(Arc::clone(basis), Arc::clone(field), word)
    }

    #[test]
    fn naive_counts_match_known_hypersurfaces() {
        let (basis, f2) = cubic_basis();
        let fermat = Form::parse(&basis, &f2, "x0^3+x1^3+x2^3+x3^3+x4^3+x5^3").unwrap();
        assert_eq!(count_points_naive(&fermat, 1).unwrap(), 31);
        let cusp = Form::parse(&basis, &f2, "x0^3").unwrap();
        assert_eq!(count_points_naive(&cusp, 1).unwrap(), 31);
        // Z(0) is all of P^5.
        let zero = Form::zero(Arc::clone(&basis), Arc::clone(&f2));
        assert_eq!(count_points_naive(&zero, 1).unwrap(), 63);
        let huge = count_points_naive(&fermat, 11);
        assert!(matches!(huge, Err(ZetaError::ThresholdExceeded { .. })));
    }

    #[test]
    fn line_table_agrees_with_restriction_filter() {
        let (basis, f2) = cubic_basis();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = random_cubic(&mut rng, &basis, &f2);
            let fast: Vec<_> = lines_on_cubic(&f).cloned().collect();
            let slow = hypergeo::lines_on(&f);
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn frame_moves_line_to_coordinate_subspace() {
        let (_, f2) = cubic_basis();
        for line in lines_in_projective_space(&f2, 6).iter().step_by(97) {
            let m = line_frame(&f2, line);
            for i in 0..2 {
                let mut y = vec![0u16; 6];
                y[4 + i] = 1;
                let x = m.apply(&y);
                assert!(line.contains_point(&f2, &x));
            }
        }
    }

    #[test]
    fn conic_count_agrees_with_naive_enumeration() {
        let (basis, f2) = cubic_basis();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut singular = 0;
        for _ in 0..60 {
            let f = random_cubic(&mut rng, &basis, &f2);
            if f.is_zero() {
                continue;
            }
            if !hypergeo::is_smooth(&f) {
                singular += 1;
            }
            for k in 1..=2 {
                assert_eq!(
                    count_points_conic(&f, k).unwrap(),
                    count_points_naive(&f, k).unwrap(),
                    "form {} at k={k}",
                    f.to_coeff_string()
                );
            }
        }
        assert!(singular >= 20, "sample should exercise singular inputs");
    }

    #[test]
    fn sweep_and_direct_discriminant_agree() {
        let (basis, f2) = cubic_basis();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let mut swept = 0;
        for _ in 0..40 {
            let f = random_cubic(&mut rng, &basis, &f2);
            if f.is_zero() {
                continue;
            }
            let fib = good_fibration(&f).unwrap();
            if fib.is_cone() || fib.base_point().is_none() {
                continue;
            }
            swept += 1;
            for k in 1..=2 {
                assert_eq!(
                    count_via_fibration(&f, &fib, k, false).unwrap(),
                    count_via_fibration(&f, &fib, k, true).unwrap()
                );
            }
        }
        assert!(swept >= 30);
    }

    #[test]
    fn cone_shortcut_matches_direct_count() {
        let (basis, f2) = cubic_basis();
        // A cubic in the first four variables only: the cone over a cubic
        // surface with vertex line Z(x0..x3).
        let f = Form::parse(&basis, &f2, "x0^3 + x1^3 + x2^3 + x3^3 + x0*x1*x2").unwrap();
        let surface = {
            let b4 = MonomialBasis::new(4, 3);
            Form::parse(&b4, &f2, "x0^3 + x1^3 + x2^3 + x3^3 + x0*x1*x2").unwrap()
        };
        for k in 1..=2u32 {
            let q = 1u128 << k;
            let y = count_points_naive(&surface, k).unwrap();
            let x = count_points_conic(&f, k).unwrap();
            assert_eq!(x, y * q * q + q + 1);
            assert_eq!(x, count_points_naive(&f, k).unwrap());
        }
    }

    #[test]
    fn zero_form_counts_whole_space() {
        let (basis, f2) = cubic_basis();
        let zero = Form::zero(Arc::clone(&basis), Arc::clone(&f2));
        assert_eq!(count_points_conic(&zero, 1).unwrap(), 63);
        assert_eq!(count_points_conic(&zero, 2).unwrap(), 1365);
    }

    #[test]
    fn good_line_lies_on_the_hypersurface() {
        let (basis, f2) = cubic_basis();
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..25 {
            let f = random_cubic(&mut rng, &basis, &f2);
            if f.is_zero() {
                continue;
            }
            let line = choose_good_line(&f).unwrap();
            assert!(restrict(&f, line.rows()).is_zero());
        }
    }
}
