//! Roots of univariate polynomials of degree at most 3 over F_{2^e}.
//!
//! The conic-fibration point count solves one cubic per line of an ambient
//! P^3, several million per extension field, so root extraction must cost a
//! handful of table lookups. Per field we precompute square roots (Frobenius
//! is a bijection in characteristic 2), cube roots, and the solution sets of
//! s^3 + s = c. A depressed cubic u^3 + a*u + b lands in one of those tables:
//! with L = sqrt(a) the substitution u = L*s turns it into s^3 + s = b/(L*a).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use ffla::Field;

/// Lookup tables for one field F_{2^e}, built once and shared.
pub struct RootTables {
    field: Arc<Field>,
    sqrt: Vec<u16>,
    cbrt_idx: Vec<u32>,
    cbrt_sol: Vec<u16>,
    art_idx: Vec<u32>,
    art_sol: Vec<u16>,
}

fn bucketize(q: usize, pairs: impl Iterator<Item = (u16, u16)> + Clone) -> (Vec<u32>, Vec<u16>) {
    let mut counts = vec![0u32; q + 1];
    for (key, _) in pairs.clone() {
        counts[key as usize + 1] += 1;
    }
    for i in 0..q {
        counts[i + 1] += counts[i];
    }
    let mut sol = vec![0u16; q];
    let mut cursor = counts.clone();
    for (key, val) in pairs {
        sol[cursor[key as usize] as usize] = val;
        cursor[key as usize] += 1;
    }
    (counts, sol)
}

impl RootTables {
    /// The shared tables for a binary field. Built on first use.
    pub fn get(field: &Arc<Field>) -> Arc<RootTables> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<RootTables>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().unwrap();
        Arc::clone(
            map.entry(field.q())
                .or_insert_with(|| Arc::new(RootTables::build(field))),
        )
    }

    fn build(field: &Arc<Field>) -> RootTables {
        assert_eq!(field.p(), 2, "root tables are specific to characteristic 2");
        let q = field.q() as usize;
        let mut sqrt = vec![0u16; q];
        for s in 0..q as u16 {
            sqrt[field.sqr(s) as usize] = s;
        }
        let cubes = (0..q as u16).map(|s| (field.mul(field.sqr(s), s), s));
        let (cbrt_idx, cbrt_sol) = bucketize(q, cubes.clone());
        let artin = cubes.map(|(c, s)| (field.add(c, s), s));
        let (art_idx, art_sol) = bucketize(q, artin);
        RootTables {
            field: Arc::clone(field),
            sqrt,
            cbrt_idx,
            cbrt_sol,
            art_idx,
            art_sol,
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn sqrt(&self, x: u16) -> u16 {
        self.sqrt[x as usize]
    }

    pub fn cube_roots(&self, c: u16) -> &[u16] {
        &self.cbrt_sol[self.cbrt_idx[c as usize] as usize..self.cbrt_idx[c as usize + 1] as usize]
    }

    fn artin_solutions(&self, c: u16) -> &[u16] {
        &self.art_sol[self.art_idx[c as usize] as usize..self.art_idx[c as usize + 1] as usize]
    }

    /// Distinct roots of c[3]t^3 + c[2]t^2 + c[1]t + c[0]. The zero polynomial
    /// is rejected; a nonzero constant has no roots.
    pub fn roots_le3(&self, c: [u16; 4]) -> ([u16; 3], usize) {
        let f = &self.field;
        if c[3] != 0 {
            return self.cubic_roots(c[3], c[2], c[1], c[0]);
        }
        if c[2] != 0 {
            return self.quadratic_roots(c[2], c[1], c[0]);
        }
        if c[1] != 0 {
            return ([f.div(c[0], c[1]), 0, 0], 1);
        }
        assert!(c[0] != 0, "the zero polynomial vanishes identically");
        ([0; 3], 0)
    }

    /// Distinct roots of a*t^2 + b*t + c with a nonzero.
    pub fn quadratic_roots(&self, a: u16, b: u16, c: u16) -> ([u16; 3], usize) {
        let f = &self.field;
        if b == 0 {
            // t^2 = c/a has the single root sqrt(c/a).
            return ([self.sqrt(f.div(c, a)), 0, 0], 1);
        }
        // t = (b/a)s turns the equation into s^2 + s = c*a/b^2.
        let scale = f.div(b, a);
        let rhs = f.div(f.mul(c, a), f.sqr(b));
        match f.half_trace(rhs) {
            Some(s) => ([f.mul(scale, s), f.mul(scale, f.add(s, 1)), 0], 2),
            None => ([0; 3], 0),
        }
    }

    /// Distinct roots of c3*t^3 + c2*t^2 + c1*t + c0 with c3 nonzero.
    pub fn cubic_roots(&self, c3: u16, c2: u16, c1: u16, c0: u16) -> ([u16; 3], usize) {
        let f = &self.field;
        let p = f.div(c2, c3);
        let q = f.div(c1, c3);
        let r = f.div(c0, c3);
        // t = u + p depresses the cubic to u^3 + alpha*u + beta.
        let alpha = f.add(f.sqr(p), q);
        let beta = f.add(f.mul(p, q), r);
        let mut out = [0u16; 3];
        let mut n = 0;
        if beta == 0 {
            out[n] = p;
            n += 1;
            if alpha != 0 {
                out[n] = f.add(self.sqrt(alpha), p);
                n += 1;
            }
        } else if alpha == 0 {
            for &u in self.cube_roots(beta) {
                out[n] = f.add(u, p);
                n += 1;
            }
        } else {
            let lam = self.sqrt(alpha);
            let c = f.div(beta, f.mul(lam, alpha));
            for &s in self.artin_solutions(c) {
                out[n] = f.add(f.mul(lam, s), p);
                n += 1;
            }
        }
        (out, n)
    }
}

/// Sorted distinct roots of a polynomial of degree at most 3, given as
/// coefficients [c0, c1, c2, c3] of 1, t, t^2, t^3.
pub fn roots_deg3(field: &Arc<Field>, coeffs: &[u16; 4]) -> Vec<u16> {
    let tables = RootTables::get(field);
    let (roots, n) = tables.roots_le3([coeffs[0], coeffs[1], coeffs[2], coeffs[3]]);
    let mut v = roots[..n].to_vec();
    v.sort_unstable();
    v
}
