//! Group-side machinery: the acting group, packed small matrices, and
//! stabilizer chains for exact subgroup orders.
//!
//! Group elements are m x m invertible matrices over F_q. The chain acts on
//! column vectors of F_q^m (a left action, independent of the form-action
//! convention), which is enough to certify orders and membership.

use crate::OrbitalError;
use ffla::{gl_generators, gl_order, Field, GfMatrix};
use num_bigint::BigUint;
use num_traits::One;
use std::collections::HashMap;
use std::sync::Arc;

/// Packs an m x m matrix over F_2 (m <= 8) with row r in byte r.
pub(crate) fn pack_mat(g: &GfMatrix) -> u64 {
    let m = g.rows();
    debug_assert!(m <= 8 && g.cols() == m);
    let mut w = 0u64;
    for r in 0..m {
        for c in 0..m {
            if g.get(r, c) == 1 {
                w |= 1 << (r * 8 + c);
            }
        }
    }
    w
}

pub(crate) fn unpack_mat(field: &Arc<Field>, m: usize, w: u64) -> GfMatrix {
    GfMatrix::from_fn(Arc::clone(field), m, m, |r, c| ((w >> (r * 8 + c)) & 1) as u16)
}

/// Product a*b of packed F_2 matrices: row r of the product is the XOR of
/// the rows of b selected by row r of a.
pub(crate) fn pmul(m: usize, a: u64, b: u64) -> u64 {
    let mut out = 0u64;
    for r in 0..m {
        let mut bits = (a >> (8 * r)) & 0xFF;
        let mut acc = 0u64;
        while bits != 0 {
            let c = bits.trailing_zeros() as usize;
            acc ^= (b >> (8 * c)) & 0xFF;
            bits &= bits - 1;
        }
        out |= acc << (8 * r);
    }
    out
}

pub(crate) fn pidentity(m: usize) -> u64 {
    (0..m).fold(0u64, |w, r| w | 1 << (r * 8 + r))
}

pub(crate) fn pinv(field: &Arc<Field>, m: usize, a: u64) -> u64 {
    let inv = unpack_mat(field, m, a)
        .invert()
        .expect("packed group element is invertible");
    pack_mat(&inv)
}

/// Encodes a vector of F_q^m as sum of digit_k q^k.
fn encode_pt(q: u32, v: &[u16]) -> u32 {
    let mut code = 0u32;
    for &d in v.iter().rev() {
        code = code * q + d as u32;
    }
    code
}

fn decode_pt(q: u32, m: usize, mut code: u32) -> Vec<u16> {
    let mut v = vec![0u16; m];
    for slot in v.iter_mut() {
        *slot = (code % q) as u16;
        code /= q;
    }
    v
}

fn apply_pt(g: &GfMatrix, q: u32, m: usize, p: u32) -> u32 {
    let v = decode_pt(q, m, p);
    encode_pt(q, &g.apply(&v))
}

/// point -> (t, t^-1) with t * base = point.
type Transversal = HashMap<u32, (GfMatrix, GfMatrix)>;

/// Stabilizer chain over the natural action on F_q^m, maintained
/// incrementally. `order` is exact after every `insert` for the group
/// generated by all elements inserted so far.
///
/// The structure is the plain fixpoint form of Schreier-Sims: one flat list
/// of strong generators, a base of vectors, and per-base-point transversals
/// recomputed until no Schreier element escapes the chain. Domains here are
/// tiny (q^m points), so rebuilds cost far less than clever bookkeeping.
pub struct StabChain {
    field: Arc<Field>,
    m: usize,
    q: u32,
    base: Vec<u32>,
    strong: Vec<GfMatrix>,
    levels: Vec<Transversal>,
    order: u64,
}

impl StabChain {
    pub fn new(field: &Arc<Field>, m: usize) -> Self {
        let q = field.q();
        assert!(
            (q as u64).checked_pow(m as u32).is_some_and(|d| d <= 1 << 24),
            "stabilizer chain domain q^m must stay small"
        );
        StabChain {
            field: Arc::clone(field),
            m,
            q,
            base: Vec::new(),
            strong: Vec::new(),
            levels: Vec::new(),
            order: 1,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Residue of g after descending from `from`; identity means g lies in
    /// the subgroup the chain currently represents below that level.
    fn sift_from(&self, from: usize, g: &GfMatrix) -> GfMatrix {
        let mut g = g.clone();
        for i in from..self.levels.len() {
            let p = apply_pt(&g, self.q, self.m, self.base[i]);
            match self.levels[i].get(&p) {
                None => return g,
                Some((_, tinv)) => g = tinv.mul(&g),
            }
        }
        g
    }

    pub fn contains(&self, g: &GfMatrix) -> bool {
        self.sift_from(0, g).is_identity()
    }

    /// Appends a base point moved by g if g fixes the whole current base.
    fn ensure_base_covers(&mut self, g: &GfMatrix) {
        if self
            .base
            .iter()
            .all(|&p| apply_pt(g, self.q, self.m, p) == p)
        {
            let domain = (self.q as u64).pow(self.m as u32) as u32;
            let moved = (1..domain)
                .find(|&p| apply_pt(g, self.q, self.m, p) != p)
                .expect("non-identity element moves some nonzero vector");
            self.base.push(moved);
        }
    }

    /// Inserts g; returns true if the generated group grew.
    pub fn insert(&mut self, g: &GfMatrix) -> bool {
        if self.contains(g) {
            return false;
        }
        self.ensure_base_covers(g);
        self.strong.push(g.clone());
        self.close();
        true
    }

    /// Strong generators living at level i: those fixing base[0..i].
    fn level_gens(&self, i: usize) -> Vec<GfMatrix> {
        self.strong
            .iter()
            .filter(|g| {
                self.base[..i]
                    .iter()
                    .all(|&p| apply_pt(g, self.q, self.m, p) == p)
            })
            .cloned()
            .collect()
    }

    fn rebuild_transversals(&mut self) {
        self.levels.clear();
        for i in 0..self.base.len() {
            let gens = self.level_gens(i);
            let ginv: Vec<GfMatrix> = gens
                .iter()
                .map(|g| g.invert().expect("group element invertible"))
                .collect();
            let id = GfMatrix::identity(Arc::clone(&self.field), self.m);
            let mut tr: Transversal = HashMap::new();
            tr.insert(self.base[i], (id.clone(), id));
            let mut queue = vec![self.base[i]];
            let mut qi = 0;
            while qi < queue.len() {
                let p = queue[qi];
                qi += 1;
                for (h, hinv) in gens.iter().zip(&ginv) {
                    let p2 = apply_pt(h, self.q, self.m, p);
                    if !tr.contains_key(&p2) {
                        let (t, tinv) = &tr[&p];
                        tr.insert(p2, (h.mul(t), tinv.mul(hinv)));
                        queue.push(p2);
                    }
                }
            }
            self.levels.push(tr);
        }
    }

    /// Fixpoint closure: rebuild transversals, then hunt for a Schreier
    /// element whose residue escapes the chain; adopt it as a strong
    /// generator and start over. Each pass strictly grows the transversal
    /// product, which is bounded by |<strong>|, so this terminates with
    /// order = |<strong>| exactly (Schreier's lemma).
    fn close(&mut self) {
        'rebuild: loop {
            self.rebuild_transversals();
            for i in 0..self.base.len() {
                let gens = self.level_gens(i);
                let points: Vec<u32> = self.levels[i].keys().copied().collect();
                for p in points {
                    let tp = self.levels[i][&p].0.clone();
                    for h in &gens {
                        let p2 = apply_pt(h, self.q, self.m, p);
                        let t2inv = self.levels[i][&p2].1.clone();
                        let s = t2inv.mul(h).mul(&tp);
                        let res = self.sift_from(i + 1, &s);
                        if !res.is_identity() {
                            self.ensure_base_covers(&res);
                            self.strong.push(res);
                            continue 'rebuild;
                        }
                    }
                }
            }
            break;
        }
        self.order = self
            .levels
            .iter()
            .map(|t| t.len() as u64)
            .try_fold(1u64, |a, b| a.checked_mul(b))
            .expect("chain order fits in u64");
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum GroupKind {
    FullGl,
    Trivial,
    Custom,
}

/// An acting subgroup of GL_m(F_q): generators plus the exact order.
/// Conjugacy-class access is available when the group is a full GL or
/// trivial; `burnside_count` requires it.
pub struct GroupSpec {
    field: Arc<Field>,
    m: usize,
    generators: Vec<GfMatrix>,
    order: BigUint,
    kind: GroupKind,
}

impl GroupSpec {
    pub fn full_gl(field: &Arc<Field>, m: usize) -> Self {
        GroupSpec {
            field: Arc::clone(field),
            m,
            generators: gl_generators(field, m),
            order: gl_order(m as u32, field.q()),
            kind: GroupKind::FullGl,
        }
    }

    pub fn trivial(field: &Arc<Field>, m: usize) -> Self {
        GroupSpec {
            field: Arc::clone(field),
            m,
            generators: Vec::new(),
            order: BigUint::one(),
            kind: GroupKind::Trivial,
        }
    }

    /// A custom subgroup; the caller supplies the exact order. Generators
    /// must be invertible m x m matrices.
    pub fn from_generators(
        field: &Arc<Field>,
        m: usize,
        generators: Vec<GfMatrix>,
        order: BigUint,
    ) -> Result<Self, OrbitalError> {
        for g in &generators {
            if g.rows() != m || g.cols() != m {
                return Err(OrbitalError::InvalidGroup(format!(
                    "generator is {}x{}, expected {}x{}",
                    g.rows(),
                    g.cols(),
                    m,
                    m
                )));
            }
            if g.clone().invert().is_none() {
                return Err(OrbitalError::InvalidGroup(
                    "generator is singular".into(),
                ));
            }
        }
        Ok(GroupSpec {
            field: Arc::clone(field),
            m,
            generators,
            order,
            kind: GroupKind::Custom,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn generators(&self) -> &[GfMatrix] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn order_u64(&self) -> Option<u64> {
        u64::try_from(&self.order).ok()
    }

    pub fn is_full_gl(&self) -> bool {
        self.kind == GroupKind::FullGl
    }

    /// Conjugacy classes (representative, class size), when available.
    pub fn conjugacy_classes(&self) -> Option<Vec<(GfMatrix, BigUint)>> {
        match self.kind {
            GroupKind::FullGl => Some(
                ffla::conjugacy_classes(self.m as u32, self.field.q())
                    .into_iter()
                    .map(|c| (c.rep, c.size))
                    .collect(),
            ),
            GroupKind::Trivial => Some(vec![(
                GfMatrix::identity(Arc::clone(&self.field), self.m),
                BigUint::one(),
            )]),
            GroupKind::Custom => None,
        }
    }
}
