//! Single-patch orbit enumeration. A patch is an affine coset x0 + K inside
//! some coordinate space, indexed by direction coordinates; the group acts
//! affinely on those coordinates. Orbits are found by BFS closure over a
//! visited bitmap; stabilizers come from Schreier elements sifted into a
//! stabilizer chain, stopping early once the chain order reaches the target
//! |H| / |orbit| forced by orbit-stabilizer.
//!
//! Two contexts implement the same engine: a bit-packed one for q = 2 with
//! at most 63 direction coordinates (the hot path), and a generic one for
//! any q on small patches.

use crate::group::{pack_mat, pidentity, pinv, pmul, unpack_mat, StabChain};
use crate::OrbitalError;
use ffla::{Field, GfMatrix};
use std::sync::Arc;

pub(crate) trait PatchCtx {
    /// Group element carried through transporter bookkeeping (m-side).
    type Elt: Clone;

    /// Number of points in the patch (q^w).
    fn size(&self) -> u64;
    fn gen_count(&self) -> usize;
    /// Image of the point with the given direction-coordinate code under
    /// generator `gen`.
    fn apply(&self, gen: usize, code: u64) -> u64;
    fn identity(&self) -> Self::Elt;
    fn gen_elt(&self, gen: usize) -> Self::Elt;
    /// Product a*b in the group. With the right action on forms, the level
    /// map of a*b is (map of b) composed with (map of a), which matches
    /// transporter extension t_y = t_x * h along a BFS edge x -> y = h(x).
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn invert(&self, a: &Self::Elt) -> Self::Elt;
    fn to_matrix(&self, a: &Self::Elt) -> GfMatrix;
    fn field(&self) -> &Arc<Field>;
    fn m(&self) -> usize;
    /// m-side generator matrices, passed through as the stabilizer of a
    /// single-point patch.
    fn gens_as_matrices(&self) -> Vec<GfMatrix>;
}

pub(crate) struct PatchRecord {
    pub code: u64,
    pub stab_order: u64,
    pub stab_gens: Vec<GfMatrix>,
}

pub(crate) struct PatchStats {
    pub orbits: u64,
}

#[inline]
fn bit_get(bits: &[u64], i: u64) -> bool {
    bits[(i >> 6) as usize] >> (i & 63) & 1 == 1
}

#[inline]
fn bit_set(bits: &mut [u64], i: u64) {
    bits[(i >> 6) as usize] |= 1 << (i & 63);
}

/// Pass 1: plain BFS closure from `seed`, marking `visited` and filling
/// `queue` with the orbit in discovery order. Returns the orbit size.
fn closure<C: PatchCtx>(ctx: &C, seed: u64, visited: &mut [u64], queue: &mut Vec<u64>) -> u64 {
    queue.clear();
    queue.push(seed);
    bit_set(visited, seed);
    let k = ctx.gen_count();
    let mut qi = 0;
    while qi < queue.len() {
        let x = queue[qi];
        qi += 1;
        for gi in 0..k {
            let y = ctx.apply(gi, x);
            if !bit_get(visited, y) {
                bit_set(visited, y);
                queue.push(y);
            }
        }
    }
    queue.len() as u64
}

/// Pass 2: transporter BFS from `seed`, sifting Schreier elements until the
/// stabilizer chain reaches `target`. The transporter store and its bitmap
/// are shared across orbits (orbits are disjoint, so slots never collide)
/// and must be sized to the patch. Returns generators of the stabilizer of
/// the seed point (inside the acting group).
fn stabilizer_from_seed<C: PatchCtx>(
    ctx: &C,
    seed: u64,
    target: u64,
    visited: &mut [u64],
    trans: &mut [Option<C::Elt>],
    queue: &mut Vec<u64>,
) -> Vec<GfMatrix> {
    let mut chain = StabChain::new(ctx.field(), ctx.m());
    let mut stab_gens: Vec<GfMatrix> = Vec::new();
    if target == 1 {
        return stab_gens;
    }
    queue.clear();
    queue.push(seed);
    bit_set(visited, seed);
    trans[seed as usize] = Some(ctx.identity());
    let k = ctx.gen_count();
    let mut qi = 0;
    'bfs: while qi < queue.len() {
        let x = queue[qi];
        qi += 1;
        let tx = trans[x as usize].clone().expect("transporter present");
        for gi in 0..k {
            let y = ctx.apply(gi, x);
            if !bit_get(visited, y) {
                bit_set(visited, y);
                trans[y as usize] = Some(ctx.mul(&tx, &ctx.gen_elt(gi)));
                queue.push(y);
            } else {
                let ty = trans[y as usize].clone().expect("transporter present");
                // Schreier element t_x * h * t_y^{-1} stabilizes the seed.
                let s = ctx.mul(&ctx.mul(&tx, &ctx.gen_elt(gi)), &ctx.invert(&ty));
                let mat = ctx.to_matrix(&s);
                if !mat.is_identity() && chain.insert(&mat) {
                    stab_gens.push(mat);
                    if chain.order() == target {
                        break 'bfs;
                    }
                }
            }
        }
    }
    assert_eq!(
        chain.order(),
        target,
        "Schreier generators generate the full point stabilizer"
    );
    stab_gens
}

/// Enumerates all orbits on the patch. `group_order` is the exact order of
/// the acting group; each record's stabilizer order is group_order / orbit
/// size, certified by a stabilizer chain.
pub(crate) fn enumerate_patch<C: PatchCtx>(
    ctx: &C,
    group_order: u64,
    limit: u64,
    mut sink: impl FnMut(PatchRecord),
) -> Result<PatchStats, OrbitalError> {
    let size = ctx.size();
    if size > limit {
        return Err(OrbitalError::ThresholdExceeded {
            size: size as u128,
            limit,
        });
    }
    if size == 1 {
        sink(PatchRecord {
            code: 0,
            stab_order: group_order,
            stab_gens: ctx.gens_as_matrices(),
        });
        return Ok(PatchStats { orbits: 1 });
    }
    if group_order == 1 {
        for code in 0..size {
            sink(PatchRecord {
                code,
                stab_order: 1,
                stab_gens: Vec::new(),
            });
        }
        return Ok(PatchStats { orbits: size });
    }

    let words = ((size + 63) / 64) as usize;
    let mut visited = vec![0u64; words];
    let mut queue: Vec<u64> = Vec::new();
    // Second-pass state, allocated only if some orbit has a nontrivial
    // stabilizer; never cleared between orbits (orbits are disjoint).
    let mut visited2: Option<Vec<u64>> = None;
    let mut trans: Option<Vec<Option<C::Elt>>> = None;
    let mut queue2: Vec<u64> = Vec::new();
    let mut orbits = 0u64;

    for seed in 0..size {
        if bit_get(&visited, seed) {
            continue;
        }
        orbits += 1;
        let orbit_len = closure(ctx, seed, &mut visited, &mut queue);
        assert_eq!(
            group_order % orbit_len,
            0,
            "orbit size divides the group order"
        );
        let target = group_order / orbit_len;
        if target == 1 {
            sink(PatchRecord {
                code: seed,
                stab_order: 1,
                stab_gens: Vec::new(),
            });
            continue;
        }
        let v2 = visited2.get_or_insert_with(|| vec![0u64; words]);
        let tr = trans.get_or_insert_with(|| vec![None; size as usize]);
        let stab_gens = stabilizer_from_seed(ctx, seed, target, v2, tr, &mut queue2);
        sink(PatchRecord {
            code: seed,
            stab_order: target,
            stab_gens,
        });
    }
    Ok(PatchStats { orbits })
}

/// Orbit of a single point: size only.
pub(crate) fn orbit_size_from<C: PatchCtx>(ctx: &C, start: u64) -> u64 {
    let words = ((ctx.size() + 63) / 64) as usize;
    let mut visited = vec![0u64; words];
    let mut queue = Vec::new();
    closure(ctx, start, &mut visited, &mut queue)
}

/// Stabilizer of a single point inside the acting group, with its exact
/// order group_order / |orbit|.
pub(crate) fn point_stabilizer<C: PatchCtx>(
    ctx: &C,
    start: u64,
    group_order: u64,
) -> (Vec<GfMatrix>, u64) {
    let orbit_len = orbit_size_from(ctx, start);
    assert_eq!(group_order % orbit_len, 0);
    let target = group_order / orbit_len;
    if target == 1 {
        return (Vec::new(), 1);
    }
    let words = ((ctx.size() + 63) / 64) as usize;
    let mut visited = vec![0u64; words];
    let mut trans: Vec<Option<C::Elt>> = vec![None; ctx.size() as usize];
    let mut queue = Vec::new();
    let gens = stabilizer_from_seed(ctx, start, target, &mut visited, &mut trans, &mut queue);
    (gens, target)
}

/// Full orbit of a point with transporters; returns the smallest code in
/// the orbit, an element t with (action of t)(start) = min, and the orbit
/// size.
pub(crate) fn orbit_min_transporter<C: PatchCtx>(ctx: &C, start: u64) -> (u64, C::Elt, u64) {
    let words = ((ctx.size() + 63) / 64) as usize;
    let mut visited = vec![0u64; words];
    let mut trans: Vec<Option<C::Elt>> = vec![None; ctx.size() as usize];
    let mut queue = vec![start];
    bit_set(&mut visited, start);
    trans[start as usize] = Some(ctx.identity());
    let k = ctx.gen_count();
    let mut qi = 0;
    let mut min_code = start;
    while qi < queue.len() {
        let x = queue[qi];
        qi += 1;
        let tx = trans[x as usize].clone().expect("transporter present");
        for gi in 0..k {
            let y = ctx.apply(gi, x);
            if !bit_get(&visited, y) {
                bit_set(&mut visited, y);
                trans[y as usize] = Some(ctx.mul(&tx, &ctx.gen_elt(gi)));
                queue.push(y);
                if y < min_code {
                    min_code = y;
                }
            }
        }
    }
    let t = trans[min_code as usize].clone().expect("min visited");
    (min_code, t, queue.len() as u64)
}

/// Bit-packed context: q = 2, direction dimension w <= 63. Points are
/// w-bit codes; generator action is linear over the direction columns plus
/// an affine offset. Group elements are packed m x m bit matrices.
pub(crate) struct FastPatch {
    field: Arc<Field>,
    m: usize,
    w: usize,
    /// Per generator: w direction columns and the affine offset, in
    /// direction coordinates.
    cols: Vec<Vec<u64>>,
    offsets: Vec<u64>,
    gens_packed: Vec<u64>,
}

impl FastPatch {
    pub(crate) fn new(
        field: &Arc<Field>,
        m: usize,
        w: usize,
        cols: Vec<Vec<u64>>,
        offsets: Vec<u64>,
        gens: &[GfMatrix],
    ) -> Self {
        debug_assert!(w <= 63);
        debug_assert_eq!(cols.len(), gens.len());
        debug_assert_eq!(offsets.len(), gens.len());
        FastPatch {
            field: Arc::clone(field),
            m,
            w,
            cols,
            offsets,
            gens_packed: gens.iter().map(pack_mat).collect(),
        }
    }
}

impl PatchCtx for FastPatch {
    type Elt = u64;

    fn size(&self) -> u64 {
        1u64 << self.w
    }

    fn gen_count(&self) -> usize {
        self.gens_packed.len()
    }

    #[inline]
    fn apply(&self, gen: usize, code: u64) -> u64 {
        let cols = &self.cols[gen];
        let mut acc = self.offsets[gen];
        let mut bits = code;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            acc ^= cols[i];
            bits &= bits - 1;
        }
        acc
    }

    fn identity(&self) -> u64 {
        pidentity(self.m)
    }

    fn gen_elt(&self, gen: usize) -> u64 {
        self.gens_packed[gen]
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        pmul(self.m, *a, *b)
    }

    fn invert(&self, a: &u64) -> u64 {
        pinv(&self.field, self.m, *a)
    }

    fn to_matrix(&self, a: &u64) -> GfMatrix {
        unpack_mat(&self.field, self.m, *a)
    }

    fn field(&self) -> &Arc<Field> {
        &self.field
    }

    fn m(&self) -> usize {
        self.m
    }

    fn gens_as_matrices(&self) -> Vec<GfMatrix> {
        self.gens_packed
            .iter()
            .map(|&p| unpack_mat(&self.field, self.m, p))
            .collect()
    }
}

/// Generic context for any q: points are base-q digit codes over the
/// direction coordinates; group elements are m x m matrices.
pub(crate) struct GenPatch {
    field: Arc<Field>,
    m: usize,
    q: u64,
    w: usize,
    size: u64,
    /// Per generator: w x w coordinate matrix and affine offset.
    mats: Vec<GfMatrix>,
    offsets: Vec<Vec<u16>>,
    gens: Vec<GfMatrix>,
}

impl GenPatch {
    pub(crate) fn new(
        field: &Arc<Field>,
        m: usize,
        w: usize,
        mats: Vec<GfMatrix>,
        offsets: Vec<Vec<u16>>,
        gens: Vec<GfMatrix>,
    ) -> Self {
        let q = field.q() as u64;
        let size = q.pow(w as u32);
        GenPatch {
            field: Arc::clone(field),
            m,
            q,
            w,
            size,
            mats,
            offsets,
            gens,
        }
    }

    pub(crate) fn decode(&self, mut code: u64) -> Vec<u16> {
        let mut v = vec![0u16; self.w];
        for slot in v.iter_mut() {
            *slot = (code % self.q) as u16;
            code /= self.q;
        }
        v
    }

    pub(crate) fn encode(&self, digits: &[u16]) -> u64 {
        let mut code = 0u64;
        for &d in digits.iter().rev() {
            code = code * self.q + d as u64;
        }
        code
    }
}

impl PatchCtx for GenPatch {
    type Elt = GfMatrix;

    fn size(&self) -> u64 {
        self.size
    }

    fn gen_count(&self) -> usize {
        self.gens.len()
    }

    fn apply(&self, gen: usize, code: u64) -> u64 {
        let digits = self.decode(code);
        let mut img = self.mats[gen].apply(&digits);
        for (slot, &o) in img.iter_mut().zip(&self.offsets[gen]) {
            *slot = self.field.add(*slot, o);
        }
        self.encode(&img)
    }

    fn identity(&self) -> GfMatrix {
        GfMatrix::identity(Arc::clone(&self.field), self.m)
    }

    fn gen_elt(&self, gen: usize) -> GfMatrix {
        self.gens[gen].clone()
    }

    fn mul(&self, a: &GfMatrix, b: &GfMatrix) -> GfMatrix {
        a.mul(b)
    }

    fn invert(&self, a: &GfMatrix) -> GfMatrix {
        a.invert().expect("group element invertible")
    }

    fn to_matrix(&self, a: &GfMatrix) -> GfMatrix {
        a.clone()
    }

    fn field(&self) -> &Arc<Field> {
        &self.field
    }

    fn m(&self) -> usize {
        self.m
    }

    fn gens_as_matrices(&self) -> Vec<GfMatrix> {
        self.gens.clone()
    }
}
