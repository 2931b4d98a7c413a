//! Orbit enumeration drivers.
//!
//! `orbit_partition_naive` runs BFS closure directly on an invariant affine
//! patch. `orbits_filtration` first solves the quotient problem modulo the
//! largest filtration stage, then repeatedly splits fibers (cosets of the
//! next stage) into orbits of the parent representative's stabilizer; the
//! stabilizer of a fiber point inside the parent stabilizer is its full
//! stabilizer, so records carry exact orders throughout.

use crate::filtration::Filtration;
use crate::group::GroupSpec;
use crate::patch::{
    enumerate_patch, orbit_min_transporter, point_stabilizer, FastPatch, GenPatch, PatchCtx,
    PatchRecord,
};
use crate::OrbitalError;
use ffla::{BitEchelon, Field, GfMatrix};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use std::sync::Arc;
use symspace::{act, is_g_stable, Form, MonomialBasis, QuotientMap, Subspace, SymCache};

/// Hard upper bound on enumerable patch sizes (bitmap memory).
const HARD_LIMIT: u64 = 1 << 32;
/// Default guard for a single enumerated patch or fiber.
pub const DEFAULT_PATCH_LIMIT: u64 = 1 << 24;

/// An affine coset base + direction inside the form space.
#[derive(Clone)]
pub struct AffinePatch {
    base: Form,
    direction: Subspace,
}

impl AffinePatch {
    pub fn new(base: Form, direction: Subspace) -> Result<Self, OrbitalError> {
        if base.basis() != direction.basis() || base.field().q() != direction.field().q() {
            return Err(OrbitalError::InvalidPatch(
                "base form and direction live in different spaces".into(),
            ));
        }
        Ok(AffinePatch { base, direction })
    }

    /// The whole space of forms as a patch.
    pub fn whole_space(basis: &Arc<MonomialBasis>, field: &Arc<Field>) -> Self {
        AffinePatch {
            base: Form::zero(Arc::clone(basis), Arc::clone(field)),
            direction: Subspace::full(Arc::clone(basis), Arc::clone(field)),
        }
    }

    pub fn base(&self) -> &Form {
        &self.base
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    pub fn size(&self) -> BigUint {
        BigUint::from(self.base.field().q()).pow(self.direction.dim() as u32)
    }
}

/// One orbit: the first representative discovered (not canonical), exact
/// stabilizer generators and order, and the orbit size |G| / |stab|.
#[derive(Clone)]
pub struct OrbitRecord {
    pub rep: Form,
    pub stab_gens: Vec<GfMatrix>,
    pub stab_order: u64,
    pub orbit_size: u64,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub workers: usize,
    pub patch_limit: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            workers: 1,
            patch_limit: DEFAULT_PATCH_LIMIT,
        }
    }
}

/// Per-level accounting: how many parent orbits were lifted, how many
/// records their fibers produced, and the fiber work sum |G_y| * #records.
#[derive(Clone, Debug)]
pub struct LevelStats {
    pub space_dim: usize,
    pub parents: u64,
    pub records: u64,
    pub fiber_work: u128,
}

#[derive(Clone, Debug, Default)]
pub struct RunStats {
    pub levels: Vec<LevelStats>,
    pub records: u64,
}

/// Reduced-echelon frame for a subspace of a level space, giving forward
/// and backward coordinates. Rows are RREF so the coordinates of a member
/// vector are just its pivot entries.
#[derive(Clone)]
pub(crate) struct Frame {
    field: Arc<Field>,
    ambient: usize,
    rows: Vec<Vec<u16>>,
    pivots: Vec<usize>,
}

impl Frame {
    pub(crate) fn from_rows(
        field: &Arc<Field>,
        ambient: usize,
        rows: impl IntoIterator<Item = Vec<u16>>,
    ) -> Self {
        let mut f = Frame {
            field: Arc::clone(field),
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        };
        for r in rows {
            f.insert(r);
        }
        f
    }

    fn insert(&mut self, mut v: Vec<u16>) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (slot, &r) in v.iter_mut().zip(row) {
                    *slot = self.field.sub(*slot, self.field.mul(c, r));
                }
            }
        }
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(v[p]);
        for slot in v.iter_mut() {
            *slot = self.field.mul(*slot, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                for (slot, &x) in row.iter_mut().zip(&v) {
                    *slot = self.field.sub(*slot, self.field.mul(c, x));
                }
            }
        }
        let at = self.pivots.partition_point(|&x| x < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn row(&self, i: usize) -> &[u16] {
        &self.rows[i]
    }

    /// Coordinates of v in this frame, or None if v is outside the span.
    pub(crate) fn coords_of(&self, v: &[u16]) -> Option<Vec<u16>> {
        let coords: Vec<u16> = self.pivots.iter().map(|&p| v[p]).collect();
        let rec = self.from_coords(&coords);
        (rec == v).then_some(coords)
    }

    pub(crate) fn from_coords(&self, coords: &[u16]) -> Vec<u16> {
        let mut v = vec![0u16; self.ambient];
        for (row, &c) in self.rows.iter().zip(coords) {
            if c != 0 {
                for (slot, &r) in v.iter_mut().zip(row) {
                    *slot = self.field.add(*slot, self.field.mul(c, r));
                }
            }
        }
        v
    }
}

fn vec_to_word(v: &[u16]) -> u64 {
    v.iter()
        .enumerate()
        .fold(0u64, |w, (i, &x)| w | (((x & 1) as u64) << i))
}

fn word_to_vec(w: u64, n: usize) -> Vec<u16> {
    (0..n).map(|i| ((w >> i) & 1) as u16).collect()
}

fn encode_digits(q: u64, digits: &[u16]) -> u64 {
    let mut code = 0u64;
    for &d in digits.iter().rev() {
        code = code * q + d as u64;
    }
    code
}

/// A concrete enumerable patch at some quotient level: engine plus the
/// affine frame for decoding point codes back into level coordinates.
pub(crate) struct Fiber {
    level_dim: usize,
    x0: Vec<u16>,
    x0_word: u64,
    frame: Frame,
    echelon: Option<BitEchelon>,
    engine: Engine,
}

pub(crate) enum Engine {
    Fast(FastPatch),
    Gen(GenPatch),
}

impl Fiber {
    pub(crate) fn enumerate(
        &self,
        group_order: u64,
        limit: u64,
        sink: impl FnMut(PatchRecord),
    ) -> Result<u64, OrbitalError> {
        let stats = match &self.engine {
            Engine::Fast(c) => enumerate_patch(c, group_order, limit, sink)?,
            Engine::Gen(c) => enumerate_patch(c, group_order, limit, sink)?,
        };
        Ok(stats.orbits)
    }

    /// Level coordinates of a point code.
    pub(crate) fn point_of(&self, code: u64) -> Vec<u16> {
        match (&self.echelon, &self.engine) {
            (Some(ech), _) => {
                let mut out = [0u64];
                ech.from_coords(code, &mut out);
                word_to_vec(out[0] ^ self.x0_word, self.level_dim)
            }
            (None, Engine::Gen(c)) => {
                let digits = c.decode(code);
                let mut v = self.frame.from_coords(&digits);
                for (slot, &b) in v.iter_mut().zip(&self.x0) {
                    *slot = self.frame.field.add(*slot, b);
                }
                v
            }
            _ => unreachable!("fast fiber always has an echelon"),
        }
    }

    /// Point code of level coordinates, if the point lies on this fiber.
    pub(crate) fn code_of(&self, pt: &[u16]) -> Option<u64> {
        match &self.echelon {
            Some(ech) => {
                let delta = vec_to_word(pt) ^ self.x0_word;
                ech.contains(&[delta]).then(|| ech.coords_of(&[delta]))
            }
            None => {
                let delta: Vec<u16> = pt
                    .iter()
                    .zip(&self.x0)
                    .map(|(&a, &b)| self.frame.field.sub(a, b))
                    .collect();
                self.frame
                    .coords_of(&delta)
                    .map(|d| encode_digits(self.frame.field.q() as u64, &d))
            }
        }
    }

    pub(crate) fn point_stabilizer(&self, code: u64, group_order: u64) -> (Vec<GfMatrix>, u64) {
        match &self.engine {
            Engine::Fast(c) => point_stabilizer(c, code, group_order),
            Engine::Gen(c) => point_stabilizer(c, code, group_order),
        }
    }

    /// Smallest code in the orbit of `code`, a transporter to it, and the
    /// orbit size.
    pub(crate) fn orbit_min(&self, code: u64) -> (u64, GfMatrix, u64) {
        match &self.engine {
            Engine::Fast(c) => {
                let (min, t, len) = orbit_min_transporter(c, code);
                (min, c.to_matrix(&t), len)
            }
            Engine::Gen(c) => {
                let (min, t, len) = orbit_min_transporter(c, code);
                (min, t, len)
            }
        }
    }
}

struct LevelCtx {
    dim: usize,
    qmap: QuotientMap,
    /// Rows of the kernel of level j -> level j+1 (the image of W_{j+1}),
    /// in level-j coordinates. Present for j < l.
    fiber_dirs: Option<Vec<Vec<u16>>>,
}

/// Shared context for a (group, filtration) pair: quotient maps per level
/// and a cache of ambient action matrices.
pub(crate) struct RunCtx<'g> {
    pub(crate) group: &'g GroupSpec,
    basis: Arc<MonomialBasis>,
    field: Arc<Field>,
    fast: bool,
    lvls: Vec<LevelCtx>,
    symcache: SymCache,
}

impl<'g> RunCtx<'g> {
    pub(crate) fn new(
        group: &'g GroupSpec,
        basis: &Arc<MonomialBasis>,
        filt: &Filtration,
    ) -> Result<Self, OrbitalError> {
        if basis.m() != group.m() {
            return Err(OrbitalError::InvalidGroup(format!(
                "group acts on {} variables, basis has {}",
                group.m(),
                basis.m()
            )));
        }
        let field = Arc::clone(group.field());
        let n = basis.size();
        let l = filt.len();
        let mut lvls = Vec::with_capacity(l + 1);
        for j in 0..=l {
            let w_j = if j == 0 {
                Subspace::zero(Arc::clone(basis), Arc::clone(&field))
            } else {
                let w = filt.w(j).clone();
                if w.basis() != basis {
                    return Err(OrbitalError::InvalidFiltration(
                        "filtration lives in a different monomial basis".into(),
                    ));
                }
                if !is_g_stable(&w, group.generators()) {
                    return Err(OrbitalError::InvalidFiltration(format!(
                        "W_{j} is not stable under this group"
                    )));
                }
                w
            };
            let qmap = w_j.quotient();
            lvls.push(LevelCtx {
                dim: qmap.dim(),
                qmap,
                fiber_dirs: None,
            });
        }
        for j in 0..l {
            let w_next = filt.w(j + 1);
            let rows: Vec<Vec<u16>> = (0..w_next.dim())
                .map(|i| lvls[j].qmap.project_vec(w_next.basis_vec(i)))
                .collect();
            lvls[j].fiber_dirs = Some(rows);
        }
        let fast = field.q() == 2 && n <= 64 && group.m() <= 8;
        Ok(RunCtx {
            group,
            basis: Arc::clone(basis),
            field,
            fast,
            lvls,
            symcache: SymCache::new(Arc::clone(basis)),
        })
    }

    pub(crate) fn levels(&self) -> usize {
        self.lvls.len() - 1
    }

    pub(crate) fn level_dim(&self, j: usize) -> usize {
        self.lvls[j].dim
    }

    pub(crate) fn project_form(&self, j: usize, f: &Form) -> Vec<u16> {
        self.lvls[j].qmap.project_form(f)
    }

    /// Base point at level j of the fiber over a level-(j+1) point.
    pub(crate) fn lift_point(&self, j: usize, pt: &[u16]) -> Vec<u16> {
        let v = self.lvls[j + 1].qmap.section_vec(pt);
        self.lvls[j].qmap.project_vec(&v)
    }

    pub(crate) fn fiber_dirs(&self, j: usize) -> &[Vec<u16>] {
        self.lvls[j].fiber_dirs.as_deref().expect("fiber level")
    }

    /// Standard basis rows of the whole level-j space.
    pub(crate) fn full_dirs(&self, j: usize) -> Vec<Vec<u16>> {
        let dim = self.lvls[j].dim;
        (0..dim)
            .map(|i| {
                let mut r = vec![0u16; dim];
                r[i] = 1;
                r
            })
            .collect()
    }

    fn level_matrix(&self, j: usize, g: &GfMatrix) -> GfMatrix {
        let s = self.symcache.get(g);
        self.lvls[j].qmap.induced(&s)
    }

    /// Validates that the patch is invariant under the group and errors in
    /// terms of the public contract.
    pub(crate) fn validate_patch(&self, patch: &AffinePatch) -> Result<(), OrbitalError> {
        if patch.base().basis() != &self.basis {
            return Err(OrbitalError::InvalidPatch(
                "patch lives in a different monomial basis".into(),
            ));
        }
        let neg = self.field.neg(1);
        for g in self.group.generators() {
            let img = act(g, patch.base())?;
            let delta = img.add(&patch.base().scale(neg));
            if !patch.direction().contains(&delta) {
                return Err(OrbitalError::InvalidPatch(
                    "base point does not stay on the patch under the group".into(),
                ));
            }
        }
        if !is_g_stable(patch.direction(), self.group.generators()) {
            return Err(OrbitalError::InvalidPatch(
                "patch direction is not stable under the group".into(),
            ));
        }
        Ok(())
    }

    /// Builds the enumerable patch x0 + span(dirs) at level j under the
    /// given m-side generators.
    pub(crate) fn build_fiber(
        &self,
        j: usize,
        x0: Vec<u16>,
        dirs: &[Vec<u16>],
        gens: &[GfMatrix],
        limit: u64,
    ) -> Result<Fiber, OrbitalError> {
        let dim = self.lvls[j].dim;
        let frame = Frame::from_rows(&self.field, dim, dirs.iter().cloned());
        let w = frame.dim();
        let q = self.field.q() as u64;
        let hard = limit.min(HARD_LIMIT);
        let mut size: u128 = 1;
        for _ in 0..w {
            size = size.saturating_mul(q as u128);
            if size > hard as u128 {
                return Err(OrbitalError::ThresholdExceeded { size, limit: hard });
            }
        }
        let level_mats: Vec<GfMatrix> = gens.iter().map(|g| self.level_matrix(j, g)).collect();
        let not_invariant =
            || OrbitalError::InvalidPatch("patch is not invariant under the group".into());
        if self.fast && w <= 63 {
            let mut ech = BitEchelon::new(dim);
            for row in &frame.rows {
                ech.insert(&[vec_to_word(row)]);
            }
            let x0_word = vec_to_word(&x0);
            let mut cols = Vec::with_capacity(gens.len());
            let mut offsets = Vec::with_capacity(gens.len());
            for lm in &level_mats {
                let mut c = Vec::with_capacity(w);
                for i in 0..w {
                    let y = vec_to_word(&lm.apply(frame.row(i)));
                    if !ech.contains(&[y]) {
                        return Err(not_invariant());
                    }
                    c.push(ech.coords_of(&[y]));
                }
                let delta = vec_to_word(&lm.apply(&x0)) ^ x0_word;
                if !ech.contains(&[delta]) {
                    return Err(not_invariant());
                }
                offsets.push(ech.coords_of(&[delta]));
                cols.push(c);
            }
            let engine = FastPatch::new(&self.field, self.group.m(), w, cols, offsets, gens);
            Ok(Fiber {
                level_dim: dim,
                x0,
                x0_word,
                frame,
                echelon: Some(ech),
                engine: Engine::Fast(engine),
            })
        } else {
            let mut mats = Vec::with_capacity(gens.len());
            let mut offsets = Vec::with_capacity(gens.len());
            for lm in &level_mats {
                let mut col_coords = Vec::with_capacity(w);
                for i in 0..w {
                    let y = lm.apply(frame.row(i));
                    col_coords.push(frame.coords_of(&y).ok_or_else(not_invariant)?);
                }
                let mat =
                    GfMatrix::from_fn(Arc::clone(&self.field), w, w, |r, c| col_coords[c][r]);
                let y0 = lm.apply(&x0);
                let delta: Vec<u16> = y0
                    .iter()
                    .zip(&x0)
                    .map(|(&a, &b)| self.field.sub(a, b))
                    .collect();
                offsets.push(frame.coords_of(&delta).ok_or_else(not_invariant)?);
                mats.push(mat);
            }
            let engine = GenPatch::new(&self.field, self.group.m(), w, mats, offsets, gens.to_vec());
            Ok(Fiber {
                level_dim: dim,
                x0,
                x0_word: 0,
                frame,
                echelon: None,
                engine: Engine::Gen(engine),
            })
        }
    }

    fn make_record(&self, g_order: u64, rep_coords: &[u16], pr: PatchRecord) -> OrbitRecord {
        assert_eq!(g_order % pr.stab_order, 0, "orbit-stabilizer divisibility");
        OrbitRecord {
            rep: Form::from_coeffs(Arc::clone(&self.basis), Arc::clone(&self.field), rep_coords),
            stab_gens: pr.stab_gens,
            stab_order: pr.stab_order,
            orbit_size: g_order / pr.stab_order,
        }
    }
}

/// A parent orbit awaiting fiber expansion: its level point, stabilizer
/// generators, and stabilizer order.
struct Parent {
    pt: Vec<u16>,
    gens: Vec<GfMatrix>,
    order: u64,
}

pub fn orbits_filtration_stream(
    group: &GroupSpec,
    patch: &AffinePatch,
    filt: &Filtration,
    opts: &RunOptions,
    sink: &mut dyn FnMut(OrbitRecord),
) -> Result<RunStats, OrbitalError> {
    let basis = Arc::clone(patch.base().basis());
    let ctx = RunCtx::new(group, &basis, filt)?;
    ctx.validate_patch(patch)?;
    let l = filt.len();
    if l > 0 && !filt.w(l).is_subspace_of(patch.direction()) {
        return Err(OrbitalError::InvalidPatch(
            "patch is not saturated by the last filtration stage (X + W_l != X)".into(),
        ));
    }
    let g_order = group
        .order_u64()
        .ok_or_else(|| OrbitalError::OrderTooLarge(group.order().to_string()))?;

    let mut stats = RunStats::default();

    // Base case: orbits on the patch projected modulo W_l.
    let base_x0 = ctx.lvls[l].qmap.project_form(patch.base());
    let base_dirs: Vec<Vec<u16>> = (0..patch.direction().dim())
        .map(|i| ctx.lvls[l].qmap.project_vec(patch.direction().basis_vec(i)))
        .collect();
    let top = ctx.build_fiber(l, base_x0, &base_dirs, group.generators(), opts.patch_limit)?;
    let mut parents: Vec<Parent> = Vec::new();
    {
        let mut records = 0u64;
        if l == 0 {
            top.enumerate(g_order, opts.patch_limit, |pr| {
                let rep = top.point_of(pr.code);
                sink(ctx.make_record(g_order, &rep, pr));
                records += 1;
            })?;
        } else {
            top.enumerate(g_order, opts.patch_limit, |pr| {
                parents.push(Parent {
                    pt: top.point_of(pr.code),
                    gens: pr.stab_gens,
                    order: pr.stab_order,
                });
                records += 1;
            })?;
        }
        stats.levels.push(LevelStats {
            space_dim: ctx.lvls[l].dim,
            parents: 1,
            records,
            fiber_work: g_order as u128 * records as u128,
        });
        if l == 0 {
            stats.records = records;
            return Ok(stats);
        }
    }

    for j in (0..l).rev() {
        let dirs = ctx.fiber_dirs(j).to_vec();
        let n_parents = parents.len() as u64;
        let mut level_records = 0u64;
        let mut fiber_work = 0u128;
        let workers = opts.workers.max(1);
        let mut next_parents: Vec<Parent> = Vec::new();
        if workers == 1 {
            for parent in parents.drain(..) {
                let x0 = ctx.lift_point(j, &parent.pt);
                let fiber = ctx.build_fiber(j, x0, &dirs, &parent.gens, opts.patch_limit)?;
                let mut recs = 0u64;
                if j == 0 {
                    fiber.enumerate(parent.order, opts.patch_limit, |pr| {
                        let rep = fiber.point_of(pr.code);
                        sink(ctx.make_record(g_order, &rep, pr));
                        recs += 1;
                    })?;
                } else {
                    fiber.enumerate(parent.order, opts.patch_limit, |pr| {
                        next_parents.push(Parent {
                            pt: fiber.point_of(pr.code),
                            gens: pr.stab_gens,
                            order: pr.stab_order,
                        });
                        recs += 1;
                    })?;
                }
                level_records += recs;
                fiber_work += parent.order as u128 * recs as u128;
            }
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| OrbitalError::Format(format!("thread pool: {e}")))?;
            // Fibers over distinct parents are independent; results are
            // collected in parent order, so output does not depend on
            // scheduling.
            type FiberOut = (Vec<Parent>, Vec<OrbitRecord>, u64, u128);
            let results: Result<Vec<FiberOut>, OrbitalError> = pool.install(|| {
                parents
                    .par_drain(..)
                    .map(|parent| {
                        let x0 = ctx.lift_point(j, &parent.pt);
                        let fiber =
                            ctx.build_fiber(j, x0, &dirs, &parent.gens, opts.patch_limit)?;
                        let mut kids = Vec::new();
                        let mut recs = Vec::new();
                        let mut count = 0u64;
                        if j == 0 {
                            fiber.enumerate(parent.order, opts.patch_limit, |pr| {
                                let rep = fiber.point_of(pr.code);
                                recs.push(ctx.make_record(g_order, &rep, pr));
                                count += 1;
                            })?;
                        } else {
                            fiber.enumerate(parent.order, opts.patch_limit, |pr| {
                                kids.push(Parent {
                                    pt: fiber.point_of(pr.code),
                                    gens: pr.stab_gens,
                                    order: pr.stab_order,
                                });
                                count += 1;
                            })?;
                        }
                        let work = parent.order as u128 * count as u128;
                        Ok((kids, recs, count, work))
                    })
                    .collect()
            });
            for (kids, recs, count, work) in results? {
                level_records += count;
                fiber_work += work;
                next_parents.extend(kids);
                for r in recs {
                    sink(r);
                }
            }
        }
        stats.levels.push(LevelStats {
            space_dim: ctx.lvls[j].dim,
            parents: n_parents,
            records: level_records,
            fiber_work,
        });
        parents = next_parents;
        if j == 0 {
            stats.records = level_records;
        }
    }
    Ok(stats)
}

pub fn orbits_filtration(
    group: &GroupSpec,
    patch: &AffinePatch,
    filt: &Filtration,
) -> Result<Vec<OrbitRecord>, OrbitalError> {
    let mut out = Vec::new();
    orbits_filtration_stream(group, patch, filt, &RunOptions::default(), &mut |r| {
        out.push(r)
    })?;
    Ok(out)
}

/// Ground-truth baseline: BFS closure directly on the patch.
pub fn orbit_partition_naive(
    group: &GroupSpec,
    patch: &AffinePatch,
) -> Result<Vec<OrbitRecord>, OrbitalError> {
    orbit_partition_naive_with(group, patch, &RunOptions::default())
}

pub fn orbit_partition_naive_with(
    group: &GroupSpec,
    patch: &AffinePatch,
    opts: &RunOptions,
) -> Result<Vec<OrbitRecord>, OrbitalError> {
    let filt = Filtration::empty();
    let mut out = Vec::new();
    orbits_filtration_stream(group, patch, &filt, opts, &mut |r| out.push(r))?;
    Ok(out)
}

/// Average stabilizer order e_G(X) = (1/|X|) * sum over x of |G_x|,
/// computed from orbit records as sum |G_x| * |orbit| / |X|. Errors unless
/// the records exactly partition X and each record satisfies
/// orbit-stabilizer for the given group order.
pub fn expected_stabilizer(
    records: &[OrbitRecord],
    group_order: &BigUint,
    set_size: &BigUint,
) -> Result<BigRational, OrbitalError> {
    let mut covered = BigUint::zero();
    let mut weighted = BigUint::zero();
    for (i, r) in records.iter().enumerate() {
        let check = BigUint::from(r.stab_order) * BigUint::from(r.orbit_size);
        if &check != group_order {
            return Err(OrbitalError::InconsistentRecords(format!(
                "record {i}: stab {} * orbit {} != group order {}",
                r.stab_order, r.orbit_size, group_order
            )));
        }
        covered += BigUint::from(r.orbit_size);
        weighted += check;
    }
    if &covered != set_size {
        return Err(OrbitalError::InconsistentRecords(format!(
            "orbit sizes cover {covered} points, expected {set_size}"
        )));
    }
    let e = BigRational::new(weighted.clone().into(), set_size.clone().into());
    // |X/G| = e_G(X) * |X| / |G| must hold exactly.
    let lhs = BigRational::from_integer(BigUint::from(records.len() as u64).into());
    let rhs = e.clone() * BigRational::new(set_size.clone().into(), group_order.clone().into());
    if lhs != rhs {
        return Err(OrbitalError::InconsistentRecords(
            "orbit count identity |X/G| = e_G(X)|X|/|G| fails".into(),
        ));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::burnside_count;
    use crate::group::StabChain;
    use symspace::{power_product_subspace, PowerPattern};

    fn setup(m: usize, d: u32, q: u32) -> (GroupSpec, Arc<MonomialBasis>, Arc<Field>) {
        let (p, e) = ffla::split_prime_power(q).unwrap();
        let field = Field::get(p, e).unwrap();
        let basis = MonomialBasis::new(m, d);
        let group = GroupSpec::full_gl(&field, m);
        (group, basis, field)
    }

    fn check_records(group: &GroupSpec, basis: &Arc<MonomialBasis>, records: &[OrbitRecord]) {
        let g_order = group.order_u64().unwrap();
        let mut covered = 0u64;
        for r in records {
            assert_eq!(r.stab_order * r.orbit_size, g_order);
            for g in &r.stab_gens {
                assert_eq!(&act(g, &r.rep).unwrap(), &r.rep, "stab gen must fix rep");
            }
            let mut chain = StabChain::new(group.field(), group.m());
            for g in &r.stab_gens {
                chain.insert(g);
            }
            assert_eq!(chain.order(), r.stab_order, "gens generate the stabilizer");
            covered += r.orbit_size;
        }
        let total = BigUint::from(group.field().q()).pow(basis.size() as u32);
        assert_eq!(BigUint::from(covered), total, "orbits partition the space");
    }

    #[test]
    fn linear_forms_split_into_zero_and_everything_else() {
        let (group, basis, field) = setup(3, 1, 2);
        let patch = AffinePatch::whole_space(&basis, &field);
        let mut recs = orbit_partition_naive(&group, &patch).unwrap();
        recs.sort_by_key(|r| r.orbit_size);
        assert_eq!(recs.len(), 2);
        assert!(recs[0].rep.is_zero());
        assert_eq!(recs[0].orbit_size, 1);
        assert_eq!(recs[0].stab_order, 168);
        assert_eq!(recs[1].orbit_size, 7);
        assert_eq!(recs[1].stab_order, 24);
    }

    #[test]
    fn naive_quadrics_match_burnside_and_partition() {
        let (group, basis, field) = setup(3, 2, 2);
        let patch = AffinePatch::whole_space(&basis, &field);
        let recs = orbit_partition_naive(&group, &patch).unwrap();
        let expected = burnside_count(&group, &basis).unwrap();
        assert_eq!(BigUint::from(recs.len() as u64), expected);
        check_records(&group, &basis, &recs);
    }

    #[test]
    fn naive_stabilizers_match_whole_group_scan() {
        let (group, basis, field) = setup(3, 3, 2);
        let patch = AffinePatch::whole_space(&basis, &field);
        let recs = orbit_partition_naive(&group, &patch).unwrap();
        check_records(&group, &basis, &recs);
        let all = ffla::brute_force_gl(&field, 3);
        assert_eq!(all.len(), 168);
        for r in &recs {
            let fixed = all
                .iter()
                .filter(|g| act(g, &r.rep).unwrap() == r.rep)
                .count() as u64;
            assert_eq!(fixed, r.stab_order);
        }
    }

    #[test]
    fn filtration_agrees_with_naive_on_ternary_cubics() {
        let (group, basis, field) = setup(3, 3, 2);
        let w1 = power_product_subspace(&basis, &field, &PowerPattern::Product(vec![3])).unwrap();
        let w2 =
            power_product_subspace(&basis, &field, &PowerPattern::Product(vec![1, 2])).unwrap();
        let filt = Filtration::new(&group, vec![w1, w2]).unwrap();
        let patch = AffinePatch::whole_space(&basis, &field);
        let by_filt = orbits_filtration(&group, &patch, &filt).unwrap();
        let naive = orbit_partition_naive(&group, &patch).unwrap();
        assert_eq!(by_filt.len(), naive.len());
        check_records(&group, &basis, &by_filt);
        let key = |r: &OrbitRecord| (r.orbit_size, r.stab_order);
        let mut a: Vec<_> = by_filt.iter().map(key).collect();
        let mut b: Vec<_> = naive.iter().map(key).collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);
    }

    #[test]
    fn generic_engine_handles_q3() {
        let (group, basis, field) = setup(2, 3, 3);
        // Over F_3 cubing is additive, so span{l^3} = span{x^3, y^3}.
        let w = power_product_subspace(&basis, &field, &PowerPattern::Product(vec![3])).unwrap();
        assert_eq!(w.dim(), 2);
        let filt = Filtration::new(&group, vec![w]).unwrap();
        let patch = AffinePatch::whole_space(&basis, &field);
        let by_filt = orbits_filtration(&group, &patch, &filt).unwrap();
        let naive = orbit_partition_naive(&group, &patch).unwrap();
        let expected = burnside_count(&group, &basis).unwrap();
        assert_eq!(BigUint::from(by_filt.len() as u64), expected);
        assert_eq!(by_filt.len(), naive.len());
        check_records(&group, &basis, &by_filt);
    }

    #[test]
    fn patch_smaller_than_space_enumerates_and_validates() {
        let (group, basis, field) = setup(3, 3, 2);
        let w1 = power_product_subspace(&basis, &field, &PowerPattern::Product(vec![3])).unwrap();
        let zero = Form::zero(Arc::clone(&basis), Arc::clone(&field));
        let patch = AffinePatch::new(zero, w1.clone()).unwrap();
        let recs = orbit_partition_naive(&group, &patch).unwrap();
        let covered: u64 = recs.iter().map(|r| r.orbit_size).sum();
        assert_eq!(covered, 1 << w1.dim());
        // A filtration stage outside the patch direction is rejected.
        let w2 =
            power_product_subspace(&basis, &field, &PowerPattern::Product(vec![1, 2])).unwrap();
        let filt = Filtration::new(&group, vec![w2]).unwrap();
        assert!(matches!(
            orbits_filtration(&group, &patch, &filt),
            Err(OrbitalError::InvalidPatch(_))
        ));
        // An unstable direction is rejected.
        let mut row = vec![0u16; basis.size()];
        row[0] = 1;
        let line = Subspace::from_rows(Arc::clone(&basis), Arc::clone(&field), [row]);
        let bad = AffinePatch::new(
            Form::zero(Arc::clone(&basis), Arc::clone(&field)),
            line,
        )
        .unwrap();
        assert!(matches!(
            orbit_partition_naive(&group, &bad),
            Err(OrbitalError::InvalidPatch(_))
        ));
    }

    #[test]
    fn oversized_patch_is_refused() {
        let (group, basis, field) = setup(6, 3, 2);
        let patch = AffinePatch::whole_space(&basis, &field);
        assert!(matches!(
            orbit_partition_naive(&group, &patch),
            Err(OrbitalError::ThresholdExceeded { .. })
        ));
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let (group, basis, field) = setup(3, 3, 2);
        let w1 = power_product_subspace(&basis, &field, &PowerPattern::Product(vec![3])).unwrap();
        let w2 =
            power_product_subspace(&basis, &field, &PowerPattern::Product(vec![1, 2])).unwrap();
        let filt = Filtration::new(&group, vec![w1, w2]).unwrap();
        let patch = AffinePatch::whole_space(&basis, &field);
        let mut serial = Vec::new();
        let opts1 = RunOptions { workers: 1, ..Default::default() };
        orbits_filtration_stream(&group, &patch, &filt, &opts1, &mut |r| serial.push(r)).unwrap();
        let mut parallel = Vec::new();
        let opts2 = RunOptions { workers: 2, ..Default::default() };
        orbits_filtration_stream(&group, &patch, &filt, &opts2, &mut |r| parallel.push(r))
            .unwrap();
        assert_eq!(serial.len(), parallel.len());
        for (a, b) in serial.iter().zip(&parallel) {
            assert_eq!(a.rep, b.rep);
            assert_eq!(a.stab_order, b.stab_order);
            assert_eq!(a.orbit_size, b.orbit_size);
        }
    }

    #[test]
    fn expected_stabilizer_validates_and_computes() {
        let (group, basis, field) = setup(3, 2, 2);
        let patch = AffinePatch::whole_space(&basis, &field);
        let mut recs = orbit_partition_naive(&group, &patch).unwrap();
        let set_size = BigUint::from(64u32);
        let e = expected_stabilizer(&recs, group.order(), &set_size).unwrap();
        // e * |X| / |G| = number of orbits.
        let orbits = e * BigRational::new(set_size.clone().into(), group.order().clone().into());
        assert_eq!(
            orbits,
            BigRational::from_integer(BigUint::from(recs.len() as u64).into())
        );
        assert!(matches!(
            expected_stabilizer(&recs, group.order(), &BigUint::from(65u32)),
            Err(OrbitalError::InconsistentRecords(_))
        ));
        recs[0].stab_order += 1;
        assert!(matches!(
            expected_stabilizer(&recs, group.order(), &set_size),
            Err(OrbitalError::InconsistentRecords(_))
        ));
    }

    #[test]
    fn trivial_group_emits_singletons() {
        let f2 = Field::get(2, 1).unwrap();
        let basis = MonomialBasis::new(2, 2);
        let group = GroupSpec::trivial(&f2, 2);
        let patch = AffinePatch::whole_space(&basis, &f2);
        let recs = orbit_partition_naive(&group, &patch).unwrap();
        assert_eq!(recs.len(), 8);
        assert!(recs.iter().all(|r| r.orbit_size == 1 && r.stab_order == 1));
    }
}
