//! Point operations by descent through a filtration: exact stabilizers of a
//! single form, and explicit equivalence tests.
//!
//! Both walk the quotient tower top-down. At each level the relevant orbit
//! is confined to one fiber (the stabilizer of the level-(j+1) image acts
//! on the fiber over it), so no level requires more than one fiber's worth
//! of BFS.

use crate::filtration::Filtration;
use crate::group::GroupSpec;
use crate::run::{AffinePatch, RunCtx, RunOptions};
use crate::OrbitalError;
use ffla::GfMatrix;
use std::sync::Arc;
use symspace::{act, Form};

/// Exact stabilizer (generators, order) of a form under the group, using
/// the filtration to keep each BFS inside a single fiber.
pub fn stabilizer(
    f: &Form,
    filt: &Filtration,
    group: &GroupSpec,
) -> Result<(Vec<GfMatrix>, u64), OrbitalError> {
    let basis = f.basis().clone();
    let ctx = RunCtx::new(group, &basis, filt)?;
    let patch = AffinePatch::whole_space(&basis, group.field());
    ctx.validate_patch(&patch)?;
    let limit = RunOptions::default().patch_limit;
    let l = ctx.levels();
    let mut gens: Vec<GfMatrix> = group.generators().to_vec();
    let mut order = group
        .order_u64()
        .ok_or_else(|| OrbitalError::OrderTooLarge(group.order().to_string()))?;
    for j in (0..=l).rev() {
        if order == 1 {
            return Ok((Vec::new(), 1));
        }
        let fiber = if j == l {
            ctx.build_fiber(l, vec![0u16; ctx.level_dim(l)], &ctx.full_dirs(l), &gens, limit)?
        } else {
            let parent_pt = ctx.project_form(j + 1, f);
            let x0 = ctx.lift_point(j, &parent_pt);
            ctx.build_fiber(j, x0, ctx.fiber_dirs(j), &gens, limit)?
        };
        let pt = ctx.project_form(j, f);
        let code = fiber
            .code_of(&pt)
            .expect("form projects into its own fiber");
        let (sg, so) = fiber.point_stabilizer(code, order);
        gens = sg;
        order = so;
    }
    Ok((gens, order))
}

/// Explicit equivalence: Some(g) with act(g, f1) == f2, or None. Both forms
/// are canonicalized by descending the filtration, at each level moving to
/// the least point of the current orbit; the transporters compose to an
/// explicit witness.
pub fn is_equivalent(
    f1: &Form,
    f2: &Form,
    filt: &Filtration,
    group: &GroupSpec,
) -> Result<Option<GfMatrix>, OrbitalError> {
    if f1.basis() != f2.basis() || f1.field().q() != f2.field().q() {
        return Err(OrbitalError::InvalidPatch(
            "forms live in different spaces".into(),
        ));
    }
    let basis = f1.basis().clone();
    let ctx = RunCtx::new(group, &basis, filt)?;
    let patch = AffinePatch::whole_space(&basis, group.field());
    ctx.validate_patch(&patch)?;
    let limit = RunOptions::default().patch_limit;
    let l = ctx.levels();
    let field = group.field();
    let mut cur1 = f1.clone();
    let mut cur2 = f2.clone();
    let mut w1 = GfMatrix::identity(Arc::clone(field), group.m());
    let mut w2 = GfMatrix::identity(Arc::clone(field), group.m());
    let mut gens: Vec<GfMatrix> = group.generators().to_vec();
    let mut order = group
        .order_u64()
        .ok_or_else(|| OrbitalError::OrderTooLarge(group.order().to_string()))?;
    for j in (0..=l).rev() {
        if order == 1 {
            // Remaining orbits are singletons: equivalent iff already equal.
            break;
        }
        // After the previous level both forms project to the same point, so
        // one fiber serves both.
        let fiber = if j == l {
            ctx.build_fiber(l, vec![0u16; ctx.level_dim(l)], &ctx.full_dirs(l), &gens, limit)?
        } else {
            let parent_pt = ctx.project_form(j + 1, &cur1);
            debug_assert_eq!(parent_pt, ctx.project_form(j + 1, &cur2));
            let x0 = ctx.lift_point(j, &parent_pt);
            ctx.build_fiber(j, x0, ctx.fiber_dirs(j), &gens, limit)?
        };
        let c1 = fiber
            .code_of(&ctx.project_form(j, &cur1))
            .expect("form projects into its own fiber");
        let c2 = fiber
            .code_of(&ctx.project_form(j, &cur2))
            .expect("form projects into its own fiber");
        let (min1, t1, len1) = fiber.orbit_min(c1);
        let (min2, t2, len2) = fiber.orbit_min(c2);
        if min1 != min2 {
            return Ok(None);
        }
        assert_eq!(len1, len2, "one orbit, one size");
        cur1 = act(&t1, &cur1)?;
        cur2 = act(&t2, &cur2)?;
        w1 = w1.mul(&t1);
        w2 = w2.mul(&t2);
        assert_eq!(order % len1, 0);
        let (sg, so) = fiber.point_stabilizer(min1, order);
        gens = sg;
        order = so;
    }
    if cur1 != cur2 {
        return Ok(None);
    }
    let g = w1.mul(&w2.invert().expect("group element invertible"));
    let moved = act(&g, f1)?;
    assert_eq!(&moved, f2, "transporter witnesses the equivalence");
    Ok(Some(g))
}
