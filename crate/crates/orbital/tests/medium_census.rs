//! End-to-end checks on cubic surfaces: Sym^3(F_2^4) has dimension 20, so
//! both the naive partition (2^20 forms) and the filtration recursion are
//! feasible and must agree with each other and with the Burnside count.

use ffla::Field;
use num_bigint::BigUint;
use num_rational::BigRational;
use orbital::{
    burnside_count, expected_stabilizer, orbit_partition_naive, orbits_filtration,
    orbits_filtration_stream, read_ocf1, write_ocf1, AffinePatch, Filtration, GroupSpec,
    OcfHeader, OcfRecord, OrbitRecord, RunOptions,
};
use std::sync::Arc;
use symspace::{act, Form, MonomialBasis};

fn setup() -> (GroupSpec, Arc<MonomialBasis>, Arc<Field>, Filtration) {
    let f2 = Field::get(2, 1).unwrap();
    let basis = MonomialBasis::new(4, 3);
    let group = GroupSpec::full_gl(&f2, 4);
    let filt = Filtration::auto(&group, &basis, 40, 424242).unwrap();
    (group, basis, f2, filt)
}

#[test]
fn census_agrees_with_naive_and_burnside() {
    let (group, basis, field, filt) = setup();
    assert!(filt.len() >= 2, "auto found a usable chain");
    let patch = AffinePatch::whole_space(&basis, &field);

    let by_filt = orbits_filtration(&group, &patch, &filt).unwrap();
    let expected = burnside_count(&group, &basis).unwrap();
    assert_eq!(BigUint::from(by_filt.len() as u64), expected);

    let naive = orbit_partition_naive(&group, &patch).unwrap();
    assert_eq!(naive.len(), by_filt.len());
    let key = |r: &OrbitRecord| (r.orbit_size, r.stab_order);
    let mut a: Vec<_> = by_filt.iter().map(key).collect();
    let mut b: Vec<_> = naive.iter().map(key).collect();
    a.sort_unstable();
    b.sort_unstable();
    assert_eq!(a, b);

    // Records satisfy orbit-stabilizer and partition the space.
    let g_order = group.order_u64().unwrap();
    let mut covered = 0u64;
    for r in &by_filt {
        assert_eq!(r.stab_order * r.orbit_size, g_order);
        for g in &r.stab_gens {
            assert_eq!(act(g, &r.rep).unwrap(), r.rep);
        }
        covered += r.orbit_size;
    }
    assert_eq!(covered, 1u64 << 20);

    // Average stabilizer order, with the orbit-count identity verified
    // exactly inside expected_stabilizer.
    let set_size = BigUint::from(1u64 << 20);
    let e = expected_stabilizer(&by_filt, group.order(), &set_size).unwrap();
    let orbits = e * BigRational::new(set_size.into(), group.order().clone().into());
    assert_eq!(
        orbits,
        BigRational::from_integer(BigUint::from(by_filt.len() as u64).into())
    );
}

#[test]
fn fiber_work_respects_runtime_bound() {
    let (group, basis, field, filt) = setup();
    let patch = AffinePatch::whole_space(&basis, &field);
    let mut n = 0u64;
    let stats = orbits_filtration_stream(
        &group,
        &patch,
        &filt,
        &RunOptions::default(),
        &mut |_| n += 1,
    )
    .unwrap();
    assert_eq!(stats.records, n);
    let g_order = group.order_u64().unwrap() as u128;
    let l = filt.len();
    // stats.levels[0] is the base case; level index i >= 1 holds the fiber
    // pass at quotient level j = l - i, whose fiber module is W_{j+1}/W_j.
    for (i, lv) in stats.levels.iter().enumerate().skip(1) {
        let j = l - i;
        // |W/G| for W = W_{j+1}/W_j: enumerate the patch W_{j+1} modulo the
        // sub-filtration [W_j]; the base-case records of that run are
        // exactly the orbits of the fiber module.
        let zero = Form::zero(Arc::clone(&basis), Arc::clone(&field));
        let sub_patch = AffinePatch::new(zero, filt.w(j + 1).clone()).unwrap();
        let sub_filt = if j == 0 {
            Filtration::empty()
        } else {
            Filtration::new(&group, vec![filt.w(j).clone()]).unwrap()
        };
        let sub_stats = orbits_filtration_stream(
            &group,
            &sub_patch,
            &sub_filt,
            &RunOptions::default(),
            &mut |_| {},
        )
        .unwrap();
        let w_orbits = sub_stats.levels[0].records as u128;
        let bound = w_orbits * lv.parents as u128 * g_order;
        assert!(
            lv.fiber_work <= bound,
            "level {j}: work {} exceeds |W/G| * |U/G| * |G| = {bound}",
            lv.fiber_work
        );
    }
}

#[test]
fn ocf_round_trips_real_records() {
    let (group, basis, field, filt) = setup();
    let patch = AffinePatch::whole_space(&basis, &field);
    let records = orbits_filtration(&group, &patch, &filt).unwrap();
    let header = OcfHeader {
        m: 4,
        d: 3,
        q: 2,
        count: records.len() as u64,
    };
    let mut buf = Vec::new();
    write_ocf1(
        &mut buf,
        header,
        records.iter().map(OcfRecord::from_orbit),
    )
    .unwrap();
    let (h2, stored) = read_ocf1(buf.as_slice()).unwrap();
    assert_eq!(h2, header);
    assert_eq!(stored.len(), records.len());
    for (s, r) in stored.iter().zip(&records) {
        assert_eq!(s.to_form(&basis, &field), r.rep);
        assert_eq!(s.stab_order, r.stab_order);
        let gens = s.gens_matrices(&field, 4);
        assert_eq!(gens.len(), r.stab_gens.len());
        for (g, h) in gens.iter().zip(&r.stab_gens) {
            assert_eq!(g, h);
        }
    }
}
