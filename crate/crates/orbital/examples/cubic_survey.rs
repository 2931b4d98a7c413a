//! Small end-to-end survey: classify all cubic surfaces in P^3 over F_2 up
//! to linear change of coordinates, then compute stabilizers of three named
//! cubic fourfolds by descent. Prints counts, timings, and cross-checks.

use ffla::Field;
use orbital::{
    burnside_count, orbits_filtration, stabilizer, AffinePatch, Filtration, GroupSpec,
};
use std::time::Instant;
use symspace::{Form, MonomialBasis};

fn main() {
    let f2 = Field::get(2, 1).unwrap();

    // Census: quaternary cubics, 2^20 forms under GL_4(F_2).
    let basis = MonomialBasis::new(4, 3);
    let group = GroupSpec::full_gl(&f2, 4);
    let filt = Filtration::auto(&group, &basis, 40, 424242).unwrap();
    let dims: Vec<usize> = filt.subspaces().iter().map(|w| w.dim()).collect();
    println!("filtration stages (dims): {dims:?}");

    let t = Instant::now();
    let patch = AffinePatch::whole_space(&basis, &f2);
    let records = orbits_filtration(&group, &patch, &filt).unwrap();
    let elapsed = t.elapsed();
    let burnside = burnside_count(&group, &basis).unwrap();
    println!(
        "cubic surfaces / F_2: {} orbits in {elapsed:.2?} (Burnside check: {burnside})",
        records.len()
    );
    let covered: u64 = records.iter().map(|r| r.orbit_size).sum();
    println!("orbit sizes sum to {covered} = 2^20: {}", covered == 1 << 20);
    let nontrivial = records.iter().filter(|r| r.stab_order > 1).count();
    println!("orbits with nontrivial stabilizer: {nontrivial}");

    // Descent: stabilizers of named cubic fourfolds, far beyond naive reach.
    let basis6 = MonomialBasis::new(6, 3);
    let group6 = GroupSpec::full_gl(&f2, 6);
    let filt6 = Filtration::auto(&group6, &basis6, 40, 424242).unwrap();
    for (name, text) in [
        ("triple hyperplane x0^3", "x0^3"),
        (
            "hermitian-type cubic",
            "x0*x3^2 + x1*x4^2 + x2*x5^2 + x0^2*x3 + x1^2*x4 + x2^2*x5",
        ),
        ("fermat cubic", "x0^3+x1^3+x2^3+x3^3+x4^3+x5^3"),
    ] {
        let f = Form::parse(&basis6, &f2, text).unwrap();
        let t = Instant::now();
        let (gens, order) = stabilizer(&f, &filt6, &group6).unwrap();
        println!(
            "{name}: stabilizer order {order} ({} generators, {:.2?})",
            gens.len(),
            t.elapsed()
        );
    }
}
