//! Smoothness, line counts, and conic-fiber tallies for named cubics.

use ffla::Field;
use hypergeo::{conic_points, is_smooth, singular_points, ConicData, IncidenceTable};
use std::time::Instant;
use symspace::{Form, MonomialBasis};

fn main() {
    let b = MonomialBasis::new(6, 3);
    let f2 = Field::get(2, 1).unwrap();

    let t0 = Instant::now();
    let table = IncidenceTable::new(&b, &f2);
    println!(
        "incidence table: {} lines, {} planes ({:.2?})",
        table.lines().len(),
        table.planes().len(),
        t0.elapsed()
    );

    let named = [
        ("x0^3", "x0^3"),
        (
            "hermitian-type",
            "x0*x3^2 + x1*x4^2 + x2*x5^2 + x0^2*x3 + x1^2*x4 + x2^2*x5",
        ),
        ("fermat", "x0^3 + x1^3 + x2^3 + x3^3 + x4^3 + x5^3"),
    ];
    for (name, text) in named {
        let f = Form::parse(&b, &f2, text).unwrap();
        let t = Instant::now();
        let smooth = is_smooth(&f);
        let lines = table.n_lines_on(&f);
        let planes = table.n_planes_on(&f);
        let sing = singular_points(&f, 1).len();
        println!(
            "{name}: smooth={smooth} lines={lines} planes={planes} singular_F2_points={sing} ({:.2?})",
            t.elapsed()
        );
    }

    // A conic bundle whose fibers we can tally over F_2 and F_4.
    let b1 = MonomialBasis::new(4, 1);
    let b2 = MonomialBasis::new(4, 2);
    let b3 = MonomialBasis::new(4, 3);
    let conic = ConicData::new(
        Form::parse(&b1, &f2, "x0").unwrap(),
        Form::parse(&b1, &f2, "x1").unwrap(),
        Form::parse(&b1, &f2, "x2").unwrap(),
        Form::parse(&b2, &f2, "x0*x3").unwrap(),
        Form::parse(&b2, &f2, "x1*x3 + x2^2").unwrap(),
        Form::parse(&b3, &f2, "x3^3 + x0*x1*x2").unwrap(),
    );
    for k in [1u32, 2] {
        let ext = Field::get(2, k).unwrap();
        let t = Instant::now();
        let total = conic_points(&conic, &ext);
        println!("conic bundle points over F_{}: {total} ({:.2?})", ext.q(), t.elapsed());
    }
}
