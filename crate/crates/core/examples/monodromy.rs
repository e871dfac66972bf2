//! Morphism classes between adjacent barcode strata and the maps they induce
//! between fibers.

use phfiber::cli::parse_complex;
use phfiber::fiber::fiber_complex;
use phfiber::field::FieldSpec;
use phfiber::morphism::{
    compose_monodromies, decompose_codim1, enumerate_morphism_classes, monodromy_map,
};

fn main() -> phfiber::error::Result<()> {
    let k = parse_complex(include_str!("../data/triangle.complex.json"))?;
    let f2 = FieldSpec::F2;
    let d2 = "0:(1,inf),(2,3);1:(4,inf)".parse()?;
    let d3 = "0:(1,inf),(2,3);1:(3,inf)".parse()?;
    let d4 = "0:(1,inf);1:(2,inf)".parse()?;
    let fibers = [
        fiber_complex(&k, &d2, f2)?,
        fiber_complex(&k, &d3, f2)?,
        fiber_complex(&k, &d4, f2)?,
    ];

    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        let (a, b) = (&fibers[i].barcode_type, &fibers[j].barcode_type);
        for (n, c) in enumerate_morphism_classes(a, b).iter().enumerate() {
            let m = monodromy_map(&fibers[i], &fibers[j], c)?;
            println!(
                "{a} -> {b} class {n}: {}  collapses {} of {} edges, {} codim-one steps",
                c.representative,
                m.collapsed_of_dim(1),
                fibers[i].cells_of_dim(1).count(),
                decompose_codim1(c)?.len()
            );
        }
    }

    let first = &enumerate_morphism_classes(&d2, &d3)[0];
    let second = &enumerate_morphism_classes(&d3, &d4)[0];
    let m = compose_monodromies(
        &monodromy_map(&fibers[0], &fibers[1], first)?,
        &monodromy_map(&fibers[1], &fibers[2], second)?,
    )?;
    println!(
        "composite {} sends {} vertices onto {}",
        m.representative,
        m.vertex_map.len(),
        {
            let mut v = m.vertex_map.clone();
            v.sort_unstable();
            v.dedup();
            v.len()
        }
    );
    Ok(())
}
