//! Fibers of the persistence map on the triangle: size, dimension and
//! homology of the staircase triangulation.

use phfiber::cli::parse_complex;
use phfiber::fiber::{
    boundary_circuits, fiber_complex, fiber_dimension, fiber_homology, triangulate_fiber,
};
use phfiber::field::FieldSpec;

const TYPES: &[(&str, &str)] = &[
    ("D_0 right", "0:(1,inf),(2,5),(3,4);1:(6,inf)"),
    ("D_2", "0:(1,inf),(2,3);1:(4,inf)"),
    ("D_3 mid", "0:(1,inf),(2,3);1:(3,inf)"),
    ("D_4 left", "0:(1,inf);1:(2,inf)"),
    ("D_4 right", "0:(1,inf),(1,2);1:(2,inf)"),
    ("D_5", "0:(1,inf);1:(1,inf)"),
];

fn main() -> phfiber::error::Result<()> {
    let k = parse_complex(include_str!("../data/triangle.complex.json"))?;
    for &(name, t) in TYPES {
        let fc = fiber_complex(&k, &t.parse()?, FieldSpec::F2)?;
        let tf = triangulate_fiber(&fc)?;
        let cells: Vec<usize> = (0..=fiber_dimension(&fc))
            .map(|d| fc.cells_of_dim(d).count())
            .collect();
        print!(
            "{name:<10} cells per dim {cells:?}  betti {:?}",
            fiber_homology(&tf, FieldSpec::F2)
        );
        if fiber_dimension(&fc) == 2 {
            print!("  boundary circuits {}", boundary_circuits(&tf)?);
        }
        println!();
    }
    Ok(())
}
