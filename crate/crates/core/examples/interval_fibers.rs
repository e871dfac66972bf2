//! Fibers over the three barcode types of an interval whose bounded bar
//! starts at or after the essential one.

use phfiber::cli::parse_complex;
use phfiber::fiber::{fiber_complex, fiber_dimension, fiber_homology, triangulate_fiber};
use phfiber::field::FieldSpec;

fn main() -> phfiber::error::Result<()> {
    let k = parse_complex(include_str!("../data/interval.complex.json"))?;
    for (label, t) in [
        ("x1 < x2 < x3", "0:(1,inf),(2,3)"),
        ("x1 = x2 < x3", "0:(1,inf),(1,2)"),
        ("x1 < x2 = x3", "0:(1,inf)"),
    ] {
        let fc = fiber_complex(&k, &t.parse()?, FieldSpec::F2)?;
        let betti = fiber_homology(&triangulate_fiber(&fc)?, FieldSpec::F2);
        println!(
            "{label}: {} vertices, {} edges, dimension {}, betti {betti:?}",
            fc.vertices.len(),
            fc.cells_of_dim(1).count(),
            fiber_dimension(&fc)
        );
        for c in &fc.cells {
            println!("    {}  dim {}", c.stratum, c.dim);
        }
    }
    Ok(())
}
