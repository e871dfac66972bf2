//! Lower-star filters on the triangle: extension from vertex values, the two
//! barcode strata they reach, and their fibers.

use std::collections::BTreeMap;

use num::BigRational;
use phfiber::analysis::lower_star_extension;
use phfiber::cli::parse_complex;
use phfiber::fiber::{fiber_complex_with_mode, fiber_homology, triangulate_fiber, FiberMode};
use phfiber::field::FieldSpec;
use phfiber::persistence::barcode_of_filter;
use phfiber::strata::{image_records, StratumMode};

fn main() -> phfiber::error::Result<()> {
    let k = parse_complex(include_str!("../data/triangle.complex.json"))?;
    let values: BTreeMap<u32, BigRational> = [(0, (1, 4)), (1, (1, 2)), (2, (3, 4))]
        .into_iter()
        .map(|(v, (n, d))| (v, BigRational::new(n.into(), d.into())))
        .collect();
    let f = lower_star_extension(&k, &values)?;
    println!(
        "lower-star filter {:?}",
        f.values().iter().map(|x| x.to_string()).collect::<Vec<_>>()
    );
    println!("barcode {}", barcode_of_filter(&k, &f, FieldSpec::F2)?);

    let (_, records) = image_records(&k, StratumMode::LowerStar, FieldSpec::F2)?;
    for r in records {
        let fc = fiber_complex_with_mode(&k, &r.barcode_type, FieldSpec::F2, FiberMode::LowerStar)?;
        let betti = fiber_homology(&triangulate_fiber(&fc)?, FieldSpec::F2);
        println!(
            "{}: {} vertices, {} edges, betti {betti:?}",
            r.barcode_type,
            fc.vertices.len(),
            fc.cells_of_dim(1).count()
        );
    }
    Ok(())
}
