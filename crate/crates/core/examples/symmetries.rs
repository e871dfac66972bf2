//! The automorphism group of the triangle acting on the fiber over D_2: even
//! permutations keep each of its two components, odd ones swap them.

use phfiber::analysis::{orbit_table, symmetry_action_on_fiber};
use phfiber::cli::parse_complex;
use phfiber::complex::automorphisms;
use phfiber::fiber::fiber_complex;
use phfiber::field::FieldSpec;

fn main() -> phfiber::error::Result<()> {
    let k = parse_complex(include_str!("../data/triangle.complex.json"))?;
    let fc = fiber_complex(&k, &"0:(1,inf),(2,3);1:(4,inf)".parse()?, FieldSpec::F2)?;
    let comps = fc.components();
    for s in automorphisms(&k) {
        let a = symmetry_action_on_fiber(&k, &fc, &s)?;
        let v = fc.vertices[0].cell;
        let swaps = comps[a.cell_map[v]] != comps[v];
        println!(
            "{:?} even={} swaps components={swaps}",
            s.images,
            s.is_even(&k)
        );
    }
    let table = orbit_table(&k, &fc)?;
    for o in &table.orbits {
        println!(
            "orbit of {} cells of dim {} shape {:?}",
            o.cells.len(),
            o.dim,
            o.gap_shape
        );
    }
    Ok(())
}
