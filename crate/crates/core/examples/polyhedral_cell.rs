//! One cell of a fiber on a path with five vertices: its gap shape, its
//! vertices as rank vectors, and the triangles that cut it up.

use phfiber::cli::parse_complex;
use phfiber::fiber::{fiber_complex, rank_vector_label, triangulate_fiber};
use phfiber::field::FieldSpec;
use phfiber::strata::FilterStratum;

fn main() -> phfiber::error::Result<()> {
    let k = parse_complex(include_str!("../data/path5.complex.json"))?;
    let fc = fiber_complex(&k, &"0:(zero,inf),(1,2)".parse()?, FieldSpec::F2)?;
    // a at 0; then b with ab; then d; then c with bc and cd; then e with de
    let st = FilterStratum::new(
        &k,
        vec![vec![0], vec![1, 5], vec![3], vec![2, 6, 7], vec![4, 8]],
        true,
        false,
    )?;
    let id = fc.cell_of(&st).expect("the stratum lies over this type");
    let cell = &fc.cells[id];
    println!(
        "cell {}: dim {}, gap shape {:?}",
        cell.stratum, cell.dim, cell.gap_shape
    );
    for &v in &cell.vertices {
        println!(
            "  vertex ({})",
            rank_vector_label(&fc.vertices[v].rank_vector)
        );
    }
    let cofaces = fc.face_relation.iter().filter(|(f, _)| *f == id).count();
    println!("it is a facet of {cofaces} larger cells");
    // the staircase triangulation cuts the square into two triangles
    let tf = triangulate_fiber(&fc)?;
    let on_cell = |s: &&phfiber::complex::Simplex| {
        s.vertices()
            .iter()
            .all(|v| cell.vertices.contains(&(*v as usize)))
    };
    let triangles = tf
        .complex
        .simplices()
        .iter()
        .filter(|s| s.dim() == 2)
        .filter(on_cell)
        .count();
    println!("{triangles} triangles of the triangulation lie on it");
    println!(
        "whole fiber: {} cells, euler characteristic {}",
        fc.cells.len(),
        fc.euler_characteristic()
    );
    Ok(())
}
