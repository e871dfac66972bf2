//! Barcode of a filter on the triangle, and how it moves under a
//! reparametrization of [0,1].

use num::BigRational;
use phfiber::barcode::CombinatorialBarcode;
use phfiber::cli::parse_complex;
use phfiber::field::FieldSpec;
use phfiber::persistence::{barcode_of_filter, Filter};

fn main() -> phfiber::error::Result<()> {
    let k = parse_complex(include_str!("../data/triangle.complex.json"))?;
    // vertices, then edges [0,1] [0,2] [1,2]
    let f = Filter::from_ratios(&k, &[(0, 1), (1, 5), (2, 5), (3, 5), (4, 5), (1, 1)])?;
    let b = barcode_of_filter(&k, &f, FieldSpec::F2)?;
    println!("barcode      {b}");
    println!("type         {}", CombinatorialBarcode::from_barcode(&b));
    println!("json         {}", serde_json::to_string(&b).unwrap());

    let square = |x: &BigRational| x * x;
    let g = f.reparametrize(&k, square)?;
    let moved = barcode_of_filter(&k, &g, FieldSpec::F2)?;
    println!("after x^2    {moved}");
    assert_eq!(moved, b.map_endpoints(square));
    Ok(())
}
