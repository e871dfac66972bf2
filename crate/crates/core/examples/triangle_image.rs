//! Filter strata and barcode strata of the boundary of a triangle.

use phfiber::cli::parse_complex;
use phfiber::field::FieldSpec;
use phfiber::strata::{enumerate_filter_strata, image_records, StratumMode};

fn main() -> phfiber::error::Result<()> {
    let k = parse_complex(include_str!("../data/triangle.complex.json"))?;
    let strata = enumerate_filter_strata(&k, StratumMode::Interior)?;
    let injective = strata
        .iter()
        .filter(|s| s.blocks().iter().all(|b| b.len() == 1))
        .count();
    println!(
        "{} interior filter strata, {injective} of them injective",
        strata.len()
    );

    let (_, records) = image_records(&k, StratumMode::Interior, FieldSpec::F2)?;
    println!("{} barcode strata:", records.len());
    for r in &records {
        println!(
            "  codim {}  deficit {:>3}  {:>3} strata  {}",
            r.codim,
            r.bounded_deficit().to_string(),
            r.member_strata.len(),
            r.barcode_type
        );
    }
    Ok(())
}
