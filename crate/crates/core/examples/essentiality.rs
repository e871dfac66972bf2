//! Removable subsets: the interval collapses to a point, while the triangle
//! and a wedge of two triangles have none.

use phfiber::analysis::{is_essential, is_removable, DEFAULT_BUDGET};
use phfiber::cli::parse_complex;
use phfiber::field::FieldSpec;

fn main() -> phfiber::error::Result<()> {
    let f2 = FieldSpec::F2;
    for (name, json) in [
        ("interval", include_str!("../data/interval.complex.json")),
        ("triangle", include_str!("../data/triangle.complex.json")),
        ("wedge", include_str!("../data/wedge.complex.json")),
    ] {
        let k = parse_complex(json)?;
        let r = is_essential(&k, f2, DEFAULT_BUDGET)?;
        match &r.witness {
            None => println!(
                "{name}: essential ({} subcomplexes checked)",
                r.candidates_checked
            ),
            Some(w) => {
                let simplices: Vec<String> =
                    w.subset.iter().map(|&s| k.simplex(s).to_string()).collect();
                println!("{name}: removable {}", simplices.join(" "));
            }
        }
    }

    let interval = parse_complex(include_str!("../data/interval.complex.json"))?;
    // dropping only the edge changes H_0
    println!(
        "interval minus edge: {:?}",
        is_removable(&interval, &[2], f2)?
    );
    Ok(())
}
