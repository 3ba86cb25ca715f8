//! Auxiliary polynomial certificates for sets whose restricted sumset lies
//! in the squares.

use rsl::stepanov::{build_certificate, default_variant, Variant};
use rsl::{make_field, ElemSet};

fn main() -> rsl::Result<()> {
    let f13 = make_field(13, 1)?;
    let a = ElemSet::from_indices(13, [0, 1, 3, 9]);
    for variant in [Variant::EvenN, Variant::EvenNRefined] {
        let r = build_certificate(&f13, 2, &a, variant)?;
        println!(
            "{variant:?}: m = {:?}, degree {:?} <= {}, multiplicities ok: {}, ok: {}",
            r.m, r.degree, r.degree_bound, r.multiplicity_ok, r.ok
        );
        if let Some(c) = r.refined {
            println!("  refined conclusions: {c:?}");
        }
    }

    let f7 = make_field(7, 1)?;
    let a = ElemSet::from_indices(7, [3, 5, 6]);
    let r = build_certificate(&f7, 2, &a, default_variant(&a))?;
    println!("F_7 {{3,5,6}}: {:?}, coefficients {:?}, ok: {}", r.variant, r.coefficients, r.ok);
    Ok(())
}
