//! Clique numbers of Paley-type sum graphs, with the subfield test for
//! the maximum cliques of GPS(121, 3).

use rsl::cayley::{build_gps, build_variant, classify_ekr, enumerate_max_cliques, max_clique, PaleyVariant};
use rsl::clique::SearchOpts;
use rsl::make_field;

fn main() -> rsl::Result<()> {
    let opts = SearchOpts::default();

    let f343 = make_field(7, 3)?;
    let r = max_clique(&build_gps(&f343, 2, true)?, &opts)?;
    println!("sum graph on S_2, q = 343: omega = {}, witness {:?}", r.omega, r.witnesses[0]);

    let f25 = make_field(5, 2)?;
    let r = enumerate_max_cliques(&build_gps(&f25, 2, false)?, &opts)?;
    println!("GPS(25,2): {} maximum cliques of size {}", r.witnesses.len(), r.omega);

    let f121 = make_field(11, 2)?;
    let r = enumerate_max_cliques(&build_gps(&f121, 3, false)?, &opts)?;
    for (w, class) in r.witnesses.iter().zip(classify_ekr(&f121, 3, &r)?) {
        println!("GPS(121,3) clique {w:?}: {class:?}");
    }

    for p in [13, 17, 29, 37, 41] {
        let ctx = make_field(p, 1)?;
        let gp = max_clique(&build_variant(&ctx, 2, PaleyVariant::Gp)?, &opts)?;
        let gps = max_clique(&build_variant(&ctx, 2, PaleyVariant::Gps)?, &opts)?;
        println!("p = {p}: omega(GP) = {}, omega(GPS) = {}", gp.omega, gps.omega);
    }
    Ok(())
}
