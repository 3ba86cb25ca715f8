//! Searches for A with A +^ A = S_d, then checks the structure of each
//! solution found.

use rsl::clique::SearchOpts;
use rsl::decomp::{check_sidon_structure, check_twice_square, full_sumset_instance, search_decomposition};
use rsl::{make_field, nt, ElemSet};

fn main() -> rsl::Result<()> {
    let opts = SearchOpts::default();
    for q in nt::odd_prime_powers(3, 125) {
        let (p, k) = nt::prime_power(q).unwrap();
        let ctx = make_field(p, k)?;
        let r = search_decomposition(&ctx, 2, &opts)?;
        for s in &r.solutions {
            let v = check_sidon_structure(&ctx, 2, &ElemSet::from_indices(q as usize, s.iter().copied()))?;
            println!("q = {q}: {s:?} sidon {:?}, q formula {:?}", v.sidon, v.q_formula);
        }
    }

    let v = check_twice_square(&make_field(19, 2)?, 18, &opts)?;
    println!("q = 361, d = 18: {} solutions, {} nodes", v.solutions, v.stats.nodes_explored);

    let row = full_sumset_instance(&make_field(3, 4)?, 4, &opts)?;
    println!("q = 81, d = 4: A + A = S_d has {:?} solutions, A + A = S_d ∪ {{0}} has {:?}", row.plus_sd, row.plus_sd0);
    Ok(())
}
