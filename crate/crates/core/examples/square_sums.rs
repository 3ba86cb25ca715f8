//! Integer sets whose pairwise sums are all squares: exact search for
//! small N, a known triple, and the larger sieve bound.

use num_bigint::BigUint;
use rsl::clique::SearchOpts;
use rsl::emint::{em_verify, gallagher_bound, genus_check, search_max_em_set};

fn main() -> rsl::Result<()> {
    for n in [50, 100, 1000] {
        let r = search_max_em_set(n, 2, &SearchOpts::default())?;
        println!("N = {n}: largest size {}, first witness {:?}", r.best_size, r.witnesses.first());
    }

    let v = em_verify(&[6u32, 19, 30].map(BigUint::from), 2)?;
    println!("{{6, 19, 30}}: {} pairs checked, ok: {}", v.pairs_checked, v.ok);

    for n in [10u64.pow(4), 10u64.pow(6), 10u64.pow(9)] {
        let b = gallagher_bound(n, 2, None)?;
        println!("N = {n}: bound {:?} over {} primes, log N = {:.3}", b.bound, b.primes_used, b.asymptote);
    }

    for (d, k) in [(2, 3), (3, 3), (8, 3)] {
        match genus_check(d, k) {
            Ok(g) => println!("d = {d}, k = {k}: genus {}", g.genus),
            Err(e) => println!("d = {d}, k = {k}: {e}"),
        }
    }
    Ok(())
}
