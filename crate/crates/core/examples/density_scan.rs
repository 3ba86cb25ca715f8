//! Primes p ≡ 1 (mod 3) up to 10^5 whose square roots land in the
//! fractional window, with the digit conditions for s = 3.

use rsl::density::{empirical_density, scan};

fn main() -> rsl::Result<()> {
    for s in [1, 3] {
        let sum = empirical_density(3, s, 100_000)?;
        println!(
            "s = {s}: {} of {} primes, fraction {:.4}, predicted {:.4}",
            sum.d_tilde_hits, sum.primes, sum.fraction, sum.predicted
        );
    }
    for rec in scan(3, 3, 200)?.iter().filter(|r| r.in_window) {
        println!("p = {}: digits {:?}, in limiting set: {}, alpha_p = {}", rec.p, rec.digit_ok, rec.in_d_tilde, rec.alpha_p);
    }
    Ok(())
}
