//! Runs the reduced-scale criteria suite and prints one line per row.

use std::time::Duration;

use rsl::reproduce::{run_suite, Suite};

fn main() {
    let report = run_suite(Suite::Quick, Duration::from_secs(60), true);
    for row in &report.rows {
        println!("{:>2} {} {}: {}", row.id, if row.pass { "PASS" } else { "FAIL" }, row.title, row.detail);
    }
    println!("{} passed, {} failed", report.passed, report.failed);
}
