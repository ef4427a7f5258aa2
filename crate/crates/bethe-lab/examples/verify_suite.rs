//! The exact identity suite, and a single (m, n) slice of it.

use bethe_lab::cli::{verify_at, verify_suite, VerifyLevel};

fn main() {
    let report = verify_suite(VerifyLevel::Fast);
    for r in &report.identities {
        println!("{} {}", if r.pass { "ok  " } else { "FAIL" }, r.identity);
    }
    println!("fast: {}/{} in {:.2} s", report.passed, report.identities.len(), report.seconds);

    let slice = verify_at(3, 1);
    println!("(m, n) = (3, 1): {}/{} pass", slice.passed, slice.identities.len());
}
