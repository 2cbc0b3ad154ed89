//! Runs the built-in invariant checks, optionally only those whose name contains a filter.
//!
//!     cargo run --release --example self_check -- derivative

use squeezesense::validation::{checks, run};

fn main() {
    let filter = std::env::args().nth(1).unwrap_or_default();
    let mut failed = 0;
    for check in checks().iter().filter(|c| c.name.contains(filter.as_str())) {
        let outcome = run(check);
        println!("{} {}: {}", if outcome.passed { "ok  " } else { "FAIL" }, outcome.name, outcome.detail);
        failed += usize::from(!outcome.passed);
    }
    std::process::exit(i32::from(failed > 0));
}
