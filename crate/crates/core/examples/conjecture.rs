//! Runs the exhaustive harness: theorem checks plus the conjecture probe.
//!
//! cargo run --release --example conjecture -- 4

use ancestral::enumeration::{test_conjecture1_with, verify_theorems_with, Census};

fn main() -> ancestral::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let census = Census::new(n)?;
    let verified = verify_theorems_with(&census);
    for (name, outcome) in verified.checks.all() {
        println!("{name:<22} {:>8} cases  {}", outcome.cases, if outcome.passed() { "ok" } else { "VIOLATED" });
    }

    let mut report = test_conjecture1_with(&census);
    println!(
        "{} MAGs in {} classes; {} pairs, {} without a movable differing edge, {} closure gaps",
        report.mag_count,
        report.class_count,
        report.pairs_examined,
        report.counterexamples.len(),
        report.closure_gaps.len()
    );
    report.checks = Some(verified.checks);
    if std::env::args().any(|a| a == "--json") {
        println!("{}", report.to_json());
    }
    Ok(())
}
