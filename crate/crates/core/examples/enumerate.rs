//! Counts MAGs and equivalence classes on small labeled node sets.
//!
//! cargo run --release --example enumerate -- 4

use ancestral::enumeration::{enumerate_ancestral, enumerate_mags, partition_into_classes};

fn main() -> ancestral::Result<()> {
    let max: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    println!("{:>2} {:>10} {:>8} {:>8} {:>9}", "n", "ancestral", "MAGs", "classes", "largest");
    for n in 1..=max {
        let ancestral = enumerate_ancestral(n)?.len();
        let mags = enumerate_mags(n)?;
        let partition = partition_into_classes(&mags)?;
        let largest = partition.classes.iter().map(Vec::len).max().unwrap_or(0);
        println!(
            "{n:>2} {ancestral:>10} {:>8} {:>8} {largest:>9}",
            mags.len(),
            partition.class_count()
        );
    }

    let two = enumerate_mags(2)?;
    let keys: Vec<_> = two.iter().map(|m| m.canonical_key()).collect();
    println!("n=2: {}", keys.join("  "));
    Ok(())
}
