//! Checks ancestrality and maximality and prints the witness for failures.
//!
//! cargo run --example validate

use ancestral::mag::{ancestral_violation, maximality_violation};
use ancestral::{fixtures, GraphBuilder, MixedGraph};

fn report(name: &str, g: &MixedGraph) {
    if let Some(v) = ancestral_violation(g) {
        println!("{name}: not ancestral ({})", v.describe(g));
    } else if let Some((_, _, path)) = maximality_violation(g) {
        println!("{name}: ancestral, not maximal (inducing path {})", path.render(g));
    } else {
        println!("{name}: MAG");
    }
}

fn main() -> ancestral::Result<()> {
    report("chain", &fixtures::g_chain());
    report("four-cycle of spouses", &fixtures::g_nonmax());

    let cyclic = GraphBuilder::new(["A", "B", "C"])
        .directed("A", "B")
        .directed("B", "C")
        .directed("C", "A")
        .build()?;
    report("directed cycle", &cyclic);

    let bi_over_path = GraphBuilder::new(["A", "B", "C"])
        .directed("A", "B")
        .directed("B", "C")
        .bidirected("A", "C")
        .build()?;
    report("spouses joined by a directed path", &bi_over_path);
    Ok(())
}
