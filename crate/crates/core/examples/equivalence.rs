//! Markov equivalence: graphical test, its diagnostic, and the brute-force check.
//!
//! cargo run --example equivalence

use ancestral::equivalence::equivalence_failure;
use ancestral::prelude::*;
use ancestral::fixtures::{self, mag};

fn compare(a: &Mag, b: &Mag) -> ancestral::Result<()> {
    let verdict = match equivalence_failure(a, b)? {
        None => "equivalent".to_string(),
        Some(f) => format!("not equivalent: {}", f.describe(a, b)),
    };
    println!(
        "{} vs {}: {verdict} (brute force agrees: {})",
        a.canonical_key(),
        b.canonical_key(),
        markov_equivalent(a, b)? == markov_equivalent_bruteforce(a, b)?
    );
    Ok(())
}

fn main() -> ancestral::Result<()> {
    compare(&mag(fixtures::g_2()), &mag(fixtures::g_2_bi()))?;
    compare(&mag(fixtures::g_chain()), &mag(fixtures::g_coll()))?;

    // Same skeleton and colliders; the discriminating path W, Z, X, Y tells them apart.
    let disc = mag(fixtures::g_disc());
    let (x, y) = (disc.node_by_label("X")?, disc.node_by_label("Y")?);
    let other = Mag::new(disc.with_edge_replaced(Edge::bidirected(x, y))?)?;
    compare(&disc, &other)?;
    Ok(())
}
