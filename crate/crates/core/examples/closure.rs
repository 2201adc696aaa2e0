//! Explores an equivalence class by repeated legal moves.
//!
//! cargo run --example closure

use ancestral::fixtures::{self, mag};
use ancestral::prelude::*;

fn main() {
    for (name, g) in [("collider", fixtures::g_coll()), ("covered triangle", fixtures::g_cov())] {
        let m = mag(g);
        let closure = equivalence_class_closure(&m, 1000);
        println!("{name}: {} members", closure.len());
        for member in closure.members.values() {
            let edges: Vec<_> = member.edges().iter().map(|e| e.render(&m)).collect();
            println!("  {}", edges.join(", "));
        }
    }

    let truncated = equivalence_class_closure(&mag(fixtures::g_cov()), 2);
    println!("capped at 2: {} members, truncated = {}", truncated.len(), truncated.truncated);
}
