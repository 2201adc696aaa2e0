//! Legal single edge replacements and a rejected one.
//!
//! cargo run --example moves

use ancestral::fixtures::{self, mag};
use ancestral::prelude::*;
use ancestral::transform::move_rejection;

fn main() -> ancestral::Result<()> {
    let m = mag(fixtures::g_cov());
    println!("moves on {}:", m.canonical_key());
    for mv in legal_moves(&m) {
        let next = apply_move(&m, &mv)?;
        println!("  {:<20} -> {}", mv.render(&m), next.canonical_key());
    }

    let m = mag(fixtures::g_nonblk());
    let (x, y) = (m.node_by_label("X")?, m.node_by_label("Y")?);
    let mv = MoveDescriptor::new(MoveKind::DirToBi, x, y);
    println!("{}: {}", mv.render(&m), move_rejection(&m, &mv)?.unwrap_or_default());
    if let Err(e) = apply_move(&m, &mv) {
        println!("apply_move: {e}");
    }
    Ok(())
}
