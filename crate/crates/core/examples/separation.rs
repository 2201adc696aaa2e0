//! m-separation queries on a small MAG.
//!
//! cargo run --example separation

use ancestral::prelude::*;
use ancestral::separation::m_connecting_path;

fn main() -> ancestral::Result<()> {
    // W → Z ↔ X → Y, Z → Y
    let g = ancestral::fixtures::g_disc();
    let id = |l: &str| g.node_by_label(l);
    let (w, z, x, y) = (id("W")?, id("Z")?, id("X")?, id("Y")?);

    for given in [vec![], vec![z], vec![z, x]] {
        let set: NodeSet = given.into_iter().collect();
        match m_connecting_path(&g, w, y, &set)? {
            Some(p) => println!("W, Y given {}: connected via {}", g.render_set(&set), p.render(&g)),
            None => println!("W, Y given {}: separated", g.render_set(&set)),
        }
    }

    let sep = find_separator(&g, w, x)?;
    println!("smallest separator of W and X: {}", g.render_set(&sep.unwrap_or_default()));

    let q = SeparationQuery::new([w].into(), [x, y].into(), [z].into())?;
    println!("{{W}} vs {{X, Y}} given {{Z}}: separated = {}", m_separated_sets(&g, &q)?);
    Ok(())
}
