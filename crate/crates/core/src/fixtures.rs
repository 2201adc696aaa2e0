//! Small named graphs used throughout the tests, examples and docs.

use crate::graph::{GraphBuilder, MixedGraph};
use crate::mag::Mag;

fn build(b: GraphBuilder) -> MixedGraph {
    b.build().expect("fixture graphs are well-formed")
}

/// `X → Y`
pub fn g_2() -> MixedGraph {
    build(GraphBuilder::new(["X", "Y"]).directed("X", "Y"))
}

/// `X ↔ Y`
pub fn g_2_bi() -> MixedGraph {
    build(GraphBuilder::new(["X", "Y"]).bidirected("X", "Y"))
}

/// `X → Z → Y`
pub fn g_chain() -> MixedGraph {
    build(GraphBuilder::new(["X", "Z", "Y"]).directed("X", "Z").directed("Z", "Y"))
}

/// `X → Z ← Y`
pub fn g_coll() -> MixedGraph {
    build(GraphBuilder::new(["X", "Z", "Y"]).directed("X", "Z").directed("Y", "Z"))
}

/// `X ↔ Z ↔ Y`
pub fn g_bicoll() -> MixedGraph {
    build(GraphBuilder::new(["X", "Z", "Y"]).bidirected("X", "Z").bidirected("Z", "Y"))
}

/// `Z → X, Z → Y, X → Y`
pub fn g_cov() -> MixedGraph {
    build(
        GraphBuilder::new(["X", "Y", "Z"])
            .directed("Z", "X")
            .directed("Z", "Y")
            .directed("X", "Y"),
    )
}

/// `Z → X, X → Y` with `Z`, `Y` non-adjacent.
pub fn g_nonblk() -> MixedGraph {
    build(GraphBuilder::new(["Z", "X", "Y"]).directed("Z", "X").directed("X", "Y"))
}

/// Ancestral but not maximal: `α ↔ β ↔ γ ↔ δ` with `β → δ` and `γ → α`.
pub fn g_nonmax() -> MixedGraph {
    build(
        GraphBuilder::new(["α", "β", "γ", "δ"])
            .bidirected("α", "β")
            .bidirected("β", "γ")
            .bidirected("γ", "δ")
            .directed("β", "δ")
            .directed("γ", "α"),
    )
}

/// `W → Z, Z ↔ X, Z → Y, X → Y`: `(W, Z, X, Y)` discriminates `X`.
pub fn g_disc() -> MixedGraph {
    build(
        GraphBuilder::new(["W", "Z", "X", "Y"])
            .directed("W", "Z")
            .bidirected("Z", "X")
            .directed("Z", "Y")
            .directed("X", "Y"),
    )
}

/// Validates a fixture as a MAG; panics on the non-maximal fixture.
pub fn mag(g: MixedGraph) -> Mag {
    Mag::new(g).expect("fixture is a MAG")
}
