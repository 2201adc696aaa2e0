//! Maximal ancestral graphs (MAGs) over directed and bi-directed edges.
//!
//! * [`graph`]: mixed graphs, ancestors, paths, canonical keys.
//! * [`mag`]: ancestrality, inducing paths, maximality, the validated [`Mag`].
//! * [`separation`]: m-connection, set queries, separator search.
//! * [`equivalence`]: unshielded colliders, discriminating paths, the graphical
//!   Markov-equivalence test and its brute-force counterpart.
//! * [`transform`]: blanketed and screened edges, single edge replacements,
//!   equivalence-class closure.
//! * [`enumeration`]: exhaustive MAG enumeration, class partitions and the
//!   harnesses that check the replacement results on every small instance.
//! * [`io`]: JSON and DOT encodings; [`cli`]: the `ancestral` command.
//!
//! ```
//! use ancestral::prelude::*;
//!
//! let g = GraphBuilder::new(["X", "Y"]).directed("X", "Y").build()?;
//! let m = Mag::new(g)?;
//! let moves = legal_moves(&m);
//! let bi = apply_move(&m, &moves[0])?;
//! assert_eq!(bi.canonical_key(), "2;0<>1");
//! assert!(markov_equivalent(&m, &bi)?);
//! # Ok::<(), ancestral::Error>(())
//! ```

pub mod cli;
pub mod enumeration;
pub mod equivalence;
mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod mag;
pub mod separation;
pub mod transform;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeKind, GraphBuilder, Mark, MixedGraph, NodeId, NodeSet, Path};
pub use mag::Mag;

pub mod prelude {
    pub use crate::enumeration::{
        check_lemma1, enumerate_mags, partition_into_classes, test_conjecture1, verify_theorems,
    };
    pub use crate::equivalence::{
        discriminating_path_exists_for_triple, is_discriminating_path, markov_equivalent,
        markov_equivalent_bruteforce, unshielded_colliders,
    };
    pub use crate::graph::{Edge, GraphBuilder, MixedGraph, NodeId, NodeSet, Path};
    pub use crate::mag::{inducing_path_exists, is_ancestral, is_mag, is_maximal, Mag};
    pub use crate::separation::{
        find_separator, m_connected, m_connected_naive, m_separated_sets, SeparationQuery,
    };
    pub use crate::transform::{
        apply_move, delta, equivalence_class_closure, is_blanketed_bidirected_against,
        is_blanketed_directed, is_screened, legal_moves, MoveDescriptor, MoveKind,
    };
    pub use crate::Error;
}
