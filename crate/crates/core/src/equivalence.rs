//! Markov equivalence of MAGs.
//!
//! [`markov_equivalent`] is the graphical test: same adjacencies, same
//! unshielded colliders, and agreement on the collider status of every node
//! discriminated by a path that discriminates it in both graphs.
//! [`markov_equivalent_bruteforce`] compares every pairwise m-separation
//! statement instead.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{all_simple_paths, is_collider, MixedGraph, NodeId, Path};
use crate::mag::Mag;
use crate::separation::reachable;

/// `a *→ z ←* b` with `a`, `b` non-adjacent; stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnshieldedCollider {
    pub a: NodeId,
    pub z: NodeId,
    pub b: NodeId,
}

impl UnshieldedCollider {
    pub fn render(&self, g: &MixedGraph) -> String {
        g.render_sequence(&[self.a, self.z, self.b])
    }
}

pub fn unshielded_colliders(g: &MixedGraph) -> BTreeSet<UnshieldedCollider> {
    let mut out = BTreeSet::new();
    for z in g.nodes() {
        let into: Vec<NodeId> = g.neighbors(z).filter(|&u| g.arrowhead_at(z, u)).collect();
        for (i, &a) in into.iter().enumerate() {
            for &b in &into[i + 1..] {
                if !g.is_adjacent(a, b) {
                    out.insert(UnshieldedCollider { a, z, b });
                }
            }
        }
    }
    out
}

/// A path together with the node it discriminates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminatingPathWitness {
    pub path: Path,
    pub discriminated: NodeId,
}

/// Checks whether `p` (read from its first to its last node) is a
/// discriminating path for `z`: `z` is internal and sits next to the final
/// endpoint, the path has at least three edges, the endpoints are
/// non-adjacent, and every node strictly between the first endpoint and `z`
/// is a collider on `p` and a parent of the final endpoint.
pub fn is_discriminating_path(g: &MixedGraph, p: &Path, z: NodeId) -> Result<bool> {
    let p = Path::new(g, p.nodes().to_vec())?;
    g.check_node(z)?;
    Ok(is_discriminating_unchecked(g, p.nodes(), z))
}

pub(crate) fn is_discriminating_unchecked(g: &MixedGraph, nodes: &[NodeId], z: NodeId) -> bool {
    let k = nodes.len();
    if k < 4 || nodes[k - 2] != z {
        return false;
    }
    let (start, end) = (nodes[0], nodes[k - 1]);
    if g.is_adjacent(start, end) {
        return false;
    }
    (1..k - 2).all(|i| {
        let q = nodes[i];
        is_collider(g, nodes[i - 1], q, nodes[i + 1]) && g.has_directed(q, end)
    })
}

fn check_triple_context(g: &MixedGraph, z: NodeId, x: NodeId, y: NodeId) -> Result<()> {
    for v in [z, x, y] {
        g.check_node(v)?;
    }
    if z == x || x == y || z == y {
        return Err(Error::Precondition("triple nodes must be distinct".into()));
    }
    if !g.is_adjacent(z, x) || !g.arrowhead_at(x, z) {
        return Err(Error::Precondition(format!(
            "expected an edge {}*→{}",
            g.label(z),
            g.label(x)
        )));
    }
    if !g.is_adjacent(x, y) {
        return Err(Error::Precondition(format!(
            "expected an edge between {} and {}",
            g.label(x),
            g.label(y)
        )));
    }
    Ok(())
}

/// A discriminating path for `x` that ends in `…, z, x, y`, if one exists.
///
/// Every node before `x` other than the first must be a collider and a parent
/// of `y`, so `z ↔ x`, `z → y`, and the nodes between the first endpoint and
/// `z` form a bi-directed chain of parents of `y`. A BFS over that set from
/// `z` accepts as soon as some member has a neighbour non-adjacent to `y`
/// pointing into it. Runs in time linear in the number of edges.
pub fn discriminating_path_for_triple(
    g: &MixedGraph,
    z: NodeId,
    x: NodeId,
    y: NodeId,
) -> Result<Option<Path>> {
    check_triple_context(g, z, x, y)?;
    if !g.has_bidirected(z, x) || !g.has_directed(z, y) {
        return Ok(None);
    }
    let n = g.node_count();
    let mut prev: Vec<Option<NodeId>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[z.0] = true;
    let mut queue = VecDeque::from([z]);
    while let Some(s) = queue.pop_front() {
        for q in g.neighbors(s) {
            if q == x || q == y {
                continue;
            }
            if g.arrowhead_at(s, q) && !g.is_adjacent(q, y) {
                let mut nodes = vec![q, s];
                let mut cur = s;
                while let Some(p) = prev[cur.0] {
                    nodes.push(p);
                    cur = p;
                }
                nodes.extend([x, y]);
                return Ok(Some(Path::new_unchecked(nodes)));
            }
            if !seen[q.0] && g.has_bidirected(s, q) && g.has_directed(q, y) {
                seen[q.0] = true;
                prev[q.0] = Some(s);
                queue.push_back(q);
            }
        }
    }
    Ok(None)
}

pub fn discriminating_path_exists_for_triple(
    g: &MixedGraph,
    z: NodeId,
    x: NodeId,
    y: NodeId,
) -> Result<bool> {
    Ok(discriminating_path_for_triple(g, z, x, y)?.is_some())
}

/// Every discriminating path in `g`, each read from its first endpoint.
pub fn discriminating_paths(g: &MixedGraph) -> Vec<DiscriminatingPathWitness> {
    let mut out = Vec::new();
    for start in g.nodes() {
        for end in g.nodes() {
            if start == end || g.is_adjacent(start, end) {
                continue;
            }
            for p in all_simple_paths(g, start, end) {
                let nodes = p.nodes();
                if nodes.len() < 4 {
                    continue;
                }
                let z = nodes[nodes.len() - 2];
                if is_discriminating_unchecked(g, nodes, z) {
                    out.push(DiscriminatingPathWitness {
                        path: p,
                        discriminated: z,
                    });
                }
            }
        }
    }
    out
}

/// The first condition of the graphical equivalence test that fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceFailure {
    Adjacency { a: NodeId, b: NodeId },
    /// Unshielded collider present in the first graph only (`in_first`) or
    /// the second graph only.
    UnshieldedCollider {
        collider: UnshieldedCollider,
        in_first: bool,
    },
    /// `discriminated` is a collider on `path` in exactly one of the graphs.
    DiscriminatingPath { path: Path, discriminated: NodeId },
}

impl EquivalenceFailure {
    pub fn describe(&self, m1: &MixedGraph, m2: &MixedGraph) -> String {
        match self {
            EquivalenceFailure::Adjacency { a, b } => format!(
                "{} and {} are adjacent in only one graph",
                m1.label(*a),
                m1.label(*b)
            ),
            EquivalenceFailure::UnshieldedCollider { collider, in_first } => {
                let (g, which) = if *in_first { (m1, "first") } else { (m2, "second") };
                format!(
                    "unshielded collider {} appears only in the {which} graph",
                    collider.render(g)
                )
            }
            EquivalenceFailure::DiscriminatingPath {
                path,
                discriminated,
            } => format!(
                "{} is a collider on discriminating path {} in only one graph ({} vs {})",
                m1.label(*discriminated),
                path.render(m1),
                path.render(m1),
                path.render(m2)
            ),
        }
    }
}

fn check_same_nodes(m1: &MixedGraph, m2: &MixedGraph) -> Result<()> {
    if m1.node_count() != m2.node_count() {
        return Err(Error::NodeSetMismatch(format!(
            "{} nodes vs {} nodes",
            m1.node_count(),
            m2.node_count()
        )));
    }
    if m1.has_labels() && m2.has_labels() && m1.labels() != m2.labels() {
        return Err(Error::NodeSetMismatch(format!(
            "{:?} vs {:?}",
            m1.labels(),
            m2.labels()
        )));
    }
    Ok(())
}

/// Why `m1` and `m2` fail the graphical equivalence test, or `None` if they pass.
pub fn equivalence_failure(m1: &Mag, m2: &Mag) -> Result<Option<EquivalenceFailure>> {
    check_same_nodes(m1, m2)?;
    for a in m1.nodes() {
        for b in m1.nodes().filter(|&b| b > a) {
            if m1.is_adjacent(a, b) != m2.is_adjacent(a, b) {
                return Ok(Some(EquivalenceFailure::Adjacency { a, b }));
            }
        }
    }
    let (c1, c2) = (unshielded_colliders(m1), unshielded_colliders(m2));
    if let Some(&collider) = c1.difference(&c2).next() {
        return Ok(Some(EquivalenceFailure::UnshieldedCollider {
            collider,
            in_first: true,
        }));
    }
    if let Some(&collider) = c2.difference(&c1).next() {
        return Ok(Some(EquivalenceFailure::UnshieldedCollider {
            collider,
            in_first: false,
        }));
    }
    // Identical adjacencies make every path of m1 a path of m2 with the same
    // node sequence.
    for w in discriminating_paths(m1) {
        let nodes = w.path.nodes();
        if !is_discriminating_unchecked(m2, nodes, w.discriminated) {
            continue;
        }
        let i = nodes.len() - 2;
        if w.path.is_collider_at(m1, i) != w.path.is_collider_at(m2, i) {
            return Ok(Some(EquivalenceFailure::DiscriminatingPath {
                path: w.path,
                discriminated: w.discriminated,
            }));
        }
    }
    Ok(None)
}

pub fn markov_equivalent(m1: &Mag, m2: &Mag) -> Result<bool> {
    Ok(equivalence_failure(m1, m2)?.is_none())
}

/// Packed answers to every pairwise query `(x, y | Z)` with `x < y` and
/// `Z ⊆ V ∖ {x, y}`; bit set means m-connected. Two graphs on the same nodes
/// are Markov equivalent iff their signatures are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndependenceSignature(Vec<u64>);

pub fn independence_signature(g: &MixedGraph) -> IndependenceSignature {
    let mut bits = Vec::new();
    let mut k = 0usize;
    for_each_pair_query(g, |x, y, in_z, anc_z| {
        if k % 64 == 0 {
            bits.push(0u64);
        }
        if reachable(g, x, y, in_z, anc_z) {
            *bits.last_mut().expect("pushed above") |= 1 << (k % 64);
        }
        k += 1;
        true
    });
    IndependenceSignature(bits)
}

/// Calls `f(x, y, in_z, anc_z)` for every pair `x < y` and every subset `Z` of
/// the remaining nodes, stopping early when `f` returns false.
fn for_each_pair_query(
    g: &MixedGraph,
    mut f: impl FnMut(NodeId, NodeId, &[bool], &[bool]) -> bool,
) {
    let n = g.node_count();
    assert!(n < 64, "pairwise query enumeration needs fewer than 64 nodes");
    for a in 0..n {
        for b in a + 1..n {
            let rest: Vec<usize> = (0..n).filter(|&v| v != a && v != b).collect();
            for mask in 0u64..(1 << rest.len()) {
                let mut in_z = vec![false; n];
                for (bit, &v) in rest.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        in_z[v] = true;
                    }
                }
                let anc_z = g.ancestor_mask(
                    in_z.iter()
                        .enumerate()
                        .filter(|(_, &b)| b)
                        .map(|(i, _)| NodeId(i)),
                );
                if !f(NodeId(a), NodeId(b), &in_z, &anc_z) {
                    return;
                }
            }
        }
    }
}

/// Compares m-connection for every pair and every conditioning set drawn from
/// the remaining nodes. Exponential in the node count.
pub fn markov_equivalent_bruteforce(m1: &Mag, m2: &Mag) -> Result<bool> {
    markov_equivalent_graphs_bruteforce(m1, m2)
}

/// As [`markov_equivalent_bruteforce`] but over arbitrary mixed graphs.
pub fn markov_equivalent_graphs_bruteforce(g1: &MixedGraph, g2: &MixedGraph) -> Result<bool> {
    check_same_nodes(g1, g2)?;
    let mut agree = true;
    for_each_pair_query(g1, |x, y, in_z, anc1| {
        let anc2 = g2.ancestor_mask(
            in_z.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| NodeId(i)),
        );
        agree = reachable(g1, x, y, in_z, anc1) == reachable(g2, x, y, in_z, &anc2);
        agree
    });
    Ok(agree)
}
