//! Ancestrality, inducing paths, maximality and the validated [`Mag`] type.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::graph::{MixedGraph, NodeId, Path};

/// Why a graph fails to be ancestral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AncestralViolation {
    /// Closed directed walk `v0 → … → v0` (first node repeated at the end).
    DirectedCycle(Vec<NodeId>),
    /// `a ↔ b` together with a directed path `a → … → b`.
    BidirectedAncestor {
        a: NodeId,
        b: NodeId,
        path: Vec<NodeId>,
    },
}

impl AncestralViolation {
    pub fn describe(&self, g: &MixedGraph) -> String {
        match self {
            AncestralViolation::DirectedCycle(cycle) => {
                format!("directed cycle {}", g.render_sequence(cycle))
            }
            AncestralViolation::BidirectedAncestor { a, b, path } => format!(
                "{}↔{} with directed path {}",
                g.label(*a),
                g.label(*b),
                g.render_sequence(path)
            ),
        }
    }
}

/// Why an ancestral graph fails to be a MAG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MagViolation {
    NotAncestral(AncestralViolation),
    /// Non-adjacent `x`, `y` joined by an inducing path.
    NotMaximal { x: NodeId, y: NodeId, path: Path },
}

impl MagViolation {
    pub fn describe(&self, g: &MixedGraph) -> String {
        match self {
            MagViolation::NotAncestral(v) => format!("not ancestral: {}", v.describe(g)),
            MagViolation::NotMaximal { x, y, path } => format!(
                "not maximal: {} and {} are non-adjacent but joined by inducing path {}",
                g.label(*x),
                g.label(*y),
                path.render(g)
            ),
        }
    }
}

/// `anc[v][a]` is true iff `a` is an ancestor of `v` (reflexive).
pub(crate) fn ancestor_matrix(g: &MixedGraph) -> Vec<Vec<bool>> {
    g.nodes().map(|v| g.ancestor_mask([v])).collect()
}

pub fn ancestral_violation(g: &MixedGraph) -> Option<AncestralViolation> {
    let anc = ancestor_matrix(g);
    for e in g.edges() {
        match e {
            crate::graph::Edge::Directed { tail, head } => {
                if anc[tail.0][head.0] {
                    let mut cycle = g
                        .directed_path(head, tail, None)
                        .expect("ancestor implies directed path");
                    cycle.push(head);
                    return Some(AncestralViolation::DirectedCycle(cycle));
                }
            }
            crate::graph::Edge::Bidirected(a, b) => {
                let (from, to) = if anc[b.0][a.0] {
                    (a, b)
                } else if anc[a.0][b.0] {
                    (b, a)
                } else {
                    continue;
                };
                let path = g.directed_path(from, to, None).expect("ancestor implies directed path");
                return Some(AncestralViolation::BidirectedAncestor { a: from, b: to, path });
            }
        }
    }
    None
}

/// No directed cycles, and no directed path between the endpoints of any
/// bi-directed edge.
pub fn is_ancestral(g: &MixedGraph) -> bool {
    let anc = ancestor_matrix(g);
    is_ancestral_with(g, &anc)
}

fn is_ancestral_with(g: &MixedGraph, anc: &[Vec<bool>]) -> bool {
    g.edges().into_iter().all(|e| match e {
        crate::graph::Edge::Directed { tail, head } => !anc[tail.0][head.0],
        crate::graph::Edge::Bidirected(a, b) => !anc[a.0][b.0] && !anc[b.0][a.0],
    })
}

/// An inducing path between `x` and `y`, if any.
///
/// Adjacent pairs count as joined by the one-edge path. Otherwise every
/// internal node must be a collider lying in `an(x) ∪ an(y)`. A collider has
/// arrowheads on both of its path edges, so consecutive internal nodes are
/// joined by bi-directed edges and the search reduces to a BFS through
/// admissible nodes.
pub fn inducing_path(g: &MixedGraph, x: NodeId, y: NodeId) -> Result<Option<Path>> {
    g.check_node(x)?;
    g.check_node(y)?;
    if x == y {
        return Err(Error::Precondition(format!(
            "inducing path endpoints must differ (got {} twice)",
            g.label(x)
        )));
    }
    let allowed = g.ancestor_mask([x, y]);
    Ok(inducing_path_with(g, x, y, &allowed))
}

pub(crate) fn inducing_path_with(
    g: &MixedGraph,
    x: NodeId,
    y: NodeId,
    allowed: &[bool],
) -> Option<Path> {
    if g.is_adjacent(x, y) {
        return Some(Path::new_unchecked(vec![x, y]));
    }
    let admissible = |q: NodeId| q != x && q != y && allowed[q.0];
    let mut prev: Vec<Option<NodeId>> = vec![None; g.node_count()];
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::new();
    for q in g.neighbors(x) {
        if admissible(q) && g.arrowhead_at(q, x) {
            seen[q.0] = true;
            prev[q.0] = Some(x);
            queue.push_back(q);
        }
    }
    while let Some(q) = queue.pop_front() {
        if g.is_adjacent(q, y) && g.arrowhead_at(q, y) {
            let mut nodes = vec![y, q];
            let mut cur = q;
            while let Some(p) = prev[cur.0] {
                nodes.push(p);
                cur = p;
            }
            nodes.reverse();
            return Some(Path::new_unchecked(nodes));
        }
        for r in g.neighbors(q) {
            if !seen[r.0] && admissible(r) && g.has_bidirected(q, r) {
                seen[r.0] = true;
                prev[r.0] = Some(q);
                queue.push_back(r);
            }
        }
    }
    None
}

pub fn inducing_path_exists(g: &MixedGraph, x: NodeId, y: NodeId) -> Result<bool> {
    Ok(inducing_path(g, x, y)?.is_some())
}

/// First non-adjacent pair (in index order) joined by an inducing path.
pub fn maximality_violation(g: &MixedGraph) -> Option<(NodeId, NodeId, Path)> {
    let anc = ancestor_matrix(g);
    maximality_violation_with(g, &anc)
}

fn maximality_violation_with(
    g: &MixedGraph,
    anc: &[Vec<bool>],
) -> Option<(NodeId, NodeId, Path)> {
    let n = g.node_count();
    let mut allowed = vec![false; n];
    for a in 0..n {
        for b in a + 1..n {
            let (x, y) = (NodeId(a), NodeId(b));
            if g.is_adjacent(x, y) {
                continue;
            }
            for (slot, (ax, ay)) in allowed.iter_mut().zip(anc[a].iter().zip(&anc[b])) {
                *slot = *ax || *ay;
            }
            if let Some(p) = inducing_path_with(g, x, y, &allowed) {
                return Some((x, y, p));
            }
        }
    }
    None
}

/// Every non-adjacent pair lacks an inducing path. Requires an ancestral graph.
pub fn is_maximal(g: &MixedGraph) -> Result<bool> {
    if let Some(v) = ancestral_violation(g) {
        return Err(Error::Precondition(format!(
            "maximality is only defined for ancestral graphs ({})",
            v.describe(g)
        )));
    }
    Ok(maximality_violation(g).is_none())
}

pub fn mag_violation(g: &MixedGraph) -> Option<MagViolation> {
    if let Some(v) = ancestral_violation(g) {
        return Some(MagViolation::NotAncestral(v));
    }
    maximality_violation(g).map(|(x, y, path)| MagViolation::NotMaximal { x, y, path })
}

pub fn is_mag(g: &MixedGraph) -> bool {
    let anc = ancestor_matrix(g);
    is_ancestral_with(g, &anc) && maximality_violation_with(g, &anc).is_none()
}

/// A mixed graph known to be a maximal ancestral graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mag(MixedGraph);

impl Mag {
    pub fn new(g: MixedGraph) -> Result<Self> {
        match mag_violation(&g) {
            None => Ok(Mag(g)),
            Some(v) => Err(Error::NotMag(v.describe(&g))),
        }
    }

    /// Wraps a graph already known to be a MAG.
    pub(crate) fn new_unchecked(g: MixedGraph) -> Self {
        debug_assert!(is_mag(&g));
        Mag(g)
    }

    pub fn graph(&self) -> &MixedGraph {
        &self.0
    }

    pub fn into_graph(self) -> MixedGraph {
        self.0
    }
}

impl Deref for Mag {
    type Target = MixedGraph;

    fn deref(&self) -> &MixedGraph {
        &self.0
    }
}

impl fmt::Debug for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mag({:?})", self.0)
    }
}

impl TryFrom<MixedGraph> for Mag {
    type Error = Error;

    fn try_from(g: MixedGraph) -> Result<Self> {
        Mag::new(g)
    }
}
