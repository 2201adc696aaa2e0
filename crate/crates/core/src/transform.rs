//! Single edge replacements that preserve Markov equivalence.
//!
//! * A blanketed `x → y` may become `x ↔ y` ([`MoveKind::DirToBi`]).
//! * An `x ↔ y` blanketed against `x` may become `x → y` ([`MoveKind::BiToDir`]).
//! * A screened `x → y` may be reversed ([`MoveKind::Reverse`]).

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::equivalence::discriminating_path_for_triple;
use crate::error::{Error, Result};
use crate::graph::{Edge, MixedGraph, NodeId, NodeSet, Path};
use crate::mag::Mag;

/// The clause a blanketed-edge check failed on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlanketViolation {
    /// A directed path from `x` to `y` other than the edge itself.
    DirectedPath(Vec<NodeId>),
    ParentNotShared { parent: NodeId },
    SpouseNotShared { spouse: NodeId },
    /// `spouse` is a parent of `y` but a discriminating path for `x` runs
    /// through `(spouse, x, y)`.
    Discriminated { spouse: NodeId, path: Path },
}

impl BlanketViolation {
    pub fn describe(&self, g: &MixedGraph, x: NodeId, y: NodeId) -> String {
        let (xl, yl) = (g.label(x), g.label(y));
        match self {
            BlanketViolation::DirectedPath(p) => {
                format!("directed path {} besides the edge itself", g.render_sequence(p))
            }
            BlanketViolation::ParentNotShared { parent } => {
                format!("parent {} of {xl} is not a parent of {yl}", g.label(*parent))
            }
            BlanketViolation::SpouseNotShared { spouse } => format!(
                "spouse {} of {xl} is neither a spouse nor a parent of {yl}",
                g.label(*spouse)
            ),
            BlanketViolation::Discriminated { spouse, path } => format!(
                "spouse {} of {xl} is a parent of {yl} but {} discriminates {xl}",
                g.label(*spouse),
                path.render(g)
            ),
        }
    }
}

/// The clause a screened-edge check failed on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScreenViolation {
    /// Parents of `y` differ from the parents of `x` plus `x`.
    Parents { expected: NodeSet, actual: NodeSet },
    Spouses { of_x: NodeSet, of_y: NodeSet },
}

impl ScreenViolation {
    pub fn describe(&self, g: &MixedGraph, x: NodeId, y: NodeId) -> String {
        let (xl, yl) = (g.label(x), g.label(y));
        match self {
            ScreenViolation::Parents { expected, actual } => format!(
                "parents of {yl} are {} but parents of {xl} plus {xl} are {}",
                g.render_set(actual),
                g.render_set(expected)
            ),
            ScreenViolation::Spouses { of_x, of_y } => format!(
                "spouses of {xl} are {} but spouses of {yl} are {}",
                g.render_set(of_x),
                g.render_set(of_y)
            ),
        }
    }
}

fn require_directed(g: &MixedGraph, x: NodeId, y: NodeId) -> Result<()> {
    g.check_node(x)?;
    g.check_node(y)?;
    if g.has_directed(x, y) {
        return Ok(());
    }
    Err(Error::EdgeMismatch {
        expected: format!("{}→{}", g.label(x), g.label(y)),
        found: describe_pair(g, x, y),
    })
}

fn require_bidirected(g: &MixedGraph, x: NodeId, y: NodeId) -> Result<()> {
    g.check_node(x)?;
    g.check_node(y)?;
    if x != y && g.has_bidirected(x, y) {
        return Ok(());
    }
    Err(Error::EdgeMismatch {
        expected: format!("{}↔{}", g.label(x), g.label(y)),
        found: describe_pair(g, x, y),
    })
}

fn describe_pair(g: &MixedGraph, x: NodeId, y: NodeId) -> String {
    match (x != y).then(|| g.edge_between(x, y)).flatten() {
        Some(e) => e.render(g),
        None => format!("no edge between {} and {}", g.label(x), g.label(y)),
    }
}

/// Parent and spouse clauses shared by both blanketed-edge variants. `y`
/// itself is skipped when scanning the spouses of `x`.
fn parent_spouse_violation(g: &MixedGraph, x: NodeId, y: NodeId) -> Option<BlanketViolation> {
    let pa_y = g.parents(y);
    if let Some(&parent) = g.parents(x).iter().find(|p| !pa_y.contains(p)) {
        return Some(BlanketViolation::ParentNotShared { parent });
    }
    for spouse in g.spouses(x) {
        if spouse == y || g.has_bidirected(spouse, y) {
            continue;
        }
        if !g.has_directed(spouse, y) {
            return Some(BlanketViolation::SpouseNotShared { spouse });
        }
        let path = discriminating_path_for_triple(g, spouse, x, y)
            .expect("spouse edge and x–y edge are present");
        if let Some(path) = path {
            return Some(BlanketViolation::Discriminated { spouse, path });
        }
    }
    None
}

/// First failing clause for the directed edge `x → y`, or `None` if blanketed.
pub fn blanket_violation_directed(
    m: &MixedGraph,
    x: NodeId,
    y: NodeId,
) -> Result<Option<BlanketViolation>> {
    require_directed(m, x, y)?;
    if let Some(p) = m.directed_path(x, y, Some((x, y))) {
        return Ok(Some(BlanketViolation::DirectedPath(p)));
    }
    Ok(parent_spouse_violation(m, x, y))
}

/// First failing clause for `x ↔ y` against `x`, or `None` if blanketed.
pub fn blanket_violation_against(
    m: &MixedGraph,
    x: NodeId,
    y: NodeId,
) -> Result<Option<BlanketViolation>> {
    require_bidirected(m, x, y)?;
    Ok(parent_spouse_violation(m, x, y))
}

/// `x → y` is blanketed: no other directed path from `x` to `y`, parents of
/// `x` are parents of `y`, and each spouse of `x` is a spouse of `y` or a
/// parent of `y` with no discriminating path for `x` through it.
pub fn is_blanketed_directed(m: &Mag, x: NodeId, y: NodeId) -> Result<bool> {
    Ok(blanket_violation_directed(m, x, y)?.is_none())
}

/// `x ↔ y` is blanketed against `x`: the parent and spouse clauses hold with
/// `x` in the tail role.
pub fn is_blanketed_bidirected_against(m: &Mag, x: NodeId, y: NodeId) -> Result<bool> {
    Ok(blanket_violation_against(m, x, y)?.is_none())
}

pub fn screen_violation(m: &MixedGraph, x: NodeId, y: NodeId) -> Result<Option<ScreenViolation>> {
    require_directed(m, x, y)?;
    let mut expected = m.parents(x);
    expected.insert(x);
    let actual = m.parents(y);
    if expected != actual {
        return Ok(Some(ScreenViolation::Parents { expected, actual }));
    }
    let (of_x, of_y) = (m.spouses(x), m.spouses(y));
    if of_x != of_y {
        return Ok(Some(ScreenViolation::Spouses { of_x, of_y }));
    }
    Ok(None)
}

/// `Pa(y) = Pa(x) ∪ {x}` and `Sp(y) = Sp(x)`.
pub fn is_screened(m: &Mag, x: NodeId, y: NodeId) -> Result<bool> {
    Ok(screen_violation(m, x, y)?.is_none())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveKind {
    /// `x → y` becomes `x ↔ y`.
    DirToBi,
    /// `x ↔ y` becomes `x → y`; `x` is the node the edge is blanketed against.
    BiToDir,
    /// `x → y` becomes `y → x`.
    Reverse,
}

impl MoveKind {
    pub fn name(self) -> &'static str {
        match self {
            MoveKind::DirToBi => "dir-to-bi",
            MoveKind::BiToDir => "bi-to-dir",
            MoveKind::Reverse => "reverse",
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MoveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dir-to-bi" => Ok(MoveKind::DirToBi),
            "bi-to-dir" => Ok(MoveKind::BiToDir),
            "reverse" => Ok(MoveKind::Reverse),
            other => Err(Error::Precondition(format!(
                "unknown move kind `{other}` (expected dir-to-bi, bi-to-dir or reverse)"
            ))),
        }
    }
}

/// One single edge replacement. Ordered by kind, then `x`, then `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MoveDescriptor {
    pub kind: MoveKind,
    pub x: NodeId,
    pub y: NodeId,
}

impl MoveDescriptor {
    pub fn new(kind: MoveKind, x: NodeId, y: NodeId) -> Self {
        MoveDescriptor { kind, x, y }
    }

    /// The edge that replaces the current one on `{x, y}`.
    pub fn replacement(&self) -> Edge {
        match self.kind {
            MoveKind::DirToBi => Edge::bidirected(self.x, self.y),
            MoveKind::BiToDir => Edge::directed(self.x, self.y),
            MoveKind::Reverse => Edge::directed(self.y, self.x),
        }
    }

    pub fn render(&self, g: &MixedGraph) -> String {
        format!("{} {} {}", self.kind, g.label(self.x), g.label(self.y))
    }
}

/// Why `mv` is not applicable to `m`, or `None` when its predicate holds.
pub fn move_rejection(m: &Mag, mv: &MoveDescriptor) -> Result<Option<String>> {
    let (x, y) = (mv.x, mv.y);
    Ok(match mv.kind {
        MoveKind::DirToBi => blanket_violation_directed(m, x, y)?
            .map(|v| format!("not blanketed: {}", v.describe(m, x, y))),
        MoveKind::BiToDir => blanket_violation_against(m, x, y)?.map(|v| {
            format!(
                "not blanketed against {}: {}",
                m.label(x),
                v.describe(m, x, y)
            )
        }),
        MoveKind::Reverse => screen_violation(m, x, y)?
            .map(|v| format!("not screened: {}", v.describe(m, x, y))),
    })
}

/// Applies a move whose justifying predicate holds; the result is
/// re-validated as a MAG.
pub fn apply_move(m: &Mag, mv: &MoveDescriptor) -> Result<Mag> {
    if let Some(reason) = move_rejection(m, mv)? {
        return Err(Error::RejectedMove(reason));
    }
    Mag::new(m.with_edge_replaced(mv.replacement())?)
}

/// Every applicable move, sorted.
pub fn legal_moves(m: &Mag) -> Vec<MoveDescriptor> {
    let mut out = Vec::new();
    for e in m.edges() {
        match e {
            Edge::Directed { tail, head } => {
                if matches!(blanket_violation_directed(m, tail, head), Ok(None)) {
                    out.push(MoveDescriptor::new(MoveKind::DirToBi, tail, head));
                }
                if matches!(screen_violation(m, tail, head), Ok(None)) {
                    out.push(MoveDescriptor::new(MoveKind::Reverse, tail, head));
                }
            }
            Edge::Bidirected(a, b) => {
                for (x, y) in [(a, b), (b, a)] {
                    if matches!(blanket_violation_against(m, x, y), Ok(None)) {
                        out.push(MoveDescriptor::new(MoveKind::BiToDir, x, y));
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Edges of one graph whose mark differs in another graph with the same adjacencies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeltaSet(Vec<Edge>);

impl DeltaSet {
    pub fn edges(&self) -> &[Edge] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn render(&self, g: &MixedGraph) -> Vec<String> {
        self.0.iter().map(|e| e.render(g)).collect()
    }
}

/// Edges of `m1` whose mark differs in `m2`.
pub fn delta(m1: &Mag, m2: &Mag) -> Result<DeltaSet> {
    delta_graphs(m1, m2)
}

pub(crate) fn delta_graphs(g1: &MixedGraph, g2: &MixedGraph) -> Result<DeltaSet> {
    if g1.node_count() != g2.node_count() {
        return Err(Error::NodeSetMismatch(format!(
            "{} nodes vs {} nodes",
            g1.node_count(),
            g2.node_count()
        )));
    }
    if !g1.same_adjacencies(g2) {
        return Err(Error::AdjacencyMismatch(format!(
            "{} vs {}",
            g1.canonical_key(),
            g2.canonical_key()
        )));
    }
    let (a, b) = (g1.edges(), g2.edges());
    Ok(DeltaSet(
        a.into_iter().zip(b).filter(|(e1, e2)| e1 != e2).map(|(e1, _)| e1).collect(),
    ))
}

/// Result of exploring the move graph from a seed MAG.
#[derive(Debug, Clone)]
pub struct Closure {
    pub members: BTreeMap<String, Mag>,
    /// True if an unvisited graph was discovered after `max_size` was reached.
    pub truncated: bool,
}

impl Closure {
    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.members.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Breadth-first search over [`legal_moves`] from `m`, keeping at most
/// `max_size` graphs.
pub fn equivalence_class_closure(m: &Mag, max_size: usize) -> Closure {
    let mut members = BTreeMap::new();
    let mut truncated = false;
    if max_size == 0 {
        return Closure {
            members,
            truncated: true,
        };
    }
    members.insert(m.canonical_key(), m.clone());
    let mut queue = VecDeque::from([m.clone()]);
    'bfs: while let Some(cur) = queue.pop_front() {
        for mv in legal_moves(&cur) {
            // A failure here would contradict the soundness of the moves;
            // the exhaustive harness reports such cases.
            let Ok(next) = apply_move(&cur, &mv) else {
                continue;
            };
            let key = next.canonical_key();
            if members.contains_key(&key) {
                continue;
            }
            if members.len() >= max_size {
                truncated = true;
                break 'bfs;
            }
            members.insert(key, next.clone());
            queue.push_back(next);
        }
    }
    Closure { members, truncated }
}
