//! Mixed graphs with directed (`→`) and bi-directed (`↔`) edges.
//!
//! Every unordered node pair carries at most one edge. Edges are stored as an
//! `n × n` endpoint-mark matrix: `marks[u][v]` is the mark at `v` on the edge
//! between `u` and `v`, so `u → v` is `marks[u][v] = Arrow, marks[v][u] = Tail`
//! and `u ↔ v` has arrowheads at both ends.

use std::borrow::Cow;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Dense node index within one graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type NodeSet = BTreeSet<NodeId>;

/// Mark at one end of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mark {
    Tail,
    Arrow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Directed,
    Bidirected,
}

/// A single edge. Bi-directed endpoints are stored with the smaller index first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edge {
    Directed { tail: NodeId, head: NodeId },
    Bidirected(NodeId, NodeId),
}

impl Edge {
    pub fn directed(tail: impl Into<NodeId>, head: impl Into<NodeId>) -> Self {
        Edge::Directed {
            tail: tail.into(),
            head: head.into(),
        }
    }

    pub fn bidirected(a: impl Into<NodeId>, b: impl Into<NodeId>) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            Edge::Bidirected(a, b)
        } else {
            Edge::Bidirected(b, a)
        }
    }

    pub fn kind(&self) -> EdgeKind {
        match self {
            Edge::Directed { .. } => EdgeKind::Directed,
            Edge::Bidirected(..) => EdgeKind::Bidirected,
        }
    }

    /// Endpoints as an ordered pair `(min, max)`.
    pub fn pair(&self) -> (NodeId, NodeId) {
        let (a, b) = match *self {
            Edge::Directed { tail, head } => (tail, head),
            Edge::Bidirected(a, b) => (a, b),
        };
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Renders the edge with the graph's labels, e.g. `X→Y` or `X↔Y`.
    pub fn render(&self, g: &MixedGraph) -> String {
        match *self {
            Edge::Directed { tail, head } => format!("{}→{}", g.label(tail), g.label(head)),
            Edge::Bidirected(a, b) => format!("{}↔{}", g.label(a), g.label(b)),
        }
    }
}

#[derive(Clone)]
pub struct MixedGraph {
    n: usize,
    marks: Vec<Option<Mark>>,
    labels: Option<Arc<[String]>>,
}

// Labels are presentation only: equality and hashing are over the node count
// and the edge marks.
impl PartialEq for MixedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.marks == other.marks
    }
}

impl Eq for MixedGraph {}

impl Hash for MixedGraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.marks.hash(state);
    }
}

impl fmt::Debug for MixedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges().iter().map(|e| e.render(self)).collect();
        f.debug_struct("MixedGraph")
            .field("nodes", &self.labels())
            .field("edges", &edges)
            .finish()
    }
}

impl MixedGraph {
    /// Empty graph on nodes `0..n` without labels.
    pub fn new(n: usize) -> Self {
        MixedGraph {
            n,
            marks: vec![None; n * n],
            labels: None,
        }
    }

    /// Empty graph whose nodes carry the given (unique) labels.
    pub fn with_labels<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut g = MixedGraph::new(labels.len());
        g.labels = Some(labels.into());
        Ok(g)
    }

    /// Replaces the labels of an existing graph.
    pub fn relabeled<I, S>(&self, labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let fresh = MixedGraph::with_labels(labels)?;
        if fresh.n != self.n {
            return Err(Error::LabelCount {
                expected: self.n,
                actual: fresh.n,
            });
        }
        Ok(MixedGraph {
            labels: fresh.labels,
            ..self.clone()
        })
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.n).map(NodeId)
    }

    pub fn has_labels(&self) -> bool {
        self.labels.is_some()
    }

    /// Label of `v`; unlabeled graphs use the decimal index.
    pub fn label(&self, v: NodeId) -> Cow<'_, str> {
        match &self.labels {
            Some(ls) => Cow::Borrowed(ls[v.0].as_str()),
            None => Cow::Owned(v.0.to_string()),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.nodes().map(|v| self.label(v).into_owned()).collect()
    }

    pub fn node_by_label(&self, label: &str) -> Result<NodeId> {
        match &self.labels {
            Some(ls) => ls
                .iter()
                .position(|l| l == label)
                .map(NodeId)
                .ok_or_else(|| Error::UnknownLabel(label.to_string())),
            None => label
                .parse::<usize>()
                .ok()
                .filter(|&i| i < self.n)
                .map(NodeId)
                .ok_or_else(|| Error::UnknownLabel(label.to_string())),
        }
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v.0 < self.n {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                index: v.0,
                node_count: self.n,
            })
        }
    }

    #[inline]
    fn idx(&self, u: usize, v: usize) -> usize {
        u * self.n + v
    }

    /// Adds an edge; rejects self-loops, unknown nodes and a second edge on a pair.
    pub fn add_edge(&mut self, edge: Edge) -> Result<()> {
        let (a, b) = edge.pair();
        self.check_node(a)?;
        self.check_node(b)?;
        if a == b {
            return Err(Error::SelfLoop(self.label(a).into_owned()));
        }
        if self.is_adjacent(a, b) {
            return Err(Error::DuplicateEdge(
                self.label(a).into_owned(),
                self.label(b).into_owned(),
            ));
        }
        self.write_edge(edge);
        Ok(())
    }

    pub fn add_directed(&mut self, tail: impl Into<NodeId>, head: impl Into<NodeId>) -> Result<()> {
        self.add_edge(Edge::directed(tail, head))
    }

    pub fn add_bidirected(&mut self, a: impl Into<NodeId>, b: impl Into<NodeId>) -> Result<()> {
        self.add_edge(Edge::bidirected(a, b))
    }

    fn write_edge(&mut self, edge: Edge) {
        let (u, v, at_u, at_v) = match edge {
            Edge::Directed { tail, head } => (tail.0, head.0, Mark::Tail, Mark::Arrow),
            Edge::Bidirected(a, b) => (a.0, b.0, Mark::Arrow, Mark::Arrow),
        };
        let (uv, vu) = (self.idx(u, v), self.idx(v, u));
        self.marks[uv] = Some(at_v);
        self.marks[vu] = Some(at_u);
    }

    /// Returns a copy with whatever edge sits on `edge`'s pair replaced by `edge`.
    pub fn with_edge_replaced(&self, edge: Edge) -> Result<Self> {
        let (a, b) = edge.pair();
        self.check_node(a)?;
        self.check_node(b)?;
        if a == b {
            return Err(Error::SelfLoop(self.label(a).into_owned()));
        }
        let mut g = self.clone();
        g.write_edge(edge);
        Ok(g)
    }

    /// Returns a copy without the edge between `a` and `b` (if any).
    pub fn without_edge(&self, a: NodeId, b: NodeId) -> Self {
        let mut g = self.clone();
        if a.0 < self.n && b.0 < self.n {
            let (ab, ba) = (g.idx(a.0, b.0), g.idx(b.0, a.0));
            g.marks[ab] = None;
            g.marks[ba] = None;
        }
        g
    }

    /// Mark at `at` on the edge between `from` and `at`.
    #[inline]
    pub fn mark_at(&self, at: NodeId, from: NodeId) -> Option<Mark> {
        self.marks[self.idx(from.0, at.0)]
    }

    /// True if the edge between `from` and `at` has an arrowhead at `at`.
    #[inline]
    pub fn arrowhead_at(&self, at: NodeId, from: NodeId) -> bool {
        self.mark_at(at, from) == Some(Mark::Arrow)
    }

    #[inline]
    pub fn is_adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.marks[self.idx(a.0, b.0)].is_some()
    }

    #[inline]
    pub fn has_directed(&self, tail: NodeId, head: NodeId) -> bool {
        self.mark_at(head, tail) == Some(Mark::Arrow) && self.mark_at(tail, head) == Some(Mark::Tail)
    }

    #[inline]
    pub fn has_bidirected(&self, a: NodeId, b: NodeId) -> bool {
        self.arrowhead_at(a, b) && self.arrowhead_at(b, a)
    }

    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<Edge> {
        match (self.mark_at(a, b)?, self.mark_at(b, a)?) {
            (Mark::Arrow, Mark::Arrow) => Some(Edge::bidirected(a, b)),
            (Mark::Tail, Mark::Arrow) => Some(Edge::directed(a, b)),
            (Mark::Arrow, Mark::Tail) => Some(Edge::directed(b, a)),
            (Mark::Tail, Mark::Tail) => unreachable!("undirected edges are never stored"),
        }
    }

    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let row = &self.marks[v.0 * self.n..(v.0 + 1) * self.n];
        row.iter()
            .enumerate()
            .filter(|(_, m)| m.is_some())
            .map(|(i, _)| NodeId(i))
    }

    pub fn parents(&self, v: NodeId) -> NodeSet {
        self.neighbors(v).filter(|&u| self.has_directed(u, v)).collect()
    }

    pub fn children(&self, v: NodeId) -> NodeSet {
        self.neighbors(v).filter(|&u| self.has_directed(v, u)).collect()
    }

    pub fn spouses(&self, v: NodeId) -> NodeSet {
        self.neighbors(v).filter(|&u| self.has_bidirected(u, v)).collect()
    }

    /// All edges, sorted by their `(min, max)` endpoint pair.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if let Some(e) = self.edge_between(NodeId(a), NodeId(b)) {
                    out.push(e);
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.marks.iter().filter(|m| m.is_some()).count() / 2
    }

    pub fn same_adjacencies(&self, other: &MixedGraph) -> bool {
        self.n == other.n
            && self
                .marks
                .iter()
                .zip(&other.marks)
                .all(|(a, b)| a.is_some() == b.is_some())
    }

    /// `mask[a]` is true iff `a` is an ancestor of some seed (seeds included).
    pub(crate) fn ancestor_mask(&self, seeds: impl IntoIterator<Item = NodeId>) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        let mut stack = Vec::new();
        for s in seeds {
            if !mask[s.0] {
                mask[s.0] = true;
                stack.push(s);
            }
        }
        while let Some(v) = stack.pop() {
            for u in self.neighbors(v) {
                if !mask[u.0] && self.has_directed(u, v) {
                    mask[u.0] = true;
                    stack.push(u);
                }
            }
        }
        mask
    }

    /// All `a` with a directed path `a → … → x`, plus `x` itself.
    pub fn ancestors(&self, x: NodeId) -> Result<NodeSet> {
        self.check_node(x)?;
        Ok(mask_to_set(&self.ancestor_mask([x])))
    }

    pub fn is_ancestor(&self, a: NodeId, of: NodeId) -> bool {
        a == of || self.has_directed_path(a, of)
    }

    /// True if a directed path of length ≥ 1 leads from `from` to `to`.
    pub fn has_directed_path(&self, from: NodeId, to: NodeId) -> bool {
        self.directed_path(from, to, None).is_some()
    }

    /// Shortest directed path `from → … → to` (length ≥ 1), optionally
    /// ignoring the single directed edge `skip`.
    pub(crate) fn directed_path(
        &self,
        from: NodeId,
        to: NodeId,
        skip: Option<(NodeId, NodeId)>,
    ) -> Option<Vec<NodeId>> {
        let mut prev: Vec<Option<NodeId>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        queue.push_back(from);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if !self.has_directed(v, w) || skip == Some((v, w)) || seen[w.0] {
                    continue;
                }
                seen[w.0] = true;
                prev[w.0] = Some(v);
                if w == to {
                    let mut path = vec![to];
                    let mut cur = v;
                    while cur != from {
                        path.push(cur);
                        cur = prev[cur.0].expect("bfs predecessor");
                    }
                    path.push(from);
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
        None
    }

    /// Deterministic labeled serialization: `<n>;` followed by `;`-joined
    /// tokens sorted by endpoint pair, `i>j` for `i → j` and `i<>j` (i < j)
    /// for `i ↔ j`. Not isomorphism-invariant.
    pub fn canonical_key(&self) -> String {
        let tokens: Vec<String> = self
            .edges()
            .into_iter()
            .map(|e| match e {
                Edge::Directed { tail, head } => format!("{}>{}", tail.0, head.0),
                Edge::Bidirected(a, b) => format!("{}<>{}", a.0, b.0),
            })
            .collect();
        format!("{};{}", self.n, tokens.join(";"))
    }

    /// Parses a canonical key back into an unlabeled graph.
    pub fn from_canonical_key(key: &str) -> Result<Self> {
        let bad = || Error::InvalidPath(format!("malformed canonical key `{key}`"));
        let (n, rest) = key.split_once(';').ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let mut g = MixedGraph::new(n);
        for tok in rest.split(';').filter(|t| !t.is_empty()) {
            let edge = if let Some((a, b)) = tok.split_once("<>") {
                Edge::bidirected(
                    a.parse::<usize>().map_err(|_| bad())?,
                    b.parse::<usize>().map_err(|_| bad())?,
                )
            } else {
                let (a, b) = tok.split_once('>').ok_or_else(bad)?;
                Edge::directed(
                    a.parse::<usize>().map_err(|_| bad())?,
                    b.parse::<usize>().map_err(|_| bad())?,
                )
            };
            g.add_edge(edge)?;
        }
        Ok(g)
    }

    /// Graph whose pair states are read from base-4 digits of `code`, pairs in
    /// `(0,1), (0,2), …` order: 0 absent, 1 `i→j`, 2 `j→i`, 3 `i↔j`.
    pub fn from_pair_code(n: usize, mut code: u64) -> Self {
        let mut g = MixedGraph::new(n);
        for a in 0..n {
            for b in a + 1..n {
                match code & 3 {
                    1 => g.write_edge(Edge::directed(a, b)),
                    2 => g.write_edge(Edge::directed(b, a)),
                    3 => g.write_edge(Edge::bidirected(a, b)),
                    _ => {}
                }
                code >>= 2;
            }
        }
        g
    }

    /// Renders a node sequence with the edge marks between consecutive nodes,
    /// e.g. `A↔B→C`.
    pub fn render_sequence(&self, nodes: &[NodeId]) -> String {
        let mut out = String::new();
        for (i, &v) in nodes.iter().enumerate() {
            if i > 0 {
                let u = nodes[i - 1];
                out.push_str(match (self.arrowhead_at(u, v), self.arrowhead_at(v, u)) {
                    (true, true) => "↔",
                    (false, true) => "→",
                    (true, false) => "←",
                    (false, false) => "--",
                });
            }
            out.push_str(&self.label(v));
        }
        out
    }

    pub fn render_set(&self, set: &NodeSet) -> String {
        let parts: Vec<_> = set.iter().map(|&v| self.label(v).into_owned()).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

pub(crate) fn mask_to_set(mask: &[bool]) -> NodeSet {
    mask.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| NodeId(i))
        .collect()
}

/// Fluent constructor over labels.
///
/// ```
/// use ancestral::graph::GraphBuilder;
/// let g = GraphBuilder::new(["X", "Z", "Y"])
///     .directed("X", "Z")
///     .bidirected("Z", "Y")
///     .build()
///     .unwrap();
/// assert_eq!(g.canonical_key(), "3;0>1;1<>2");
/// ```
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    labels: Vec<String>,
    edges: Vec<(String, String, EdgeKind)>,
}

impl GraphBuilder {
    pub fn new<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        GraphBuilder {
            labels: labels.into_iter().map(Into::into).collect(),
            edges: Vec::new(),
        }
    }

    pub fn directed(mut self, tail: &str, head: &str) -> Self {
        self.edges.push((tail.into(), head.into(), EdgeKind::Directed));
        self
    }

    pub fn bidirected(mut self, a: &str, b: &str) -> Self {
        self.edges.push((a.into(), b.into(), EdgeKind::Bidirected));
        self
    }

    pub fn build(self) -> Result<MixedGraph> {
        let mut g = MixedGraph::with_labels(self.labels)?;
        for (u, v, kind) in self.edges {
            let (u, v) = (g.node_by_label(&u)?, g.node_by_label(&v)?);
            let edge = match kind {
                EdgeKind::Directed => Edge::directed(u, v),
                EdgeKind::Bidirected => Edge::bidirected(u, v),
            };
            g.add_edge(edge)?;
        }
        Ok(g)
    }
}

/// A simple path: at least two distinct nodes, consecutive nodes adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path(Vec<NodeId>);

impl Path {
    pub fn new(g: &MixedGraph, nodes: Vec<NodeId>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidPath("a path needs at least two nodes".into()));
        }
        let mut seen = vec![false; g.node_count()];
        for &v in &nodes {
            g.check_node(v)?;
            if std::mem::replace(&mut seen[v.0], true) {
                return Err(Error::InvalidPath(format!("node {} repeats", g.label(v))));
            }
        }
        for w in nodes.windows(2) {
            if !g.is_adjacent(w[0], w[1]) {
                return Err(Error::InvalidPath(format!(
                    "{} and {} are not adjacent",
                    g.label(w[0]),
                    g.label(w[1])
                )));
            }
        }
        Ok(Path(nodes))
    }

    pub(crate) fn new_unchecked(nodes: Vec<NodeId>) -> Self {
        Path(nodes)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.0
    }

    pub fn edge_count(&self) -> usize {
        self.0.len() - 1
    }

    pub fn first(&self) -> NodeId {
        self.0[0]
    }

    pub fn last(&self) -> NodeId {
        *self.0.last().expect("non-empty path")
    }

    /// Position of `v` on the path.
    pub fn position(&self, v: NodeId) -> Option<usize> {
        self.0.iter().position(|&u| u == v)
    }

    /// True if the internal node at position `i` is a collider on the path.
    pub fn is_collider_at(&self, g: &MixedGraph, i: usize) -> bool {
        i > 0 && i + 1 < self.0.len() && is_collider(g, self.0[i - 1], self.0[i], self.0[i + 1])
    }

    pub fn render(&self, g: &MixedGraph) -> String {
        g.render_sequence(&self.0)
    }
}

/// True if both edges `prev – mid – next` carry arrowheads at `mid`.
#[inline]
pub fn is_collider(g: &MixedGraph, prev: NodeId, mid: NodeId, next: NodeId) -> bool {
    g.arrowhead_at(mid, prev) && g.arrowhead_at(mid, next)
}

/// Every simple path from `from` to `to`, found by depth-first enumeration.
/// Exponential; intended for small graphs and as a reference oracle.
pub fn all_simple_paths(g: &MixedGraph, from: NodeId, to: NodeId) -> Vec<Path> {
    let mut out = Vec::new();
    if from == to {
        return out;
    }
    let mut on_path = vec![false; g.node_count()];
    let mut stack = vec![from];
    on_path[from.0] = true;
    extend_paths(g, to, &mut stack, &mut on_path, &mut out);
    out
}

fn extend_paths(
    g: &MixedGraph,
    to: NodeId,
    stack: &mut Vec<NodeId>,
    on_path: &mut [bool],
    out: &mut Vec<Path>,
) {
    let v = *stack.last().expect("non-empty stack");
    for w in g.neighbors(v) {
        if on_path[w.0] {
            continue;
        }
        stack.push(w);
        if w == to {
            out.push(Path(stack.clone()));
        } else {
            on_path[w.0] = true;
            extend_paths(g, to, stack, on_path, out);
            on_path[w.0] = false;
        }
        stack.pop();
    }
}
