//! m-connection and m-separation.
//!
//! A path between `x` and `y` m-connects them given `Z` when every non-collider
//! on it is outside `Z` and every collider is an ancestor of some member of `Z`.
//! [`m_connected`] decides this by reachability over `(node, arrived with an
//! arrowhead?)` states; [`m_connected_naive`] enumerates simple paths and is
//! kept as the reference it is checked against.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{all_simple_paths, is_collider, MixedGraph, NodeId, NodeSet, Path};

fn check_pair_query(g: &MixedGraph, x: NodeId, y: NodeId, z: &NodeSet) -> Result<()> {
    g.check_node(x)?;
    g.check_node(y)?;
    for &v in z {
        g.check_node(v)?;
    }
    if x == y {
        return Err(Error::OverlappingSets(format!(
            "query endpoints coincide ({})",
            g.label(x)
        )));
    }
    for v in [x, y] {
        if z.contains(&v) {
            return Err(Error::OverlappingSets(format!(
                "{} is both an endpoint and in the conditioning set",
                g.label(v)
            )));
        }
    }
    Ok(())
}

/// Decides whether `x` and `y` are m-connected given `z`.
pub fn m_connected(g: &MixedGraph, x: NodeId, y: NodeId, z: &NodeSet) -> Result<bool> {
    check_pair_query(g, x, y, z)?;
    let in_z = membership(g.node_count(), z);
    let anc_z = g.ancestor_mask(z.iter().copied());
    Ok(reachable(g, x, y, &in_z, &anc_z))
}

fn membership(n: usize, set: &NodeSet) -> Vec<bool> {
    let mut mask = vec![false; n];
    for v in set {
        mask[v.0] = true;
    }
    mask
}

/// Reachability over walk states. A walk whose non-colliders avoid `Z` and
/// whose colliders lie in `an(Z)` shortens to such a path whenever the graph
/// has no directed cycles; the exhaustive oracle tests cover the rest.
pub(crate) fn reachable(
    g: &MixedGraph,
    x: NodeId,
    y: NodeId,
    in_z: &[bool],
    anc_z: &[bool],
) -> bool {
    let n = g.node_count();
    // visited[2 * v + into]
    let mut visited = vec![false; 2 * n];
    let mut queue = VecDeque::new();
    for w in g.neighbors(x) {
        if w == y {
            return true;
        }
        let into = g.arrowhead_at(w, x) as usize;
        if !visited[2 * w.0 + into] {
            visited[2 * w.0 + into] = true;
            queue.push_back((w, into == 1));
        }
    }
    while let Some((v, into)) = queue.pop_front() {
        for w in g.neighbors(v) {
            let collider = into && g.arrowhead_at(v, w);
            let passable = if collider { anc_z[v.0] } else { !in_z[v.0] };
            if !passable {
                continue;
            }
            if w == y {
                return true;
            }
            let next_into = g.arrowhead_at(w, v) as usize;
            if !visited[2 * w.0 + next_into] {
                visited[2 * w.0 + next_into] = true;
                queue.push_back((w, next_into == 1));
            }
        }
    }
    false
}

fn path_m_connects(g: &MixedGraph, p: &Path, in_z: &[bool], anc_z: &[bool]) -> bool {
    p.nodes().windows(3).all(|w| {
        if is_collider(g, w[0], w[1], w[2]) {
            anc_z[w[1].0]
        } else {
            !in_z[w[1].0]
        }
    })
}

/// Reference implementation: enumerates every simple path between `x` and
/// `y` and tests each against the definition. Exponential.
pub fn m_connected_naive(g: &MixedGraph, x: NodeId, y: NodeId, z: &NodeSet) -> Result<bool> {
    check_pair_query(g, x, y, z)?;
    let in_z = membership(g.node_count(), z);
    let anc_z = g.ancestor_mask(z.iter().copied());
    Ok(all_simple_paths(g, x, y)
        .iter()
        .any(|p| path_m_connects(g, p, &in_z, &anc_z)))
}

/// An m-connecting simple path, if one exists. Depth-first with pruning on
/// each internal node as it is fixed; exponential in the worst case.
pub fn m_connecting_path(
    g: &MixedGraph,
    x: NodeId,
    y: NodeId,
    z: &NodeSet,
) -> Result<Option<Path>> {
    check_pair_query(g, x, y, z)?;
    let in_z = membership(g.node_count(), z);
    let anc_z = g.ancestor_mask(z.iter().copied());
    if !reachable(g, x, y, &in_z, &anc_z) {
        return Ok(None);
    }
    let mut on_path = vec![false; g.node_count()];
    on_path[x.0] = true;
    let mut stack = vec![x];
    Ok(dfs_connecting(g, y, &in_z, &anc_z, &mut stack, &mut on_path))
}

fn dfs_connecting(
    g: &MixedGraph,
    y: NodeId,
    in_z: &[bool],
    anc_z: &[bool],
    stack: &mut Vec<NodeId>,
    on_path: &mut [bool],
) -> Option<Path> {
    let v = *stack.last()?;
    for w in g.neighbors(v) {
        if on_path[w.0] {
            continue;
        }
        if stack.len() >= 2 {
            let u = stack[stack.len() - 2];
            let ok = if is_collider(g, u, v, w) {
                anc_z[v.0]
            } else {
                !in_z[v.0]
            };
            if !ok {
                continue;
            }
        }
        stack.push(w);
        if w == y {
            return Some(Path::new_unchecked(stack.clone()));
        }
        on_path[w.0] = true;
        if let Some(p) = dfs_connecting(g, y, in_z, anc_z, stack, on_path) {
            return Some(p);
        }
        on_path[w.0] = false;
        stack.pop();
    }
    None
}

/// Source, target and conditioning sets of a separation query; pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationQuery {
    sources: NodeSet,
    targets: NodeSet,
    conditioning: NodeSet,
}

impl SeparationQuery {
    pub fn new(sources: NodeSet, targets: NodeSet, conditioning: NodeSet) -> Result<Self> {
        let clash = sources
            .intersection(&targets)
            .chain(sources.intersection(&conditioning))
            .chain(targets.intersection(&conditioning))
            .next()
            .copied();
        if let Some(v) = clash {
            return Err(Error::OverlappingSets(format!("node {v} appears in two query sets")));
        }
        Ok(SeparationQuery {
            sources,
            targets,
            conditioning,
        })
    }

    pub fn sources(&self) -> &NodeSet {
        &self.sources
    }

    pub fn targets(&self) -> &NodeSet {
        &self.targets
    }

    pub fn conditioning(&self) -> &NodeSet {
        &self.conditioning
    }
}

/// Every `(v, w)` in `sources × targets` is m-separated given the conditioning set.
pub fn m_separated_sets(g: &MixedGraph, q: &SeparationQuery) -> Result<bool> {
    for &v in q.sources.iter().chain(&q.targets).chain(&q.conditioning) {
        g.check_node(v)?;
    }
    let in_z = membership(g.node_count(), &q.conditioning);
    let anc_z = g.ancestor_mask(q.conditioning.iter().copied());
    for &v in &q.sources {
        for &w in &q.targets {
            if reachable(g, v, w, &in_z, &anc_z) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest separating set for a non-adjacent pair, searching subsets of the
/// remaining nodes by increasing size and lexicographically within a size.
/// Exponential; meant for small graphs.
pub fn find_separator(g: &MixedGraph, x: NodeId, y: NodeId) -> Result<Option<NodeSet>> {
    g.check_node(x)?;
    g.check_node(y)?;
    if x == y {
        return Err(Error::OverlappingSets(format!(
            "query endpoints coincide ({})",
            g.label(x)
        )));
    }
    if g.is_adjacent(x, y) {
        return Err(Error::AdjacentPair(
            g.label(x).into_owned(),
            g.label(y).into_owned(),
        ));
    }
    let rest: Vec<NodeId> = g.nodes().filter(|&v| v != x && v != y).collect();
    for size in 0..=rest.len() {
        let mut found = None;
        for_each_combination(rest.len(), size, |idx| {
            let z: NodeSet = idx.iter().map(|&i| rest[i]).collect();
            let in_z = membership(g.node_count(), &z);
            let anc_z = g.ancestor_mask(z.iter().copied());
            if !reachable(g, x, y, &in_z, &anc_z) {
                found = Some(z);
                return false;
            }
            true
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Visits `k`-subsets of `0..n` in lexicographic order until `f` returns false.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        // rightmost index that can still advance
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
