//! Exhaustive enumeration of MAGs on a small labeled node set, partitioning
//! into Markov equivalence classes, and harnesses that check the
//! edge-replacement results on every enumerated instance.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::equivalence::{
    independence_signature, markov_equivalent, unshielded_colliders, IndependenceSignature,
};
use crate::error::{Error, Result};
use crate::graph::{is_collider, Edge, MixedGraph, NodeId};
use crate::mag::{is_ancestral, is_mag, Mag};
use crate::transform::{
    blanket_violation_against, blanket_violation_directed, delta_graphs,
    equivalence_class_closure, screen_violation,
};

/// Largest node count the exhaustive routines accept (4^10 pair assignments).
pub const MAX_ENUMERATION_NODES: usize = 5;

fn check_range(n: usize) -> Result<()> {
    if (1..=MAX_ENUMERATION_NODES).contains(&n) {
        Ok(())
    } else {
        Err(Error::NodeCountOutOfRange(n))
    }
}

/// Every mixed graph on `n` labeled nodes (4^(n(n-1)/2) of them), in pair-code order.
pub fn all_mixed_graphs(n: usize) -> impl Iterator<Item = MixedGraph> {
    let pairs = n * n.saturating_sub(1) / 2;
    (0..1u64 << (2 * pairs)).map(move |code| MixedGraph::from_pair_code(n, code))
}

/// Every ancestral graph on `n` nodes. Pairs are assigned one at a time and a
/// branch is cut as soon as the partial graph stops being ancestral; adding
/// edges never repairs a directed cycle or a bi-directed edge over a
/// directed path.
pub fn enumerate_ancestral(n: usize) -> Result<Vec<MixedGraph>> {
    check_range(n)?;
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    extend_ancestral(&MixedGraph::new(n), &pairs, &mut out);
    Ok(out)
}

fn extend_ancestral(g: &MixedGraph, pairs: &[(usize, usize)], out: &mut Vec<MixedGraph>) {
    let Some((&(a, b), rest)) = pairs.split_first() else {
        out.push(g.clone());
        return;
    };
    extend_ancestral(g, rest, out);
    for e in [Edge::directed(a, b), Edge::directed(b, a), Edge::bidirected(a, b)] {
        let next = g.with_edge_replaced(e).expect("pair in range");
        if is_ancestral(&next) {
            extend_ancestral(&next, rest, out);
        }
    }
}

/// Every MAG on nodes `0..n`, each once, sorted by canonical key.
pub fn enumerate_mags(n: usize) -> Result<Vec<Mag>> {
    let ancestral = enumerate_ancestral(n)?;
    let mut mags: Vec<(String, Mag)> = ancestral
        .into_par_iter()
        .filter(is_mag)
        .map(|g| (g.canonical_key(), Mag::new_unchecked(g)))
        .collect();
    mags.par_sort_by(|a, b| a.0.cmp(&b.0));
    Ok(mags.into_iter().map(|(_, m)| m).collect())
}

/// Markov equivalence classes of a collection of MAGs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassPartition {
    pub class_of: BTreeMap<String, usize>,
    /// Member keys per class, sorted; classes ordered by their smallest key.
    pub classes: Vec<Vec<String>>,
}

impl ClassPartition {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn same_class(&self, k1: &str, k2: &str) -> Option<bool> {
        Some(self.class_of.get(k1)? == self.class_of.get(k2)?)
    }
}

/// Groups MAGs by their full pairwise m-separation behaviour.
pub fn partition_into_classes(mags: &[Mag]) -> Result<ClassPartition> {
    if let Some(first) = mags.first() {
        if let Some(odd) = mags.iter().find(|m| m.node_count() != first.node_count()) {
            return Err(Error::NodeSetMismatch(format!(
                "{} nodes vs {} nodes",
                first.node_count(),
                odd.node_count()
            )));
        }
    }
    let signed: Vec<(String, IndependenceSignature)> = mags
        .par_iter()
        .map(|m| (m.canonical_key(), independence_signature(m)))
        .collect();
    Ok(partition_from_signatures(&signed))
}

fn partition_from_signatures(signed: &[(String, IndependenceSignature)]) -> ClassPartition {
    let mut groups: HashMap<&IndependenceSignature, BTreeSet<&str>> = HashMap::new();
    for (key, sig) in signed {
        groups.entry(sig).or_default().insert(key);
    }
    let mut classes: Vec<Vec<String>> = groups
        .into_values()
        .map(|keys| keys.into_iter().map(String::from).collect())
        .collect();
    classes.sort();
    let class_of = classes
        .iter()
        .enumerate()
        .flat_map(|(id, keys)| keys.iter().map(move |k| (k.clone(), id)))
        .collect();
    ClassPartition { class_of, classes }
}

/// All MAGs on `n` nodes with their keys, signatures and classes; shared by
/// the harnesses below.
pub struct Census {
    pub n: usize,
    pub mags: Vec<Mag>,
    pub keys: Vec<String>,
    pub signatures: Vec<IndependenceSignature>,
    pub partition: ClassPartition,
    index: HashMap<String, usize>,
}

impl Census {
    pub fn new(n: usize) -> Result<Self> {
        let mags = enumerate_mags(n)?;
        let keys: Vec<String> = mags.iter().map(|m| m.canonical_key()).collect();
        let signatures: Vec<IndependenceSignature> =
            mags.par_iter().map(|m| independence_signature(m)).collect();
        let signed: Vec<_> = keys.iter().cloned().zip(signatures.iter().cloned()).collect();
        let partition = partition_from_signatures(&signed);
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        Ok(Census {
            n,
            mags,
            keys,
            signatures,
            partition,
            index,
        })
    }

    pub fn position(&self, key: &str) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// True if `g` is a MAG with the same independence model as member `i`.
    fn equivalent_mag(&self, i: usize, g: &MixedGraph) -> bool {
        is_mag(g) && independence_signature(g) == self.signatures[i]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub first: String,
    pub second: String,
    /// Edges of `first` whose mark differs in `second`, as key tokens.
    pub delta: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureGap {
    pub class_id: usize,
    pub class_size: usize,
    pub unreachable: usize,
    pub unreachable_keys: Vec<String>,
}

/// Outcome of one exhaustive check: how many instances it covered and a
/// description of every instance that failed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub cases: u64,
    pub violations: Vec<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn merge(mut self, other: CheckOutcome) -> CheckOutcome {
        self.cases += other.cases;
        self.violations.extend(other.violations);
        self
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations.push(describe());
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Checks {
    pub thm2_vs_oracle: CheckOutcome,
    pub thm3_sound: CheckOutcome,
    pub thm3_necessary: CheckOutcome,
    pub thm4_iff: CheckOutcome,
    pub lemma1: CheckOutcome,
    pub lemma2: CheckOutcome,
    pub closure_safe: CheckOutcome,
    pub partition_consistent: CheckOutcome,
}

impl Checks {
    pub fn all(&self) -> [(&'static str, &CheckOutcome); 8] {
        [
            ("thm2_vs_oracle", &self.thm2_vs_oracle),
            ("thm3_sound", &self.thm3_sound),
            ("thm3_necessary", &self.thm3_necessary),
            ("thm4_iff", &self.thm4_iff),
            ("lemma1", &self.lemma1),
            ("lemma2", &self.lemma2),
            ("closure_safe", &self.closure_safe),
            ("partition_consistent", &self.partition_consistent),
        ]
    }

    pub fn passed(&self) -> bool {
        self.all().iter().all(|(_, c)| c.passed())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub n: usize,
    pub mag_count: usize,
    pub class_count: usize,
    pub checks: Checks,
}

/// Results of probing the conjecture that every pair of distinct equivalent
/// MAGs differs on at least one edge that is blanketed (or blanketed against
/// one of its endpoints) in whichever graph of the pair carries it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub mag_count: usize,
    pub class_count: usize,
    pub classes_examined: usize,
    /// Unordered pairs of distinct equivalent MAGs.
    pub pairs_examined: u64,
    pub counterexamples: Vec<Counterexample>,
    pub closure_gaps: Vec<ClosureGap>,
    /// Filled in when the theorem checks were run alongside.
    pub checks: Option<Checks>,
}

impl ConjectureReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}

fn edge_token(e: &Edge) -> String {
    match *e {
        Edge::Directed { tail, head } => format!("{}>{}", tail.0, head.0),
        Edge::Bidirected(a, b) => format!("{}<>{}", a.0, b.0),
    }
}

/// Edges of `g` that could start a move: blanketed directed edges and
/// bi-directed edges blanketed against either endpoint.
fn movable_pairs(g: &MixedGraph) -> BTreeSet<(NodeId, NodeId)> {
    g.edges()
        .into_iter()
        .filter(|e| match *e {
            Edge::Directed { tail, head } => {
                matches!(blanket_violation_directed(g, tail, head), Ok(None))
            }
            Edge::Bidirected(a, b) => {
                matches!(blanket_violation_against(g, a, b), Ok(None))
                    || matches!(blanket_violation_against(g, b, a), Ok(None))
            }
        })
        .map(|e| e.pair())
        .collect()
}

pub fn test_conjecture1(n: usize) -> Result<ConjectureReport> {
    Ok(test_conjecture1_with(&Census::new(n)?))
}

pub fn test_conjecture1_with(census: &Census) -> ConjectureReport {
    let movable: Vec<BTreeSet<(NodeId, NodeId)>> =
        census.mags.par_iter().map(|m| movable_pairs(m)).collect();
    let classes = &census.partition.classes;

    let per_class: Vec<(u64, Vec<Counterexample>, Option<ClosureGap>)> = classes
        .par_iter()
        .enumerate()
        .map(|(class_id, keys)| {
            let idx: Vec<usize> = keys.iter().map(|k| census.index[k]).collect();
            let mut pairs = 0;
            let mut counterexamples = Vec::new();
            for (a, &i) in idx.iter().enumerate() {
                for &j in &idx[a + 1..] {
                    pairs += 1;
                    // Equivalent MAGs share adjacencies; a failure here is a
                    // violation reported by the equivalence checks.
                    let Ok(d) = delta_graphs(&census.mags[i], &census.mags[j]) else {
                        continue;
                    };
                    let moves = |e: &Edge| movable[i].contains(&e.pair()) || movable[j].contains(&e.pair());
                    if !d.edges().iter().any(moves) {
                        counterexamples.push(Counterexample {
                            first: census.keys[i].clone(),
                            second: census.keys[j].clone(),
                            delta: d.edges().iter().map(edge_token).collect(),
                        });
                    }
                }
            }
            let closure = equivalence_class_closure(&census.mags[idx[0]], usize::MAX);
            let unreachable_keys: Vec<String> = keys
                .iter()
                .filter(|k| !closure.members.contains_key(*k))
                .cloned()
                .collect();
            let gap = (!unreachable_keys.is_empty()).then(|| ClosureGap {
                class_id,
                class_size: keys.len(),
                unreachable: unreachable_keys.len(),
                unreachable_keys,
            });
            (pairs, counterexamples, gap)
        })
        .collect();

    let mut report = ConjectureReport {
        n: census.n,
        mag_count: census.mags.len(),
        class_count: classes.len(),
        classes_examined: classes.len(),
        pairs_examined: 0,
        counterexamples: Vec::new(),
        closure_gaps: Vec::new(),
        checks: None,
    };
    for (pairs, cex, gap) in per_class {
        report.pairs_examined += pairs;
        report.counterexamples.extend(cex);
        report.closure_gaps.extend(gap);
    }
    report
}

/// Checks, for a blanketed `x → y` or an `x ↔ y` blanketed against `x`, that
/// every path `(A1, …, Ak, x)` avoiding `y`, whose internal nodes are all
/// colliders and whose `Ak` is a spouse of `x`, has some `Ai` that is a
/// spouse of `y` or has every `Ai` a parent of `y`. Returns false on a
/// violating path.
pub fn check_lemma1(m: &Mag, x: NodeId, y: NodeId) -> Result<bool> {
    m.check_node(x)?;
    m.check_node(y)?;
    let blanketed = if x != y && m.has_directed(x, y) {
        blanket_violation_directed(m, x, y)?.is_none()
    } else if x != y && m.has_bidirected(x, y) {
        blanket_violation_against(m, x, y)?.is_none()
    } else {
        return Err(Error::Precondition(format!(
            "no edge {}→{} or {}↔{}",
            m.label(x),
            m.label(y),
            m.label(x),
            m.label(y)
        )));
    };
    if !blanketed {
        return Err(Error::Precondition(format!(
            "the edge between {} and {} is not blanketed against {}",
            m.label(x),
            m.label(y),
            m.label(x)
        )));
    }
    Ok(lemma1_violation(m, x, y).is_none())
}

/// First path `(A1, …, Ak, x)` breaking the collider-path property, if any.
pub fn lemma1_violation(g: &MixedGraph, x: NodeId, y: NodeId) -> Option<Vec<NodeId>> {
    let mut on_path = vec![false; g.node_count()];
    on_path[x.0] = true;
    on_path[y.0] = true;
    // stored from x outward: [x, Ak, Ak-1, …]
    let mut stack = vec![x];
    for ak in g.spouses(x) {
        if ak == y {
            continue;
        }
        on_path[ak.0] = true;
        stack.push(ak);
        let found = lemma1_dfs(g, y, &mut stack, &mut on_path);
        stack.pop();
        on_path[ak.0] = false;
        if found.is_some() {
            return found;
        }
    }
    None
}

fn lemma1_dfs(
    g: &MixedGraph,
    y: NodeId,
    stack: &mut Vec<NodeId>,
    on_path: &mut [bool],
) -> Option<Vec<NodeId>> {
    let a = &stack[1..];
    let some_spouse = a.iter().any(|&v| g.has_bidirected(v, y));
    let all_parents = a.iter().all(|&v| g.has_directed(v, y));
    if !(some_spouse || all_parents) {
        let mut p = stack.clone();
        p.reverse();
        return Some(p);
    }
    let cur = *stack.last().expect("non-empty");
    let succ = stack[stack.len() - 2];
    for w in g.neighbors(cur) {
        if on_path[w.0] || !is_collider(g, w, cur, succ) {
            continue;
        }
        on_path[w.0] = true;
        stack.push(w);
        let found = lemma1_dfs(g, y, stack, on_path);
        stack.pop();
        on_path[w.0] = false;
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Screened implies blanketed, for every directed edge of every MAG on `n` nodes.
pub fn check_lemma2(n: usize) -> Result<CheckOutcome> {
    let mags = enumerate_mags(n)?;
    Ok(mags
        .par_iter()
        .map(lemma2_on)
        .reduce(CheckOutcome::default, CheckOutcome::merge))
}

fn lemma2_on(m: &Mag) -> CheckOutcome {
    let mut out = CheckOutcome::default();
    for e in m.edges() {
        if let Edge::Directed { tail, head } = e {
            let screened = matches!(screen_violation(m, tail, head), Ok(None));
            let blanketed = matches!(blanket_violation_directed(m, tail, head), Ok(None));
            out.record(!screened || blanketed, || {
                format!("{}: {} screened but not blanketed", m.canonical_key(), edge_token(&e))
            });
        }
    }
    out
}

pub fn verify_theorems(n: usize) -> Result<EquivalenceReport> {
    Ok(verify_theorems_with(&Census::new(n)?))
}

pub fn verify_theorems_with(census: &Census) -> EquivalenceReport {
    let count = census.mags.len();
    let per_mag: Vec<Checks> = (0..count)
        .into_par_iter()
        .map(|i| checks_for(census, i))
        .collect();
    let mut checks = per_mag.into_iter().fold(Checks::default(), |acc, c| Checks {
        thm2_vs_oracle: acc.thm2_vs_oracle.merge(c.thm2_vs_oracle),
        thm3_sound: acc.thm3_sound.merge(c.thm3_sound),
        thm3_necessary: acc.thm3_necessary.merge(c.thm3_necessary),
        thm4_iff: acc.thm4_iff.merge(c.thm4_iff),
        lemma1: acc.lemma1.merge(c.lemma1),
        lemma2: acc.lemma2.merge(c.lemma2),
        closure_safe: acc.closure_safe.merge(c.closure_safe),
        partition_consistent: acc.partition_consistent.merge(c.partition_consistent),
    });
    for keys in &census.partition.classes {
        let first = &census.mags[census.index[&keys[0]]];
        let colliders = unshielded_colliders(first);
        for k in &keys[1..] {
            let m = &census.mags[census.index[k]];
            checks.partition_consistent.record(
                m.same_adjacencies(first) && unshielded_colliders(m) == colliders,
                || format!("{k} and {} share a class but differ in skeleton or colliders", keys[0]),
            );
        }
    }
    EquivalenceReport {
        n: census.n,
        mag_count: count,
        class_count: census.partition.class_count(),
        checks,
    }
}

fn checks_for(census: &Census, i: usize) -> Checks {
    let m = &census.mags[i];
    let key = &census.keys[i];
    let mut c = Checks::default();

    for (j, other) in census.mags.iter().enumerate() {
        let oracle = census.signatures[i] == census.signatures[j];
        let graphical = markov_equivalent(m, other).unwrap_or(!oracle);
        c.thm2_vs_oracle.record(graphical == oracle, || {
            format!("{key} vs {}: graphical {graphical}, oracle {oracle}", census.keys[j])
        });
    }

    for e in m.edges() {
        match e {
            Edge::Directed { tail: x, head: y } => {
                let blanket = blanket_violation_directed(m, x, y).expect("edge present").is_none();
                let screened = screen_violation(m, x, y).expect("edge present").is_none();
                let to_bi = m.with_edge_replaced(Edge::bidirected(x, y)).expect("in range");
                let bi_equivalent = census.equivalent_mag(i, &to_bi);
                if blanket {
                    c.thm3_sound.record(bi_equivalent, || {
                        format!("{key}: {} blanketed but ↔ replacement not an equivalent MAG", edge_token(&e))
                    });
                    c.lemma1.record(lemma1_violation(m, x, y).is_none(), || {
                        format!("{key}: collider path property fails for {}", edge_token(&e))
                    });
                }
                if bi_equivalent {
                    let against = blanket_violation_against(&to_bi, x, y)
                        .expect("edge present")
                        .is_none();
                    c.thm3_necessary.record(blanket && against, || {
                        format!(
                            "{key}: ↔ replacement of {} equivalent but blanketed={blanket}, against={against}",
                            edge_token(&e)
                        )
                    });
                }
                let reversed = m.with_edge_replaced(Edge::directed(y, x)).expect("in range");
                let rev_equivalent = census.equivalent_mag(i, &reversed);
                c.thm4_iff.record(rev_equivalent == screened, || {
                    format!(
                        "{key}: reversing {} equivalent={rev_equivalent}, screened={screened}",
                        edge_token(&e)
                    )
                });
                c.lemma2.record(!screened || blanket, || {
                    format!("{key}: {} screened but not blanketed", edge_token(&e))
                });
            }
            Edge::Bidirected(a, b) => {
                for (x, y) in [(a, b), (b, a)] {
                    if blanket_violation_against(m, x, y).expect("edge present").is_some() {
                        continue;
                    }
                    let to_dir = m.with_edge_replaced(Edge::directed(x, y)).expect("in range");
                    c.thm3_sound.record(census.equivalent_mag(i, &to_dir), || {
                        format!(
                            "{key}: {} blanketed against {} but → replacement not an equivalent MAG",
                            edge_token(&e),
                            x.0
                        )
                    });
                    c.lemma1.record(lemma1_violation(m, x, y).is_none(), || {
                        format!("{key}: collider path property fails for {} against {}", edge_token(&e), x.0)
                    });
                }
            }
        }
    }

    let class = census.partition.class_of[key];
    let closure = equivalence_class_closure(m, usize::MAX);
    for k in closure.keys() {
        c.closure_safe.record(census.partition.class_of.get(k) == Some(&class), || {
            format!("{key}: closure reaches {k} outside its class")
        });
    }
    c
}
