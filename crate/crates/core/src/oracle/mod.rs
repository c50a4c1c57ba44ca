//! Brute-force reference matcher for small instances.
//!
//! Paths are enumerated exhaustively by recursive DFS, and the match relation
//! is the greatest fixpoint of the dual-simulation clauses. Nothing here
//! calls into the path search or the matcher.

mod campaign;
mod generator;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use campaign::{instance_seed, run_campaign, CampaignConfig, CampaignReport, InstanceVerdict};
pub use generator::{random_instance, GeneratorConfig, Instance};

use crate::error::{Error, Result};
use crate::fuzzy::{aggregate_influence, aggregate_intimacy, aggregate_trust, membership, path_satisfies, PathAggregates};
use crate::graph_model::{DataGraph, NodeIx, PatternGraph};

/// Largest data graph the oracle accepts by default.
pub const DEFAULT_SIZE_LIMIT: usize = 40;

type EndpointPaths = HashMap<(NodeIx, NodeIx), Vec<Vec<NodeIx>>>;

/// Every satisfying simple path of every pattern edge, by endpoint pair.
#[derive(Debug, Clone, Default)]
pub struct PathTable {
    per_edge: Vec<EndpointPaths>,
    forward: Vec<HashMap<NodeIx, BTreeSet<NodeIx>>>,
    backward: Vec<HashMap<NodeIx, BTreeSet<NodeIx>>>,
}

impl PathTable {
    pub fn paths(&self, e: usize, from: NodeIx, to: NodeIx) -> &[Vec<NodeIx>] {
        self.per_edge[e].get(&(from, to)).map_or(&[], Vec::as_slice)
    }

    pub fn has(&self, e: usize, from: NodeIx, to: NodeIx) -> bool {
        self.per_edge[e].contains_key(&(from, to))
    }

    /// Heads reachable from `from` over edge `e`.
    pub fn heads(&self, e: usize, from: NodeIx) -> impl Iterator<Item = NodeIx> + '_ {
        self.forward[e].get(&from).into_iter().flatten().copied()
    }

    /// Tails reaching `to` over edge `e`.
    pub fn tails(&self, e: usize, to: NodeIx) -> impl Iterator<Item = NodeIx> + '_ {
        self.backward[e].get(&to).into_iter().flatten().copied()
    }

    pub fn path_count(&self) -> usize {
        self.per_edge.iter().flat_map(|m| m.values()).map(Vec::len).sum()
    }
}

fn aggregates(graph: &DataGraph, nodes: &[NodeIx]) -> PathAggregates {
    let mut trusts = Vec::new();
    let mut intimacies = Vec::new();
    for w in nodes.windows(2) {
        let link = graph.out_links(w[0]).iter().find(|l| l.node == w[1]).expect("dfs follows edges");
        trusts.push(link.trust);
        intimacies.push(link.intimacy);
    }
    let rhos: Vec<f64> = nodes[1..nodes.len() - 1].iter().map(|&v| graph.rho(v)).collect();
    PathAggregates {
        trust: aggregate_trust(&trusts).expect("at least one edge"),
        intimacy: aggregate_intimacy(&intimacies).expect("at least one edge"),
        influence: aggregate_influence(&rhos),
    }
}

fn dfs(graph: &DataGraph, path: &mut Vec<NodeIx>, bound: usize, emit: &mut dyn FnMut(&[NodeIx])) {
    if path.len() > 1 {
        emit(path);
    }
    if path.len() > bound {
        return;
    }
    let last = *path.last().unwrap();
    for link in graph.out_links(last) {
        if path.contains(&link.node) {
            continue;
        }
        path.push(link.node);
        dfs(graph, path, bound, emit);
        path.pop();
    }
}

/// Exhaustive path table. Refuses graphs above `size_limit` nodes.
pub fn enumerate_paths(graph: &DataGraph, pattern: &PatternGraph, size_limit: usize) -> Result<PathTable> {
    if graph.node_count() > size_limit {
        return Err(Error::Refused(format!(
            "graph has {} nodes, oracle limit is {size_limit}",
            graph.node_count()
        )));
    }
    let th = pattern.thresholds();
    let mut table = PathTable::default();
    for edge in pattern.edges() {
        let mut map = EndpointPaths::new();
        let mut fwd: HashMap<NodeIx, BTreeSet<NodeIx>> = HashMap::new();
        let mut bwd: HashMap<NodeIx, BTreeSet<NodeIx>> = HashMap::new();
        for v in graph.nodes() {
            let mut path = vec![v];
            dfs(graph, &mut path, edge.len_bound as usize, &mut |p| {
                if path_satisfies(&aggregates(graph, p), &edge.constraint, th) {
                    let (a, b) = (p[0], *p.last().unwrap());
                    map.entry((a, b)).or_default().push(p.to_vec());
                    fwd.entry(a).or_default().insert(b);
                    bwd.entry(b).or_default().insert(a);
                }
            });
        }
        table.per_edge.push(map);
        table.forward.push(fwd);
        table.backward.push(bwd);
    }
    Ok(table)
}

/// Label containment by name plus the influence membership.
fn node_matches(graph: &DataGraph, pattern: &PatternGraph, u: usize, v: NodeIx) -> bool {
    let node = pattern.node(u);
    let names: HashSet<&str> = graph.labels(v).iter().map(|&l| graph.label_name(l)).collect();
    node.required_labels.iter().all(|l| names.contains(l.as_str()))
        && membership(graph.rho(v), node.lambda_rho_v).expect("validated lambda").value()
            >= pattern.thresholds().rho_vm
}

/// How violating pairs are removed while iterating to the fixpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalOrder {
    /// All violators of a round at once.
    Batch,
    /// One randomly chosen violator at a time.
    Shuffled(u64),
}

/// Matched sets per pattern node, ascending.
pub type Relation = Vec<Vec<NodeIx>>;

/// Greatest dual-simulation relation with the start pinned to `v_s`,
/// restricted to the component of `(start, v_s)`.
pub fn mfcss_fixpoint(graph: &DataGraph, pattern: &PatternGraph, table: &PathTable, v_s: NodeIx) -> Option<Relation> {
    mfcss_fixpoint_with(graph, pattern, table, v_s, RemovalOrder::Batch)
}

pub fn mfcss_fixpoint_with(
    graph: &DataGraph,
    pattern: &PatternGraph,
    table: &PathTable,
    v_s: NodeIx,
    order: RemovalOrder,
) -> Option<Relation> {
    let n = pattern.node_count();
    let start = pattern.start();
    let mut sets: Vec<BTreeSet<NodeIx>> = (0..n)
        .map(|u| {
            if u == start {
                node_matches(graph, pattern, u, v_s).then_some(v_s).into_iter().collect()
            } else {
                graph.nodes().filter(|&v| node_matches(graph, pattern, u, v)).collect()
            }
        })
        .collect();

    let supported = |sets: &[BTreeSet<NodeIx>], u: usize, v: NodeIx| {
        pattern
            .out_edges(u)
            .iter()
            .all(|&e| table.heads(e, v).any(|w| sets[pattern.edge(e).to].contains(&w)))
            && pattern
                .in_edges(u)
                .iter()
                .all(|&e| table.tails(e, v).any(|w| sets[pattern.edge(e).from].contains(&w)))
    };
    let mut rng = match order {
        RemovalOrder::Shuffled(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        RemovalOrder::Batch => None,
    };
    loop {
        let mut violators: Vec<(usize, NodeIx)> = (0..n)
            .flat_map(|u| sets[u].iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| !supported(&sets, u, v))
            .collect();
        if violators.is_empty() {
            break;
        }
        if let Some(rng) = rng.as_mut() {
            violators.shuffle(rng);
            violators.truncate(1);
        }
        for (u, v) in violators {
            sets[u].remove(&v);
        }
    }
    if !sets[start].contains(&v_s) {
        return None;
    }

    // Keep the component of (start, v_s) over surviving path links.
    let mut seen: HashSet<(usize, NodeIx)> = HashSet::from([(start, v_s)]);
    let mut queue = VecDeque::from([(start, v_s)]);
    while let Some((u, v)) = queue.pop_front() {
        let mut next = Vec::new();
        for &e in pattern.out_edges(u) {
            let to = pattern.edge(e).to;
            next.extend(table.heads(e, v).filter(|w| sets[to].contains(w)).map(|w| (to, w)));
        }
        for &e in pattern.in_edges(u) {
            let from = pattern.edge(e).from;
            next.extend(table.tails(e, v).filter(|w| sets[from].contains(w)).map(|w| (from, w)));
        }
        for pair in next {
            if seen.insert(pair) {
                queue.push_back(pair);
            }
        }
    }
    let relation: Relation = (0..n)
        .map(|u| sets[u].iter().copied().filter(|&v| seen.contains(&(u, v))).collect())
        .collect();
    relation.iter().all(|s| !s.is_empty()).then_some(relation)
}

/// First pair on which the engine and the oracle disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub start: u64,
    pub pattern_node: u32,
    pub data_node: u64,
    /// True when the engine reported the pair and the oracle did not.
    pub engine_only: bool,
}

/// Compares per-pattern-node matched sets. `None` stands for an empty result.
pub fn compare(
    graph: &DataGraph,
    pattern: &PatternGraph,
    v_s: NodeIx,
    engine: Option<&[Vec<NodeIx>]>,
    oracle: Option<&[Vec<NodeIx>]>,
) -> Option<Witness> {
    let none: Vec<Vec<NodeIx>> = vec![Vec::new(); pattern.node_count()];
    let a = engine.unwrap_or(&none);
    let b = oracle.unwrap_or(&none);
    for u in 0..pattern.node_count() {
        let x: BTreeSet<NodeIx> = a[u].iter().copied().collect();
        let y: BTreeSet<NodeIx> = b[u].iter().copied().collect();
        if let Some(&v) = x.symmetric_difference(&y).next() {
            return Some(Witness {
                start: graph.ext_id(v_s),
                pattern_node: pattern.node(u).id,
                data_node: graph.ext_id(v),
                engine_only: x.contains(&v),
            });
        }
    }
    None
}

/// Start-node candidates as the oracle sees them.
pub fn start_candidates(graph: &DataGraph, pattern: &PatternGraph) -> Vec<NodeIx> {
    graph.nodes().filter(|&v| node_matches(graph, pattern, pattern.start(), v)).collect()
}
