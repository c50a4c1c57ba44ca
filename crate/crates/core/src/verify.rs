//! Structural checks over emitted matching subgraphs.
//!
//! These recompute everything from the data graph and the pattern and share
//! no code with the path search or the matcher.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::engine::MatchingSubgraph;
use crate::fuzzy::{aggregate_influence, aggregate_intimacy, aggregate_trust, path_satisfies};
use crate::graph_model::{DataGraph, NodeIx, PatternGraph, PatternPlan};

/// Tolerance between stored and recomputed aggregates.
pub const AGGREGATE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub start: u64,
    pub detail: String,
}

fn violation(graph: &DataGraph, sub: &MatchingSubgraph, detail: String) -> Violation {
    Violation {
        start: graph.ext_id(sub.start),
        detail,
    }
}

/// Every pattern node is matched, every matched node has a path per
/// pattern out-edge and per pattern in-edge, and every path connects
/// matched nodes of the right pattern nodes.
pub fn check_dual_simulation(graph: &DataGraph, pattern: &PatternGraph, sub: &MatchingSubgraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut tails: Vec<HashSet<NodeIx>> = vec![HashSet::new(); pattern.edges().len()];
    let mut heads: Vec<HashSet<NodeIx>> = vec![HashSet::new(); pattern.edges().len()];
    for (e, paths) in sub.paths.iter().enumerate() {
        let edge = pattern.edge(e);
        for p in paths {
            let (t, h) = (p.nodes[0], *p.nodes.last().unwrap());
            tails[e].insert(t);
            heads[e].insert(h);
            if sub.matched[edge.from].binary_search(&t).is_err() || sub.matched[edge.to].binary_search(&h).is_err() {
                out.push(violation(graph, sub, format!("edge {e} path endpoints not matched")));
            }
        }
    }
    for (u, set) in sub.matched.iter().enumerate() {
        let uid = pattern.node(u).id;
        if set.is_empty() {
            out.push(violation(graph, sub, format!("pattern node {uid} unmatched")));
        }
        for &v in set {
            for &e in pattern.out_edges(u) {
                if !tails[e].contains(&v) {
                    out.push(violation(
                        graph,
                        sub,
                        format!("node {} for {uid} lacks an out-path on edge {e}", graph.ext_id(v)),
                    ));
                }
            }
            for &e in pattern.in_edges(u) {
                if !heads[e].contains(&v) {
                    out.push(violation(
                        graph,
                        sub,
                        format!("node {} for {uid} lacks an in-path on edge {e}", graph.ext_id(v)),
                    ));
                }
            }
        }
    }
    if sub.matched[pattern.start()] != [sub.start] {
        out.push(violation(graph, sub, "start set is not the start node".into()));
    }
    out
}

fn bfs(adj: &HashMap<NodeIx, Vec<NodeIx>>, from: NodeIx) -> HashMap<NodeIx, u32> {
    let mut dist = HashMap::from([(from, 0u32)]);
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        for &y in adj.get(&x).into_iter().flatten() {
            if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(y) {
                slot.insert(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Hop distances from the start within the union of emitted paths.
///
/// A node matched to a pattern node reachable from the start must lie within
/// the pattern's weighted distance of it along directed union edges, which is
/// bounded by the weighted diameter. Nodes of pattern nodes only reachable
/// through a side source are checked with undirected distances instead.
pub fn check_locality(
    graph: &DataGraph,
    pattern: &PatternGraph,
    plan: &PatternPlan,
    sub: &MatchingSubgraph,
) -> Vec<Violation> {
    let mut directed: HashMap<NodeIx, Vec<NodeIx>> = HashMap::new();
    let mut undirected: HashMap<NodeIx, Vec<NodeIx>> = HashMap::new();
    for p in sub.paths.iter().flatten() {
        for w in p.nodes.windows(2) {
            directed.entry(w[0]).or_default().push(w[1]);
            undirected.entry(w[0]).or_default().push(w[1]);
            undirected.entry(w[1]).or_default().push(w[0]);
        }
    }
    let d_dir = bfs(&directed, sub.start);
    let d_und = bfs(&undirected, sub.start);
    let start = pattern.start();
    let diameter = plan.weighted_diameter;
    let mut out = Vec::new();
    for (u, set) in sub.matched.iter().enumerate() {
        let uid = pattern.node(u).id;
        for &v in set {
            let (got, limit, how) = match plan.directed_distance(start, u) {
                Some(d) => (d_dir.get(&v), d.min(diameter), "directed"),
                None => (
                    d_und.get(&v),
                    plan.undirected_distance(start, u).expect("pattern is connected"),
                    "undirected",
                ),
            };
            match got {
                Some(&h) if h <= limit => {}
                Some(&h) => out.push(violation(
                    graph,
                    sub,
                    format!("node {} for {uid} at {how} distance {h} > {limit}", graph.ext_id(v)),
                )),
                None => out.push(violation(
                    graph,
                    sub,
                    format!("node {} for {uid} unreachable ({how})", graph.ext_id(v)),
                )),
            }
        }
    }
    out
}

/// Length, simplicity, edge existence, aggregates and memberships of every
/// emitted path.
pub fn check_paths(graph: &DataGraph, pattern: &PatternGraph, sub: &MatchingSubgraph) -> Vec<Violation> {
    let constraints = pattern.node_constraints(graph);
    let th = pattern.thresholds();
    let mut out = Vec::new();
    for (e, paths) in sub.paths.iter().enumerate() {
        let edge = pattern.edge(e);
        for p in paths {
            let mut bad = |what: &str| {
                let ids: Vec<u64> = p.nodes.iter().map(|&v| graph.ext_id(v)).collect();
                out.push(violation(graph, sub, format!("edge {e} path {ids:?}: {what}")));
            };
            if p.edge != e {
                bad("stored under the wrong edge");
            }
            let len = p.nodes.len().saturating_sub(1);
            if len == 0 || len > edge.len_bound as usize {
                bad("length outside bound");
                continue;
            }
            let distinct: HashSet<NodeIx> = p.nodes.iter().copied().collect();
            if distinct.len() != p.nodes.len() {
                bad("not simple");
            }
            let mut trusts = Vec::with_capacity(len);
            let mut intimacies = Vec::with_capacity(len);
            let mut missing = false;
            for w in p.nodes.windows(2) {
                match graph.out_links(w[0]).iter().find(|l| l.node == w[1]) {
                    Some(l) => {
                        trusts.push(l.trust);
                        intimacies.push(l.intimacy);
                    }
                    None => missing = true,
                }
            }
            if missing {
                bad("uses a missing data edge");
                continue;
            }
            let rhos: Vec<f64> = p.nodes[1..len].iter().map(|&v| graph.rho(v)).collect();
            let trust = aggregate_trust(&trusts).expect("non-empty");
            let intimacy = aggregate_intimacy(&intimacies).expect("non-empty");
            let influence = aggregate_influence(&rhos);
            let a = &p.aggregates;
            if (a.trust - trust).abs() > AGGREGATE_TOLERANCE
                || (a.intimacy - intimacy).abs() > AGGREGATE_TOLERANCE
                || (a.influence - influence).abs() > AGGREGATE_TOLERANCE
            {
                bad("stored aggregates differ from recomputed");
            }
            if !path_satisfies(a, &edge.constraint, th) {
                bad("fails a membership threshold");
            }
            let (t, h) = (p.nodes[0], p.nodes[len]);
            if !constraints[edge.from].accepts(graph.labels(t), graph.rho(t), th) {
                bad("tail fails its node constraint");
            }
            if !constraints[edge.to].accepts(graph.labels(h), graph.rho(h), th) {
                bad("head fails its node constraint");
            }
        }
    }
    out
}

/// All three checks.
pub fn check_all(
    graph: &DataGraph,
    pattern: &PatternGraph,
    plan: &PatternPlan,
    sub: &MatchingSubgraph,
) -> Vec<Violation> {
    let mut out = check_dual_simulation(graph, pattern, sub);
    out.extend(check_locality(graph, pattern, plan, sub));
    out.extend(check_paths(graph, pattern, sub));
    out
}
