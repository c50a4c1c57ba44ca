use super::PatternGraph;

/// Matching order and distance data derived from a validated pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternPlan {
    /// Topological order, start first, ties by ascending pattern node id.
    pub topo_order: Vec<usize>,
    /// Nodes with in-degree zero, ascending. Always contains the start.
    pub zero_indeg: Vec<usize>,
    /// Largest directed shortest-path distance over reachable ordered pairs,
    /// with each edge weighted by its length bound.
    pub weighted_diameter: u32,
    directed: Vec<Vec<Option<u32>>>,
    undirected: Vec<Vec<Option<u32>>>,
}

impl PatternPlan {
    /// Weighted shortest directed distance from `a` to `b`.
    pub fn directed_distance(&self, a: usize, b: usize) -> Option<u32> {
        self.directed[a][b]
    }

    /// Weighted shortest distance from `a` to `b` ignoring edge direction.
    pub fn undirected_distance(&self, a: usize, b: usize) -> Option<u32> {
        self.undirected[a][b]
    }

    pub fn position(&self, u: usize) -> usize {
        self.topo_order.iter().position(|&x| x == u).expect("node in order")
    }
}

#[allow(clippy::needless_range_loop)]
fn floyd_warshall(n: usize, arcs: impl Iterator<Item = (usize, usize, u32)>) -> Vec<Vec<Option<u32>>> {
    let mut dist = vec![vec![None; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for (a, b, w) in arcs {
        let cur = &mut dist[a][b];
        *cur = Some(cur.map_or(w, |c: u32| c.min(w)));
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = dist[i][k] else { continue };
            for j in 0..n {
                if let Some(kj) = dist[k][j] {
                    let via = ik + kj;
                    if dist[i][j].is_none_or(|d| via < d) {
                        dist[i][j] = Some(via);
                    }
                }
            }
        }
    }
    dist
}

pub fn plan_pattern(pattern: &PatternGraph) -> PatternPlan {
    let n = pattern.node_count();
    let topo_order = pattern.kahn_order();
    debug_assert_eq!(topo_order.len(), n, "validated patterns are acyclic");
    let zero_indeg = (0..n).filter(|&u| pattern.in_edges(u).is_empty()).collect();
    let arcs = || pattern.edges().iter().map(|e| (e.from, e.to, e.len_bound));
    let directed = floyd_warshall(n, arcs());
    let undirected = floyd_warshall(n, arcs().flat_map(|(a, b, w)| [(a, b, w), (b, a, w)]));
    let weighted_diameter = directed.iter().flatten().flatten().copied().max().unwrap_or(0);
    PatternPlan {
        topo_order,
        zero_indeg,
        weighted_diameter,
        directed,
        undirected,
    }
}
