//! Seeded random topologies for benchmarks and tests.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph_model::{apply_attributes, synthesize_attributes, DataGraph};

/// Directed edge list over ids `0..nodes` with `edges` distinct non-loop
/// edges. Each endpoint is, with probability one half, copied from a random
/// earlier endpoint and otherwise uniform, which gives heavy-tailed and
/// correlated in- and out-degrees.
pub fn synthetic_topology(nodes: usize, edges: usize, seed: u64) -> Result<Vec<(u64, u64)>> {
    if nodes < 2 {
        return Err(Error::Config("synthetic graph needs at least two nodes".into()));
    }
    let max = nodes as u128 * (nodes as u128 - 1);
    if edges as u128 > max / 2 {
        return Err(Error::Config(format!("{edges} edges is too dense for {nodes} nodes")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<(u64, u64)> = HashSet::with_capacity(edges);
    let mut pairs = Vec::with_capacity(edges);
    let mut endpoints: Vec<u64> = Vec::with_capacity(2 * edges);
    let n = nodes as u64;
    // The first `nodes` edges start at 0, 1, 2, ... so every node appears
    // when `edges >= nodes`.
    let mut k = 0u64;
    while pairs.len() < edges {
        let pick = |rng: &mut ChaCha8Rng| {
            if !endpoints.is_empty() && rng.gen_bool(0.5) {
                endpoints[rng.gen_range(0..endpoints.len())]
            } else {
                rng.gen_range(0..n)
            }
        };
        let from = if k < n { k } else { pick(&mut rng) };
        let to = pick(&mut rng);
        if from == to || !seen.insert((from, to)) {
            continue;
        }
        pairs.push((from, to));
        endpoints.push(from);
        endpoints.push(to);
        k += 1;
    }
    Ok(pairs)
}

/// [`synthetic_topology`] plus attributes from
/// [`synthesize_attributes`] with the same seed.
pub fn synthetic_graph(nodes: usize, edges: usize, seed: u64, label_alphabet: u32) -> Result<DataGraph> {
    let pairs = synthetic_topology(nodes, edges, seed)?;
    let (mut graph, _) = DataGraph::from_edge_pairs(&pairs)?;
    let sidecar = synthesize_attributes(&graph, seed, label_alphabet)?;
    apply_attributes(&mut graph, &sidecar)?;
    Ok(graph)
}
