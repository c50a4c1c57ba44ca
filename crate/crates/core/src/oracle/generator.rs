use std::collections::HashSet;
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fuzzy::{EdgeConstraint, Thresholds};
use crate::graph_model::{DataGraph, GraphBuilder, PatternEdgeDef, PatternGraph, PatternNode};

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub nodes: RangeInclusive<usize>,
    pub avg_out_degree: RangeInclusive<f64>,
    pub labels: u32,
    pub pattern_nodes: RangeInclusive<usize>,
    pub bounds: RangeInclusive<u32>,
    pub constraints: RangeInclusive<f64>,
    /// Node and edge attributes are drawn uniformly from this range.
    pub attributes: RangeInclusive<f64>,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            nodes: 10..=40,
            avg_out_degree: 2.0..=4.0,
            labels: 3,
            pattern_nodes: 3..=5,
            bounds: 1..=2,
            constraints: 0.3..=0.7,
            attributes: 0.3..=1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub seed: u64,
    pub graph: DataGraph,
    pub pattern: PatternGraph,
}

fn grid_in(rng: &mut ChaCha8Rng, range: &RangeInclusive<f64>) -> f64 {
    let x = rng.gen_range(*range.start()..=*range.end());
    ((x * 1e6).round() / 1e6).clamp(*range.start(), *range.end())
}

/// Random attributed graph plus random connected pattern DAG.
///
/// The pattern is a random spanning tree with a few extra edges, oriented
/// along a random node order that puts the start first, so side sources
/// appear regularly.
pub fn random_instance(config: &GeneratorConfig, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(config.nodes.clone());
    let avg = rng.gen_range(config.avg_out_degree.clone());
    let m = ((n as f64 * avg).round() as usize).min(n * (n - 1));

    let mut b = GraphBuilder::new();
    let names: Vec<String> = (0..config.labels).map(|k| format!("L{k}")).collect();
    for v in 0..n as u64 {
        let label = &names[rng.gen_range(0..names.len())];
        b.node(v, &[label.as_str()], grid_in(&mut rng, &config.attributes));
    }
    let mut seen = HashSet::new();
    while seen.len() < m {
        let (f, t) = (rng.gen_range(0..n as u64), rng.gen_range(0..n as u64));
        if f != t && seen.insert((f, t)) {
            b.edge(f, t, grid_in(&mut rng, &config.attributes), grid_in(&mut rng, &config.attributes));
        }
    }
    let graph = b.build()?;

    let k = rng.gen_range(config.pattern_nodes.clone());
    let nodes: Vec<PatternNode> = (0..k as u32)
        .map(|id| PatternNode {
            id,
            required_labels: vec![names[rng.gen_range(0..names.len())].clone()],
            lambda_rho_v: grid_in(&mut rng, &config.constraints),
        })
        .collect();
    // rank[i] is the position of node i in the orientation order; node 0 is
    // the start and comes first.
    let mut rest: Vec<usize> = (1..k).collect();
    rest.shuffle(&mut rng);
    let mut rank = vec![0usize; k];
    for (pos, &i) in rest.iter().enumerate() {
        rank[i] = pos + 1;
    }
    let mut pairs: Vec<(usize, usize)> = (1..k).map(|i| (rng.gen_range(0..i), i)).collect();
    let extra = rng.gen_range(0..=2usize);
    for _ in 0..extra {
        let (a, c) = (rng.gen_range(0..k), rng.gen_range(0..k));
        if a != c && !pairs.iter().any(|&(x, y)| (x, y) == (a, c) || (x, y) == (c, a)) {
            pairs.push((a, c));
        }
    }
    let edges: Vec<PatternEdgeDef> = pairs
        .into_iter()
        .map(|(a, c)| {
            let (from, to) = if rank[a] < rank[c] { (a, c) } else { (c, a) };
            PatternEdgeDef {
                from: from as u32,
                to: to as u32,
                constraint: EdgeConstraint {
                    lambda_trust: grid_in(&mut rng, &config.constraints),
                    lambda_intimacy: grid_in(&mut rng, &config.constraints),
                    lambda_influence: grid_in(&mut rng, &config.constraints),
                },
                len_bound: rng.gen_range(config.bounds.clone()),
            }
        })
        .collect();
    let pattern = PatternGraph::new(nodes, edges, 0, Thresholds::default())?;
    Ok(Instance { seed, graph, pattern })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_respect_config() {
        let cfg = GeneratorConfig::default();
        let mut multi = 0;
        for seed in 0..200 {
            let inst = random_instance(&cfg, seed).unwrap();
            assert!(cfg.nodes.contains(&inst.graph.node_count()));
            assert!(cfg.pattern_nodes.contains(&inst.pattern.node_count()));
            for e in inst.pattern.edges() {
                assert!(cfg.bounds.contains(&e.len_bound));
                assert!(cfg.constraints.contains(&e.constraint.lambda_trust));
            }
            let sources = (0..inst.pattern.node_count())
                .filter(|&u| inst.pattern.in_edges(u).is_empty())
                .count();
            if sources > 1 {
                multi += 1;
            }
        }
        assert!(multi > 20, "only {multi} multi-source patterns");
    }

    #[test]
    fn deterministic() {
        let cfg = GeneratorConfig::default();
        let a = random_instance(&cfg, 5).unwrap();
        let b = random_instance(&cfg, 5).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.pattern, b.pattern);
    }
}
