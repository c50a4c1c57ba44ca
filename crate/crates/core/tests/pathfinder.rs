mod common;

use std::collections::BTreeSet;

use common::*;
use mfcss::fuzzy::path_satisfies;
use mfcss::graph_model::NodeIx;
use mfcss::oracle::{enumerate_paths, random_instance, GeneratorConfig, Instance};
use mfcss::pathfinder::{Direction, PathSearch};
use proptest::prelude::*;

fn config() -> GeneratorConfig {
    GeneratorConfig {
        nodes: 5..=25,
        bounds: 1..=3,
        attributes: 0.2..=1.0,
        ..GeneratorConfig::default()
    }
}

fn instance(seed: u64) -> Instance {
    let mut inst = random_instance(&config(), seed).unwrap();
    inst.graph.build_inverse_adjacency();
    inst
}

fn all_paths(groups: &[(NodeIx, Vec<Vec<NodeIx>>)]) -> BTreeSet<Vec<NodeIx>> {
    groups.iter().flat_map(|(_, ps)| ps.iter().cloned()).collect()
}

#[test]
fn diamond_reverse_matches_forward() {
    let g = graph(
        &[(0, "V", OK), (1, "X", OK), (2, "X", OK), (3, "W", OK)],
        &[(0, 1, OK, OK), (0, 2, OK, OK), (1, 3, OK, OK), (2, 3, OK, OK)],
    );
    let p = pattern(&[(0, "V"), (1, "W")], &[(0, 1, 2)], 0);
    let s = PathSearch::new(&g, &p);
    let fwd = s.bounded_paths(ix(&g, 0), 0);
    let rev = s.reverse_bounded_paths(ix(&g, 3), 0).unwrap();
    assert_eq!(fwd.by_endpoint.len(), 1);
    assert_eq!(fwd.by_endpoint[0].1.len(), 2);
    assert_eq!(all_paths(&fwd.by_endpoint), all_paths(&rev.by_endpoint));
    assert_eq!(rev.direction, Direction::Reverse);
}

#[test]
fn reverse_from_node_without_in_edges_is_empty() {
    let g = graph(&[(0, "V", OK), (1, "W", OK)], &[(1, 0, OK, OK)]);
    let p = pattern(&[(0, "V"), (1, "W")], &[(0, 1, 1)], 0);
    let s = PathSearch::new(&g, &p);
    assert!(s.reverse_bounded_paths(ix(&g, 1), 0).unwrap().by_endpoint.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn forward_and_reverse_agree(seed in any::<u64>()) {
        let inst = instance(seed);
        let (g, p) = (&inst.graph, &inst.pattern);
        let s = PathSearch::new(g, p);
        for (e, edge) in p.edges().iter().enumerate() {
            let mut fwd = BTreeSet::new();
            for v in g.nodes().filter(|&v| s.node_ok(edge.from, v)) {
                fwd.extend(all_paths(&s.bounded_paths(v, e).by_endpoint));
            }
            let mut rev = BTreeSet::new();
            for w in g.nodes().filter(|&w| s.node_ok(edge.to, w)) {
                rev.extend(all_paths(&s.reverse_bounded_paths(w, e).unwrap().by_endpoint));
            }
            prop_assert_eq!(fwd, rev);

            for v in g.nodes() {
                let a: Vec<_> = s.suitable_paths(v, e, Direction::Forward).unwrap().paths;
                for path in &a {
                    let back = s.suitable_paths(path.head(), e, Direction::Reverse).unwrap();
                    if s.node_ok(edge.from, v) {
                        prop_assert!(back.paths.iter().any(|q| q.nodes == path.nodes));
                    }
                }
            }
        }
    }

    #[test]
    fn satisfying_paths_equal_exhaustive_enumeration(seed in any::<u64>()) {
        let inst = instance(seed);
        let (g, p) = (&inst.graph, &inst.pattern);
        let table = enumerate_paths(g, p, 64).unwrap();
        let s = PathSearch::new(g, p);
        for (e, edge) in p.edges().iter().enumerate() {
            for v in g.nodes().filter(|&v| s.node_ok(edge.from, v)) {
                let found: BTreeSet<Vec<NodeIx>> = all_paths(&s.bounded_paths(v, e).by_endpoint)
                    .into_iter()
                    .filter(|nodes| path_satisfies(&s.aggregates(nodes), &edge.constraint, p.thresholds()))
                    .collect();
                // The table ignores node constraints; endpoints are filtered here.
                let table_heads: Vec<NodeIx> = table.heads(e, v).filter(|&w| s.node_ok(edge.to, w)).collect();
                let expected: BTreeSet<Vec<NodeIx>> = table_heads
                    .iter()
                    .flat_map(|&w| table.paths(e, v, w).iter().cloned())
                    .collect();
                prop_assert_eq!(&found, &expected);

                let best = s.suitable_paths(v, e, Direction::Forward).unwrap();
                let heads: Vec<NodeIx> = best.paths.iter().map(|q| q.head()).collect();
                prop_assert_eq!(heads, table_heads);
                for q in &best.paths {
                    prop_assert!(expected.contains(&q.nodes));
                    prop_assert!(q.len() as u32 <= edge.len_bound);
                }
            }
        }
    }

    #[test]
    fn selection_is_deterministic(seed in any::<u64>()) {
        let inst = instance(seed);
        let (g, p) = (&inst.graph, &inst.pattern);
        let s1 = PathSearch::new(g, p);
        let s2 = PathSearch::new(g, p);
        for e in 0..p.edges().len() {
            for v in g.nodes() {
                let a = s1.suitable_paths(v, e, Direction::Forward).unwrap();
                let b = s2.suitable_paths(v, e, Direction::Forward).unwrap();
                let c = s1.suitable_paths(v, e, Direction::Forward).unwrap();
                prop_assert_eq!(&a, &b);
                prop_assert_eq!(&a, &c);
            }
        }
    }
}
