#![allow(dead_code)]

use mfcss::engine::{ntss, render_results, EngineOptions, NtssOutput, Variant};
use mfcss::graph_model::{parse_pattern, DataGraph, GraphBuilder, NodeIx, PatternGraph};

pub struct Fixture {
    pub name: &'static str,
    pub graph: DataGraph,
    pub pattern: PatternGraph,
}

/// Graph with inverse adjacency already built.
pub fn graph(nodes: &[(u64, &str, f64)], edges: &[(u64, u64, f64, f64)]) -> DataGraph {
    let mut b = GraphBuilder::new();
    for &(id, label, rho) in nodes {
        b.node(id, &[label], rho);
    }
    for &(f, t, tr, r) in edges {
        b.edge(f, t, tr, r);
    }
    let mut g = b.build().expect("fixture graph");
    g.build_inverse_adjacency();
    g
}

/// `node` lines as `id:LABEL`, `edge` lines as `from>to/bound`, all
/// constraints 0.5.
pub fn pattern(nodes: &[(u32, &str)], edges: &[(u32, u32, u32)], start: u32) -> PatternGraph {
    let mut doc = String::new();
    for (id, label) in nodes {
        doc.push_str(&format!("node {id} {label} 0.5\n"));
    }
    for (f, t, b) in edges {
        doc.push_str(&format!("edge {f} {t} 0.5 0.5 0.5 {b}\n"));
    }
    doc.push_str(&format!("start {start}\n"));
    parse_pattern(&doc).expect("fixture pattern")
}

pub fn ix(g: &DataGraph, id: u64) -> NodeIx {
    g.index_of(id).expect("fixture node")
}

pub fn ids(g: &DataGraph, nodes: &[NodeIx]) -> Vec<u64> {
    nodes.iter().map(|&v| g.ext_id(v)).collect()
}

pub fn run(f: &Fixture, variant: Variant) -> NtssOutput {
    ntss(&f.graph, &f.pattern, &EngineOptions::new(variant)).expect("ntss")
}

pub fn canonical(f: &Fixture, variant: Variant) -> String {
    render_results(&f.graph, &f.pattern, &run(f, variant).results)
}

/// Matched external ids per pattern node of every result.
pub fn matched_ids(f: &Fixture, variant: Variant) -> Vec<(u64, Vec<Vec<u64>>)> {
    run(f, variant)
        .results
        .iter()
        .map(|r| {
            (
                f.graph.ext_id(r.start),
                r.matched.iter().map(|s| ids(&f.graph, s)).collect(),
            )
        })
        .collect()
}

pub const OK: f64 = 1.0;

pub fn toy_candidates() -> Fixture {
    Fixture {
        name: "toy_candidates",
        graph: graph(
            &[(0, "X", OK), (1, "PM", OK), (2, "SD", OK)],
            &[(0, 1, OK, OK), (1, 2, OK, OK)],
        ),
        pattern: pattern(&[(0, "PM"), (1, "SD")], &[(0, 1, 1)], 0),
    }
}

/// Only one PM->SD edge passes the trust constraint.
pub fn chain_single() -> Fixture {
    Fixture {
        name: "chain_single",
        graph: graph(
            &[(0, "PM", OK), (1, "SD", OK), (2, "PM", OK), (3, "SD", OK)],
            &[(0, 1, OK, OK), (2, 3, 0.1, OK)],
        ),
        pattern: pattern(&[(0, "PM"), (1, "SD")], &[(0, 1, 1)], 0),
    }
}

/// PM -> SD <- BA, SD -> ST.
pub fn multi_source() -> Fixture {
    Fixture {
        name: "multi_source",
        graph: graph(
            &[
                (0, "PM", OK),
                (1, "SD", OK),
                (2, "BA", OK),
                (3, "ST", OK),
                (4, "BA", OK),
                (5, "SD", OK),
                (6, "BA", OK),
                (7, "X", 0.2),
            ],
            &[
                (0, 1, OK, OK),
                (2, 1, OK, OK),
                (1, 3, OK, OK),
                (4, 3, OK, OK),
                (6, 5, OK, OK),
                (5, 3, OK, OK),
                (6, 7, OK, OK),
                (7, 1, OK, OK),
            ],
        ),
        pattern: {
            let mut doc = String::new();
            doc.push_str("node 0 PM 0.5\nnode 1 SD 0.5\nnode 2 BA 0.5\nnode 3 ST 0.5\n");
            doc.push_str("edge 0 1 0.5 0.5 0.5 1\nedge 2 1 0.5 0.5 0.5 2\nedge 1 3 0.5 0.5 0.5 1\n");
            doc.push_str("start 0\n");
            parse_pattern(&doc).unwrap()
        },
    }
}

/// A -> B, A -> C, B -> D, C -> D. Node 4 is reached only through B.
pub fn diamond() -> Fixture {
    Fixture {
        name: "diamond",
        graph: graph(
            &[(0, "A", OK), (1, "B", OK), (2, "C", OK), (3, "D", OK), (4, "D", OK), (5, "B", OK)],
            &[(0, 1, OK, OK), (0, 2, OK, OK), (1, 3, OK, OK), (2, 3, OK, OK), (1, 4, OK, OK), (5, 4, OK, OK)],
        ),
        pattern: pattern(
            &[(0, "A"), (1, "B"), (2, "C"), (3, "D")],
            &[(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)],
            0,
        ),
    }
}

/// A -> B -> C where one of two B candidates has no C.
pub fn sibling_alternative() -> Fixture {
    Fixture {
        name: "sibling_alternative",
        graph: graph(
            &[(0, "A", OK), (1, "B", OK), (2, "B", OK), (3, "C", OK)],
            &[(0, 1, OK, OK), (0, 2, OK, OK), (1, 3, OK, OK)],
        ),
        pattern: pattern(&[(0, "A"), (1, "B"), (2, "C")], &[(0, 1, 1), (1, 2, 1)], 0),
    }
}

/// A -> B -> C where the only B has no C.
pub fn chain_cascade() -> Fixture {
    Fixture {
        name: "chain_cascade",
        graph: graph(
            &[(0, "A", OK), (1, "B", OK), (2, "C", OK)],
            &[(0, 1, OK, OK), (2, 1, OK, OK)],
        ),
        pattern: pattern(&[(0, "A"), (1, "B"), (2, "C")], &[(0, 1, 1), (1, 2, 1)], 0),
    }
}

/// Two disjoint A -> B matches.
pub fn disjoint() -> Fixture {
    Fixture {
        name: "disjoint",
        graph: graph(
            &[(0, "A", OK), (1, "B", OK), (2, "A", OK), (3, "B", OK)],
            &[(0, 1, OK, OK), (2, 3, OK, OK)],
        ),
        pattern: pattern(&[(0, "A"), (1, "B")], &[(0, 1, 1)], 0),
    }
}

/// Eight nodes, three A leaders, two of which qualify; bound-2 edges.
pub fn two_leaders() -> Fixture {
    Fixture {
        name: "two_leaders",
        graph: graph(
            &[
                (0, "A", OK),
                (1, "A", OK),
                (2, "A", OK),
                (3, "X", 0.9),
                (4, "B", OK),
                (5, "B", OK),
                (6, "C", OK),
                (7, "X", 0.1),
            ],
            &[
                (0, 3, OK, OK),
                (3, 4, OK, OK),
                (1, 5, OK, OK),
                (4, 6, OK, OK),
                (5, 6, OK, OK),
                (2, 7, OK, OK),
                (7, 5, OK, OK),
            ],
        ),
        pattern: pattern(&[(0, "A"), (1, "B"), (2, "C")], &[(0, 1, 2), (1, 2, 2)], 0),
    }
}

/// 0 -> 1 <- 3, 2 -> 3: side source 2 is processed before any of its
/// successors has candidates.
pub fn unseeded_side_source() -> Fixture {
    Fixture {
        name: "unseeded_side_source",
        graph: graph(
            &[(0, "A", OK), (1, "B", OK), (2, "C", OK), (3, "D", OK), (4, "C", OK), (5, "D", OK)],
            &[(0, 1, OK, OK), (3, 1, OK, OK), (2, 3, OK, OK), (4, 5, OK, OK)],
        ),
        pattern: pattern(
            &[(0, "A"), (1, "B"), (2, "C"), (3, "D")],
            &[(0, 1, 1), (3, 1, 1), (2, 3, 1)],
            0,
        ),
    }
}

/// Two leaders share the B -> C path.
pub fn shared_path() -> Fixture {
    Fixture {
        name: "shared_path",
        graph: graph(
            &[(0, "A", OK), (1, "A", OK), (2, "B", OK), (3, "C", OK), (4, "X", OK)],
            &[(0, 2, OK, OK), (1, 2, OK, OK), (2, 4, OK, OK), (4, 3, OK, OK)],
        ),
        pattern: pattern(&[(0, "A"), (1, "B"), (2, "C")], &[(0, 1, 1), (1, 2, 2)], 0),
    }
}

pub fn all() -> Vec<Fixture> {
    vec![
        toy_candidates(),
        chain_single(),
        multi_source(),
        diamond(),
        sibling_alternative(),
        chain_cascade(),
        disjoint(),
        two_leaders(),
        unseeded_side_source(),
        shared_path(),
    ]
}
