use std::fmt::Write;

use super::MatchingSubgraph;
use crate::graph_model::{DataGraph, PatternGraph};

/// Canonical text form of a result list.
///
/// ```text
/// S <start id>
/// U <pattern node id> <matched ids ascending>
/// P <edge index> <id,id,...> <trust> <intimacy> <influence>
/// ```
///
/// Records are sorted by start id, `U` lines by pattern node id, `P` lines by
/// edge index then node sequence. Aggregates use six decimals.
pub fn render_results(graph: &DataGraph, pattern: &PatternGraph, results: &[MatchingSubgraph]) -> String {
    let mut order: Vec<&MatchingSubgraph> = results.iter().collect();
    order.sort_by_key(|r| r.start);
    let mut out = String::new();
    for r in order {
        let _ = writeln!(out, "S {}", graph.ext_id(r.start));
        for (u, set) in r.matched.iter().enumerate() {
            let _ = write!(out, "U {}", pattern.node(u).id);
            for &v in set {
                let _ = write!(out, " {}", graph.ext_id(v));
            }
            out.push('\n');
        }
        for (e, paths) in r.paths.iter().enumerate() {
            for p in paths {
                let ids: Vec<String> = p.nodes.iter().map(|&v| graph.ext_id(v).to_string()).collect();
                let a = &p.aggregates;
                let _ = writeln!(
                    out,
                    "P {e} {} {:.6} {:.6} {:.6}",
                    ids.join(","),
                    a.trust,
                    a.intimacy,
                    a.influence
                );
            }
        }
    }
    out
}
