//! The attribute sidecar: the single persisted source of node and edge
//! attributes, so separate runs (and separate implementations) consume
//! identical inputs.
//!
//! ```text
//! N <id> <rho> <label[,label...]>        one per node, ascending id
//! E <src> <dst> <trust> <intimacy>       one per edge, forward adjacency order
//! ```
//!
//! Reals are written with six decimals.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::data::check_unit;
use super::{DataGraph, LabelId, NodeIx};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct NodeAttributes {
    pub id: u64,
    pub rho: f64,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeAttributes {
    pub from: u64,
    pub to: u64,
    pub trust: f64,
    pub intimacy: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AttributeSidecar {
    pub nodes: Vec<NodeAttributes>,
    pub edges: Vec<EdgeAttributes>,
}

const SCALE: u32 = 1_000_000;

fn unit_sample(rng: &mut ChaCha8Rng) -> f64 {
    // Drawn on the six-decimal grid so the written text is exact.
    rng.gen_range(0..=SCALE) as f64 / SCALE as f64
}

/// Draws uniform attributes: `rho` then one label per node in ascending id
/// order, then `trust` and `intimacy` per edge in adjacency order.
pub fn synthesize_attributes(
    graph: &DataGraph,
    seed: u64,
    label_alphabet: u32,
) -> Result<AttributeSidecar> {
    if label_alphabet == 0 {
        return Err(Error::Validation("label alphabet must be non-empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = graph
        .nodes()
        .map(|v| {
            let rho = unit_sample(&mut rng);
            let label = rng.gen_range(0..label_alphabet);
            NodeAttributes {
                id: graph.ext_id(v),
                rho,
                labels: vec![format!("L{label}")],
            }
        })
        .collect();
    let edges = graph
        .edges()
        .map(|e| {
            let trust = unit_sample(&mut rng);
            let intimacy = unit_sample(&mut rng);
            EdgeAttributes {
                from: graph.ext_id(e.from),
                to: graph.ext_id(e.to),
                trust,
                intimacy,
            }
        })
        .collect();
    Ok(AttributeSidecar { nodes, edges })
}

impl AttributeSidecar {
    pub fn render(&self) -> String {
        let mut out = String::with_capacity(32 * (self.nodes.len() + self.edges.len()));
        for n in &self.nodes {
            let _ = writeln!(out, "N {} {:.6} {}", n.id, n.rho, n.labels.join(","));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "E {} {} {:.6} {:.6}",
                e.from, e.to, e.trust, e.intimacy
            );
        }
        out
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.render().as_bytes())?;
        out.flush()?;
        Ok(())
    }

    pub fn parse<R: BufRead>(source: R) -> Result<Self> {
        let mut sidecar = AttributeSidecar::default();
        for (i, line) in source.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = text.split_ascii_whitespace().collect();
            match tokens.as_slice() {
                ["N", id, rho, labels] => sidecar.nodes.push(NodeAttributes {
                    id: parse_num(id, line_no)?,
                    rho: parse_num(rho, line_no)?,
                    labels: labels.split(',').map(str::to_string).collect(),
                }),
                ["E", from, to, trust, intimacy] => sidecar.edges.push(EdgeAttributes {
                    from: parse_num(from, line_no)?,
                    to: parse_num(to, line_no)?,
                    trust: parse_num(trust, line_no)?,
                    intimacy: parse_num(intimacy, line_no)?,
                }),
                _ => return Err(Error::parse(line_no, "expected an N or E record")),
            }
        }
        Ok(sidecar)
    }
}

fn parse_num<T: std::str::FromStr>(token: &str, line: usize) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("bad number {token:?}")))
}

/// Installs sidecar attributes. The sidecar must cover every node and every
/// edge exactly once.
pub fn apply_attributes(graph: &mut DataGraph, sidecar: &AttributeSidecar) -> Result<()> {
    let n = graph.node_count();
    let mut rho = vec![0.0; n];
    let mut labels: Vec<Vec<LabelId>> = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    let mut interned: HashMap<&str, LabelId> = HashMap::new();

    for attrs in &sidecar.nodes {
        let v = graph
            .index_of(attrs.id)
            .ok_or_else(|| Error::Coverage(format!("node {} is not in the graph", attrs.id)))?;
        if std::mem::replace(&mut seen[v.index()], true) {
            return Err(Error::Coverage(format!("node {} listed twice", attrs.id)));
        }
        check_unit(attrs.rho, || format!("rho of node {}", attrs.id))?;
        if attrs.labels.iter().any(|l| l.is_empty()) {
            return Err(Error::Validation(format!("empty label on node {}", attrs.id)));
        }
        rho[v.index()] = attrs.rho;
        labels[v.index()] = attrs
            .labels
            .iter()
            .map(|name| {
                let next = LabelId(interned.len() as u32);
                *interned.entry(name.as_str()).or_insert(next)
            })
            .collect();
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(Error::Coverage(format!(
            "node {} has no attributes",
            graph.ext_id(NodeIx(v as u32))
        )));
    }

    let mut edge_attrs = vec![(0.0, 0.0); graph.edge_count()];
    let mut edge_seen = vec![false; graph.edge_count()];
    for attrs in &sidecar.edges {
        let missing = || Error::Coverage(format!("edge ({}, {}) is not in the graph", attrs.from, attrs.to));
        let from = graph.index_of(attrs.from).ok_or_else(missing)?;
        let to = graph.index_of(attrs.to).ok_or_else(missing)?;
        let slot = graph.link_index(from, to).ok_or_else(missing)?;
        if std::mem::replace(&mut edge_seen[slot], true) {
            return Err(Error::Coverage(format!(
                "edge ({}, {}) listed twice",
                attrs.from, attrs.to
            )));
        }
        check_unit(attrs.trust, || format!("trust of edge ({}, {})", attrs.from, attrs.to))?;
        check_unit(attrs.intimacy, || {
            format!("intimacy of edge ({}, {})", attrs.from, attrs.to)
        })?;
        edge_attrs[slot] = (attrs.trust, attrs.intimacy);
    }
    if let Some(slot) = edge_seen.iter().position(|s| !s) {
        let e = graph.edges().nth(slot).expect("slot in range");
        return Err(Error::Coverage(format!(
            "edge ({}, {}) has no attributes",
            graph.ext_id(e.from),
            graph.ext_id(e.to)
        )));
    }

    // Local label ids become graph label ids only once validation passed.
    let mut by_local: Vec<(&str, LabelId)> = interned.into_iter().collect();
    by_local.sort_by_key(|&(_, id)| id);
    let remap: Vec<LabelId> = by_local
        .into_iter()
        .map(|(name, _)| graph.intern_label(name))
        .collect();
    for set in &mut labels {
        for l in set.iter_mut() {
            *l = remap[l.0 as usize];
        }
    }
    graph.set_attributes(rho, labels, edge_attrs);
    Ok(())
}
