//! Pattern graphs and their text syntax.
//!
//! ```text
//! # leader and two followers
//! node 0 PM 0.5
//! node 1 SD,DB 0.5
//! edge 0 1 0.5 0.5 0.5 2          # from to lambda_T lambda_R lambda_rho len_bound
//! start 0
//! thresholds 0.9 0.9 0.9 0.9      # optional: rho_vm T_m R_m rho_m
//! ```

use std::collections::{BTreeMap, VecDeque};

use super::DataGraph;
use crate::error::{Error, Result};
use crate::fuzzy::{EdgeConstraint, NodeConstraint, Thresholds};

#[derive(Debug, Clone, PartialEq)]
pub struct PatternNode {
    pub id: u32,
    pub required_labels: Vec<String>,
    pub lambda_rho_v: f64,
}

impl PatternNode {
    /// Resolves label names against the data graph's label table.
    pub fn constraint(&self, graph: &DataGraph) -> NodeConstraint {
        let labels = self
            .required_labels
            .iter()
            .map(|name| graph.label_id(name))
            .collect::<Option<Vec<_>>>();
        NodeConstraint {
            labels,
            lambda_rho_v: self.lambda_rho_v,
        }
    }
}

/// Edge as written by the user, referencing pattern node ids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternEdgeDef {
    pub from: u32,
    pub to: u32,
    pub constraint: EdgeConstraint,
    pub len_bound: u32,
}

/// Validated edge. `from`/`to` are dense pattern-node indices and `index`
/// is the edge's position in [`PatternGraph::edges`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternEdge {
    pub index: usize,
    pub from: usize,
    pub to: usize,
    pub constraint: EdgeConstraint,
    pub len_bound: u32,
}

/// A connected DAG of constrained nodes and edges with a designated leader.
///
/// Nodes are kept in ascending id order and edges in ascending
/// `(from id, to id)` order, so the declaration order in a document does not
/// matter.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternGraph {
    nodes: Vec<PatternNode>,
    edges: Vec<PatternEdge>,
    start: usize,
    thresholds: Thresholds,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl PatternGraph {
    pub fn new(
        mut nodes: Vec<PatternNode>,
        edge_defs: Vec<PatternEdgeDef>,
        start_id: u32,
        thresholds: Thresholds,
    ) -> Result<Self> {
        nodes.sort_by_key(|n| n.id);
        if let Some(w) = nodes.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::Pattern(format!("node {} declared twice", w[0].id)));
        }
        if nodes.is_empty() {
            return Err(Error::Pattern("pattern has no nodes".into()));
        }
        for n in &nodes {
            if n.required_labels.is_empty() || n.required_labels.iter().any(|l| l.is_empty()) {
                return Err(Error::Pattern(format!("node {} needs at least one label", n.id)));
            }
            check_lambda(n.lambda_rho_v, || format!("lambda_rho_v of node {}", n.id))?;
        }
        for (name, v) in [
            ("rho_vm", thresholds.rho_vm),
            ("T_m", thresholds.trust_m),
            ("R_m", thresholds.intimacy_m),
            ("rho_m", thresholds.influence_m),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Pattern(format!("threshold {name} = {v} outside [0, 1]")));
            }
        }
        let index_of = |id: u32| {
            nodes
                .binary_search_by_key(&id, |n| n.id)
                .map_err(|_| Error::Pattern(format!("edge references undeclared node {id}")))
        };
        let start = nodes
            .binary_search_by_key(&start_id, |n| n.id)
            .map_err(|_| Error::Pattern(format!("start node {start_id} is not declared")))?;

        let mut keyed: BTreeMap<(u32, u32), PatternEdgeDef> = BTreeMap::new();
        for def in edge_defs {
            if def.from == def.to {
                return Err(Error::Pattern(format!("self-loop on node {}", def.from)));
            }
            if def.len_bound == 0 {
                return Err(Error::Pattern(format!(
                    "edge {} -> {} needs len_bound >= 1",
                    def.from, def.to
                )));
            }
            let c = def.constraint;
            let what = |name: &str| format!("{name} of edge {} -> {}", def.from, def.to);
            check_lambda(c.lambda_trust, || what("lambda_T"))?;
            check_lambda(c.lambda_intimacy, || what("lambda_R"))?;
            check_lambda(c.lambda_influence, || what("lambda_rho"))?;
            if keyed.insert((def.from, def.to), def).is_some() {
                return Err(Error::Pattern(format!(
                    "edge {} -> {} declared twice",
                    def.from, def.to
                )));
            }
        }
        let mut edges = Vec::with_capacity(keyed.len());
        for (index, def) in keyed.into_values().enumerate() {
            edges.push(PatternEdge {
                index,
                from: index_of(def.from)?,
                to: index_of(def.to)?,
                constraint: def.constraint,
                len_bound: def.len_bound,
            });
        }

        let n = nodes.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for e in &edges {
            out_edges[e.from].push(e.index);
            in_edges[e.to].push(e.index);
        }
        let pattern = PatternGraph {
            nodes,
            edges,
            start,
            thresholds,
            out_edges,
            in_edges,
        };
        pattern.validate_shape()?;
        Ok(pattern)
    }

    fn validate_shape(&self) -> Result<()> {
        if !self.in_edges[self.start].is_empty() {
            return Err(Error::Pattern(format!(
                "start node {} has incoming edges",
                self.nodes[self.start].id
            )));
        }
        if self.kahn_order().len() != self.nodes.len() {
            return Err(Error::Pattern("pattern not a DAG".into()));
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        while let Some(u) = queue.pop_front() {
            let neighbours = self.out_edges[u]
                .iter()
                .map(|&e| self.edges[e].to)
                .chain(self.in_edges[u].iter().map(|&e| self.edges[e].from));
            for w in neighbours {
                if !std::mem::replace(&mut seen[w], true) {
                    queue.push_back(w);
                }
            }
        }
        if let Some(u) = seen.iter().position(|s| !s) {
            return Err(Error::Pattern(format!(
                "node {} is disconnected from the start node",
                self.nodes[u].id
            )));
        }
        Ok(())
    }

    /// Topological order, start first, remaining ties by ascending node id.
    /// Shorter than the node count when the graph has a cycle.
    pub(crate) fn kahn_order(&self) -> Vec<usize> {
        let n = self.nodes.len();
        let mut indegree: Vec<usize> = self.in_edges.iter().map(Vec::len).collect();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&u| indegree[u] == 0).collect();
        let mut order = Vec::with_capacity(n);
        let mut next = if ready.remove(&self.start) {
            Some(self.start)
        } else {
            ready.pop_first()
        };
        while let Some(u) = next {
            order.push(u);
            for &e in &self.out_edges[u] {
                let w = self.edges[e].to;
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.insert(w);
                }
            }
            next = ready.pop_first();
        }
        order
    }

    pub fn nodes(&self) -> &[PatternNode] {
        &self.nodes
    }

    pub fn node(&self, u: usize) -> &PatternNode {
        &self.nodes[u]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> &[PatternEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &PatternEdge {
        &self.edges[e]
    }

    /// Dense index of the leader node.
    pub fn start(&self) -> usize {
        self.start
    }

    pub fn thresholds(&self) -> &Thresholds {
        &self.thresholds
    }

    /// Edge indices leaving `u`, ascending.
    pub fn out_edges(&self, u: usize) -> &[usize] {
        &self.out_edges[u]
    }

    /// Edge indices entering `u`, ascending.
    pub fn in_edges(&self, u: usize) -> &[usize] {
        &self.in_edges[u]
    }

    /// Position of edge `e` among its tail's out-edges.
    pub fn out_slot(&self, e: usize) -> usize {
        let from = self.edges[e].from;
        self.out_edges[from].iter().position(|&x| x == e).expect("edge in list")
    }

    /// Position of edge `e` among its head's in-edges.
    pub fn in_slot(&self, e: usize) -> usize {
        let to = self.edges[e].to;
        self.in_edges[to].iter().position(|&x| x == e).expect("edge in list")
    }

    pub fn index_of(&self, id: u32) -> Option<usize> {
        self.nodes.binary_search_by_key(&id, |n| n.id).ok()
    }

    /// Resolved node constraints, one per pattern node.
    pub fn node_constraints(&self, graph: &DataGraph) -> Vec<NodeConstraint> {
        self.nodes.iter().map(|n| n.constraint(graph)).collect()
    }

    /// Renders the pattern in the document syntax accepted by [`parse_pattern`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            out.push_str(&format!(
                "node {} {} {}\n",
                n.id,
                n.required_labels.join(","),
                n.lambda_rho_v
            ));
        }
        for e in &self.edges {
            let c = e.constraint;
            out.push_str(&format!(
                "edge {} {} {} {} {} {}\n",
                self.nodes[e.from].id,
                self.nodes[e.to].id,
                c.lambda_trust,
                c.lambda_intimacy,
                c.lambda_influence,
                e.len_bound
            ));
        }
        out.push_str(&format!("start {}\n", self.nodes[self.start].id));
        let t = self.thresholds;
        out.push_str(&format!(
            "thresholds {} {} {} {}\n",
            t.rho_vm, t.trust_m, t.intimacy_m, t.influence_m
        ));
        out
    }
}

fn check_lambda(value: f64, what: impl FnOnce() -> String) -> Result<()> {
    if value > 0.0 && value <= 1.0 {
        Ok(())
    } else {
        Err(Error::Pattern(format!("{} = {value} must be in (0, 1]", what())))
    }
}

/// Parses a pattern document and validates it.
pub fn parse_pattern(source: &str) -> Result<PatternGraph> {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut start = None;
    let mut thresholds = None;
    for (i, raw) in source.lines().enumerate() {
        let line_no = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = text.split_ascii_whitespace().collect();
        match tokens.as_slice() {
            ["node", id, labels, lambda] => nodes.push(PatternNode {
                id: num(id, line_no)?,
                required_labels: labels.split(',').map(str::to_string).collect(),
                lambda_rho_v: num(lambda, line_no)?,
            }),
            ["edge", from, to, t, r, rho, bound] => edges.push(PatternEdgeDef {
                from: num(from, line_no)?,
                to: num(to, line_no)?,
                constraint: EdgeConstraint {
                    lambda_trust: num(t, line_no)?,
                    lambda_intimacy: num(r, line_no)?,
                    lambda_influence: num(rho, line_no)?,
                },
                len_bound: num(bound, line_no)?,
            }),
            ["start", id] => {
                if start.replace(num(id, line_no)?).is_some() {
                    return Err(Error::parse(line_no, "start declared twice"));
                }
            }
            ["thresholds", a, b, c, d] => {
                thresholds = Some(Thresholds {
                    rho_vm: num(a, line_no)?,
                    trust_m: num(b, line_no)?,
                    intimacy_m: num(c, line_no)?,
                    influence_m: num(d, line_no)?,
                })
            }
            _ => return Err(Error::parse(line_no, format!("unrecognised line {text:?}"))),
        }
    }
    let start = start.ok_or_else(|| Error::Pattern("missing start line".into()))?;
    PatternGraph::new(nodes, edges, start, thresholds.unwrap_or_default())
}

fn num<T: std::str::FromStr>(token: &str, line: usize) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("bad number {token:?}")))
}
