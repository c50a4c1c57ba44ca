//! Bounded path search for one pattern edge and selection of the optimal
//! path per endpoint.
//!
//! [`PathSearch::bounded_paths`] walks breadth-first from a data node and
//! records every simple path of at most `len_bound` edges whose last node
//! satisfies the head pattern node. At the last level a neighbour is only
//! enqueued when it already satisfies the head constraint. Intermediate nodes
//! are unconstrained. A partial path whose running trust or intimacy product
//! already fails its membership threshold is not extended: both products can
//! only shrink, while the influence mean can move either way and is never
//! used for pruning.
//!
//! [`PathSearch::select_best_paths`] then keeps, for each endpoint, the
//! satisfying path with the largest `min(AT, AR, Arho)`; ties go to the
//! shorter path, then to the lexicographically smaller node sequence.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fuzzy::{path_satisfies, ramp, NodeConstraint, PathAggregates};
use crate::graph_model::{DataGraph, Link, NodeIx, PatternEdge, PatternGraph};

/// Which side of the pattern edge a search starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// From a tail candidate along forward adjacency; keyed by head.
    Forward,
    /// From a head candidate along inverse adjacency; keyed by tail.
    Reverse,
}

/// A selected data path for one pattern edge, oriented tail to head.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchedPath {
    pub edge: usize,
    pub nodes: Vec<NodeIx>,
    pub aggregates: PathAggregates,
}

impl MatchedPath {
    pub fn tail(&self) -> NodeIx {
        self.nodes[0]
    }

    pub fn head(&self) -> NodeIx {
        *self.nodes.last().expect("paths have at least one edge")
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() < 2
    }
}

/// All length-valid candidate paths from one search, grouped by the far
/// endpoint. Paths are stored tail to head regardless of direction.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGroup {
    pub start: NodeIx,
    pub edge: usize,
    pub direction: Direction,
    pub by_endpoint: Vec<(NodeIx, Vec<Vec<NodeIx>>)>,
}

impl PathGroup {
    pub fn endpoints(&self) -> impl Iterator<Item = NodeIx> + '_ {
        self.by_endpoint.iter().map(|(v, _)| *v)
    }

    pub fn path_count(&self) -> usize {
        self.by_endpoint.iter().map(|(_, p)| p.len()).sum()
    }
}

/// One optimal path per endpoint, sorted by endpoint.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuitablePaths {
    pub paths: Vec<Arc<MatchedPath>>,
}

impl SuitablePaths {
    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }
}

#[derive(Clone, Copy)]
struct Step {
    parent: u32,
    node: NodeIx,
    depth: u32,
    trust: f64,
    intimacy: f64,
    endpoint_ok: bool,
}

const ROOT: u32 = u32::MAX;

/// Path search bound to one data graph and pattern, with node constraints
/// resolved once. Holds scratch space, so use one per thread.
pub struct PathSearch<'g> {
    graph: &'g DataGraph,
    pattern: &'g PatternGraph,
    constraints: Vec<NodeConstraint>,
    arena: RefCell<Vec<Step>>,
}

impl<'g> PathSearch<'g> {
    pub fn new(graph: &'g DataGraph, pattern: &'g PatternGraph) -> Self {
        PathSearch {
            constraints: pattern.node_constraints(graph),
            graph,
            pattern,
            arena: RefCell::new(Vec::new()),
        }
    }

    pub fn graph(&self) -> &'g DataGraph {
        self.graph
    }

    pub fn pattern(&self) -> &'g PatternGraph {
        self.pattern
    }

    pub fn constraint(&self, u: usize) -> &NodeConstraint {
        &self.constraints[u]
    }

    /// Node constraint test of pattern node `u` on data node `v`.
    #[inline]
    pub fn node_ok(&self, u: usize, v: NodeIx) -> bool {
        self.constraints[u].accepts(self.graph.labels(v), self.graph.rho(v), self.pattern.thresholds())
    }

    /// Forward bounded search from tail candidate `v` over pattern edge `e`.
    pub fn bounded_paths(&self, v: NodeIx, e: usize) -> PathGroup {
        let edge = *self.pattern.edge(e);
        self.search(v, &edge, Direction::Forward, |x| self.graph.out_links(x))
    }

    /// Backward bounded search from head candidate `v_prime` over inverse
    /// adjacency; endpoints are tails satisfying the edge's tail node.
    pub fn reverse_bounded_paths(&self, v_prime: NodeIx, e: usize) -> Result<PathGroup> {
        if !self.graph.has_inverse() {
            return Err(Error::Config(
                "reverse matching requires inverse adjacency".into(),
            ));
        }
        let edge = *self.pattern.edge(e);
        Ok(self.search(v_prime, &edge, Direction::Reverse, |x| {
            self.graph.in_links(x).expect("checked above")
        }))
    }

    fn search<'a>(
        &'a self,
        origin: NodeIx,
        edge: &PatternEdge,
        direction: Direction,
        neighbours: impl Fn(NodeIx) -> &'a [Link],
    ) -> PathGroup {
        let thresholds = self.pattern.thresholds();
        let far = match direction {
            Direction::Forward => edge.to,
            Direction::Reverse => edge.from,
        };
        let bound = edge.len_bound;
        let c = edge.constraint;
        // Conservative by a hair so rounding differences between the running
        // product and the final product never prune a satisfying path.
        let slack = 1e-12;

        let mut arena = self.arena.borrow_mut();
        arena.clear();
        arena.push(Step {
            parent: ROOT,
            node: origin,
            depth: 0,
            trust: 1.0,
            intimacy: 1.0,
            endpoint_ok: false,
        });
        let mut recorded: Vec<(NodeIx, u32)> = Vec::new();
        let mut i = 0;
        while i < arena.len() {
            let step = arena[i];
            let at = i as u32;
            i += 1;
            if step.depth >= 1 && step.endpoint_ok {
                recorded.push((step.node, at));
            }
            if step.depth >= bound {
                continue;
            }
            let last_level = step.depth + 1 == bound;
            for link in neighbours(step.node) {
                let w = link.node;
                if on_path(&arena, at, w) {
                    continue;
                }
                let trust = step.trust * link.trust;
                let intimacy = step.intimacy * link.intimacy;
                if ramp(trust, c.lambda_trust) + slack < thresholds.trust_m
                    || ramp(intimacy, c.lambda_intimacy) + slack < thresholds.intimacy_m
                {
                    continue;
                }
                let endpoint_ok = self.node_ok(far, w);
                if last_level && !endpoint_ok {
                    continue;
                }
                arena.push(Step {
                    parent: at,
                    node: w,
                    depth: step.depth + 1,
                    trust,
                    intimacy,
                    endpoint_ok,
                });
            }
        }

        recorded.sort_by_key(|&(v, _)| v);
        let mut by_endpoint: Vec<(NodeIx, Vec<Vec<NodeIx>>)> = Vec::new();
        for (v, at) in recorded {
            let mut nodes = Vec::with_capacity(arena[at as usize].depth as usize + 1);
            let mut cur = at;
            while cur != ROOT {
                nodes.push(arena[cur as usize].node);
                cur = arena[cur as usize].parent;
            }
            if direction == Direction::Forward {
                nodes.reverse();
            }
            match by_endpoint.last_mut() {
                Some((last, paths)) if *last == v => paths.push(nodes),
                _ => by_endpoint.push((v, vec![nodes])),
            }
        }
        PathGroup {
            start: origin,
            edge: edge.index,
            direction,
            by_endpoint,
        }
    }

    /// Aggregates of a tail-to-head node sequence, from raw attributes.
    pub fn aggregates(&self, nodes: &[NodeIx]) -> PathAggregates {
        let mut trust = 1.0;
        let mut intimacy = 1.0;
        for pair in nodes.windows(2) {
            let link = self
                .graph
                .edge(pair[0], pair[1])
                .expect("path follows data edges");
            trust *= link.trust;
            intimacy *= link.intimacy;
        }
        let interior = &nodes[1..nodes.len() - 1];
        let influence = if interior.is_empty() {
            1.0
        } else {
            interior.iter().map(|&v| self.graph.rho(v)).sum::<f64>() / interior.len() as f64
        };
        PathAggregates {
            trust,
            intimacy,
            influence,
        }
    }

    /// Keeps the single optimal satisfying path per endpoint.
    pub fn select_best_paths(&self, group: &PathGroup) -> SuitablePaths {
        let edge = self.pattern.edge(group.edge);
        let thresholds = self.pattern.thresholds();
        let mut paths = Vec::with_capacity(group.by_endpoint.len());
        for (_, candidates) in &group.by_endpoint {
            let mut best: Option<(PathAggregates, &Vec<NodeIx>)> = None;
            for nodes in candidates {
                let agg = self.aggregates(nodes);
                if !path_satisfies(&agg, &edge.constraint, thresholds) {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((b_agg, b_nodes)) => prefer(&agg, nodes, b_agg, b_nodes) == Ordering::Less,
                };
                if better {
                    best = Some((agg, nodes));
                }
            }
            if let Some((aggregates, nodes)) = best {
                paths.push(Arc::new(MatchedPath {
                    edge: group.edge,
                    nodes: nodes.clone(),
                    aggregates,
                }));
            }
        }
        SuitablePaths { paths }
    }

    /// `select_best_paths(bounded_paths(..))` or its reverse counterpart.
    pub fn suitable_paths(&self, v: NodeIx, e: usize, direction: Direction) -> Result<SuitablePaths> {
        let group = match direction {
            Direction::Forward => self.bounded_paths(v, e),
            Direction::Reverse => self.reverse_bounded_paths(v, e)?,
        };
        Ok(self.select_best_paths(&group))
    }
}

/// `Less` when path `a` is preferred over path `b`.
fn prefer(a: &PathAggregates, a_nodes: &[NodeIx], b: &PathAggregates, b_nodes: &[NodeIx]) -> Ordering {
    b.min_attr()
        .partial_cmp(&a.min_attr())
        .unwrap_or(Ordering::Equal)
        .then(a_nodes.len().cmp(&b_nodes.len()))
        .then_with(|| a_nodes.cmp(b_nodes))
}

#[inline]
fn on_path(arena: &[Step], mut at: u32, w: NodeIx) -> bool {
    while at != ROOT {
        let s = &arena[at as usize];
        if s.node == w {
            return true;
        }
        at = s.parent;
    }
    false
}
