//! The NTSS matcher and its reverse-matching and caching variants.

mod canonical;
mod matcher;
mod state;

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

pub use canonical::render_results;
pub use matcher::Matcher;
pub use state::{CandidateEntry, MatchState, PathSlot, PredSlot};

use crate::edge_cache::CacheStats;
use crate::error::{Error, Result};
use crate::graph_model::{DataGraph, NodeIx, PatternGraph};
use crate::pathfinder::{MatchedPath, PathSearch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Plain,
    Inv,
    EdgC,
    InvEdgC,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Plain, Variant::Inv, Variant::EdgC, Variant::InvEdgC];

    pub fn uses_inverse(self) -> bool {
        matches!(self, Variant::Inv | Variant::InvEdgC)
    }

    pub fn uses_cache(self) -> bool {
        matches!(self, Variant::EdgC | Variant::InvEdgC)
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Plain => "ntss",
            Variant::Inv => "ntss-inv",
            Variant::EdgC => "ntss-edgc",
            Variant::InvEdgC => "ntss-inv-edgc",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.strip_prefix("ntss-").unwrap_or(s).replace('_', "-");
        match key.as_str() {
            "ntss" | "plain" => Ok(Variant::Plain),
            "inv" => Ok(Variant::Inv),
            "edgc" => Ok(Variant::EdgC),
            "inv-edgc" => Ok(Variant::InvEdgC),
            _ => Err(Error::Config(format!("unknown variant `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    pub variant: Variant,
    /// Start candidates processed concurrently; at least 1.
    pub workers: usize,
    #[doc(hidden)]
    pub skip_in_edge_check: bool,
}

impl EngineOptions {
    pub fn new(variant: Variant) -> Self {
        EngineOptions {
            variant,
            workers: 1,
            skip_in_edge_check: false,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

/// Matched nodes and selected paths rooted at one start candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingSubgraph {
    pub start: NodeIx,
    /// Per pattern node, ascending.
    pub matched: Vec<Vec<NodeIx>>,
    /// Per pattern edge, ordered by node sequence.
    pub paths: Vec<Vec<Arc<MatchedPath>>>,
}

/// Data nodes satisfying the constraint of pattern node `u`, ascending.
pub fn get_candidates(search: &PathSearch<'_>, u: usize) -> Vec<NodeIx> {
    search.graph().nodes().filter(|&v| search.node_ok(u, v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProgressPoint {
    pub elapsed: Duration,
    pub results: usize,
}

#[derive(Debug, Clone)]
pub struct NtssOutput {
    pub results: Vec<MatchingSubgraph>,
    /// One point per start candidate, in completion order.
    pub progress: Vec<ProgressPoint>,
    /// Progress points were recorded by concurrent workers.
    pub concurrent: bool,
    pub elapsed: Duration,
    pub start_candidates: usize,
    pub cache: CacheStats,
    pub graph_bytes: usize,
    pub cache_bytes: usize,
    pub peak_state_bytes: usize,
}

impl NtssOutput {
    /// Graph, largest single match state and cache.
    pub fn accounted_bytes(&self) -> usize {
        self.graph_bytes + self.peak_state_bytes + self.cache_bytes
    }
}

/// Builds the inverse adjacency iff `variant` needs it, dropping it
/// otherwise. Returns whether it is present afterwards.
pub fn prepare_graph(graph: &mut DataGraph, variant: Variant) -> bool {
    if variant.uses_inverse() {
        if !graph.has_inverse() {
            graph.build_inverse_adjacency();
        }
    } else {
        graph.drop_inverse_adjacency();
    }
    graph.has_inverse()
}

/// Runs the matcher from every start candidate in ascending id order.
pub fn ntss(graph: &DataGraph, pattern: &PatternGraph, options: &EngineOptions) -> Result<NtssOutput> {
    if options.variant.uses_inverse() && !graph.has_inverse() {
        return Err(Error::Config(format!(
            "variant {} requires inverse adjacency",
            options.variant
        )));
    }
    if options.workers == 0 {
        return Err(Error::Config("worker count must be at least 1".into()));
    }
    let clock = Instant::now();
    let starts = get_candidates(&PathSearch::new(graph, pattern), pattern.start());
    let workers = options.workers.min(starts.len()).max(1);
    let matcher = || {
        Matcher::new(graph, pattern, options.variant).skip_in_edge_check(options.skip_in_edge_check)
    };

    let mut out = NtssOutput {
        results: Vec::new(),
        progress: Vec::with_capacity(starts.len()),
        concurrent: workers > 1,
        elapsed: Duration::ZERO,
        start_candidates: starts.len(),
        cache: CacheStats::default(),
        graph_bytes: graph.accounted_bytes(),
        cache_bytes: 0,
        peak_state_bytes: 0,
    };

    if workers == 1 {
        let mut m = matcher();
        for &v_s in &starts {
            let (found, bytes) = m.match_start(v_s)?;
            out.peak_state_bytes = out.peak_state_bytes.max(bytes);
            out.results.extend(found);
            out.progress.push(ProgressPoint {
                elapsed: clock.elapsed(),
                results: out.results.len(),
            });
        }
        out.cache = m.cache_stats();
        out.cache_bytes = m.cache_bytes();
    } else {
        let next = AtomicUsize::new(0);
        let shared = Mutex::new(&mut out);
        let outcome: Vec<Result<()>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|_| {
                    scope.spawn(|| -> Result<()> {
                        let mut m = matcher();
                        loop {
                            let k = next.fetch_add(1, Ordering::Relaxed);
                            let Some(&v_s) = starts.get(k) else { break };
                            let (found, bytes) = m.match_start(v_s)?;
                            let mut o = shared.lock().expect("worker panicked");
                            o.peak_state_bytes = o.peak_state_bytes.max(bytes);
                            o.results.extend(found);
                            let results = o.results.len();
                            o.progress.push(ProgressPoint {
                                elapsed: clock.elapsed(),
                                results,
                            });
                        }
                        let mut o = shared.lock().expect("worker panicked");
                        o.cache.merge(&m.cache_stats());
                        o.cache_bytes += m.cache_bytes();
                        Ok(())
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        });
        outcome.into_iter().collect::<Result<()>>()?;
        out.results.sort_by_key(|r| r.start);
    }
    out.elapsed = clock.elapsed();
    Ok(out)
}
