use std::collections::VecDeque;
use std::sync::Arc;

use super::state::{MatchState, PathSlot};
use super::{get_candidates, MatchingSubgraph, Variant};
use crate::edge_cache::{CacheKey, CacheStats, EdgeCache};
use crate::error::Result;
use crate::graph_model::{plan_pattern, DataGraph, NodeIx, PatternGraph, PatternPlan};
use crate::pathfinder::{Direction, MatchedPath, PathSearch, SuitablePaths};

/// Topological-order matcher for one pattern over one graph.
///
/// Holds the path search scratch space and, for the caching variants, the
/// edge cache, so one matcher serves one thread.
pub struct Matcher<'g> {
    search: PathSearch<'g>,
    plan: PatternPlan,
    variant: Variant,
    skip_in_edge_check: bool,
    cache: Option<EdgeCache>,
}

impl<'g> Matcher<'g> {
    pub fn new(graph: &'g DataGraph, pattern: &'g PatternGraph, variant: Variant) -> Self {
        Matcher {
            search: PathSearch::new(graph, pattern),
            plan: plan_pattern(pattern),
            variant,
            skip_in_edge_check: false,
            cache: variant.uses_cache().then(EdgeCache::new),
        }
    }

    /// Fault injection for mutation testing: processes candidates without
    /// checking their incoming slots.
    #[doc(hidden)]
    pub fn skip_in_edge_check(mut self, skip: bool) -> Self {
        self.skip_in_edge_check = skip;
        self
    }

    pub fn plan(&self) -> &PatternPlan {
        &self.plan
    }

    pub fn search(&self) -> &PathSearch<'g> {
        &self.search
    }

    pub fn cache_stats(&self) -> CacheStats {
        self.cache.as_ref().map(EdgeCache::stats).unwrap_or_default()
    }

    pub fn cache_bytes(&self) -> usize {
        self.cache.as_ref().map_or(0, EdgeCache::accounted_bytes)
    }

    fn paths(&mut self, v: NodeIx, e: usize, direction: Direction) -> Result<Arc<SuitablePaths>> {
        let search = &self.search;
        match &mut self.cache {
            Some(cache) => cache.get_or_try_insert(
                CacheKey {
                    edge: e,
                    node: v,
                    direction,
                },
                || search.suitable_paths(v, e, direction),
            ),
            None => Ok(Arc::new(search.suitable_paths(v, e, direction)?)),
        }
    }

    /// Explores the pattern from start candidate `v_s`. `None` when some
    /// pattern node ends without candidates or the start entry is deleted.
    pub fn topological_matching(&mut self, v_s: NodeIx) -> Result<Option<MatchState<'g>>> {
        let pattern = self.search.pattern();
        let n = pattern.node_count();
        let mut st = MatchState::new(pattern, v_s);
        // A node is closed once one of its predecessors has been processed:
        // its candidate set can only shrink from then on.
        let mut closed = vec![false; n];
        let order = self.plan.topo_order.clone();
        for u in order {
            let mut seeded = None;
            if u != pattern.start() && pattern.in_edges(u).is_empty() {
                seeded = self.seed_side_source(&mut st, u, &closed)?;
            }
            self.process(&mut st, u, seeded, &closed)?;
            if st.alive_count(u) == 0 || !st.start_alive() {
                return Ok(None);
            }
            for &e in pattern.out_edges(u) {
                closed[pattern.edge(e).to] = true;
            }
        }
        if (0..n).any(|u| st.alive_count(u) == 0) {
            return Ok(None);
        }
        Ok(Some(st))
    }

    /// Creates the candidates of a zero-in-degree non-start node. Returns the
    /// pattern edge whose listE slots were filled by reverse matching.
    fn seed_side_source(
        &mut self,
        st: &mut MatchState<'g>,
        u: usize,
        closed: &[bool],
    ) -> Result<Option<usize>> {
        let pattern = self.search.pattern();
        if self.variant.uses_inverse() {
            let pick = pattern
                .out_edges(u)
                .iter()
                .map(|&e| (e, pattern.edge(e).to))
                .filter(|&(_, s)| closed[s])
                .min_by_key(|&(_, s)| (st.alive_count(s), s));
            if let Some((e, s)) = pick {
                self.reverse_candidates(st, u, e, s)?;
                return Ok(Some(e));
            }
        }
        for v in get_candidates(&self.search, u) {
            st.ensure_entry(u, v);
        }
        Ok(None)
    }

    /// Derives the candidates of `u` from the alive candidates of successor
    /// `s` by searching edge `e` backwards, installing the selected paths.
    fn reverse_candidates(&mut self, st: &mut MatchState<'g>, u: usize, e: usize, s: usize) -> Result<()> {
        let pattern = self.search.pattern();
        let out_slot = pattern.out_slot(e);
        let in_slot = pattern.in_slot(e);
        for w in st.candidates(s) {
            let found = self.paths(w, e, Direction::Reverse)?;
            let j = st.slot_of(s, w).expect("alive candidate");
            for path in &found.paths {
                let v = path.tail();
                let i = st.ensure_entry(u, v);
                st.entry_at_mut(u, i).list_e[out_slot].push(Arc::clone(path));
                st.entry_at_mut(s, j).list_n[in_slot].push(v);
            }
        }
        Ok(())
    }

    fn process(
        &mut self,
        st: &mut MatchState<'g>,
        u: usize,
        seeded: Option<usize>,
        closed: &[bool],
    ) -> Result<()> {
        let pattern = self.search.pattern();
        let out_edges = pattern.out_edges(u);
        let mut matched: Vec<(usize, PathSlot)> = Vec::with_capacity(out_edges.len());
        for i in 0..st.entries(u).len() {
            let entry = st.entry_at(u, i);
            if !entry.alive {
                continue;
            }
            let v = entry.node;
            if !self.skip_in_edge_check && !entry.list_n.iter().all(|slot| !slot.is_empty()) {
                st.delete_at(u, i);
                continue;
            }
            matched.clear();
            let mut ok = true;
            for (slot, &e) in out_edges.iter().enumerate() {
                if Some(e) == seeded {
                    if st.entry_at(u, i).list_e[slot].is_empty() {
                        ok = false;
                        break;
                    }
                    continue;
                }
                let s = pattern.edge(e).to;
                let found = self.paths(v, e, Direction::Forward)?;
                let kept: PathSlot = found
                    .paths
                    .iter()
                    .filter(|p| match st.status(s, p.head()) {
                        Some(alive) => alive,
                        None => !closed[s],
                    })
                    .cloned()
                    .collect();
                if kept.is_empty() {
                    ok = false;
                    break;
                }
                matched.push((slot, kept));
            }
            if !ok {
                st.delete_at(u, i);
                continue;
            }
            for (slot, kept) in matched.drain(..) {
                let e = out_edges[slot];
                let s = pattern.edge(e).to;
                let in_slot = pattern.in_slot(e);
                for p in &kept {
                    let j = st.ensure_entry(s, p.head());
                    st.entry_at_mut(s, j).list_n[in_slot].push(v);
                }
                st.entry_at_mut(u, i).list_e[slot] = kept;
            }
            st.entry_at_mut(u, i).processed = true;
        }
        Ok(())
    }

    /// Component of the start entry, following listE forward and listN
    /// backward.
    pub fn extract_subgraph(&self, st: &MatchState<'_>) -> MatchingSubgraph {
        let pattern = st.pattern();
        let n = pattern.node_count();
        let mut seen: Vec<Vec<bool>> = (0..n).map(|u| vec![false; st.entries(u).len()]).collect();
        let mut matched: Vec<Vec<NodeIx>> = vec![Vec::new(); n];
        let mut paths: Vec<Vec<Arc<MatchedPath>>> = vec![Vec::new(); pattern.edges().len()];
        let mut queue = VecDeque::new();
        let start = pattern.start();
        if let Some(i) = st.slot_of(start, st.start_node()) {
            if st.entry_at(start, i).alive {
                seen[start][i] = true;
                queue.push_back((start, i));
            }
        }
        let mut visit = |queue: &mut VecDeque<(usize, usize)>, u: usize, v: NodeIx| {
            if let Some(j) = st.slot_of(u, v) {
                if st.entry_at(u, j).alive && !seen[u][j] {
                    seen[u][j] = true;
                    queue.push_back((u, j));
                }
            }
        };
        while let Some((u, i)) = queue.pop_front() {
            let entry = st.entry_at(u, i);
            matched[u].push(entry.node);
            for (&e, slot) in pattern.out_edges(u).iter().zip(&entry.list_e) {
                for p in slot {
                    paths[e].push(Arc::clone(p));
                    visit(&mut queue, pattern.edge(e).to, p.head());
                }
            }
            for (&e, preds) in pattern.in_edges(u).iter().zip(&entry.list_n) {
                for &w in preds {
                    visit(&mut queue, pattern.edge(e).from, w);
                }
            }
        }
        for set in &mut matched {
            set.sort_unstable();
        }
        for set in &mut paths {
            // Node sequences are unique within an edge.
            set.sort_unstable_by(|a, b| a.nodes.cmp(&b.nodes));
        }
        MatchingSubgraph {
            start: st.start_node(),
            matched,
            paths,
        }
    }

    /// `topological_matching` followed by `extract_subgraph`; also returns
    /// the accounted size of the state.
    pub fn match_start(&mut self, v_s: NodeIx) -> Result<(Option<MatchingSubgraph>, usize)> {
        Ok(match self.topological_matching(v_s)? {
            Some(st) => {
                let bytes = st.accounted_bytes();
                (Some(self.extract_subgraph(&st)), bytes)
            }
            None => (None, 0),
        })
    }
}
