use rustc_hash::FxHashMap as HashMap;
use smallvec::SmallVec;
use std::mem::size_of;
use std::sync::Arc;

use crate::graph_model::{NodeIx, PatternGraph};
use crate::pathfinder::MatchedPath;

/// Predecessors of one entry along one incoming pattern edge.
pub type PredSlot = SmallVec<[NodeIx; 4]>;
/// Selected paths of one entry along one outgoing pattern edge, by head.
pub type PathSlot = SmallVec<[Arc<MatchedPath>; 2]>;

/// Candidate record of one data node for one pattern node.
#[derive(Debug, Clone)]
pub struct CandidateEntry {
    pub node: NodeIx,
    pub alive: bool,
    pub processed: bool,
    /// Per incoming pattern edge: predecessor data nodes whose selected path
    /// ends here.
    pub list_n: SmallVec<[PredSlot; 2]>,
    /// Per outgoing pattern edge: selected paths from this node, by head.
    pub list_e: SmallVec<[PathSlot; 2]>,
}

/// Intermediate match state for one start candidate.
///
/// Entries are never removed from their vectors; deletion clears `alive`
/// so indices stay valid while cascades run.
#[derive(Debug, Clone)]
pub struct MatchState<'p> {
    pattern: &'p PatternGraph,
    entries: Vec<Vec<CandidateEntry>>,
    index: Vec<HashMap<NodeIx, u32>>,
    alive: Vec<usize>,
    start_node: NodeIx,
}

impl<'p> MatchState<'p> {
    /// State holding only the start entry.
    pub fn new(pattern: &'p PatternGraph, v_s: NodeIx) -> Self {
        let n = pattern.node_count();
        let mut st = MatchState {
            pattern,
            entries: vec![Vec::new(); n],
            index: vec![HashMap::default(); n],
            alive: vec![0; n],
            start_node: v_s,
        };
        st.ensure_entry(pattern.start(), v_s);
        st
    }

    pub fn pattern(&self) -> &'p PatternGraph {
        self.pattern
    }

    pub fn start_node(&self) -> NodeIx {
        self.start_node
    }

    pub fn start_alive(&self) -> bool {
        self.entry(self.pattern.start(), self.start_node).is_some()
    }

    pub fn alive_count(&self, u: usize) -> usize {
        self.alive[u]
    }

    /// Alive entry of `v` under `u`.
    pub fn entry(&self, u: usize, v: NodeIx) -> Option<&CandidateEntry> {
        let &i = self.index[u].get(&v)?;
        let e = &self.entries[u][i as usize];
        e.alive.then_some(e)
    }

    /// Alive candidates of `u`, ascending.
    pub fn candidates(&self, u: usize) -> Vec<NodeIx> {
        let mut out: Vec<NodeIx> = self.entries[u]
            .iter()
            .filter(|e| e.alive)
            .map(|e| e.node)
            .collect();
        out.sort_unstable();
        out
    }

    pub(crate) fn entries(&self, u: usize) -> &[CandidateEntry] {
        &self.entries[u]
    }

    pub(crate) fn entry_at(&self, u: usize, i: usize) -> &CandidateEntry {
        &self.entries[u][i]
    }

    pub(crate) fn entry_at_mut(&mut self, u: usize, i: usize) -> &mut CandidateEntry {
        &mut self.entries[u][i]
    }

    pub(crate) fn slot_of(&self, u: usize, v: NodeIx) -> Option<usize> {
        self.index[u].get(&v).map(|&i| i as usize)
    }

    /// `Some(true)` alive, `Some(false)` deleted, `None` never created.
    pub(crate) fn status(&self, u: usize, v: NodeIx) -> Option<bool> {
        self.slot_of(u, v).map(|i| self.entries[u][i].alive)
    }

    /// Index of the entry for `(u, v)`, creating an empty alive one if absent.
    pub(crate) fn ensure_entry(&mut self, u: usize, v: NodeIx) -> usize {
        if let Some(i) = self.slot_of(u, v) {
            return i;
        }
        let i = self.entries[u].len();
        self.entries[u].push(CandidateEntry {
            node: v,
            alive: true,
            processed: false,
            list_n: (0..self.pattern.in_edges(u).len()).map(|_| SmallVec::new()).collect(),
            list_e: (0..self.pattern.out_edges(u).len()).map(|_| SmallVec::new()).collect(),
        });
        self.index[u].insert(v, i as u32);
        self.alive[u] += 1;
        i
    }

    /// True iff every listN slot of `(u, v)` is non-empty.
    ///
    /// All predecessors of `u` precede it in topological order, so at the
    /// time `u` is processed every slot belongs to a processed predecessor.
    pub fn in_edge_check(&self, u: usize, v: NodeIx) -> bool {
        self.entry(u, v)
            .is_some_and(|e| e.list_n.iter().all(|slot| !slot.is_empty()))
    }

    /// Deletes `(u, v)` and cascades to processed entries left with an empty
    /// slot. Unprocessed entries keep their empty slots and fail their own
    /// `in_edge_check` later.
    pub fn delete_candidate(&mut self, u: usize, v: NodeIx) {
        if let Some(i) = self.slot_of(u, v) {
            self.delete_at(u, i);
        }
    }

    pub(crate) fn delete_at(&mut self, u: usize, i: usize) {
        let pattern = self.pattern;
        let mut stack = vec![(u, i)];
        while let Some((u, i)) = stack.pop() {
            let entry = &mut self.entries[u][i];
            if !entry.alive {
                continue;
            }
            entry.alive = false;
            let v = entry.node;
            let list_n = std::mem::take(&mut entry.list_n);
            let list_e = std::mem::take(&mut entry.list_e);
            self.alive[u] -= 1;

            for (&e, preds) in pattern.in_edges(u).iter().zip(&list_n) {
                let p = pattern.edge(e).from;
                let slot = pattern.out_slot(e);
                for &w in preds {
                    let Some(j) = self.slot_of(p, w) else { continue };
                    let pred = &mut self.entries[p][j];
                    if !pred.alive {
                        continue;
                    }
                    let paths = &mut pred.list_e[slot];
                    if let Ok(k) = paths.binary_search_by_key(&v, |path| path.head()) {
                        paths.remove(k);
                    }
                    if paths.is_empty() && pred.processed {
                        stack.push((p, j));
                    }
                }
            }
            for (&e, paths) in pattern.out_edges(u).iter().zip(&list_e) {
                let s = pattern.edge(e).to;
                let slot = pattern.in_slot(e);
                for path in paths {
                    let Some(j) = self.slot_of(s, path.head()) else { continue };
                    let succ = &mut self.entries[s][j];
                    if !succ.alive {
                        continue;
                    }
                    let preds = &mut succ.list_n[slot];
                    if let Some(k) = preds.iter().position(|&w| w == v) {
                        preds.swap_remove(k);
                    }
                    if preds.is_empty() && succ.processed {
                        stack.push((s, j));
                    }
                }
            }
        }
    }

    /// Estimated heap footprint of the state. Paths are counted in full even
    /// when shared with a cache.
    pub fn accounted_bytes(&self) -> usize {
        let mut total = size_of::<Self>();
        for (entries, index) in self.entries.iter().zip(&self.index) {
            total += entries.capacity() * size_of::<CandidateEntry>();
            total += index.capacity() * (size_of::<NodeIx>() + size_of::<u32>() + 8);
            for e in entries {
                if e.list_n.spilled() {
                    total += e.list_n.capacity() * size_of::<PredSlot>();
                }
                if e.list_e.spilled() {
                    total += e.list_e.capacity() * size_of::<PathSlot>();
                }
                for slot in e.list_n.iter().filter(|s| s.spilled()) {
                    total += slot.capacity() * size_of::<NodeIx>();
                }
                for slot in &e.list_e {
                    if slot.spilled() {
                        total += slot.capacity() * size_of::<Arc<MatchedPath>>();
                    }
                    for p in slot {
                        total += size_of::<MatchedPath>() + p.nodes.capacity() * size_of::<NodeIx>();
                    }
                }
            }
        }
        total
    }
}
