//! Memo of selected paths keyed by pattern edge, data node and direction.
//!
//! Empty results are stored as well, so a negative answer is not recomputed.
//! A cache is only valid for the data graph and pattern it was filled with.

use rustc_hash::FxHashMap as HashMap;
use std::mem::size_of;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph_model::NodeIx;
use crate::pathfinder::{Direction, MatchedPath, SuitablePaths};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CacheKey {
    pub edge: usize,
    pub node: NodeIx,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub entries: usize,
}

impl CacheStats {
    pub fn merge(&mut self, other: &CacheStats) {
        self.hits += other.hits;
        self.misses += other.misses;
        self.entries += other.entries;
    }
}

#[derive(Debug, Default)]
pub struct EdgeCache {
    map: HashMap<CacheKey, Arc<SuitablePaths>>,
    hits: u64,
    misses: u64,
    path_bytes: usize,
}

impl EdgeCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Counts a hit or a miss.
    pub fn lookup(&mut self, key: &CacheKey) -> Option<Arc<SuitablePaths>> {
        match self.map.get(key) {
            Some(v) => {
                self.hits += 1;
                Some(Arc::clone(v))
            }
            None => {
                self.misses += 1;
                None
            }
        }
    }

    /// Peek without touching the counters.
    pub fn get(&self, key: &CacheKey) -> Option<&Arc<SuitablePaths>> {
        self.map.get(key)
    }

    /// Re-inserting an equal value is a no-op; a different value is an error.
    pub fn insert(&mut self, key: CacheKey, value: Arc<SuitablePaths>) -> Result<()> {
        if let Some(existing) = self.map.get(&key) {
            if **existing != *value {
                return Err(Error::Cache(format!(
                    "conflicting entry for edge {} node {} {:?}",
                    key.edge, key.node.0, key.direction
                )));
            }
            return Ok(());
        }
        self.path_bytes += value_bytes(&value);
        self.map.insert(key, value);
        Ok(())
    }

    /// Returns the cached value or computes, stores and returns it.
    pub fn get_or_try_insert(
        &mut self,
        key: CacheKey,
        compute: impl FnOnce() -> Result<SuitablePaths>,
    ) -> Result<Arc<SuitablePaths>> {
        if let Some(v) = self.lookup(&key) {
            return Ok(v);
        }
        let value = Arc::new(compute()?);
        self.insert(key, Arc::clone(&value))?;
        Ok(value)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits,
            misses: self.misses,
            entries: self.map.len(),
        }
    }

    /// Table slots plus stored paths. Paths shared with match state are
    /// counted here once.
    pub fn accounted_bytes(&self) -> usize {
        self.map.capacity() * (size_of::<CacheKey>() + size_of::<Arc<SuitablePaths>>() + 8)
            + self.path_bytes
    }
}

fn value_bytes(v: &SuitablePaths) -> usize {
    size_of::<SuitablePaths>()
        + v.paths.capacity() * size_of::<Arc<MatchedPath>>()
        + v.paths
            .iter()
            .map(|p| size_of::<MatchedPath>() + 16 + p.nodes.capacity() * size_of::<NodeIx>())
            .sum::<usize>()
}
