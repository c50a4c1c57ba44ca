//! Multi-fuzzy-constrained strong simulation over attributed social graphs.
//!
//! A pattern is a DAG of constrained roles rooted at a leader. For every data
//! node that can play the leader, the engine explores the pattern in
//! topological order, matching each pattern edge to the best bounded data
//! path that satisfies the trust, intimacy and influence constraints, and
//! emits one matching subgraph per leader candidate.

pub mod edge_cache;
pub mod engine;
pub mod error;
pub mod fuzzy;
pub mod graph_model;
pub mod oracle;
pub mod pathfinder;
pub mod synthetic;
pub mod verify;

pub use error::{Error, Result};
