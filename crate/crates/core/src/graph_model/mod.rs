//! Data graphs, pattern graphs and their text formats.

mod attributes;
mod data;
mod pattern;
mod plan;

pub use attributes::{
    apply_attributes, synthesize_attributes, AttributeSidecar, EdgeAttributes, NodeAttributes,
};
pub use data::{load_edge_list, DataEdge, DataGraph, GraphBuilder, Link, LoadReport};
pub use pattern::{parse_pattern, PatternEdge, PatternEdgeDef, PatternGraph, PatternNode};
pub use plan::{plan_pattern, PatternPlan};

/// Dense index of a data node. Indices follow ascending external id order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeIx(pub u32);

impl NodeIx {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Interned node label, local to one [`DataGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelId(pub u32);
