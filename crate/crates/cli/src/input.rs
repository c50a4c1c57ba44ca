use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::{Context, Result};
use mfcss::graph_model::{
    apply_attributes, load_edge_list, parse_pattern, synthesize_attributes, AttributeSidecar, DataGraph, PatternGraph,
};

fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(file))
}

pub fn topology(path: &Path) -> Result<DataGraph> {
    let (graph, _) = load_edge_list(open(path)?).with_context(|| format!("reading {}", path.display()))?;
    Ok(graph)
}

/// Edge list plus attributes, read from `attrs` or drawn from the seed.
pub fn attributed(graph: &Path, attrs: Option<&Path>, seed: u64, labels: u32) -> Result<DataGraph> {
    let mut g = topology(graph)?;
    attach(&mut g, attrs, seed, labels)?;
    Ok(g)
}

pub fn attach(graph: &mut DataGraph, attrs: Option<&Path>, seed: u64, labels: u32) -> Result<()> {
    let sidecar = match attrs {
        Some(path) => AttributeSidecar::parse(open(path)?).with_context(|| format!("reading {}", path.display()))?,
        None => synthesize_attributes(graph, seed, labels)?,
    };
    apply_attributes(graph, &sidecar).context("applying attributes")?;
    Ok(())
}

pub fn pattern(path: &Path) -> Result<PatternGraph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_pattern(&text).with_context(|| format!("pattern {}", path.display()))
}
