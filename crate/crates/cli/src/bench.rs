use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use mfcss::engine::{ntss, prepare_graph, EngineOptions, Variant};
use mfcss::graph_model::{DataGraph, PatternGraph};
use mfcss::synthetic::synthetic_topology;

use crate::commands::write_file;
use crate::{input, BenchArgs};

pub const HEADER: &str = "dataset,pattern,variant,seconds,results";
pub const RATIO_HEADER: &str = "dataset,pattern,variant,plain_over_variant";

fn split_spec(spec: &str) -> Result<(&str, &str)> {
    let (name, rest) = spec
        .split_once('=')
        .ok_or_else(|| anyhow!("expected NAME=VALUE, got `{spec}`"))?;
    if name.is_empty() || rest.is_empty() {
        bail!("expected NAME=VALUE, got `{spec}`");
    }
    Ok((name, rest))
}

fn load_datasets(args: &BenchArgs) -> Result<Vec<(String, DataGraph)>> {
    let mut out = Vec::new();
    for spec in &args.datasets {
        let (name, rest) = split_spec(spec)?;
        let (edges, attrs) = match rest.split_once(',') {
            Some((e, a)) => (e, Some(PathBuf::from(a))),
            None => (rest, None),
        };
        let graph = input::attributed(Path::new(edges), attrs.as_deref(), args.seed, args.labels)?;
        out.push((name.to_string(), graph));
    }
    for spec in &args.synthetic {
        let (name, rest) = split_spec(spec)?;
        let (nodes, edges) = rest
            .split_once(',')
            .ok_or_else(|| anyhow!("expected NAME=NODES,EDGES, got `{spec}`"))?;
        let nodes: usize = nodes.parse().with_context(|| format!("node count in `{spec}`"))?;
        let edges: usize = edges.parse().with_context(|| format!("edge count in `{spec}`"))?;
        let (mut graph, _) = DataGraph::from_edge_pairs(&synthetic_topology(nodes, edges, args.seed)?)?;
        input::attach(&mut graph, None, args.seed, args.labels)?;
        out.push((name.to_string(), graph));
    }
    Ok(out)
}

fn load_patterns(args: &BenchArgs) -> Result<Vec<(String, PatternGraph)>> {
    args.patterns
        .iter()
        .map(|spec| {
            let (name, path) = split_spec(spec)?;
            Ok((name.to_string(), input::pattern(Path::new(path))?))
        })
        .collect()
}

pub fn run(args: &BenchArgs) -> Result<ExitCode> {
    let variants: Vec<Variant> = if args.variants.is_empty() {
        Variant::ALL.to_vec()
    } else {
        args.variants.iter().map(|v| v.parse()).collect::<Result<_, _>>()?
    };
    let patterns = load_patterns(args)?;
    let mut datasets = load_datasets(args)?;

    let mut table = format!("{HEADER}\n");
    let mut ratios = format!("{RATIO_HEADER}\n");
    for (dname, graph) in &mut datasets {
        for (pname, pattern) in &patterns {
            let mut seconds: HashMap<Variant, f64> = HashMap::new();
            for &v in &variants {
                prepare_graph(graph, v);
                let out = ntss(graph, pattern, &EngineOptions::new(v).workers(args.workers))?;
                let s = out.elapsed.as_secs_f64();
                seconds.insert(v, s);
                let _ = writeln!(table, "{dname},{pname},{v},{s:.6},{}", out.results.len());
                eprintln!("{dname} {pname} {v}: {s:.3}s, {} results", out.results.len());
            }
            if let Some(&base) = seconds.get(&Variant::Plain) {
                for &v in variants.iter().filter(|&&v| v != Variant::Plain) {
                    let ratio = base / seconds[&v].max(f64::MIN_POSITIVE);
                    let _ = writeln!(ratios, "{dname},{pname},{v},{ratio:.6}");
                }
            }
        }
    }

    match &args.output {
        Some(path) => write_file(path, &table)?,
        None => print!("{table}"),
    }
    match &args.ratio_out {
        Some(path) => write_file(path, &ratios)?,
        None => print!("{ratios}"),
    }
    Ok(ExitCode::SUCCESS)
}
