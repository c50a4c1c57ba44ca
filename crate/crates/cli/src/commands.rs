use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use mfcss::engine::{ntss, prepare_graph, render_results, EngineOptions, NtssOutput, Variant};
use mfcss::graph_model::synthesize_attributes;
use mfcss::oracle::{run_campaign, CampaignConfig};

use crate::{input, MatchArgs, OracleArgs, SynthArgs};

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

pub fn synth(args: &SynthArgs) -> Result<ExitCode> {
    let graph = input::topology(&args.graph)?;
    let sidecar = synthesize_attributes(&graph, args.seed, args.labels)?;
    let file = File::create(&args.out).with_context(|| format!("cannot create {}", args.out.display()))?;
    let mut out = BufWriter::new(file);
    sidecar.write_to(&mut out)?;
    out.flush().with_context(|| format!("cannot write {}", args.out.display()))?;
    eprintln!(
        "wrote {} node and {} edge attributes to {}",
        sidecar.nodes.len(),
        sidecar.edges.len(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn progress_csv(out: &NtssOutput) -> String {
    let mut csv = String::from("elapsed_ms,result_count\n");
    for p in &out.progress {
        let _ = writeln!(csv, "{:.3},{}", p.elapsed.as_secs_f64() * 1e3, p.results);
    }
    csv
}

pub fn stats_block(out: &NtssOutput, variant: Variant, inverse: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "variant: {variant}");
    let _ = writeln!(s, "wall_time_s: {:.6}", out.elapsed.as_secs_f64());
    let _ = writeln!(s, "start_candidates: {}", out.start_candidates);
    let _ = writeln!(s, "results: {}", out.results.len());
    let _ = writeln!(s, "cache_hits: {}", out.cache.hits);
    let _ = writeln!(s, "cache_misses: {}", out.cache.misses);
    let _ = writeln!(s, "accounted_bytes: {}", out.accounted_bytes());
    let _ = writeln!(s, "graph_bytes: {}", out.graph_bytes);
    let _ = writeln!(s, "inverse_adjacency: {}", if inverse { "built" } else { "not built" });
    s
}

pub fn run_match(args: &MatchArgs) -> Result<ExitCode> {
    let variant: Variant = args.variant.parse()?;
    let mut graph = input::attributed(&args.graph, args.attrs.as_deref(), args.seed, args.labels)?;
    let pattern = input::pattern(&args.pattern)?;
    let inverse = prepare_graph(&mut graph, variant);
    let mut options = EngineOptions::new(variant).workers(args.workers);
    options.skip_in_edge_check = args.skip_in_edge_check;
    let out = ntss(&graph, &pattern, &options)?;

    write_file(&args.output, &render_results(&graph, &pattern, &out.results))?;
    if let Some(path) = &args.progress {
        write_file(path, &progress_csv(&out))?;
    }
    print!("{}", stats_block(&out, variant, inverse));
    Ok(ExitCode::SUCCESS)
}

pub fn oracle(args: &OracleArgs) -> Result<ExitCode> {
    if args.instances == 0 {
        eprintln!("warning: zero instances requested, nothing to check");
    }
    let config = CampaignConfig {
        instances: args.instances,
        seed: args.seed,
        size_limit: args.size_limit,
        skip_in_edge_check: args.skip_in_edge_check,
        ..CampaignConfig::default()
    };
    let report = run_campaign(&config)?;
    let text = report.render();
    match &args.report {
        Some(path) => {
            write_file(path, &text)?;
            print!("{}", text.lines().last().map(|l| format!("{l}\n")).unwrap_or_default());
        }
        None => print!("{text}"),
    }
    Ok(if report.is_clean() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
