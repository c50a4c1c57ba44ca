use std::fmt::Write;

use super::{compare, enumerate_paths, mfcss_fixpoint, mfcss_fixpoint_with, random_instance, start_candidates};
use super::{GeneratorConfig, RemovalOrder, Witness, DEFAULT_SIZE_LIMIT};
use crate::engine::{ntss, render_results, EngineOptions, Variant};
use crate::error::Result;
use crate::graph_model::plan_pattern;
use crate::verify::check_all;

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub instances: usize,
    pub seed: u64,
    pub generator: GeneratorConfig,
    pub size_limit: usize,
    pub variants: Vec<Variant>,
    /// Also run the fixpoint with a shuffled removal order and compare.
    pub shuffled_fixpoint: bool,
    #[doc(hidden)]
    pub skip_in_edge_check: bool,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            instances: 200,
            seed: 1,
            generator: GeneratorConfig::default(),
            size_limit: DEFAULT_SIZE_LIMIT,
            variants: Variant::ALL.to_vec(),
            shuffled_fixpoint: true,
            skip_in_edge_check: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceVerdict {
    pub index: usize,
    pub seed: u64,
    pub nodes: usize,
    pub edges: usize,
    pub pattern_nodes: usize,
    pub sources: usize,
    pub starts: usize,
    pub results: usize,
    pub witnesses: Vec<(Variant, Witness)>,
    pub variants_differ: Vec<Variant>,
    pub violations: Vec<String>,
    pub order_mismatches: usize,
}

impl InstanceVerdict {
    pub fn is_clean(&self) -> bool {
        self.witnesses.is_empty()
            && self.variants_differ.is_empty()
            && self.violations.is_empty()
            && self.order_mismatches == 0
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CampaignReport {
    pub verdicts: Vec<InstanceVerdict>,
}

impl CampaignReport {
    pub fn witnesses(&self) -> usize {
        self.verdicts.iter().map(|v| v.witnesses.len()).sum()
    }

    pub fn variant_mismatches(&self) -> usize {
        self.verdicts.iter().map(|v| v.variants_differ.len()).sum()
    }

    pub fn violations(&self) -> usize {
        self.verdicts.iter().map(|v| v.violations.len()).sum()
    }

    pub fn order_mismatches(&self) -> usize {
        self.verdicts.iter().map(|v| v.order_mismatches).sum()
    }

    pub fn non_empty(&self) -> usize {
        self.verdicts.iter().filter(|v| v.results > 0).count()
    }

    pub fn is_clean(&self) -> bool {
        self.verdicts.iter().all(InstanceVerdict::is_clean)
    }

    /// One line per instance followed by a summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for v in &self.verdicts {
            let _ = write!(
                out,
                "instance {} seed {}: nodes {} edges {} pattern {} sources {} starts {} results {}",
                v.index, v.seed, v.nodes, v.edges, v.pattern_nodes, v.sources, v.starts, v.results
            );
            if v.is_clean() {
                out.push_str(" ok");
            }
            for (variant, w) in &v.witnesses {
                let side = if w.engine_only { "engine-only" } else { "oracle-only" };
                let _ = write!(
                    out,
                    " WITNESS {variant} start {} node {} data {} {side}",
                    w.start, w.pattern_node, w.data_node
                );
            }
            for variant in &v.variants_differ {
                let _ = write!(out, " DIFFERS {variant}");
            }
            if !v.violations.is_empty() {
                let _ = write!(out, " VIOLATIONS {} ({})", v.violations.len(), v.violations[0]);
            }
            if v.order_mismatches > 0 {
                let _ = write!(out, " ORDER {}", v.order_mismatches);
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "summary: instances {} non-empty {} witnesses {} variant-mismatches {} violations {} order-mismatches {}",
            self.verdicts.len(),
            self.non_empty(),
            self.witnesses(),
            self.variant_mismatches(),
            self.violations(),
            self.order_mismatches()
        );
        out
    }
}

/// Seed of instance `i` in a campaign seeded with `seed`.
pub fn instance_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (i as u64).wrapping_add(1).wrapping_mul(0xBF58_476D_1CE4_E5B9)
}

/// Generates instances, runs every configured variant on each and compares
/// against the fixpoint oracle.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    let mut report = CampaignReport::default();
    for i in 0..config.instances {
        let seed = instance_seed(config.seed, i);
        let mut inst = random_instance(&config.generator, seed)?;
        let table = enumerate_paths(&inst.graph, &inst.pattern, config.size_limit)?;
        inst.graph.build_inverse_adjacency();
        let (g, p) = (&inst.graph, &inst.pattern);
        let plan = plan_pattern(p);

        let starts = start_candidates(g, p);
        let mut expected = Vec::with_capacity(starts.len());
        let mut order_mismatches = 0;
        for (k, &v_s) in starts.iter().enumerate() {
            let s = mfcss_fixpoint(g, p, &table, v_s);
            if config.shuffled_fixpoint {
                let shuffled = mfcss_fixpoint_with(g, p, &table, v_s, RemovalOrder::Shuffled(seed ^ k as u64));
                order_mismatches += usize::from(shuffled != s);
            }
            expected.push((v_s, s));
        }

        let mut verdict = InstanceVerdict {
            index: i,
            seed,
            nodes: g.node_count(),
            edges: g.edge_count(),
            pattern_nodes: p.node_count(),
            sources: (0..p.node_count()).filter(|&u| p.in_edges(u).is_empty()).count(),
            starts: starts.len(),
            results: expected.iter().filter(|(_, s)| s.is_some()).count(),
            witnesses: Vec::new(),
            variants_differ: Vec::new(),
            violations: Vec::new(),
            order_mismatches,
        };

        let mut reference: Option<String> = None;
        for &variant in &config.variants {
            let options = EngineOptions {
                skip_in_edge_check: config.skip_in_edge_check,
                ..EngineOptions::new(variant)
            };
            let out = ntss(g, p, &options)?;
            let canonical = render_results(g, p, &out.results);
            match &reference {
                None => reference = Some(canonical),
                Some(r) if *r != canonical => verdict.variants_differ.push(variant),
                Some(_) => {}
            }
            for sub in &out.results {
                verdict.violations.extend(check_all(g, p, &plan, sub).into_iter().map(|v| v.detail));
            }
            let mut results = out.results.iter().peekable();
            for (v_s, s) in &expected {
                let engine = results.next_if(|r| r.start == *v_s).map(|r| r.matched.as_slice());
                if let Some(w) = compare(g, p, *v_s, engine, s.as_deref()) {
                    verdict.witnesses.push((variant, w));
                }
            }
            if results.next().is_some() {
                verdict.violations.push("engine result for a non-candidate start".into());
            }
        }
        report.verdicts.push(verdict);
    }
    Ok(report)
}
