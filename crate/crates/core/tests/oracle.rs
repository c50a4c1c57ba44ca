mod common;

use common::*;
use mfcss::engine::{get_candidates, ntss, EngineOptions, Matcher, Variant};
use mfcss::graph_model::{DataGraph, PatternGraph};
use mfcss::oracle::{
    compare, enumerate_paths, mfcss_fixpoint, mfcss_fixpoint_with, random_instance, run_campaign, start_candidates,
    CampaignConfig, GeneratorConfig, RemovalOrder, DEFAULT_SIZE_LIMIT,
};
use mfcss::pathfinder::PathSearch;
use mfcss::Error;
use proptest::prelude::*;

/// First disagreement between engine and oracle over all start candidates.
fn disagreement(g: &DataGraph, p: &PatternGraph, variant: Variant) -> Option<String> {
    let table = enumerate_paths(g, p, 64).unwrap();
    let starts = start_candidates(g, p);
    assert_eq!(starts, get_candidates(&PathSearch::new(g, p), p.start()));
    let mut m = Matcher::new(g, p, variant);
    for v in starts {
        let (sub, _) = m.match_start(v).unwrap();
        let expected = mfcss_fixpoint(g, p, &table, v);
        if let Some(w) = compare(g, p, v, sub.as_ref().map(|s| s.matched.as_slice()), expected.as_deref()) {
            return Some(format!("{w:?}"));
        }
    }
    None
}

#[test]
fn fixtures_agree_with_oracle() {
    for f in all() {
        for v in Variant::ALL {
            assert_eq!(disagreement(&f.graph, &f.pattern, v), None, "{} {v}", f.name);
        }
    }
}

#[test]
fn two_leaders_oracle_counts_two() {
    let f = two_leaders();
    let table = enumerate_paths(&f.graph, &f.pattern, DEFAULT_SIZE_LIMIT).unwrap();
    let non_empty = start_candidates(&f.graph, &f.pattern)
        .into_iter()
        .filter(|&v| mfcss_fixpoint(&f.graph, &f.pattern, &table, v).is_some())
        .count();
    assert_eq!(non_empty, 2);
}

#[test]
fn removal_order_does_not_matter_on_fixtures() {
    for f in all() {
        let table = enumerate_paths(&f.graph, &f.pattern, DEFAULT_SIZE_LIMIT).unwrap();
        for v in start_candidates(&f.graph, &f.pattern) {
            let batch = mfcss_fixpoint_with(&f.graph, &f.pattern, &table, v, RemovalOrder::Batch);
            for seed in 0..4 {
                let shuffled = mfcss_fixpoint_with(&f.graph, &f.pattern, &table, v, RemovalOrder::Shuffled(seed));
                assert_eq!(batch, shuffled, "{}", f.name);
            }
        }
    }
}

#[test]
fn oversized_graph_is_refused() {
    let cfg = GeneratorConfig {
        nodes: 30..=30,
        ..GeneratorConfig::default()
    };
    let inst = random_instance(&cfg, 3).unwrap();
    let err = enumerate_paths(&inst.graph, &inst.pattern, 20).unwrap_err();
    assert!(matches!(err, Error::Refused(_)));
}

#[test]
fn small_campaign_is_clean() {
    let report = run_campaign(&CampaignConfig {
        instances: 40,
        ..CampaignConfig::default()
    })
    .unwrap();
    assert!(report.is_clean(), "{}", report.render());
    assert!(report.non_empty() > 0);
}

#[test]
fn skipping_in_edge_check_is_detected() {
    let report = run_campaign(&CampaignConfig {
        instances: 200,
        variants: vec![Variant::Plain],
        skip_in_edge_check: true,
        ..CampaignConfig::default()
    })
    .unwrap();
    assert!(report.witnesses() > 0, "{}", report.render());
}

#[test]
fn empty_campaign_is_trivially_clean() {
    let report = run_campaign(&CampaignConfig {
        instances: 0,
        ..CampaignConfig::default()
    })
    .unwrap();
    assert!(report.is_clean());
    assert_eq!(report.verdicts.len(), 0);
}

#[test]
fn skipped_check_differs_on_diamond() {
    let f = diamond();
    let mut opts = EngineOptions::new(Variant::Plain);
    opts.skip_in_edge_check = true;
    let broken = ntss(&f.graph, &f.pattern, &opts).unwrap();
    assert_eq!(ids(&f.graph, &broken.results[0].matched[3]), vec![3, 4]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn engine_equals_fixpoint_with_longer_bounds(seed in any::<u64>()) {
        let cfg = GeneratorConfig {
            bounds: 1..=3,
            ..GeneratorConfig::default()
        };
        let mut inst = random_instance(&cfg, seed).unwrap();
        inst.graph.build_inverse_adjacency();
        for v in Variant::ALL {
            prop_assert_eq!(disagreement(&inst.graph, &inst.pattern, v), None);
        }
    }
}
