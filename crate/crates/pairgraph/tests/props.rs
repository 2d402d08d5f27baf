//! Property tests over randomly generated datasets and raw inputs.

#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::BTreeMap;

use common::*;
use pairgraph::balance::{classify_triad, detect_conflicts, flip_conflicts, is_weakly_balanced};
use pairgraph::corpus::{
    canonicalize_sentence, compute_stats, parse_dataset, write_dataset, FormatConfig, Label,
    LabeledDataset, Provenance, Split,
};
use pairgraph::graph::ParaphraseGraph;
use pairgraph::inference::{
    augment_dataset, infer_negative_pairs, infer_positive_pairs, AugmentationPolicy,
};
use pairgraph::NodeId;
use proptest::prelude::*;

fn arb_label() -> impl Strategy<Value = Label> {
    prop_oneof![Just(Label::Positive), Just(Label::Negative)]
}

/// Datasets with up to `max_n` nodes and a random well-formed edge set.
fn arb_dataset(max_n: u32) -> impl Strategy<Value = LabeledDataset> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec((0..n, 0..n, any::<bool>()), 0..=40).prop_map(move |raw| {
            let mut map = BTreeMap::new();
            for (a, b, negative) in raw {
                if a == b {
                    continue;
                }
                let key = (a.min(b), a.max(b));
                map.entry(key).or_insert(if negative {
                    Label::Negative
                } else {
                    Label::Positive
                });
            }
            let edges: Vec<_> = map.into_iter().map(|((a, b), l)| (a, b, l)).collect();
            synthetic_dataset(n, &edges)
        })
    })
}

proptest! {
    #[test]
    fn canonicalization_normalizes_and_is_idempotent(raw in ".{0,60}") {
        match canonicalize_sentence(&raw) {
            Ok(text) => {
                prop_assert!(!text.is_empty());
                prop_assert_eq!(text.trim(), text.as_str());
                prop_assert!(!text.contains("  "));
                prop_assert!(!text.contains('\t') && !text.contains('\n'));
                prop_assert_eq!(canonicalize_sentence(&text).unwrap(), text);
            }
            Err(_) => prop_assert!(raw.split_whitespace().next().is_none()),
        }
    }

    #[test]
    fn triad_classification_ignores_order(signs in [arb_label(), arb_label(), arb_label()]) {
        let expected = classify_triad(signs);
        for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let shuffled = [signs[perm[0]], signs[perm[1]], signs[perm[2]]];
            prop_assert_eq!(classify_triad(shuffled), expected);
        }
    }

    #[test]
    fn round_trip_preserves_text_pairs(ds in arb_dataset(10), qqp in any::<bool>()) {
        let cfg = if qqp { FormatConfig::qqp() } else { FormatConfig::generic() };
        let mut buf = Vec::new();
        write_dataset(&ds, &mut buf, &cfg).unwrap();
        let (back, report) = parse_dataset(buf.as_slice(), &cfg, Split::Train).unwrap();
        prop_assert!(report.is_clean());
        prop_assert_eq!(text_view(&back), text_view(&ds));
    }

    #[test]
    fn parsing_ignores_row_order(ds in arb_dataset(8), seed in any::<u64>()) {
        let mut rows: Vec<String> = ds
            .pairs
            .iter()
            .map(|p| {
                format!(
                    "{}\t{}\t{}",
                    ds.text(p.a).unwrap(),
                    ds.text(p.b).unwrap(),
                    p.label.as_digit()
                )
            })
            .collect();
        let cfg = FormatConfig::generic().with_header(false);
        let forward = rows.join("\n");
        // Deterministic permutation from the seed.
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| (seed.wrapping_mul(i as u64 + 1)).rotate_left(17));
        rows = order.iter().map(|&i| rows[i].clone()).collect();
        let shuffled = rows.join("\n");

        let (a, _) = parse_dataset(forward.as_bytes(), &cfg, Split::Train).unwrap();
        let (b, _) = parse_dataset(shuffled.as_bytes(), &cfg, Split::Train).unwrap();
        prop_assert_eq!(text_view(&a), text_view(&b));
    }

    #[test]
    fn stats_add_up(ds in arb_dataset(12)) {
        let stats = compute_stats(&ds);
        prop_assert_eq!(stats.total() as usize, ds.pairs.len());
        let by_prov: u64 = stats.n_by_provenance.values().sum();
        prop_assert_eq!(by_prov, stats.total());
        if let Some(r) = stats.positive_ratio {
            prop_assert!((0.0..=1.0).contains(&r));
        } else {
            prop_assert_eq!(stats.total(), 0);
        }
    }

    #[test]
    fn positive_paths_exist_exactly_within_clusters(ds in arb_dataset(10)) {
        let g = ParaphraseGraph::build(&ds).unwrap();
        let idx = g.positive_components();
        let dist = oracle_positive_distances(&ds);
        for i in 0..ds.n_sentences() {
            for j in i + 1..ds.n_sentences() {
                let (a, b) = (NodeId(i as u32), NodeId(j as u32));
                let path = g.shortest_positive_path(a, b).unwrap();
                prop_assert_eq!(path.is_some(), idx.same_cluster(a, b));
                if let Some(path) = path {
                    prop_assert_eq!(path.endpoints(), (a, b));
                    prop_assert_eq!(path.hops() as u32, dist[i][j]);
                    for pair in path.nodes.windows(2) {
                        prop_assert_eq!(g.sign(pair[0], pair[1]), Some(Label::Positive));
                    }
                }
            }
        }
    }

    #[test]
    fn components_match_reachability_oracle(ds in arb_dataset(12)) {
        let g = ParaphraseGraph::build(&ds).unwrap();
        let idx = g.positive_components();
        let expected = oracle_clusters(&ds);
        let actual: Vec<u32> = (0..ds.n_sentences())
            .map(|i| idx.cluster_of(NodeId(i as u32)).0)
            .collect();
        prop_assert_eq!(actual, expected);
    }

    #[test]
    fn inference_matches_oracles(ds in arb_dataset(10)) {
        let g = ParaphraseGraph::build(&ds).unwrap();
        let idx = g.positive_components();

        let pos: std::collections::BTreeSet<(u32, u32)> =
            infer_positive_pairs(&g, &idx).iter().map(|p| (p.a.0, p.b.0)).collect();
        prop_assert_eq!(pos, oracle_inferred_positives(&ds));

        let neg: std::collections::BTreeSet<(u32, u32)> =
            infer_negative_pairs(&g, &idx).iter().map(|p| (p.a.0, p.b.0)).collect();
        prop_assert_eq!(neg, oracle_inferred_negatives(&ds));

        // Strictness: inferred negatives always span two clusters.
        for p in infer_negative_pairs(&g, &idx) {
            prop_assert!(!idx.same_cluster(p.a, p.b));
        }
        for p in infer_positive_pairs(&g, &idx) {
            prop_assert!(idx.same_cluster(p.a, p.b));
        }
    }

    #[test]
    fn augmentation_preserves_originals_and_reaches_fixpoint(ds in arb_dataset(10)) {
        let policy = AugmentationPolicy::default();
        let (out, report) = augment_dataset(&ds, &policy).unwrap();

        prop_assert!(out.validate().is_ok());
        let stats_in = compute_stats(&ds);
        let stats_out = compute_stats(&out);
        prop_assert!(stats_out.n_positive >= stats_in.n_positive);
        prop_assert!(stats_out.n_negative >= stats_in.n_negative);
        prop_assert_eq!(
            out.pairs.len(),
            ds.pairs.len()
                + report.n_inferred_positive as usize
                + report.n_inferred_negative as usize
        );
        // Every original pair survives untouched.
        for p in &ds.pairs {
            let i = out.find_pair(p.a, p.b).unwrap();
            prop_assert_eq!(&out.pairs[i], p);
        }
        // Inferred pairs carry no row ids.
        for p in &out.pairs {
            if p.provenance != Provenance::Original {
                prop_assert!(p.row_ids.is_empty());
            }
        }

        let (again, second) = augment_dataset(&out, &policy).unwrap();
        prop_assert_eq!(again.pairs.len(), out.pairs.len());
        prop_assert_eq!(second.n_inferred_positive + second.n_inferred_negative, 0);
    }

    #[test]
    fn augmenting_a_clean_graph_stays_weakly_balanced(ds in arb_dataset(10)) {
        prop_assume!(oracle_conflicts(&ds).is_empty());
        let (out, _) = augment_dataset(&ds, &AugmentationPolicy::default()).unwrap();
        let g = ParaphraseGraph::build(&out).unwrap();
        let idx = g.positive_components();
        prop_assert!(is_weakly_balanced(&g, &idx));
    }

    #[test]
    fn flipping_repairs_every_conflict(ds in arb_dataset(10)) {
        let g = ParaphraseGraph::build(&ds).unwrap();
        let idx = g.positive_components();
        let report = detect_conflicts(&g, &idx, Split::Train);
        prop_assert_eq!(
            report.conflicts.iter().map(|c| (c.a.0, c.b.0)).collect::<std::collections::BTreeSet<_>>(),
            oracle_conflicts(&ds)
        );
        prop_assert_eq!(is_weakly_balanced(&g, &idx), report.is_empty());

        let (fixed, log) = flip_conflicts(&ds, &report).unwrap();
        prop_assert_eq!(log.flipped.len(), report.len());
        prop_assert!(log.merged.is_empty());

        let stats_in = compute_stats(&ds);
        let stats_out = compute_stats(&fixed);
        prop_assert_eq!(stats_out.n_positive, stats_in.n_positive + report.len() as u64);
        prop_assert_eq!(stats_out.n_negative + report.len() as u64, stats_in.n_negative);

        let g2 = ParaphraseGraph::build(&fixed).unwrap();
        let idx2 = g2.positive_components();
        prop_assert!(detect_conflicts(&g2, &idx2, Split::Train).is_empty());
        for f in &log.flipped {
            let i = fixed.find_pair(f.a, f.b).unwrap();
            prop_assert_eq!(fixed.pairs[i].provenance, Provenance::Flipped);
            prop_assert_eq!(fixed.pairs[i].label, Label::Positive);
        }
    }
}
