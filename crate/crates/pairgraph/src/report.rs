//! Human- and machine-readable renderings of reports.
//!
//! Every renderer takes the dataset for sentence texts where relevant,
//! returns a `String` ending in a newline, and is deterministic: identical
//! inputs produce identical bytes. Text output lists at most
//! [`MAX_LISTED`] detail lines per section; structured (JSON) output is
//! always complete.

use std::fmt::Write as _;

use serde::Serialize;

use crate::balance::{ConflictReport, FlipLog};
use crate::corpus::{
    DatasetStats, Label, LabeledDataset, NodeId, ParseReport, Split,
};
use crate::graph::ClusterId;
use crate::inference::{AugmentationReport, ConflictedPairHandling};

/// Detail lines a text section will list before summarizing the rest.
pub const MAX_LISTED: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Structured,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Text => "txt",
            ReportFormat::Structured => "json",
        }
    }
}

impl ConflictedPairHandling {
    pub fn as_str(self) -> &'static str {
        match self {
            ConflictedPairHandling::Drop => "drop",
            ConflictedPairHandling::PreferPositive => "prefer-positive",
            ConflictedPairHandling::PreferNegative => "prefer-negative",
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn text_of(dataset: &LabeledDataset, node: NodeId) -> &str {
    dataset.text(node).unwrap_or("<unknown node>")
}

fn truncation_note(out: &mut String, total: usize) {
    if total > MAX_LISTED {
        let _ = writeln!(out, "  ... and {} more", total - MAX_LISTED);
    }
}

// ---------------------------------------------------------------- parse

#[derive(Serialize)]
struct ParseDoc<'a> {
    split: Split,
    rows_read: u64,
    rows_used: u64,
    pairs_kept: usize,
    sentences: usize,
    merged_duplicates: u64,
    skipped: &'a [crate::corpus::SkippedRow],
    self_pairs: Vec<SelfPairDoc<'a>>,
    raw_conflicts: Vec<RawConflictDoc<'a>>,
}

#[derive(Serialize)]
struct SelfPairDoc<'a> {
    row: u64,
    node: NodeId,
    text: &'a str,
    label: Label,
    anomalous: bool,
}

#[derive(Serialize)]
struct RawConflictDoc<'a> {
    a: NodeId,
    b: NodeId,
    text_a: &'a str,
    text_b: &'a str,
    positive_rows: &'a [u64],
    negative_rows: &'a [u64],
}

pub fn render_parse_report(
    dataset: &LabeledDataset,
    report: &ParseReport,
    format: ReportFormat,
) -> String {
    match format {
        ReportFormat::Structured => json(&ParseDoc {
            split: dataset.split,
            rows_read: report.rows_read,
            rows_used: report.rows_used,
            pairs_kept: dataset.pairs.len(),
            sentences: dataset.n_sentences(),
            merged_duplicates: report.merged_duplicates,
            skipped: &report.skipped,
            self_pairs: report
                .self_pairs
                .iter()
                .map(|s| SelfPairDoc {
                    row: s.row,
                    node: s.node,
                    text: text_of(dataset, s.node),
                    label: s.label,
                    anomalous: s.anomalous(),
                })
                .collect(),
            raw_conflicts: report
                .raw_conflicts
                .iter()
                .map(|c| RawConflictDoc {
                    a: c.a,
                    b: c.b,
                    text_a: text_of(dataset, c.a),
                    text_b: text_of(dataset, c.b),
                    positive_rows: &c.positive_rows,
                    negative_rows: &c.negative_rows,
                })
                .collect(),
        }),
        ReportFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "parse report: {}", dataset.split);
            let _ = writeln!(out, "rows read: {}", report.rows_read);
            let _ = writeln!(out, "rows used: {}", report.rows_used);
            let _ = writeln!(out, "pairs kept: {}", dataset.pairs.len());
            let _ = writeln!(out, "sentences interned: {}", dataset.n_sentences());
            let _ = writeln!(out, "merged duplicates: {}", report.merged_duplicates);
            let _ = writeln!(out, "skipped rows: {}", report.skipped.len());
            for s in report.skipped.iter().take(MAX_LISTED) {
                let _ = writeln!(out, "  row {}: {}", s.row, s.reason.describe());
            }
            truncation_note(&mut out, report.skipped.len());
            let _ = writeln!(out, "self-pairs dropped: {}", report.self_pairs.len());
            for s in report.self_pairs.iter().take(MAX_LISTED) {
                let note = if s.anomalous() { " (anomalous)" } else { "" };
                let _ = writeln!(
                    out,
                    "  row {}: {} {:?}{}",
                    s.row,
                    s.label,
                    text_of(dataset, s.node),
                    note
                );
            }
            truncation_note(&mut out, report.self_pairs.len());
            let _ = writeln!(
                out,
                "raw conflicts excluded: {} pair(s), {} row(s)",
                report.raw_conflicts.len(),
                report.n_conflict_rows()
            );
            for c in report.raw_conflicts.iter().take(MAX_LISTED) {
                let _ = writeln!(
                    out,
                    "  {:?} vs {:?}: positive rows {:?}, negative rows {:?}",
                    text_of(dataset, c.a),
                    text_of(dataset, c.b),
                    c.positive_rows,
                    c.negative_rows
                );
            }
            truncation_note(&mut out, report.raw_conflicts.len());
            out
        }
    }
}

// ------------------------------------------------------------ conflicts

#[derive(Serialize)]
struct ConflictsDoc<'a> {
    split: Split,
    n_conflicts: usize,
    conflicts: Vec<ConflictRecord<'a>>,
}

#[derive(Serialize)]
struct ConflictRecord<'a> {
    index: usize,
    cluster: ClusterId,
    a: NodeId,
    b: NodeId,
    text_a: &'a str,
    text_b: &'a str,
    witness_nodes: &'a [NodeId],
    witness_texts: Vec<&'a str>,
}

pub fn render_conflicts(
    dataset: &LabeledDataset,
    report: &ConflictReport,
    format: ReportFormat,
) -> String {
    match format {
        ReportFormat::Structured => json(&ConflictsDoc {
            split: report.split,
            n_conflicts: report.len(),
            conflicts: report
                .conflicts
                .iter()
                .enumerate()
                .map(|(i, c)| ConflictRecord {
                    index: i + 1,
                    cluster: c.cluster,
                    a: c.a,
                    b: c.b,
                    text_a: text_of(dataset, c.a),
                    text_b: text_of(dataset, c.b),
                    witness_nodes: &c.witness.nodes,
                    witness_texts: c.witness.nodes.iter().map(|&n| text_of(dataset, n)).collect(),
                })
                .collect(),
        }),
        ReportFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "conflict report: {}", report.split);
            let _ = writeln!(out, "conflicts found: {}", report.len());
            for (i, c) in report.conflicts.iter().enumerate().take(MAX_LISTED) {
                let _ = writeln!(out, "conflict {} (cluster {})", i + 1, c.cluster);
                let _ = writeln!(
                    out,
                    "  negative pair: {:?} vs {:?}",
                    text_of(dataset, c.a),
                    text_of(dataset, c.b)
                );
                let path = c
                    .witness
                    .nodes
                    .iter()
                    .map(|&n| format!("{:?}", text_of(dataset, n)))
                    .collect::<Vec<_>>()
                    .join(" -> ");
                let _ = writeln!(out, "  positive witness: {path}");
            }
            truncation_note(&mut out, report.len());
            out
        }
    }
}

// ------------------------------------------------------------- flip log

#[derive(Serialize)]
struct FlipDoc<'a> {
    split: Split,
    n_flipped: usize,
    n_merged: usize,
    flipped: Vec<FlippedRecord<'a>>,
    merged: &'a [crate::balance::MergedPair],
}

#[derive(Serialize)]
struct FlippedRecord<'a> {
    a: NodeId,
    b: NodeId,
    text_a: &'a str,
    text_b: &'a str,
}

pub fn render_flip_log(dataset: &LabeledDataset, log: &FlipLog, format: ReportFormat) -> String {
    match format {
        ReportFormat::Structured => json(&FlipDoc {
            split: dataset.split,
            n_flipped: log.flipped.len(),
            n_merged: log.merged.len(),
            flipped: log
                .flipped
                .iter()
                .map(|f| FlippedRecord {
                    a: f.a,
                    b: f.b,
                    text_a: text_of(dataset, f.a),
                    text_b: text_of(dataset, f.b),
                })
                .collect(),
            merged: &log.merged,
        }),
        ReportFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "flip log: {}", dataset.split);
            let _ = writeln!(out, "pairs flipped: {}", log.flipped.len());
            for f in log.flipped.iter().take(MAX_LISTED) {
                let _ = writeln!(
                    out,
                    "  {:?} vs {:?}: negative -> positive",
                    text_of(dataset, f.a),
                    text_of(dataset, f.b)
                );
            }
            truncation_note(&mut out, log.flipped.len());
            let _ = writeln!(out, "pairs merged: {}", log.merged.len());
            for m in log.merged.iter().take(MAX_LISTED) {
                let _ = writeln!(
                    out,
                    "  {:?} vs {:?}: absorbed {} duplicate(s)",
                    text_of(dataset, m.a),
                    text_of(dataset, m.b),
                    m.n_absorbed
                );
            }
            truncation_note(&mut out, log.merged.len());
            out
        }
    }
}

// --------------------------------------------------------- augmentation

#[derive(Serialize)]
struct AugmentDoc<'a> {
    split: Split,
    #[serde(flatten)]
    report: &'a AugmentationReport,
}

pub fn render_augmentation_report(
    split: Split,
    report: &AugmentationReport,
    format: ReportFormat,
) -> String {
    match format {
        ReportFormat::Structured => json(&AugmentDoc { split, report }),
        ReportFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "augmentation report: {split}");
            let _ = writeln!(out, "inferred positive pairs: {}", report.n_inferred_positive);
            let _ = writeln!(out, "inferred negative pairs: {}", report.n_inferred_negative);
            let _ = writeln!(
                out,
                "contested pairs: {} (handling: {})",
                report.conflicted_pairs,
                report.conflicted_handling.as_str()
            );
            let _ = writeln!(out, "truncated clusters: {}", report.truncations.len());
            for t in report.truncations.iter().take(MAX_LISTED) {
                let _ = writeln!(
                    out,
                    "  cluster {}: emitted {}, dropped {}",
                    t.cluster, t.emitted, t.dropped
                );
            }
            truncation_note(&mut out, report.truncations.len());
            let provenance = report
                .n_by_provenance
                .iter()
                .map(|(p, n)| format!("{p} {n}"))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(out, "output provenance: {provenance}");
            out
        }
    }
}

// ---------------------------------------------------------------- stats

#[derive(Serialize)]
struct StatsDoc<'a> {
    variant: &'a str,
    split: Split,
    total: u64,
    #[serde(flatten)]
    stats: &'a DatasetStats,
}

pub fn render_stats(
    variant: &str,
    split: Split,
    stats: &DatasetStats,
    format: ReportFormat,
) -> String {
    match format {
        ReportFormat::Structured => json(&StatsDoc {
            variant,
            split,
            total: stats.total(),
            stats,
        }),
        ReportFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "variant: {variant}");
            let _ = writeln!(out, "split: {split}");
            let _ = writeln!(out, "positive pairs: {}", stats.n_positive);
            let _ = writeln!(out, "negative pairs: {}", stats.n_negative);
            let _ = writeln!(out, "total pairs: {}", stats.total());
            let _ = writeln!(out, "positive ratio: {}", stats.ratio_display());
            for (p, n) in &stats.n_by_provenance {
                let _ = writeln!(out, "provenance {p}: {n}");
            }
            out
        }
    }
}

// -------------------------------------------------------------- summary

/// Stats of one dataset variant across the splits that were run.
#[derive(Debug, Clone, Serialize)]
pub struct VariantSummary {
    pub variant: String,
    pub train: Option<DatasetStats>,
    pub test: Option<DatasetStats>,
}

impl VariantSummary {
    pub fn get(&self, split: Split) -> Option<&DatasetStats> {
        match split {
            Split::Train => self.train.as_ref(),
            Split::Test => self.test.as_ref(),
        }
    }
}

#[derive(Serialize)]
struct SummaryDoc<'a> {
    variants: &'a [VariantSummary],
}

/// One table row per variant and split: counts, total, positive-percentage.
pub fn render_summary(variants: &[VariantSummary], format: ReportFormat) -> String {
    match format {
        ReportFormat::Structured => json(&SummaryDoc { variants }),
        ReportFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{:<20} {:<6} {:>10} {:>10} {:>10} {:>10}",
                "variant", "split", "positive", "negative", "total", "pos_ratio"
            );
            for v in variants {
                for split in [Split::Train, Split::Test] {
                    let Some(stats) = v.get(split) else { continue };
                    let _ = writeln!(
                        out,
                        "{:<20} {:<6} {:>10} {:>10} {:>10} {:>10}",
                        v.variant,
                        split.as_str(),
                        stats.n_positive,
                        stats.n_negative,
                        stats.total(),
                        stats.ratio_display()
                    );
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balance::detect_conflicts;
    use crate::corpus::{compute_stats, parse_dataset, FormatConfig, Provenance};
    use crate::graph::ParaphraseGraph;
    use crate::inference::{augment_dataset, AugmentationPolicy};

    fn conflicted_setup() -> (LabeledDataset, ParseReport) {
        let file = "\
id\tqid1\tqid2\tquestion1\tquestion2\tis_duplicate
1\t1\t2\thow to boil eggs\tbest way to boil an egg\t1
2\t3\t4\tbest way to boil an egg\tboiling eggs guide\t1
3\t5\t6\thow to boil eggs\tboiling eggs guide\t0
4\t7\t8\thow to boil eggs\thow to boil eggs\t1
5\t9\t10\tsame\tsame\tmaybe
";
        let (ds, report) =
            parse_dataset(file.as_bytes(), &FormatConfig::qqp(), Split::Train).unwrap();
        (ds, report)
    }

    #[test]
    fn parse_report_text_mentions_everything() {
        let (ds, report) = conflicted_setup();
        let text = render_parse_report(&ds, &report, ReportFormat::Text);
        assert!(text.contains("rows read: 5"));
        assert!(text.contains("self-pairs dropped: 1"));
        assert!(text.contains("non-binary label"));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn parse_report_json_is_valid() {
        let (ds, report) = conflicted_setup();
        let out = render_parse_report(&ds, &report, ReportFormat::Structured);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["split"], "train");
        assert_eq!(v["rows_read"], 5);
        assert_eq!(v["self_pairs"][0]["text"], "how to boil eggs");
    }

    #[test]
    fn conflict_rendering_includes_witness_texts() {
        let (ds, _) = conflicted_setup();
        let g = ParaphraseGraph::build(&ds).unwrap();
        let idx = g.positive_components();
        let report = detect_conflicts(&g, &idx, ds.split);
        assert_eq!(report.len(), 1);

        let text = render_conflicts(&ds, &report, ReportFormat::Text);
        assert!(text.contains("conflicts found: 1"));
        assert!(text.contains(
            "\"how to boil eggs\" -> \"best way to boil an egg\" -> \"boiling eggs guide\""
        ));

        let out = render_conflicts(&ds, &report, ReportFormat::Structured);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["n_conflicts"], 1);
        assert_eq!(v["conflicts"][0]["witness_texts"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn flip_log_rendering() {
        let (ds, _) = conflicted_setup();
        let g = ParaphraseGraph::build(&ds).unwrap();
        let idx = g.positive_components();
        let report = detect_conflicts(&g, &idx, ds.split);
        let (fixed, log) = crate::balance::flip_conflicts(&ds, &report).unwrap();
        let text = render_flip_log(&fixed, &log, ReportFormat::Text);
        assert!(text.contains("pairs flipped: 1"));
        assert!(text.contains("negative -> positive"));
        let v: serde_json::Value =
            serde_json::from_str(&render_flip_log(&fixed, &log, ReportFormat::Structured))
                .unwrap();
        assert_eq!(v["n_flipped"], 1);
        assert_eq!(v["n_merged"], 0);
    }

    #[test]
    fn augmentation_report_rendering() {
        let (ds, _) = conflicted_setup();
        let (_, aug) = augment_dataset(&ds, &AugmentationPolicy::default()).unwrap();
        let text = render_augmentation_report(ds.split, &aug, ReportFormat::Text);
        assert!(text.contains("contested pairs: 0 (handling: drop)"));
        let v: serde_json::Value = serde_json::from_str(&render_augmentation_report(
            ds.split,
            &aug,
            ReportFormat::Structured,
        ))
        .unwrap();
        assert_eq!(v["split"], "train");
        assert_eq!(v["conflicted_handling"], "drop");
    }

    #[test]
    fn stats_and_summary_rendering() {
        let (ds, _) = conflicted_setup();
        let stats = compute_stats(&ds);
        let text = render_stats("original", Split::Train, &stats, ReportFormat::Text);
        assert!(text.contains("variant: original"));
        assert!(text.contains(&format!("provenance {}: ", Provenance::Original)));

        let summary = vec![VariantSummary {
            variant: "original".into(),
            train: Some(stats),
            test: None,
        }];
        let table = render_summary(&summary, ReportFormat::Text);
        assert_eq!(table.lines().count(), 2);
        assert!(table.lines().nth(1).unwrap().starts_with("original"));

        let v: serde_json::Value =
            serde_json::from_str(&render_summary(&summary, ReportFormat::Structured)).unwrap();
        assert!(v["variants"][0]["test"].is_null());
    }

    #[test]
    fn rendering_is_deterministic() {
        let (ds, report) = conflicted_setup();
        for format in [ReportFormat::Text, ReportFormat::Structured] {
            assert_eq!(
                render_parse_report(&ds, &report, format),
                render_parse_report(&ds, &report, format)
            );
        }
    }
}
