//! End-to-end flows over one or two splits: parse, audit, repair, augment,
//! write.
//!
//! Output layout under `out_dir` (paths are identical whether a variant is
//! produced by its dedicated command or by the full pipeline, so partial
//! runs compose):
//!
//! ```text
//! out_dir/
//!   original/<split>.tsv            canonical rewrite of the input
//!   original_flipped/<split>.tsv    conflicts repaired
//!   augmented/<split>.tsv           inferred pairs added
//!   augmented_flipped/<split>.tsv   repaired, then augmented (or the
//!                                   reverse order, see `flip_before_infer`)
//!   reports/parse_report_<split>.*  per-row parse diagnostics
//!   reports/conflicts_<split>.*     conflicts with witness paths
//!   reports/flip_log_<split>.*      what repair changed
//!   reports/augment_report_<variant>_<split>.*
//!   reports/stats_<variant>_<split>.*
//!   reports/summary.*               all variants side by side (pipeline)
//!   reports/graph_<split>.edges     signed edge list (on request)
//! ```
//!
//! All writes are deterministic; rerunning a command over the same inputs
//! reproduces every file byte for byte.

use std::fs;
use std::path::{Path, PathBuf};

use crate::balance::{detect_conflicts, flip_conflicts};
use crate::corpus::{
    compute_stats, dataset_file_name, parse_dataset_path, DatasetStats, FormatConfig,
    LabeledDataset, ParseReport, Split,
};
use crate::error::Error;
use crate::graph::ParaphraseGraph;
use crate::inference::{augment_dataset, AugmentationPolicy, AugmentationReport};
use crate::report::{
    render_augmentation_report, render_conflicts, render_flip_log, render_parse_report,
    render_stats, render_summary, ReportFormat, VariantSummary,
};
use crate::Result;

pub const VARIANT_ORIGINAL: &str = "original";
pub const VARIANT_ORIGINAL_FLIPPED: &str = "original_flipped";
pub const VARIANT_AUGMENTED: &str = "augmented";
pub const VARIANT_AUGMENTED_FLIPPED: &str = "augmented_flipped";

/// Everything a run needs to know. `out_dir` is optional for the in-memory
/// commands (stats, check); the writing commands require it at the CLI
/// layer.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub input_train: Option<PathBuf>,
    pub input_test: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub format: FormatConfig,
    pub policy: AugmentationPolicy,
    /// For `run_augment`: repair conflicts as part of augmenting, producing
    /// the `augmented_flipped` variant instead of `augmented`.
    pub flip: bool,
    /// Order of repair and inference for `augmented_flipped`: repair first
    /// (default), or infer on the unrepaired graph and flip afterwards.
    pub flip_before_infer: bool,
    pub report_format: ReportFormat,
    /// Also write the signed edge list of each split's graph.
    pub export_graph: bool,
}

impl Default for PipelineConfig {
    fn default() -> PipelineConfig {
        PipelineConfig {
            input_train: None,
            input_test: None,
            out_dir: None,
            format: FormatConfig::qqp(),
            policy: AugmentationPolicy::default(),
            flip: false,
            flip_before_infer: true,
            report_format: ReportFormat::Text,
            export_graph: false,
        }
    }
}

impl PipelineConfig {
    /// At least one input; every input exists; no input inside the output
    /// directory (which a run would overwrite). Containment is checked on
    /// absolutized paths, not through symlinks.
    pub fn validate(&self) -> Result<()> {
        let inputs: Vec<&PathBuf> =
            [&self.input_train, &self.input_test].into_iter().flatten().collect();
        if inputs.is_empty() {
            return Err(Error::NoInputs);
        }
        for path in inputs {
            if !path.is_file() {
                return Err(Error::InputMissing(path.clone()));
            }
            if let Some(out_dir) = &self.out_dir {
                let abs_in =
                    std::path::absolute(path).map_err(|e| Error::io_path(path.clone(), e))?;
                let abs_out = std::path::absolute(out_dir)
                    .map_err(|e| Error::io_path(out_dir.clone(), e))?;
                if abs_in.starts_with(&abs_out) {
                    return Err(Error::InputInsideOutDir {
                        input: path.clone(),
                        out_dir: out_dir.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    fn inputs(&self) -> Vec<(Split, &Path)> {
        let mut v = Vec::new();
        if let Some(p) = &self.input_train {
            v.push((Split::Train, p.as_path()));
        }
        if let Some(p) = &self.input_test {
            v.push((Split::Test, p.as_path()));
        }
        v
    }
}

/// File-writing side of a run; does nothing when no `out_dir` is set.
struct Sink<'a> {
    out_dir: Option<&'a Path>,
    format: &'a FormatConfig,
    report_format: ReportFormat,
}

impl<'a> Sink<'a> {
    fn new(cfg: &'a PipelineConfig) -> Sink<'a> {
        Sink {
            out_dir: cfg.out_dir.as_deref(),
            format: &cfg.format,
            report_format: cfg.report_format,
        }
    }

    fn write_text(&self, relative: &str, content: &str) -> Result<()> {
        let Some(out_dir) = self.out_dir else { return Ok(()) };
        let path = out_dir.join(relative);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io_path(parent, e))?;
        }
        fs::write(&path, content).map_err(|e| Error::io_path(path, e))
    }

    fn report(&self, base: &str, content: &str) -> Result<()> {
        self.write_text(
            &format!("reports/{base}.{}", self.report_format.extension()),
            content,
        )
    }

    fn dataset(&self, variant: &str, ds: &LabeledDataset) -> Result<()> {
        let Some(out_dir) = self.out_dir else { return Ok(()) };
        let dir = out_dir.join(variant);
        fs::create_dir_all(&dir).map_err(|e| Error::io_path(&dir, e))?;
        let path = dir.join(dataset_file_name(ds.split, self.format));
        crate::corpus::write_dataset_path(ds, path, self.format)?;
        Ok(())
    }

    fn stats(&self, variant: &str, ds: &LabeledDataset) -> Result<DatasetStats> {
        let stats = compute_stats(ds);
        self.report(
            &format!("stats_{variant}_{}", ds.split),
            &render_stats(variant, ds.split, &stats, self.report_format),
        )?;
        Ok(stats)
    }

    fn graph(&self, split: Split, graph: &ParaphraseGraph) -> Result<()> {
        let Some(out_dir) = self.out_dir else { return Ok(()) };
        let path = out_dir.join("reports").join(format!("graph_{split}.edges"));
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io_path(parent, e))?;
        }
        let mut buf = Vec::new();
        graph.write_edge_list(&mut buf).map_err(Error::Io)?;
        fs::write(&path, buf).map_err(|e| Error::io_path(path, e))
    }
}

/// Parses one split, writes its parse report, and refuses files with rows
/// but no usable ones.
fn load_split(
    sink: &Sink<'_>,
    path: &Path,
    split: Split,
    format: &FormatConfig,
) -> Result<(LabeledDataset, ParseReport)> {
    let (dataset, report) = parse_dataset_path(path, format, split)?;
    sink.report(
        &format!("parse_report_{split}"),
        &render_parse_report(&dataset, &report, sink.report_format),
    )?;
    if report.unusable() {
        return Err(Error::NoUsableRows {
            path: path.display().to_string(),
            rows_read: report.rows_read,
        });
    }
    if !report.skipped.is_empty() {
        log::warn!("{}: skipped {} malformed row(s)", path.display(), report.skipped.len());
    }
    if !report.raw_conflicts.is_empty() {
        log::warn!(
            "{}: excluded {} pair(s) labeled both ways",
            path.display(),
            report.raw_conflicts.len()
        );
    }
    for sp in report.self_pairs.iter().filter(|sp| sp.anomalous()) {
        log::warn!(
            "{}: row {} pairs a sentence with itself under a negative label",
            path.display(),
            sp.row
        );
    }
    if dataset.pairs.is_empty() {
        log::warn!("{}: no pairs parsed", path.display());
    }
    Ok((dataset, report))
}

fn summarize(variant: &str, per_split: Vec<(Split, DatasetStats)>) -> VariantSummary {
    let mut summary = VariantSummary {
        variant: variant.to_owned(),
        train: None,
        test: None,
    };
    for (split, stats) in per_split {
        match split {
            Split::Train => summary.train = Some(stats),
            Split::Test => summary.test = Some(stats),
        }
    }
    summary
}

#[derive(Debug)]
pub struct StatsOutcome {
    pub summary: Vec<VariantSummary>,
}

/// Parse the inputs and report label statistics; writes parse reports and
/// per-split stats files when an output directory is set.
pub fn run_stats(cfg: &PipelineConfig) -> Result<StatsOutcome> {
    cfg.validate()?;
    let sink = Sink::new(cfg);
    let mut per_split = Vec::new();
    for (split, path) in cfg.inputs() {
        let (dataset, _) = load_split(&sink, path, split, &cfg.format)?;
        let stats = sink.stats(VARIANT_ORIGINAL, &dataset)?;
        per_split.push((split, stats));
    }
    Ok(StatsOutcome {
        summary: vec![summarize(VARIANT_ORIGINAL, per_split)],
    })
}

#[derive(Debug)]
pub struct CheckSplit {
    pub split: Split,
    pub n_conflicts: usize,
    /// Conflict report rendered in the configured format, for stdout.
    pub rendered: String,
}

#[derive(Debug)]
pub struct CheckOutcome {
    pub splits: Vec<CheckSplit>,
}

impl CheckOutcome {
    pub fn total_conflicts(&self) -> usize {
        self.splits.iter().map(|s| s.n_conflicts).sum()
    }
}

/// Detect conflicts in each split. Writes conflict reports (and the graph
/// export on request); flips nothing.
pub fn run_check(cfg: &PipelineConfig) -> Result<CheckOutcome> {
    cfg.validate()?;
    let sink = Sink::new(cfg);
    let mut splits = Vec::new();
    for (split, path) in cfg.inputs() {
        let (dataset, _) = load_split(&sink, path, split, &cfg.format)?;
        let graph = ParaphraseGraph::build(&dataset)?;
        let index = graph.positive_components();
        if cfg.export_graph {
            sink.graph(split, &graph)?;
        }
        let report = detect_conflicts(&graph, &index, split);
        let rendered = render_conflicts(&dataset, &report, cfg.report_format);
        sink.report(&format!("conflicts_{split}"), &rendered)?;
        splits.push(CheckSplit {
            split,
            n_conflicts: report.len(),
            rendered,
        });
    }
    Ok(CheckOutcome { splits })
}

#[derive(Debug)]
pub struct FlipSplit {
    pub split: Split,
    pub n_conflicts: usize,
    pub n_flipped: usize,
    pub n_merged: usize,
}

#[derive(Debug)]
pub struct FlipOutcome {
    pub splits: Vec<FlipSplit>,
    pub summary: Vec<VariantSummary>,
}

/// Repair every conflict and write the `original_flipped` variant plus
/// conflict reports and flip logs.
pub fn run_flip(cfg: &PipelineConfig) -> Result<FlipOutcome> {
    cfg.validate()?;
    let sink = Sink::new(cfg);
    let mut splits = Vec::new();
    let mut per_split = Vec::new();
    for (split, path) in cfg.inputs() {
        let (dataset, _) = load_split(&sink, path, split, &cfg.format)?;
        let graph = ParaphraseGraph::build(&dataset)?;
        let index = graph.positive_components();
        let report = detect_conflicts(&graph, &index, split);
        sink.report(
            &format!("conflicts_{split}"),
            &render_conflicts(&dataset, &report, cfg.report_format),
        )?;
        let (flipped, log) = flip_conflicts(&dataset, &report)?;
        sink.report(
            &format!("flip_log_{split}"),
            &render_flip_log(&flipped, &log, cfg.report_format),
        )?;
        sink.dataset(VARIANT_ORIGINAL_FLIPPED, &flipped)?;
        let stats = sink.stats(VARIANT_ORIGINAL_FLIPPED, &flipped)?;
        per_split.push((split, stats));
        splits.push(FlipSplit {
            split,
            n_conflicts: report.len(),
            n_flipped: log.flipped.len(),
            n_merged: log.merged.len(),
        });
    }
    Ok(FlipOutcome {
        splits,
        summary: vec![summarize(VARIANT_ORIGINAL_FLIPPED, per_split)],
    })
}

#[derive(Debug)]
pub struct AugmentSplit {
    pub split: Split,
    pub report: AugmentationReport,
    pub n_flipped: usize,
}

#[derive(Debug)]
pub struct AugmentOutcome {
    /// `augmented`, or `augmented_flipped` when `flip` was set.
    pub variant: &'static str,
    pub splits: Vec<AugmentSplit>,
    pub summary: Vec<VariantSummary>,
}

/// Augment each split with inferred pairs, optionally repairing conflicts
/// as part of the run (before or after inference per `flip_before_infer`).
pub fn run_augment(cfg: &PipelineConfig) -> Result<AugmentOutcome> {
    cfg.validate()?;
    let sink = Sink::new(cfg);
    let variant = if cfg.flip { VARIANT_AUGMENTED_FLIPPED } else { VARIANT_AUGMENTED };
    let mut splits = Vec::new();
    let mut per_split = Vec::new();
    for (split, path) in cfg.inputs() {
        let (dataset, _) = load_split(&sink, path, split, &cfg.format)?;
        let (augmented, aug_report, n_flipped) = if cfg.flip {
            let graph = ParaphraseGraph::build(&dataset)?;
            let index = graph.positive_components();
            let conflicts = detect_conflicts(&graph, &index, split);
            sink.report(
                &format!("conflicts_{split}"),
                &render_conflicts(&dataset, &conflicts, cfg.report_format),
            )?;
            let (augmented, log, aug_report) = if cfg.flip_before_infer {
                let (repaired, log) = flip_conflicts(&dataset, &conflicts)?;
                let (augmented, aug_report) = augment_dataset(&repaired, &cfg.policy)?;
                (augmented, log, aug_report)
            } else {
                let (augmented, aug_report) = augment_dataset(&dataset, &cfg.policy)?;
                let (repaired, log) = flip_conflicts(&augmented, &conflicts)?;
                (repaired, log, aug_report)
            };
            sink.report(
                &format!("flip_log_{split}"),
                &render_flip_log(&augmented, &log, cfg.report_format),
            )?;
            (augmented, aug_report, log.flipped.len())
        } else {
            let (augmented, aug_report) = augment_dataset(&dataset, &cfg.policy)?;
            (augmented, aug_report, 0)
        };
        sink.report(
            &format!("augment_report_{variant}_{split}"),
            &render_augmentation_report(split, &aug_report, cfg.report_format),
        )?;
        sink.dataset(variant, &augmented)?;
        let stats = sink.stats(variant, &augmented)?;
        per_split.push((split, stats));
        splits.push(AugmentSplit {
            split,
            report: aug_report,
            n_flipped,
        });
    }
    Ok(AugmentOutcome {
        variant,
        splits,
        summary: vec![summarize(variant, per_split)],
    })
}

#[derive(Debug)]
pub struct PipelineOutcome {
    pub summary: Vec<VariantSummary>,
    pub total_conflicts: usize,
}

/// The whole flow: every variant, every report, one summary.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineOutcome> {
    cfg.validate()?;
    let sink = Sink::new(cfg);
    let mut total_conflicts = 0;
    let mut original = Vec::new();
    let mut original_flipped = Vec::new();
    let mut augmented_stats = Vec::new();
    let mut augmented_flipped_stats = Vec::new();

    for (split, path) in cfg.inputs() {
        let (dataset, _) = load_split(&sink, path, split, &cfg.format)?;
        let graph = ParaphraseGraph::build(&dataset)?;
        let index = graph.positive_components();
        if cfg.export_graph {
            sink.graph(split, &graph)?;
        }
        let conflicts = detect_conflicts(&graph, &index, split);
        total_conflicts += conflicts.len();
        sink.report(
            &format!("conflicts_{split}"),
            &render_conflicts(&dataset, &conflicts, cfg.report_format),
        )?;

        sink.dataset(VARIANT_ORIGINAL, &dataset)?;
        original.push((split, sink.stats(VARIANT_ORIGINAL, &dataset)?));

        let (repaired, log) = flip_conflicts(&dataset, &conflicts)?;
        sink.report(
            &format!("flip_log_{split}"),
            &render_flip_log(&repaired, &log, cfg.report_format),
        )?;
        sink.dataset(VARIANT_ORIGINAL_FLIPPED, &repaired)?;
        original_flipped.push((split, sink.stats(VARIANT_ORIGINAL_FLIPPED, &repaired)?));

        let (augmented, aug_report) = augment_dataset(&dataset, &cfg.policy)?;
        sink.report(
            &format!("augment_report_{}_{split}", VARIANT_AUGMENTED),
            &render_augmentation_report(split, &aug_report, cfg.report_format),
        )?;
        sink.dataset(VARIANT_AUGMENTED, &augmented)?;
        augmented_stats.push((split, sink.stats(VARIANT_AUGMENTED, &augmented)?));

        let (augmented_flipped, af_report) = if cfg.flip_before_infer {
            augment_dataset(&repaired, &cfg.policy)?
        } else {
            let (af, _) = flip_conflicts(&augmented, &conflicts)?;
            (af, aug_report)
        };
        sink.report(
            &format!("augment_report_{}_{split}", VARIANT_AUGMENTED_FLIPPED),
            &render_augmentation_report(split, &af_report, cfg.report_format),
        )?;
        sink.dataset(VARIANT_AUGMENTED_FLIPPED, &augmented_flipped)?;
        augmented_flipped_stats
            .push((split, sink.stats(VARIANT_AUGMENTED_FLIPPED, &augmented_flipped)?));
    }

    let summary = vec![
        summarize(VARIANT_ORIGINAL, original),
        summarize(VARIANT_ORIGINAL_FLIPPED, original_flipped),
        summarize(VARIANT_AUGMENTED, augmented_stats),
        summarize(VARIANT_AUGMENTED_FLIPPED, augmented_flipped_stats),
    ];
    sink.report("summary", &render_summary(&summary, cfg.report_format))?;
    Ok(PipelineOutcome {
        summary,
        total_conflicts,
    })
}
