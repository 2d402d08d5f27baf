use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use pairgraph::inference::{AugmentationPolicy, ConflictedPairHandling};
use pairgraph::pipeline::{
    run_augment, run_check, run_flip, run_pipeline, run_stats, PipelineConfig,
};
use pairgraph::report::{render_summary, ReportFormat};
use pairgraph::{Error, FormatConfig};

/// Exit codes: 0 success, 1 internal error, 2 usage error, 3 conflicts
/// found by `check`, 4 unparseable input, 5 filesystem failure.
const EXIT_CONFLICTS: u8 = 3;
const EXIT_PARSE: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Parser)]
#[command(
    name = "pairgraph",
    version,
    about = "Audit, repair, and augment sentence-pair datasets via their signed paraphrase graph"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse inputs and print label statistics
    Stats(CommonArgs),
    /// Find negative pairs contradicted by a positive path (exit 3 if any)
    Check(CheckArgs),
    /// Repair conflicts by flipping their labels; write original_flipped
    Flip(CommonArgs),
    /// Add inferred pairs; write augmented (or augmented_flipped with --flip)
    Augment(AugmentArgs),
    /// Run everything and write all four dataset variants plus reports
    Pipeline(AugmentArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Training split input file
    #[arg(long, value_name = "PATH")]
    input_train: Option<PathBuf>,

    /// Testing split input file
    #[arg(long, value_name = "PATH")]
    input_test: Option<PathBuf>,

    /// Output directory: datasets under <DIR>/<variant>/, reports under
    /// <DIR>/reports/
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    /// Input column layout
    #[arg(long, value_enum, default_value_t = FormatArg::Qqp)]
    format: FormatArg,

    /// Field delimiter: "tab", "comma", or one character
    #[arg(long, value_name = "CHAR")]
    delimiter: Option<String>,

    /// Inputs carry no header row
    #[arg(long)]
    no_header: bool,

    /// Honor quotes on read and quote as needed on write
    /// (default: off for qqp, on for generic)
    #[arg(long, value_name = "BOOL")]
    quoting: Option<bool>,

    /// Report format, for files and stdout
    #[arg(long, value_enum, default_value_t = ReportFormatArg::Text)]
    report_format: ReportFormatArg,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Also write each split's signed edge list
    #[arg(long)]
    export_graph: bool,
}

#[derive(Args)]
struct AugmentArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Repair conflicts as part of the run (augment only; pipeline always
    /// produces both repaired and unrepaired variants)
    #[arg(long, overrides_with = "no_flip")]
    flip: bool,

    /// Do not repair conflicts
    #[arg(long = "no-flip", overrides_with = "flip")]
    no_flip: bool,

    /// Repair before inferring (true) or infer on the unrepaired graph and
    /// flip afterwards (false)
    #[arg(long, value_name = "BOOL", default_value_t = true)]
    flip_before_infer: bool,

    /// What to do with pairs claimed positive by closure and negative by a
    /// conflict inside their own cluster
    #[arg(long, value_enum, default_value_t = ConflictPolicyArg::Drop)]
    conflict_policy: ConflictPolicyArg,

    /// Cap inferred positives per cluster
    #[arg(long, value_name = "N")]
    max_cluster_pairs: Option<u64>,

    /// Skip the within-cluster positive rule
    #[arg(long)]
    no_infer_positives: bool,

    /// Skip the across-cluster negative rule
    #[arg(long)]
    no_infer_negatives: bool,

    /// Also write each split's signed edge list
    #[arg(long)]
    export_graph: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Qqp,
    Generic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormatArg {
    Text,
    Structured,
}

impl From<ReportFormatArg> for ReportFormat {
    fn from(arg: ReportFormatArg) -> ReportFormat {
        match arg {
            ReportFormatArg::Text => ReportFormat::Text,
            ReportFormatArg::Structured => ReportFormat::Structured,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConflictPolicyArg {
    Drop,
    PreferPositive,
    PreferNegative,
}

impl From<ConflictPolicyArg> for ConflictedPairHandling {
    fn from(arg: ConflictPolicyArg) -> ConflictedPairHandling {
        match arg {
            ConflictPolicyArg::Drop => ConflictedPairHandling::Drop,
            ConflictPolicyArg::PreferPositive => ConflictedPairHandling::PreferPositive,
            ConflictPolicyArg::PreferNegative => ConflictedPairHandling::PreferNegative,
        }
    }
}

fn parse_delimiter(raw: &str) -> anyhow::Result<u8> {
    match raw {
        "tab" | "\\t" | "\t" => Ok(b'\t'),
        "comma" | "," => Ok(b','),
        other => {
            let bytes = other.as_bytes();
            if bytes.len() == 1 {
                Ok(bytes[0])
            } else {
                Err(Error::InvalidConfig(format!(
                    "--delimiter takes \"tab\", \"comma\", or a single byte, got {raw:?}"
                ))
                .into())
            }
        }
    }
}

fn base_config(common: &CommonArgs) -> anyhow::Result<PipelineConfig> {
    let mut format = match common.format {
        FormatArg::Qqp => FormatConfig::qqp(),
        FormatArg::Generic => FormatConfig::generic(),
    };
    if let Some(raw) = &common.delimiter {
        format = format.with_delimiter(parse_delimiter(raw)?);
    }
    if common.no_header {
        format = format.with_header(false);
    }
    if let Some(quoting) = common.quoting {
        format = format.with_quoting(quoting);
    }
    Ok(PipelineConfig {
        input_train: common.input_train.clone(),
        input_test: common.input_test.clone(),
        out_dir: common.out_dir.clone(),
        format,
        report_format: ReportFormat::from(common.report_format),
        ..PipelineConfig::default()
    })
}

fn augment_config(args: &AugmentArgs) -> anyhow::Result<PipelineConfig> {
    let mut cfg = base_config(&args.common)?;
    cfg.flip = args.flip && !args.no_flip;
    cfg.flip_before_infer = args.flip_before_infer;
    cfg.export_graph = args.export_graph;
    cfg.policy = AugmentationPolicy {
        infer_positives: !args.no_infer_positives,
        infer_negatives: !args.no_infer_negatives,
        conflicted_pair_handling: ConflictedPairHandling::from(args.conflict_policy),
        max_cluster_pairs: args.max_cluster_pairs,
    };
    Ok(cfg)
}

fn require_out_dir(cfg: &PipelineConfig, command: &str) -> anyhow::Result<()> {
    if cfg.out_dir.is_none() {
        return Err(Error::InvalidConfig(format!("{command} requires --out-dir")).into());
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Stats(common) => {
            let cfg = base_config(&common)?;
            let outcome = run_stats(&cfg).context("stats failed")?;
            print!("{}", render_summary(&outcome.summary, cfg.report_format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(args) => {
            let mut cfg = base_config(&args.common)?;
            cfg.export_graph = args.export_graph;
            let outcome = run_check(&cfg).context("check failed")?;
            for split in &outcome.splits {
                print!("{}", split.rendered);
            }
            let total = outcome.total_conflicts();
            println!("total conflicts: {total}");
            if total > 0 {
                Ok(ExitCode::from(EXIT_CONFLICTS))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Flip(common) => {
            let cfg = base_config(&common)?;
            require_out_dir(&cfg, "flip")?;
            let outcome = run_flip(&cfg).context("flip failed")?;
            for s in &outcome.splits {
                println!(
                    "{}: {} conflict(s), {} flipped, {} merged",
                    s.split, s.n_conflicts, s.n_flipped, s.n_merged
                );
            }
            print!("{}", render_summary(&outcome.summary, cfg.report_format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Augment(args) => {
            let cfg = augment_config(&args)?;
            require_out_dir(&cfg, "augment")?;
            let outcome = run_augment(&cfg).context("augment failed")?;
            for s in &outcome.splits {
                println!(
                    "{}: inferred {} positive, {} negative, {} contested pair(s), {} flipped",
                    s.split,
                    s.report.n_inferred_positive,
                    s.report.n_inferred_negative,
                    s.report.conflicted_pairs,
                    s.n_flipped
                );
            }
            print!("{}", render_summary(&outcome.summary, cfg.report_format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Pipeline(args) => {
            let cfg = augment_config(&args)?;
            require_out_dir(&cfg, "pipeline")?;
            let outcome = run_pipeline(&cfg).context("pipeline failed")?;
            println!("conflicts repaired: {}", outcome.total_conflicts);
            print!("{}", render_summary(&outcome.summary, cfg.report_format));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> ExitCode {
    if let Some(e) = err.downcast_ref::<Error>() {
        if e.is_parse_failure() {
            return ExitCode::from(EXIT_PARSE);
        }
        if e.is_io_failure() {
            return ExitCode::from(EXIT_IO);
        }
        if matches!(e, Error::InvalidConfig(_) | Error::NoInputs) {
            return ExitCode::from(2);
        }
    }
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code_for(&err)
        }
    }
}
