//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pitchmbc_core::{Criterion, PenaltyScale};

#[derive(Debug, Parser)]
#[command(name = "pitchmbc", version, about = "Cluster and label a pitcher's pitches with a Gaussian mixture")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select k, fit, label and write a model archive plus a score table.
    Fit(FitArgs),
    /// Label every pitch of a file with an archived model.
    Classify(ClassifyArgs),
    /// Subsample stability of the clustering at a fixed k.
    Stability(StabilityArgs),
    /// Scatter table and SVG projections of a classified file.
    Plot(PlotArgs),
    /// Fit every pitcher of a multi-pitcher file.
    Batch(BatchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Delimited pitch file with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// TOML configuration; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Field delimiter.
    #[arg(long)]
    pub delimiter: Option<char>,
    /// Column remapping, `field=header` (repeatable).
    #[arg(long = "column", value_name = "FIELD=HEADER")]
    pub columns: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct EmArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    /// Relative log-likelihood change that counts as converged.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Covariance ridge, as a fraction of trace/3.
    #[arg(long)]
    pub ridge: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SelectArgs {
    #[arg(long)]
    pub kmin: Option<usize>,
    #[arg(long)]
    pub kmax: Option<usize>,
    /// `bic` or `bicadj`.
    #[arg(long, value_parser = parse_criterion)]
    pub criterion: Option<Criterion>,
    /// `auto` (ln n) or a non-negative number.
    #[arg(long = "penalty-scale")]
    pub penalty_scale: Option<PenaltyScale>,
}

#[derive(Debug, Clone, Args)]
pub struct LabelArgs {
    #[arg(long = "changeup-gap")]
    pub changeup_gap: Option<f64>,
    #[arg(long = "sidespin-band")]
    pub sidespin_band: Option<f64>,
    #[arg(long = "cutter-gap")]
    pub cutter_gap: Option<f64>,
    #[arg(long = "knuckle-ratio")]
    pub knuckle_ratio: Option<f64>,
    #[arg(long = "curveball-backspin-max", allow_hyphen_values = true)]
    pub curveball_backspin_max: Option<f64>,
    /// Use this cluster index as the four-seam anchor.
    #[arg(long = "swap-anchor")]
    pub swap_anchor: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Pitcher to fit when the file holds several.
    #[arg(long)]
    pub pitcher: Option<String>,
    #[command(flatten)]
    pub select: SelectArgs,
    #[command(flatten)]
    pub em: EmArgs,
    #[command(flatten)]
    pub labels: LabelArgs,
    /// Model archive path.
    #[arg(long, default_value = "model.json")]
    pub out: PathBuf,
    /// Score table path; defaults to the archive path with `.scores.csv`.
    #[arg(long)]
    pub scores: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub pitcher: Option<String>,
    #[arg(long, default_value = "labeled.csv")]
    pub out: PathBuf,
    /// Confusion summary path; defaults to the output path with
    /// `.confusion.csv`. Written only when reference labels are present.
    #[arg(long)]
    pub confusion: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub pitcher: Option<String>,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub reps: Option<usize>,
    /// Fraction of pitches in the large subset.
    #[arg(long)]
    pub split: Option<f64>,
    #[command(flatten)]
    pub em: EmArgs,
    #[arg(long, default_value = "stability.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub pitcher: Option<String>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "plots")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BatchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub select: SelectArgs,
    #[command(flatten)]
    pub em: EmArgs,
    #[command(flatten)]
    pub labels: LabelArgs,
    /// Also run the stability protocol at each pitcher's selected k.
    #[arg(long)]
    pub stability: bool,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub split: Option<f64>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "batch")]
    pub out: PathBuf,
}

fn parse_criterion(s: &str) -> Result<Criterion, String> {
    match s.to_ascii_lowercase().as_str() {
        "bic" => Ok(Criterion::Bic),
        "bicadj" | "bic_adj" => Ok(Criterion::BicAdj),
        _ => Err(format!("unknown criterion `{s}` (expected bic or bicadj)")),
    }
}
