//! `qcite` command line: argument definitions and exit-status mapping.
//! The verbs themselves live in [`commands`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::fitter::FitConfig;

pub mod commands;

pub use commands::{run, RunManifest};

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Everything ran, possibly with per-entity diagnostics.
    Success = 0,
    Usage = 1,
    Data = 2,
    /// Every entity failed to fit.
    FitFailure = 3,
}

#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl Failure {
    pub fn new(status: Status, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidConfig(_) => Status::Usage,
            _ => Status::Data,
        };
        Failure::new(status, e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qcite",
    version,
    about = "Fit q-exponential citation distributions and rank by effective temperature"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit every histogram CSV in a dataset directory.
    Fit(FitArgs),
    /// Rank fit results by effective temperature.
    Rank(RankArgs),
    /// Paper counts and uncited/once/twice-cited shares per entity.
    Summary(SummaryArgs),
    /// Write synthetic histograms from a JSON spec (object or array).
    Synth(SynthArgs),
    /// Emit SVG figures and plot-data CSVs.
    Plot(PlotArgs),
}

/// Fit configuration: defaults, then the JSON config file, then flags.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// JSON FitConfig file.
    #[arg(long, env = "QCITE_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub q_min: Option<f64>,
    #[arg(long)]
    pub q_max: Option<f64>,
    #[arg(long)]
    pub q_step: Option<f64>,
    #[arg(long)]
    pub anchor_c: Option<u64>,
    /// Decades of c above the anchor used to choose q.
    #[arg(long)]
    pub decades: Option<f64>,
    /// Smallest bin count kept in the fit view.
    #[arg(long)]
    pub min_count: Option<u64>,
    #[arg(long)]
    pub min_points: Option<usize>,
    /// Leave the c = 1 point out of R².
    #[arg(long)]
    pub no_c1_r2: bool,
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<FitConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
                serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?
            }
            None => FitConfig::default(),
        };
        if let Some(v) = self.q_min {
            cfg.q_grid.min = v;
        }
        if let Some(v) = self.q_max {
            cfg.q_grid.max = v;
        }
        if let Some(v) = self.q_step {
            cfg.q_grid.step = v;
        }
        if let Some(v) = self.anchor_c {
            cfg.anchor_c = v;
        }
        if let Some(v) = self.decades {
            cfg.q_window_decades = v;
        }
        if let Some(v) = self.min_count {
            cfg.min_count = v;
        }
        if let Some(v) = self.min_points {
            cfg.min_fit_points = v;
        }
        if self.no_c1_r2 {
            cfg.include_c1_in_r2 = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    pub dataset_dir: PathBuf,
    #[arg(short, long, default_value = "qcite-out")]
    pub out: PathBuf,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RankArgs {
    /// Results CSV or JSON written by `fit`, or any CSV with entity,q,r2,T.
    pub results: PathBuf,
    /// Dataset directory used for the quantity-vs-impact report.
    #[arg(long, conflicts_with = "totals")]
    pub summaries: Option<PathBuf>,
    /// Totals table (entity,total,n0,n1,n2) for the quantity-vs-impact report.
    #[arg(long)]
    pub totals: Option<PathBuf>,
    #[arg(short, long, default_value = "qcite-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SummaryArgs {
    #[arg(required_unless_present = "totals", conflicts_with = "totals")]
    pub dataset_dir: Option<PathBuf>,
    /// Totals table (entity,total,n0,n1,n2) instead of a dataset directory.
    #[arg(long)]
    pub totals: Option<PathBuf>,
    /// group,entity membership table for aggregate rows.
    #[arg(long)]
    pub groups: Option<PathBuf>,
    /// Name of the all-entity aggregate row.
    #[arg(long, default_value = "All")]
    pub all_label: String,
    #[arg(short, long, default_value = "qcite-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    pub spec: PathBuf,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    pub dataset_dir: PathBuf,
    pub results: PathBuf,
    /// loglog or qlog
    #[arg(long, default_value = "loglog")]
    pub style: String,
    #[arg(short, long, default_value = "qcite-out")]
    pub out: PathBuf,
    /// Largest c - ref_c shown by the qlog style.
    #[arg(long)]
    pub x_limit: Option<u64>,
    /// Reference bin for the qlog style (defaults to the fit anchor).
    #[arg(long)]
    pub ref_c: Option<u64>,
    /// Plot probabilities N(c)/total instead of raw counts.
    #[arg(long)]
    pub normalize: bool,
}

/// Parses `args`, runs the verb and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Status::Usage as i32 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => Status::Success as i32,
        Err(f) => {
            eprintln!("qcite: {}", f.message);
            f.status as i32
        }
    }
}
