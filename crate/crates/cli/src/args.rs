use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "siegel",
    version,
    about = "Siegel cusp forms from discrete series matrix coefficients"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Master seed for every random stream.
    #[arg(long, global = true, env = "SIEGEL_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance for adaptive quadrature.
    #[arg(long, global = true, env = "SIEGEL_TOL", default_value_t = 1e-10)]
    pub tol: f64,
    /// Bound on the estimated lattice search size.
    #[arg(long, global = true, env = "SIEGEL_BUDGET", default_value_t = siegel_core::lattice::DEFAULT_BUDGET)]
    pub budget: f64,
    /// Directory for cached enumeration balls.
    #[arg(long, global = true, env = "SIEGEL_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "SIEGEL_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, env = "SIEGEL_FORMAT", value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true, env = "SIEGEL_OUTPUT")]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smallest level N0 certifying non-vanishing.
    N0(N0Args),
    /// N0 over ranges of l and m.
    #[command(name = "n0-table")]
    N0Table(TableArgs),
    /// The constant C_{m,n}, optionally with a Monte Carlo cross-check.
    Cmn(CmnArgs),
    /// Matrix coefficient F_{mu,m} at a symplectic matrix read from a JSON file.
    Coeff(CoeffArgs),
    /// Truncated Poincare series.
    Poincare(PoincareArgs),
    /// Truncated reproducing-kernel series.
    Kernel(KernelArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct N0Args {
    #[arg(long)]
    pub n: usize,
    /// Power of det; ignored when --mu is given.
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    #[arg(long)]
    pub m: i64,
    /// General polynomial (shorthand or JSON file); switches to Monte Carlo.
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long, default_value_t = 200_000)]
    pub mc_samples: usize,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub n: usize,
    /// Range of l as `lo..hi` (inclusive); defaults to 0..12.
    #[arg(long)]
    pub l_range: Option<String>,
    /// Range of m as `lo..hi` (inclusive); defaults to the reference columns.
    #[arg(long)]
    pub m_range: Option<String>,
    #[arg(long, default_value_t = 200_000)]
    pub mc_samples: usize,
}

#[derive(Debug, Args)]
pub struct CmnArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: i64,
    /// Also estimate the defining integral by Monte Carlo with this many samples.
    #[arg(long)]
    pub mc_samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    /// JSON matrix file holding g.
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub m: i64,
    #[arg(long, default_value = "1")]
    pub mu: String,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long)]
    pub n: usize,
    /// Level N of the congruence subgroup.
    #[arg(long = "level", short = 'N', visible_alias = "N", default_value_t = 1)]
    pub level: u64,
    #[arg(long)]
    pub m: i64,
    /// Ball radius (default 40 for n = 1, 10 for n = 2, 4 above).
    #[arg(long)]
    pub radius: Option<f64>,
    /// Evaluation point: a complex scalar (times the identity for n > 1).
    #[arg(long, conflicts_with = "z_file")]
    pub z: Option<String>,
    /// Evaluation point as a JSON complex matrix.
    #[arg(long)]
    pub z_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PoincareArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    #[arg(long, default_value = "1")]
    pub mu: String,
    /// Sum F_{mu,m}(gamma g) on the group at g from this JSON file instead.
    #[arg(long)]
    pub group_element: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Kernel point xi (complex scalar, times the identity for n > 1).
    #[arg(long)]
    pub xi: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Degree for `table1` (both when omitted).
    #[arg(long)]
    pub n: Option<usize>,
    /// Series radius for `cor62` and `thm93`.
    #[arg(long, default_value_t = 40.0)]
    pub radius: f64,
    /// Quadrature tolerance for `cor62` and `thm93`.
    #[arg(long, default_value_t = 1e-8)]
    pub quad_tol: f64,
    #[arg(long, default_value_t = 8.0)]
    pub y_max: f64,
    /// Monte Carlo samples for `cmn`.
    #[arg(long, default_value_t = 1_000_000)]
    pub mc_samples: usize,
    /// Random matrices per (n, mu) for `coeff`.
    #[arg(long, default_value_t = 500)]
    pub coeff_samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Table1,
    Coeff,
    Cmn,
    Cor62,
    Thm93,
    All,
}
