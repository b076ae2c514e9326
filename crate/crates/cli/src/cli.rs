use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "nbtrace", version, about = "Trace-formula and walk-counting experiments on regular graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Global {
    /// Base seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for ensemble work (0 uses all cores).
    #[arg(long, global = true, default_value_t = 0)]
    #[serde(skip)]
    pub threads: usize,
    #[arg(long, global = true, default_value = ".")]
    #[serde(skip)]
    pub out_dir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Sample a random regular ensemble and average an observable.
    Ensemble(EnsembleArgs),
    /// Dump one operator matrix as (row, col, value) triplets.
    Matrix(MatrixArgs),
    /// Adjacency spectrum of a graph.
    Spectrum(GraphOut),
    /// Kesten-McKay density on a uniform grid.
    KmCurve(KmCurveArgs),
    /// Chebyshev-smoothed spectral density.
    Coarse(CoarseArgs),
    /// Smooth, oscillatory and correction parts of the density.
    TraceFormula(TraceFormulaArgs),
    /// Closed-walk counts N(t; g) by number of back-scatterings.
    WalkCounts(WalkCountsArgs),
    /// Check the determinant identity on every graph in a directory.
    VerifyBartholdi(BartholdiArgs),
    /// Regularised density from the secular function of U(mu, phi).
    Unitary(UnitaryArgs),
    /// Solve for the phase whose smooth density is Kesten-McKay.
    PhiKm(PhiKmArgs),
    /// Regenerate the data behind a figure, plus a plotting script.
    Repro(ReproArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Observable {
    #[value(name = "trY")]
    #[serde(rename = "trY")]
    TrY,
    #[value(name = "spectrum")]
    #[serde(rename = "spectrum")]
    Spectrum,
    #[value(name = "mu0-magnetic")]
    #[serde(rename = "mu0-magnetic")]
    Mu0Magnetic,
}

#[derive(Debug, Args, Serialize)]
pub struct EnsembleArgs {
    #[arg(long = "V")]
    pub vertices: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub samples: usize,
    #[arg(long, value_enum)]
    pub observable: Observable,
    /// Walk lengths for trY.
    #[arg(long, value_delimiter = ',', default_value = "3,4,5,6")]
    pub t: Vec<usize>,
    /// Histogram bin width for spectrum.
    #[arg(long, default_value_t = 0.1)]
    pub bin: f64,
    #[arg(long)]
    pub allow_bipartite: bool,
    #[arg(long)]
    pub allow_disconnected: bool,
    /// Write each sampled graph into this directory under the output directory.
    #[arg(long)]
    pub save_graphs: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum MatrixKind {
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "J")]
    J,
    #[value(name = "Y")]
    Y,
    #[value(name = "U")]
    U,
}

#[derive(Debug, Args, Serialize)]
pub struct MatrixArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub kind: MatrixKind,
    /// Back-scatter weight for Y.
    #[arg(long, default_value_t = 1.0)]
    pub w: f64,
    /// Spectral parameter for U.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Phase for U.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Overrides --format for this dump.
    #[arg(long, value_enum)]
    pub dump: Option<Format>,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct GraphOut {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct KmCurveArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct CoarseArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Kernel order; defaults to the asymptotic guidance with --a.
    #[arg(long)]
    pub tmax: Option<usize>,
    /// Scale constant in the kernel-order guidance.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct TraceFormulaArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub w: f64,
    #[arg(long, default_value_t = 60)]
    pub tmax: usize,
    #[arg(long, default_value_t = 2000)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkMethod {
    Enum,
    Poly,
    Closed,
}

#[derive(Debug, Args, Serialize)]
pub struct WalkCountsArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub tmax: usize,
    #[arg(long, value_enum, default_value_t = WalkMethod::Poly)]
    pub method: WalkMethod,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct BartholdiArgs {
    /// Directory of graph files.
    #[arg(long)]
    pub graphs: PathBuf,
    /// `all` or one of regular, general, magnetic, multigraph, weighted.
    #[arg(long, default_value = "all")]
    pub variant: String,
    /// Random (s, w) points per graph.
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub report: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct UnitaryArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Constant phase.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "km_branch")]
    pub phi: Option<f64>,
    /// Use the Kesten-McKay phase of branch k instead of a constant.
    #[arg(long, allow_hyphen_values = true)]
    pub km_branch: Option<i64>,
    /// `start:stop:step`.
    #[arg(long, allow_hyphen_values = true, default_value = "-2.9:2.9:0.01")]
    pub mu_grid: String,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    #[arg(long, default_value_t = 40)]
    pub tmax: usize,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct PhiKmArgs {
    #[arg(long)]
    pub d: usize,
    /// Integer branch k.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "ratio", required_unless_present = "ratio")]
    pub branch: Option<i64>,
    /// Branch given as 2k/V.
    #[arg(long, allow_hyphen_values = true)]
    pub ratio: Option<f64>,
    #[arg(long = "V")]
    pub vertices: usize,
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct ReproArgs {
    #[command(subcommand)]
    pub figure: Figure,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    /// Smooth density for w in {1, 1.2, 1.5, 1.7}.
    Fig1 {
        #[arg(long, default_value_t = 5)]
        d: usize,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
    /// Ensemble histogram against the Kesten-McKay curve.
    Km {
        #[arg(long = "V", default_value_t = 500)]
        vertices: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0.1)]
        bin: f64,
    },
    /// Kesten-McKay phase for d = 4 and 2k/V = -2.
    Fig3 {
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long = "V", default_value_t = 100)]
        vertices: usize,
        #[arg(long, allow_hyphen_values = true, default_value_t = -2.0)]
        ratio: f64,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
}
