use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "uaext", version, about = "Extensions of uniform algebras on finite point sets")]
pub struct Cli {
    /// Write the artifact here instead of standard output.
    #[arg(long, global = true, help_heading = "Global options")]
    pub out: Option<PathBuf>,
    /// Output format; per-point tables default to csv, everything else to json.
    #[arg(long, global = true, help_heading = "Global options", value_enum)]
    pub format: Option<Format>,
    /// Feasibility tolerance of the linear program solver.
    #[arg(long, global = true, help_heading = "Global options")]
    pub tol_feas: Option<f64>,
    /// Multiplier applied to every certificate tolerance.
    #[arg(long, global = true, help_heading = "Global options", default_value_t = 1.0)]
    pub tol_cert: f64,
    /// Seed for probe generation.
    #[arg(long, global = true, help_heading = "Global options", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads.
    #[arg(long, global = true, help_heading = "Global options", env = "UAEXT_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a gallery construction.
    Gallery {
        #[command(subcommand)]
        cmd: GalleryCmd,
    },
    /// Cole extensions by a monic polynomial.
    Cole {
        #[command(subcommand)]
        cmd: ColeCmd,
    },
    /// Certificate suites for a saved bundle.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// Group actions and bicontractive projections.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Choquet boundaries and peak sets.
    Boundary {
        #[command(subcommand)]
        cmd: BoundaryCmd,
    },
    /// Every suite that applies to a bundle, in one certificate.
    Report(BundleArg),
}

#[derive(Debug, Subcommand)]
pub enum GalleryCmd {
    Build {
        #[command(subcommand)]
        which: Build,
    },
}

#[derive(Debug, Subcommand)]
pub enum Build {
    /// Truncated disk algebra on a disk grid.
    Disk(DiskArgs),
    /// Annulus cover with fiber averaging and a rotation action.
    Basener(BasenerArgs),
    /// Cover carrying the null functions of a distinguished point.
    Dfp(DfpArgs),
    /// Disk diameter times an M-point circle, evaluated at one slot.
    TensorDisk(TensorDiskArgs),
    /// Collapse of a closed set to a single point.
    Contraction(ContractionArgs),
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct GridArgs {
    /// Points on the boundary circle.
    #[arg(long, default_value_t = 32)]
    pub boundary: usize,
    /// Side of the interior square lattice.
    #[arg(long, default_value_t = 7)]
    pub lattice: usize,
    /// Lattice spacing.
    #[arg(long, default_value_t = 0.2)]
    pub spacing: f64,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct DiskArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 6)]
    pub cap: u32,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct BasenerArgs {
    #[arg(long, default_value_t = 0.4)]
    pub r0: f64,
    #[arg(long, default_value_t = 0.7)]
    pub r1: f64,
    /// Radii sampled in [r0, r1].
    #[arg(long, default_value_t = 5)]
    pub nr: usize,
    /// Angles sampled per radius.
    #[arg(long, default_value_t = 24)]
    pub ntheta: usize,
    /// Fiber size.
    #[arg(long = "M", default_value_t = 64)]
    pub m: usize,
    #[arg(long, default_value_t = 4)]
    pub cap: u32,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct DfpArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 3)]
    pub base_cap: u32,
    /// Number of null functions.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long = "M", default_value_t = 32)]
    pub m: usize,
    #[arg(long, default_value_t = 3)]
    pub cap: u32,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct TensorDiskArgs {
    /// Points on the real diameter.
    #[arg(long, default_value_t = 11)]
    pub diameter: usize,
    #[arg(long = "M", default_value_t = 16)]
    pub m: usize,
    #[arg(long, default_value_t = 4)]
    pub cap: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum A0Kind {
    Constants,
    Full,
    Polynomial,
}

#[derive(Debug, Clone, Copy, Args, Serialize)]
pub struct ContractionArgs {
    /// Points on the unit circle; the origin is added.
    #[arg(long, default_value_t = 12)]
    pub circle: usize,
    /// The first k circle points form the collapsed set.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// System on the collapsed set.
    #[arg(long, value_enum, default_value_t = A0Kind::Constants)]
    pub a0: A0Kind,
    /// Degree cap when the collapsed system is polynomial.
    #[arg(long, default_value_t = 2)]
    pub a0_cap: u32,
}

#[derive(Debug, Subcommand)]
pub enum ColeCmd {
    /// Build the Cole bundle described by a spec file.
    Extend {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Vieta, root, and extension checks for a Cole bundle.
    Report(BundleArg),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BundleArg {
    #[arg(long)]
    pub bundle: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Extension-lemma checklist for the bundle's operator.
    Gce(BundleArg),
    /// Averaging-operator equivalences for the bundle's operator.
    Averaging(BundleArg),
    /// Group-implemented extension checks; needs a saved action.
    Implemented(BundleArg),
}

#[derive(Debug, Subcommand)]
pub enum GroupCmd {
    /// Decide whether a projection on C(Y) is bicontractive.
    AnalyzeProjection(ProjectionArgs),
    /// Rebuild a degree-two Cole extension from a bicontractive projection.
    Reconstruct(ReconstructArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProjectionArgs {
    #[arg(long)]
    pub bundle: PathBuf,
    /// Operator JSON on the cover; defaults to Π*∘T of the bundle.
    #[arg(long)]
    pub projection: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub bundle: PathBuf,
    /// Table JSON on the cover: `{"values": [...]}` or `{"expression": "z1"}`.
    #[arg(long)]
    pub h0: PathBuf,
    /// Declare that B is generated by Π*(A) and h0.
    #[arg(long)]
    pub generated_by_h0: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SystemSource {
    /// System document.
    #[arg(long, conflicts_with = "bundle", required_unless_present = "bundle")]
    pub system: Option<PathBuf>,
    /// Bundle document; `--side` picks the system.
    #[arg(long)]
    pub bundle: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Side::B)]
    pub side: Side,
}

#[derive(Debug, Subcommand)]
pub enum BoundaryCmd {
    /// Escaping mass of every point.
    Choquet(ChoquetArgs),
    /// Search for a peaking function on a set of points.
    Peakset(PeakArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChoquetArgs {
    #[command(flatten)]
    pub source: SystemSource,
    /// Include representing measures in JSON output.
    #[arg(long)]
    pub witnesses: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PeakArgs {
    #[command(flatten)]
    pub source: SystemSource,
    /// Comma-separated point labels.
    #[arg(long, value_delimiter = ',', required = true)]
    pub set: Vec<String>,
    #[arg(long, default_value_t = uaext::boundary::DEFAULT_PEAK_MARGIN)]
    pub margin: f64,
    #[arg(long, default_value_t = uaext::boundary::DEFAULT_POLYGON_SIDES)]
    pub sides: usize,
}
