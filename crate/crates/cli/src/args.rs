use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "slicereg", version, about = "Slice regular power series: algebra, geometric checks and bound verification")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// Truncation degree for built-in series [default: 64, or the degree of a file operand]
    #[arg(long, global = true)]
    pub degree: Option<usize>,

    /// Tolerance for checks and bounds [default: 1e-9]
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Sample grid: `default` or a grid JSON file
    #[arg(long, global = true, default_value = "default")]
    pub grid: String,

    /// Comma-separated sample radii in (0, 1)
    #[arg(long, global = true, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,

    /// Angles per sample circle
    #[arg(long, global = true)]
    pub angles: Option<usize>,

    /// Number of sampled slices (at least 4)
    #[arg(long, global = true)]
    pub units: Option<usize>,

    /// Seed for the sampled slices
    #[arg(long, global = true, env = "SLICEREG_SEED")]
    pub seed: Option<u64>,

    /// Quadrature or boundary resolution
    #[arg(long, global = true)]
    pub resolution: Option<usize>,

    /// Skip sample points whose truncation tail estimate exceeds this; `off` disables
    #[arg(long, global = true, value_parser = parse_truncation)]
    pub truncation_tol: Option<Truncation>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output file [default: stdout]
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    Off,
    Tol(f64),
}

fn parse_truncation(s: &str) -> Result<Truncation, String> {
    match s {
        "off" | "inf" | "none" => Ok(Truncation::Off),
        _ => match s.parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(Truncation::Tol(t)),
            Ok(f) if f.is_infinite() => Ok(Truncation::Off),
            _ => Err(format!("expected a positive number or `off`, got `{s}`")),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and transform series
    Series {
        #[command(subcommand)]
        op: SeriesOp,
    },
    /// Run a pointwise geometric condition on the sample grid
    Check(CheckArgs),
    /// Verify a bound or identity and write a report
    Verify(VerifyArgs),
    /// Aggregate report files of a directory into a table and a margins file
    Report {
        dir: PathBuf,
    },
}

/// A series operand: a built-in name, a series JSON file, inline JSON, or `-` for stdin.
pub type SeriesRef = String;

#[derive(Debug, Subcommand)]
pub enum SeriesOp {
    /// Emit a named series or a transform of one
    Make(MakeArgs),
    /// `f * g`
    StarMul {
        #[arg(long = "f")]
        f: SeriesRef,
        #[arg(long = "g")]
        g: SeriesRef,
    },
    /// Reciprocal with respect to the *-product
    StarInv {
        #[arg(long, short)]
        series: SeriesRef,
    },
    /// `g ⦁ w`
    Compose {
        #[arg(long = "g")]
        g: SeriesRef,
        #[arg(long = "w")]
        w: SeriesRef,
    },
    /// Compositional inverse of `g` on one side
    InvertCompose {
        #[arg(long = "g")]
        g: SeriesRef,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
    },
    /// Slice derivative
    Derive {
        #[arg(long, short)]
        series: SeriesRef,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// Value at a quaternion `w,x,y,z`
    Evaluate {
        #[arg(long, short)]
        series: SeriesRef,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Splitting `f = F + G J` on the slice of a unit
    Split {
        #[arg(long, short)]
        series: SeriesRef,
        #[arg(long)]
        unit: Option<String>,
        #[arg(long)]
        unit_j: Option<String>,
    },
    /// Intrinsic, slice-preserving or general
    Classify {
        #[arg(long, short)]
        series: SeriesRef,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MakeKind {
    Koebe,
    CaratheodoryExtremal,
    Identity,
    HalfIdentity,
    Geometric,
    Mobius,
    Dilation,
    Rotate,
    Alexander,
    Libera,
    QDerivative,
    Ratio,
    OddSqrt,
}

#[derive(Debug, Args)]
pub struct MakeArgs {
    pub name: MakeKind,
    /// Source series for transforms
    #[arg(long)]
    pub from: Option<SeriesRef>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long)]
    pub unit: Option<String>,
    /// Möbius parameter in (-1, 1)
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Dilation radius in (0, 1]
    #[arg(long)]
    pub r: Option<f64>,
    /// Unit quaternion `w,x,y,z` for the rotation
    #[arg(long, allow_hyphen_values = true)]
    pub rotor: Option<String>,
    /// Real value omitted by the image, for the ratio transform
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    SliceStarlike,
    SliceConvex,
    Spirallike,
    PositiveDerivRealPart,
    BoundedRotation,
    PClassRatio,
    Injectivity,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub condition: CheckKind,
    #[arg(long, short)]
    pub series: SeriesRef,
    /// Spiral angle in (-pi/2, pi/2)
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Slice for the injectivity check [default: i]
    #[arg(long)]
    pub unit: Option<String>,
    /// Minimal pair distance for the injectivity check [default: 1e-3]
    #[arg(long)]
    pub separation: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Growth,
    Distortion,
    Caratheodory,
    RotationRatio,
    IntegralMean,
    KoebeQuarter,
    Area,
    AreaSum,
    Bieberbach,
    StarlikeCoeff,
    ConvexCoeff,
    Rogosinski,
    Subordination,
    TTransform,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub kind: VerifyKind,
    #[arg(long, short)]
    pub series: Option<SeriesRef>,
    /// Laurent tail `{"coeffs": [...]}` as inline JSON or a file
    #[arg(long)]
    pub tail: Option<String>,
    /// Dominating series `g` for rogosinski and subordination
    #[arg(long)]
    pub against: Option<SeriesRef>,
    /// Schwarz-type series `w`; the checked series becomes `g ⦁ w`
    #[arg(long = "w")]
    pub w: Option<SeriesRef>,
    #[arg(long)]
    pub unit: Option<String>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
}
