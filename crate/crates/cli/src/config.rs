use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use slicereg::geocheck::{GridSpec, SampleGrid};
use slicereg::series::DEFAULT_DEGREE;

use crate::args::{Format, RunArgs, Truncation};
use crate::error::CliError;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Everything that determines a run's output. Embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub degree: usize,
    pub tol: f64,
    pub grid: GridSpec,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub resolution: Option<usize>,
    /// `None` when the truncation guard is off.
    pub truncation_tol: Option<f64>,
    pub format: Format,
    /// File name of the output; directories are left out so relocated runs compare equal.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub out: Option<String>,
}

impl RunConfig {
    /// `default_truncation` is the command's own default for the guard.
    pub fn from_args(args: &RunArgs, default_truncation: f64) -> Result<Self, CliError> {
        let degree = args.degree.unwrap_or(DEFAULT_DEGREE);
        if degree < 1 {
            return Err(CliError::input("degree must be at least 1"));
        }
        let tol = args.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::input(format!("tolerance must be positive, got {tol}")));
        }
        if args.resolution == Some(0) {
            return Err(CliError::input("resolution must be positive"));
        }
        let mut grid = if args.grid == "default" {
            GridSpec::default()
        } else {
            let text = fs::read_to_string(&args.grid)
                .map_err(|e| CliError::input(format!("cannot read grid {}: {e}", args.grid)))?;
            serde_json::from_str(&text).map_err(|e| CliError::input(format!("malformed grid {}: {e}", args.grid)))?
        };
        if let Some(r) = &args.radii {
            grid.radii = r.clone();
        }
        if let Some(a) = args.angles {
            grid.angles_per_circle = a;
        }
        if let Some(u) = args.units {
            grid.unit_count = u;
        }
        if let Some(s) = args.seed {
            grid.seed = s;
        }
        let truncation_tol = match args.truncation_tol {
            Some(Truncation::Off) => None,
            Some(Truncation::Tol(t)) => Some(t),
            None => Some(default_truncation),
        };
        Ok(Self {
            degree,
            tol,
            grid,
            resolution: args.resolution,
            truncation_tol,
            format: args.format,
            out: args.out.as_ref().and_then(|p| p.file_name()).map(|n| n.to_string_lossy().into_owned()),
        })
    }

    pub fn sample_grid(&self) -> Result<SampleGrid, CliError> {
        Ok(SampleGrid::try_from(self.grid.clone())?)
    }

    pub fn truncation(&self) -> f64 {
        self.truncation_tol.unwrap_or(f64::INFINITY)
    }
}

/// On-disk report: one check or verification with its provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile<T> {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub kind: String,
    pub series: String,
    pub config: RunConfig,
    pub report: T,
}

impl<T> ReportFile<T> {
    pub fn new(command: &str, kind: &str, series: String, config: RunConfig, report: T) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            kind: kind.into(),
            series,
            config,
            report,
        }
    }
}

/// Flat row shared by `--format csv` and the aggregated table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub command: String,
    pub kind: String,
    pub series: String,
    pub passed: bool,
    /// Worst margin of a check, tightness of a bound.
    pub margin: f64,
    pub witness_w: f64,
    pub witness_x: f64,
    pub witness_y: f64,
    pub witness_z: f64,
    pub points_checked: usize,
}

pub fn csv_string(rows: &[SummaryRow]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(["command", "kind", "series", "passed", "margin", "witness_w", "witness_x", "witness_y", "witness_z", "points_checked"])
        .map_err(|e| CliError::input(e.to_string()))?;
    for row in rows {
        w.serialize(row).map_err(|e| CliError::input(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Writes to `--out` when given, else to stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
