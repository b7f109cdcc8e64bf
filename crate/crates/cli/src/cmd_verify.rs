use slicereg::verify::{
    area_report, build_subordinate, coefficient_bounds, integral_mean_bound_with, koebe_quarter_with, rogosinski,
    subordination_suite, t_transform_bounds, verify_envelope_with, BoundReport, CoefficientKind, EnvelopeKind,
    VerifyOptions, DEFAULT_TRUNCATION_TOL,
};

use crate::args::{Format, RunArgs, VerifyArgs, VerifyKind};
use crate::config::{csv_string, emit, to_json, ReportFile, RunConfig, SummaryRow};
use crate::error::{CliError, EXIT_FAIL, EXIT_HYPOTHESIS, EXIT_PASS};
use crate::input::{load_tail, parse_unit_or_i, resolve, resolve_all, Operand};

const DEFAULT_R: f64 = 0.5;
const DEFAULT_P: f64 = 2.0;
const DEFAULT_DELTA: f64 = 0.5;
const DEFAULT_SAMPLES: usize = 101;
const INTEGRAL_RESOLUTION: usize = 512;
const AREA_RESOLUTION: usize = 4096;
const NORM_RESOLUTION: usize = 256;

pub fn summary(file: &ReportFile<BoundReport>) -> SummaryRow {
    let [w, x, y, z] = file.report.witness.to_array();
    SummaryRow {
        command: file.command.clone(),
        kind: file.kind.clone(),
        series: file.series.clone(),
        passed: file.report.passed,
        margin: file.report.tightness,
        witness_w: w,
        witness_x: x,
        witness_y: y,
        witness_z: z,
        points_checked: file.report.points_checked,
    }
}

fn series_arg(args: &VerifyArgs, degree: Option<usize>) -> Result<Operand, CliError> {
    let spec = args.series.as_deref().ok_or_else(|| CliError::input("missing --series"))?;
    resolve(spec, degree)
}

/// `(f, g)` for the subordination checks: `f` is `--series`, or `g ⦁ w` when `--w` is given.
fn subordinate_pair(args: &VerifyArgs, config: &RunConfig, degree: Option<usize>) -> Result<(String, Operand, Operand), CliError> {
    let g_spec = args.against.as_deref().ok_or_else(|| CliError::input("missing --against <g>"))?;
    match (args.series.as_deref(), args.w.as_deref()) {
        (Some(f), None) => {
            let ops = resolve_all(&[f, g_spec], degree)?;
            let name = format!("{}|{}", ops[0].name, ops[1].name);
            let mut it = ops.into_iter();
            Ok((name, it.next().unwrap(), it.next().unwrap()))
        }
        (None, Some(w)) => {
            let ops = resolve_all(&[g_spec, w], degree)?;
            let grid = config.sample_grid()?;
            let sub = build_subordinate(&ops[0].series, &ops[1].series, &grid, config.tol)?;
            let name = format!("{}⦁{}", ops[0].name, ops[1].name);
            let f = Operand { name: name.clone(), series: sub.series };
            Ok((name, f, ops[0].clone()))
        }
        _ => Err(CliError::input("give exactly one of --series <f> and --w <w>")),
    }
}

fn finite(v: f64, flag: &str) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::input(format!("--{flag} must be finite")))
    }
}

pub fn run(run: &RunArgs, args: &VerifyArgs) -> Result<u8, CliError> {
    let mut config = RunConfig::from_args(run, DEFAULT_TRUNCATION_TOL)?;
    let opts = VerifyOptions { tol: config.tol, truncation_tol: config.truncation() };
    let degree = run.degree;
    let r = finite(args.r.unwrap_or(DEFAULT_R), "r")?;
    let (name, report) = match args.kind {
        VerifyKind::Growth | VerifyKind::Distortion | VerifyKind::Caratheodory | VerifyKind::RotationRatio => {
            let env = match args.kind {
                VerifyKind::Growth => EnvelopeKind::Growth,
                VerifyKind::Distortion => EnvelopeKind::Distortion,
                VerifyKind::Caratheodory => EnvelopeKind::Caratheodory,
                _ => EnvelopeKind::RotationRatio,
            };
            let op = series_arg(args, degree)?;
            let grid = config.sample_grid()?;
            (op.name, verify_envelope_with(&op.series, env, &grid, opts)?)
        }
        VerifyKind::IntegralMean => {
            let op = series_arg(args, degree)?;
            let unit = parse_unit_or_i(args.unit.as_deref())?;
            let res = *config.resolution.get_or_insert(INTEGRAL_RESOLUTION);
            (op.name, integral_mean_bound_with(&op.series, unit, r, res, opts)?)
        }
        VerifyKind::KoebeQuarter => {
            let op = series_arg(args, degree)?;
            let grid = config.sample_grid()?;
            (op.name, koebe_quarter_with(&op.series, &grid, opts)?)
        }
        VerifyKind::Area => {
            let spec = args.tail.as_deref().ok_or_else(|| CliError::input("area needs --tail"))?;
            let (name, tail) = load_tail(spec)?;
            let unit = parse_unit_or_i(args.unit.as_deref())?;
            let res = *config.resolution.get_or_insert(AREA_RESOLUTION);
            (name, area_report(&tail, unit, res, config.tol)?)
        }
        VerifyKind::AreaSum | VerifyKind::Bieberbach | VerifyKind::StarlikeCoeff | VerifyKind::ConvexCoeff => {
            let kind = match args.kind {
                VerifyKind::AreaSum => CoefficientKind::AreaSum,
                VerifyKind::Bieberbach => CoefficientKind::Bieberbach,
                VerifyKind::StarlikeCoeff => CoefficientKind::StarlikeCoeff,
                _ => CoefficientKind::ConvexCoeff,
            };
            let op = series_arg(args, degree)?;
            (op.name, coefficient_bounds(&op.series, kind, config.tol)?)
        }
        VerifyKind::Rogosinski => {
            let (name, f, g) = subordinate_pair(args, &config, degree)?;
            (name, rogosinski(&f.series, &g.series, config.tol)?)
        }
        VerifyKind::Subordination => {
            let (name, f, g) = subordinate_pair(args, &config, degree)?;
            let unit = parse_unit_or_i(args.unit.as_deref())?;
            let p = finite(args.p.unwrap_or(DEFAULT_P), "p")?;
            let res = *config.resolution.get_or_insert(NORM_RESOLUTION);
            (name, subordination_suite(&f.series, &g.series, unit, r, p, res, config.tol)?)
        }
        VerifyKind::TTransform => {
            let op = series_arg(args, degree)?;
            let delta = finite(args.delta.unwrap_or(DEFAULT_DELTA), "delta")?;
            let samples = args.samples.unwrap_or(DEFAULT_SAMPLES);
            (op.name, t_transform_bounds(&op.series, delta, samples, config.tol)?)
        }
    };
    let hypothesis_failed = report.hypotheses.iter().any(|h| h.passed == Some(false));
    let code = if hypothesis_failed {
        EXIT_HYPOTHESIS
    } else if report.passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    let kind = report.bound_kind.name();
    let file = ReportFile::new("verify", kind, name, config, report);
    let text = match run.format {
        Format::Json => to_json(&file),
        Format::Csv => csv_string(&[summary(&file)])?,
    };
    emit(run.out.as_deref(), &text)?;
    Ok(code)
}
