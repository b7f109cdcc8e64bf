use slicereg::geocheck::{
    check_condition_with, check_injectivity_slice, CheckOptions, Condition, ConditionReport, SpiralParams,
    DEFAULT_SEPARATION, DEFAULT_TRUNCATION_TOL, SINGULAR_EPS,
};

use crate::args::{CheckArgs, CheckKind, Format, RunArgs};
use crate::config::{csv_string, emit, to_json, ReportFile, RunConfig, SummaryRow};
use crate::error::{CliError, EXIT_FAIL, EXIT_PASS};
use crate::input::{parse_unit_or_i, resolve};

pub fn summary(file: &ReportFile<ConditionReport>) -> SummaryRow {
    let [w, x, y, z] = file.report.witness.to_array();
    SummaryRow {
        command: file.command.clone(),
        kind: file.kind.clone(),
        series: file.series.clone(),
        passed: file.report.passed,
        margin: file.report.worst_margin,
        witness_w: w,
        witness_x: x,
        witness_y: y,
        witness_z: z,
        points_checked: file.report.points_checked,
    }
}

pub fn run(run: &RunArgs, args: &CheckArgs) -> Result<u8, CliError> {
    let config = RunConfig::from_args(run, DEFAULT_TRUNCATION_TOL)?;
    let grid = config.sample_grid()?;
    let operand = resolve(&args.series, run.degree)?;
    let f = &operand.series;
    let report = match args.condition {
        CheckKind::Injectivity => {
            let unit = parse_unit_or_i(args.unit.as_deref())?;
            let separation = args.separation.unwrap_or(DEFAULT_SEPARATION);
            if !(separation > 0.0 && separation.is_finite()) {
                return Err(CliError::input(format!("separation must be positive, got {separation}")));
            }
            check_injectivity_slice(f, unit, &grid, separation)?
        }
        kind => {
            let cond = match kind {
                CheckKind::SliceStarlike => Condition::SliceStarlike,
                CheckKind::SliceConvex => Condition::SliceConvex,
                CheckKind::Spirallike => {
                    let gamma = args.gamma.ok_or_else(|| CliError::input("spirallike needs --gamma"))?;
                    Condition::Spirallike(SpiralParams::new(gamma)?)
                }
                CheckKind::PositiveDerivRealPart => Condition::PositiveDerivRealPart,
                CheckKind::BoundedRotation => Condition::BoundedRotation,
                CheckKind::PClassRatio => Condition::PClassRatio,
                CheckKind::Injectivity => unreachable!("handled above"),
            };
            let opts = CheckOptions { tol: config.tol, singular_eps: SINGULAR_EPS, truncation_tol: config.truncation() };
            check_condition_with(f, cond, &grid, opts)?
        }
    };
    let code = if report.passed { EXIT_PASS } else { EXIT_FAIL };
    let kind = report.condition.name();
    let file = ReportFile::new("check", kind, operand.name, config, report);
    let text = match run.format {
        Format::Json => to_json(&file),
        Format::Csv => csv_string(&[summary(&file)])?,
    };
    emit(run.out.as_deref(), &text)?;
    Ok(code)
}
