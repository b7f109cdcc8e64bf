use serde::Serialize;
use slicereg::maps::{
    alexander_op, caratheodory_extremal, dilation, libera_op, mobius_series, odd_sqrt_transform, q_times_derivative,
    ratio_transform_checked, rotate_conjugate,
};
use slicereg::quat::Quaternion;
use slicereg::series::{
    bullet_compose, bullet_inverse, classify, order, slice_derivative, split_coefficients, star_inverse, star_mul,
    Order, Side, TruncatedSeries, DEFAULT_DEGREE,
};

use crate::args::{Format, MakeArgs, MakeKind, RunArgs, SeriesOp, SideArg};
use crate::config::{emit, to_json, RunConfig};
use crate::error::{CliError, EXIT_PASS};
use crate::input::{builtin, parse_quaternion, parse_unit, parse_unit_or_i, resolve, resolve_all};

/// Smallest distance between `a` and sampled values for the ratio transform.
const RATIO_MIN_DISTANCE: f64 = 1e-6;

#[derive(Serialize)]
struct Evaluation {
    q: Quaternion,
    value: Quaternion,
}

#[derive(Serialize)]
struct ClassifyOutput {
    classification: String,
    degree: usize,
    order: Option<usize>,
    normalized: bool,
}

fn write_series(run: &RunArgs, f: &TruncatedSeries) -> Result<u8, CliError> {
    let text = match run.format {
        Format::Json => to_json(f),
        Format::Csv => f.to_csv(),
    };
    emit(run.out.as_deref(), &text)?;
    Ok(EXIT_PASS)
}

fn source(args: &MakeArgs, degree: Option<usize>) -> Result<TruncatedSeries, CliError> {
    let spec = args.from.as_deref().ok_or_else(|| CliError::input("this transform needs --from <series>"))?;
    Ok(resolve(spec, degree)?.series)
}

fn required(v: Option<f64>, flag: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::input(format!("missing --{flag}")))
}

fn make(run: &RunArgs, args: &MakeArgs) -> Result<TruncatedSeries, CliError> {
    let degree = run.degree.unwrap_or(DEFAULT_DEGREE);
    if degree < 1 {
        return Err(CliError::input("degree must be at least 1"));
    }
    Ok(match args.name {
        MakeKind::Koebe | MakeKind::Identity | MakeKind::HalfIdentity | MakeKind::Geometric => {
            let name = match args.name {
                MakeKind::Koebe => "koebe",
                MakeKind::Identity => "identity",
                MakeKind::HalfIdentity => "half-identity",
                _ => "geometric",
            };
            builtin(name, degree).expect("listed built-in")
        }
        MakeKind::CaratheodoryExtremal => {
            caratheodory_extremal(args.theta, parse_unit_or_i(args.unit.as_deref())?, degree)
        }
        MakeKind::Mobius => mobius_series(required(args.t, "t")?, degree)?,
        MakeKind::Dilation => dilation(&source(args, run.degree)?, required(args.r, "r")?)?,
        MakeKind::Rotate => {
            let rotor = args.rotor.as_deref().ok_or_else(|| CliError::input("missing --rotor"))?;
            rotate_conjugate(&source(args, run.degree)?, parse_quaternion(rotor)?)?
        }
        MakeKind::Alexander => alexander_op(&source(args, run.degree)?)?,
        MakeKind::Libera => libera_op(&source(args, run.degree)?)?,
        MakeKind::QDerivative => q_times_derivative(&source(args, run.degree)?),
        MakeKind::Ratio => {
            let f = source(args, run.degree)?;
            let grid = RunConfig::from_args(run, f64::INFINITY)?.sample_grid()?;
            ratio_transform_checked(&f, required(args.a, "a")?, &grid.points(), RATIO_MIN_DISTANCE)?
        }
        MakeKind::OddSqrt => odd_sqrt_transform(&source(args, run.degree)?)?,
    })
}

pub fn run(run: &RunArgs, op: &SeriesOp) -> Result<u8, CliError> {
    let degree = run.degree;
    match op {
        SeriesOp::Make(args) => write_series(run, &make(run, args)?),
        SeriesOp::StarMul { f, g } => {
            let ops = resolve_all(&[f, g], degree)?;
            write_series(run, &star_mul(&ops[0].series, &ops[1].series))
        }
        SeriesOp::StarInv { series } => write_series(run, &star_inverse(&resolve(series, degree)?.series)?),
        SeriesOp::Compose { g, w } => {
            let ops = resolve_all(&[g, w], degree)?;
            write_series(run, &bullet_compose(&ops[0].series, &ops[1].series)?)
        }
        SeriesOp::InvertCompose { g, side } => {
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            write_series(run, &bullet_inverse(&resolve(g, degree)?.series, side)?)
        }
        SeriesOp::Derive { series, times } => {
            let mut f = resolve(series, degree)?.series;
            for _ in 0..*times {
                f = slice_derivative(&f);
            }
            write_series(run, &f)
        }
        SeriesOp::Evaluate { series, q } => {
            let f = resolve(series, degree)?.series;
            let q = parse_quaternion(q)?;
            emit(run.out.as_deref(), &to_json(&Evaluation { q, value: f.evaluate(q) }))?;
            Ok(EXIT_PASS)
        }
        SeriesOp::Split { series, unit, unit_j } => {
            let f = resolve(series, degree)?.series;
            let i = parse_unit_or_i(unit.as_deref())?;
            let j = match unit_j {
                Some(s) => parse_unit(s)?,
                None => i.orthogonal(),
            };
            emit(run.out.as_deref(), &to_json(&split_coefficients(&f, i, j)?))?;
            Ok(EXIT_PASS)
        }
        SeriesOp::Classify { series } => {
            let f = resolve(series, degree)?.series;
            let out = ClassifyOutput {
                classification: classify(&f).to_string(),
                degree: f.degree(),
                order: match order(&f) {
                    Order::Finite(n) => Some(n),
                    Order::Infinite => None,
                },
                normalized: f.is_normalized(),
            };
            emit(run.out.as_deref(), &to_json(&out))?;
            Ok(EXIT_PASS)
        }
    }
}
