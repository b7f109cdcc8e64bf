//! Numerical checks of growth, distortion, area, coefficient and
//! subordination inequalities.
//!
//! Every check produces a [`BoundReport`] whose slack is `rhs - lhs` for an
//! inequality `lhs <= rhs`. `max_violation` is the largest negative slack
//! (clipped at zero) and `tightness` the smallest slack, so equality cases
//! show up as `tightness` near zero.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geocheck::{check_condition_with, CheckOptions, Condition, GeoError, SampleGrid};
use crate::quat::{embed_slice, Quaternion, UnitImaginary};
use crate::series::{
    bullet_compose, classify, slice_derivative, split_coefficients, star_inverse, star_mul,
    Classification, SeriesError, TruncatedSeries, COEFF_EPS,
};

pub const DEFAULT_TOL: f64 = 1e-9;
/// Slack below which a bound counts as met with equality.
pub const EXTREMAL_TIGHTNESS: f64 = 1e-8;
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-9;
/// Largest node count used for the simple-curve test in [`area_complement`].
pub const SIMPLICITY_NODES: usize = 512;
/// Largest relative gap between area formula and contour oracle.
pub const AREA_REL_TOL: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("series must satisfy a_0 = 0 and a_1 = 1")]
    NotNormalized,
    #[error("series must have real coefficients")]
    NotIntrinsic,
    #[error("prerequisite not met: {0}")]
    PrerequisiteNotMet(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("parameter {name} = {value} is outside {range}")]
    ParameterOutOfRange { name: &'static str, value: f64, range: &'static str },
    #[error("|w(q)| = {value} exceeds the admissible bound {bound} at {point}")]
    SchwarzViolation { point: Quaternion, value: f64, bound: f64 },
    #[error("truncation tail {tail} at r = {r} exceeds {tol}")]
    TruncationExceeded { r: f64, tail: f64, tol: f64 },
    #[error("no sample point could be checked")]
    NoPointsChecked,
    #[error("Laurent tail needs at least two finite coefficients")]
    InvalidTail,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Geo(#[from] GeoError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Caratheodory,
    Distortion,
    Growth,
    RotationRatio,
    IntegralMean,
    KoebeQuarter,
    AreaComplement,
    AreaSum,
    Bieberbach,
    StarlikeCoeff,
    ConvexCoeff,
    Rogosinski,
    Subordination,
    TTransform,
}

impl BoundKind {
    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::Caratheodory => "caratheodory",
            BoundKind::Distortion => "distortion",
            BoundKind::Growth => "growth",
            BoundKind::RotationRatio => "rotation-ratio",
            BoundKind::IntegralMean => "integral-mean",
            BoundKind::KoebeQuarter => "koebe-quarter",
            BoundKind::AreaComplement => "area-complement",
            BoundKind::AreaSum => "area-sum",
            BoundKind::Bieberbach => "bieberbach",
            BoundKind::StarlikeCoeff => "starlike-coeff",
            BoundKind::ConvexCoeff => "convex-coeff",
            BoundKind::Rogosinski => "rogosinski",
            BoundKind::Subordination => "subordination",
            BoundKind::TTransform => "t-transform",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisSource {
    Sampled,
    CallerAsserted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub source: HypothesisSource,
    /// Outcome of the sampled check; `None` when asserted by the caller.
    pub passed: Option<bool>,
}

impl Hypothesis {
    pub fn sampled(name: &str, passed: bool) -> Self {
        Self { name: name.into(), source: HypothesisSource::Sampled, passed: Some(passed) }
    }

    pub fn asserted(name: &str) -> Self {
        Self { name: name.into(), source: HypothesisSource::CallerAsserted, passed: None }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundParameters {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unit: Option<UnitImaginary>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub resolution: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<usize>,
    pub tol: f64,
}

/// One named inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl InequalityCheck {
    fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self { name: name.into(), lhs, rhs, slack: rhs - lhs }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_kind: BoundKind,
    pub passed: bool,
    pub max_violation: f64,
    pub tightness: f64,
    pub extremal: bool,
    pub witness: Quaternion,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_index: Option<usize>,
    pub parameters: BoundParameters,
    pub hypotheses: Vec<Hypothesis>,
    pub points_checked: usize,
    pub skipped_truncation: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub checks: Vec<InequalityCheck>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub tol: f64,
    pub truncation_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, truncation_tol: DEFAULT_TRUNCATION_TOL }
    }
}

/// Running minimum of slacks.
#[derive(Debug, Clone, Copy)]
struct Slack {
    min: f64,
    witness: Quaternion,
    index: Option<usize>,
    count: usize,
}

impl Slack {
    fn new() -> Self {
        Self { min: f64::INFINITY, witness: Quaternion::ZERO, index: None, count: 0 }
    }

    fn push(&mut self, slack: f64, witness: Quaternion, index: Option<usize>) {
        self.count += 1;
        if slack < self.min {
            self.min = slack;
            self.witness = witness;
            self.index = index;
        }
    }

    fn merge(&mut self, other: &Slack) {
        self.count += other.count;
        if other.min < self.min {
            self.min = other.min;
            self.witness = other.witness;
            self.index = other.index;
        }
    }
}

struct ReportParts {
    kind: BoundKind,
    slack: Slack,
    parameters: BoundParameters,
    hypotheses: Vec<Hypothesis>,
    skipped_truncation: usize,
    checks: Vec<InequalityCheck>,
}

fn finish(parts: ReportParts) -> Result<BoundReport, VerifyError> {
    let ReportParts { kind, slack, parameters, hypotheses, skipped_truncation, checks } = parts;
    if slack.count == 0 {
        return Err(VerifyError::NoPointsChecked);
    }
    let max_violation = (-slack.min).max(0.0);
    Ok(BoundReport {
        bound_kind: kind,
        passed: max_violation <= parameters.tol,
        max_violation,
        tightness: slack.min,
        extremal: slack.min.abs() < EXTREMAL_TIGHTNESS,
        witness: slack.witness,
        witness_index: slack.index,
        parameters,
        hypotheses,
        points_checked: slack.count,
        skipped_truncation,
        checks,
    })
}

fn require_normalized(f: &TruncatedSeries) -> Result<(), VerifyError> {
    if f.is_normalized() {
        Ok(())
    } else {
        Err(VerifyError::NotNormalized)
    }
}

fn require_intrinsic(f: &TruncatedSeries) -> Result<(), VerifyError> {
    if classify(f) == Classification::Intrinsic {
        Ok(())
    } else {
        Err(VerifyError::NotIntrinsic)
    }
}

fn params(tol: f64) -> BoundParameters {
    BoundParameters { tol, ..BoundParameters::default() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvelopeKind {
    Caratheodory,
    Distortion,
    Growth,
    RotationRatio,
}

pub fn verify_envelope(
    f: &TruncatedSeries,
    kind: EnvelopeKind,
    grid: &SampleGrid,
) -> Result<BoundReport, VerifyError> {
    verify_envelope_with(f, kind, grid, VerifyOptions::default())
}

/// Lower and upper envelopes at every grid point with `r = |q|`:
///
/// * Caratheodory: `(1-r)/(1+r) <= Re d_s f <= |d_s f| <= (1+r)/(1-r)`
/// * Distortion: `(1-r)/(1+r)^3 <= |d_s f| <= (1+r)/(1-r)^3`
/// * Growth: `r/(1+r)^2 <= |f| <= r/(1-r)^2`
/// * RotationRatio: `(1-r)/(1+r) <= |q d_s f * f^{-*}| <= (1+r)/(1-r)`
pub fn verify_envelope_with(
    f: &TruncatedSeries,
    kind: EnvelopeKind,
    grid: &SampleGrid,
    opts: VerifyOptions,
) -> Result<BoundReport, VerifyError> {
    require_normalized(f)?;
    let mut hypotheses = Vec::new();
    match kind {
        EnvelopeKind::Caratheodory => {
            let check = check_condition_with(
                f,
                Condition::PositiveDerivRealPart,
                grid,
                CheckOptions { tol: opts.tol, ..CheckOptions::default() },
            )?;
            hypotheses.push(Hypothesis::sampled("positive-deriv-real-part", check.passed));
            if !check.passed {
                return Err(VerifyError::PrerequisiteNotMet(format!(
                    "Re d_s f > 0 fails at {} (margin {})",
                    check.witness, check.worst_margin
                )));
            }
        }
        _ => {
            require_intrinsic(f)?;
            hypotheses.push(Hypothesis::sampled("intrinsic", true));
            hypotheses.push(Hypothesis::asserted("univalent"));
        }
    }
    let df = slice_derivative(f);
    let evaluated: TruncatedSeries = match kind {
        EnvelopeKind::Caratheodory | EnvelopeKind::Distortion => df.clone(),
        EnvelopeKind::Growth => f.clone(),
        // q d_s f * f^{-*} = d_s f * (f / q)^{-*}.
        EnvelopeKind::RotationRatio => star_mul(&df, &star_inverse(&f.shift_down(1))?),
    };
    let per_unit: Vec<(Slack, usize)> = grid
        .units()
        .par_iter()
        .map(|&unit| {
            let mut slack = Slack::new();
            let mut skipped = 0;
            for (r, q) in grid.slice_points(unit) {
                if evaluated.tail_estimate(r) > opts.truncation_tol {
                    skipped += 1;
                    continue;
                }
                let v = evaluated.evaluate(q);
                let (lo_val, hi_val, lo, hi) = match kind {
                    EnvelopeKind::Caratheodory => (v.w, v.norm(), (1.0 - r) / (1.0 + r), (1.0 + r) / (1.0 - r)),
                    EnvelopeKind::Distortion => {
                        let n = v.norm();
                        (n, n, (1.0 - r) / (1.0 + r).powi(3), (1.0 + r) / (1.0 - r).powi(3))
                    }
                    EnvelopeKind::Growth => {
                        let n = v.norm();
                        (n, n, r / (1.0 + r).powi(2), r / (1.0 - r).powi(2))
                    }
                    EnvelopeKind::RotationRatio => {
                        let n = v.norm();
                        (n, n, (1.0 - r) / (1.0 + r), (1.0 + r) / (1.0 - r))
                    }
                };
                slack.push(lo_val - lo, q, None);
                slack.push(hi - hi_val, q, None);
            }
            (slack, skipped)
        })
        .collect();
    let mut slack = Slack::new();
    let mut skipped = 0;
    for (s, k) in &per_unit {
        slack.merge(s);
        skipped += k;
    }
    // Two inequalities per point.
    slack.count /= 2;
    let bound_kind = match kind {
        EnvelopeKind::Caratheodory => BoundKind::Caratheodory,
        EnvelopeKind::Distortion => BoundKind::Distortion,
        EnvelopeKind::Growth => BoundKind::Growth,
        EnvelopeKind::RotationRatio => BoundKind::RotationRatio,
    };
    finish(ReportParts {
        kind: bound_kind,
        slack,
        parameters: params(opts.tol),
        hypotheses,
        skipped_truncation: skipped,
        checks: Vec::new(),
    })
}

fn check_radius(r: f64) -> Result<(), VerifyError> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(VerifyError::ParameterOutOfRange { name: "r", value: r, range: "[0, 1)" })
    }
}

fn check_resolution(n: usize) -> Result<(), VerifyError> {
    if n == 0 {
        Err(VerifyError::ParameterOutOfRange { name: "resolution", value: 0.0, range: "[1, inf)" })
    } else {
        Ok(())
    }
}

fn guard_tail(f: &TruncatedSeries, r: f64, tol: f64) -> Result<(), VerifyError> {
    let tail = f.tail_estimate(r);
    if tail > tol {
        Err(VerifyError::TruncationExceeded { r, tail, tol })
    } else {
        Ok(())
    }
}

/// `r int_0^{2 pi} |d_s f(r e^{I theta})| d theta` by the trapezoidal rule,
/// which on a periodic integrand is the equally weighted sum.
pub fn integral_mean(f: &TruncatedSeries, unit: UnitImaginary, r: f64, resolution: usize) -> f64 {
    let df = slice_derivative(f);
    let h = 2.0 * PI / resolution as f64;
    let sum: f64 = (0..resolution)
        .map(|k| {
            let t = h * k as f64;
            df.evaluate(embed_slice(r * t.cos(), r * t.sin(), unit)).norm()
        })
        .sum();
    r * h * sum
}

/// Integral mean against `2 pi r (1 + r) / (1 - r)^2`.
pub fn integral_mean_bound(
    f: &TruncatedSeries,
    unit: UnitImaginary,
    r: f64,
    resolution: usize,
) -> Result<BoundReport, VerifyError> {
    integral_mean_bound_with(f, unit, r, resolution, VerifyOptions::default())
}

pub fn integral_mean_bound_with(
    f: &TruncatedSeries,
    unit: UnitImaginary,
    r: f64,
    resolution: usize,
    opts: VerifyOptions,
) -> Result<BoundReport, VerifyError> {
    require_normalized(f)?;
    require_intrinsic(f)?;
    check_radius(r)?;
    check_resolution(resolution)?;
    guard_tail(&slice_derivative(f), r, opts.truncation_tol)?;
    let value = integral_mean(f, unit, r, resolution);
    let bound = 2.0 * PI * r * (1.0 + r) / (1.0 - r).powi(2);
    let check = InequalityCheck::new("integral-mean", value, bound);
    let mut slack = Slack::new();
    slack.push(check.slack, embed_slice(r, 0.0, unit), None);
    finish(ReportParts {
        kind: BoundKind::IntegralMean,
        slack,
        parameters: BoundParameters { r: Some(r), unit: Some(unit), resolution: Some(resolution), ..params(opts.tol) },
        hypotheses: vec![Hypothesis::sampled("intrinsic", true), Hypothesis::asserted("univalent")],
        skipped_truncation: 0,
        checks: vec![check],
    })
}

/// For every grid radius `r`, the smallest sampled `|f(q)|` with `|q| = r`
/// must reach `r / (1 + r)^2`, which tends to 1/4.
pub fn koebe_quarter(f: &TruncatedSeries, grid: &SampleGrid) -> Result<BoundReport, VerifyError> {
    koebe_quarter_with(f, grid, VerifyOptions::default())
}

pub fn koebe_quarter_with(
    f: &TruncatedSeries,
    grid: &SampleGrid,
    opts: VerifyOptions,
) -> Result<BoundReport, VerifyError> {
    require_normalized(f)?;
    require_intrinsic(f)?;
    let mut slack = Slack::new();
    let mut checks = Vec::new();
    let mut skipped = 0;
    for &r in grid.radii() {
        if f.tail_estimate(r) > opts.truncation_tol {
            skipped += grid.units().len() * grid.angles_per_circle();
            continue;
        }
        let minima: Vec<(f64, Quaternion)> = grid
            .units()
            .par_iter()
            .map(|&unit| {
                let mut best = (f64::INFINITY, Quaternion::ZERO);
                for (_, q) in grid.slice_points(unit).into_iter().filter(|(rr, _)| *rr == r) {
                    let v = f.evaluate(q).norm();
                    if v < best.0 {
                        best = (v, q);
                    }
                }
                best
            })
            .collect();
        let mut best = (f64::INFINITY, Quaternion::ZERO);
        for m in minima {
            if m.0 < best.0 {
                best = m;
            }
        }
        let bound = r / (1.0 + r).powi(2);
        let check = InequalityCheck::new(format!("r={r}"), bound, best.0);
        slack.push(check.slack, best.1, None);
        checks.push(check);
    }
    finish(ReportParts {
        kind: BoundKind::KoebeQuarter,
        slack,
        parameters: params(opts.tol),
        hypotheses: vec![Hypothesis::sampled("intrinsic", true), Hypothesis::asserted("univalent")],
        skipped_truncation: skipped,
        checks,
    })
}

/// Coefficients `a_0..a_M` of `q + sum_{n>=0} q^{-n} a_n` on `|q| > 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LaurentTailRaw")]
pub struct LaurentTail {
    coeffs: Vec<Quaternion>,
}

#[derive(Deserialize)]
struct LaurentTailRaw {
    coeffs: Vec<Quaternion>,
}

impl TryFrom<LaurentTailRaw> for LaurentTail {
    type Error = VerifyError;

    fn try_from(raw: LaurentTailRaw) -> Result<Self, VerifyError> {
        LaurentTail::new(raw.coeffs)
    }
}

impl LaurentTail {
    pub fn new(coeffs: Vec<Quaternion>) -> Result<Self, VerifyError> {
        if coeffs.len() < 2 || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(VerifyError::InvalidTail);
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    /// `sum_{n>=1} n |a_n|^2`.
    pub fn area_sum(&self) -> f64 {
        self.coeffs.iter().enumerate().skip(1).map(|(n, c)| n as f64 * c.norm_sqr()).sum()
    }

    /// `pi (2 - sum n |a_n|^2)`.
    pub fn area_formula(&self) -> f64 {
        PI * (2.0 - self.area_sum())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaComparison {
    pub formula_value: f64,
    pub oracle_value: f64,
    pub f1_area: f64,
    pub f2_area: f64,
    pub relative_error: f64,
    pub unit_i: UnitImaginary,
    pub unit_j: UnitImaginary,
    pub resolution: usize,
    pub hypotheses: Vec<Hypothesis>,
}

/// Image of the unit circle under `z + sum_n z^{-n} c_n`, `c_n` complex.
fn laurent_curve(coeffs: &[(f64, f64)], resolution: usize) -> Vec<(f64, f64)> {
    (0..resolution)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / resolution as f64;
            let (mut x, mut y) = (t.cos(), t.sin());
            for (n, &(cr, ci)) in coeffs.iter().enumerate() {
                let (pr, pi) = ((-(n as f64) * t).cos(), (-(n as f64) * t).sin());
                x += pr * cr - pi * ci;
                y += pr * ci + pi * cr;
            }
            (x, y)
        })
        .collect()
}

/// Shoelace area of a closed polygon, absolute value.
fn shoelace(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len();
    let twice: f64 = (0..n)
        .map(|k| {
            let (x0, y0) = pts[k];
            let (x1, y1) = pts[(k + 1) % n];
            x0 * y1 - x1 * y0
        })
        .sum();
    0.5 * twice.abs()
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn segments_cross(p1: (f64, f64), p2: (f64, f64), q1: (f64, f64), q2: (f64, f64)) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Whether the closed polygon through at most [`SIMPLICITY_NODES`] evenly
/// spaced nodes of `pts` has no crossing between non-adjacent edges.
fn is_simple_closed(pts: &[(f64, f64)]) -> bool {
    let step = pts.len().div_ceil(SIMPLICITY_NODES).max(1);
    let poly: Vec<(f64, f64)> = pts.iter().step_by(step).copied().collect();
    let n = poly.len();
    if n < 4 {
        return true;
    }
    (0..n).into_par_iter().all(|a| {
        ((a + 2)..n).all(|b| {
            if a == 0 && b == n - 1 {
                return true;
            }
            !segments_cross(poly[a], poly[(a + 1) % n], poly[b], poly[(b + 1) % n])
        })
    })
}

/// Complement area of the image of the exterior ball, by formula and by the
/// contour integral `1/2 |∮ x dy - y dx|` over the images of the unit circle
/// of slice `I` under `f_1` and `z + f_2`, where `f = f_1 + f_2 J` on `C_I`
/// and `J = I.orthogonal()`.
///
/// Fails with [`VerifyError::HypothesisFailed`] when either image curve is
/// not simple on the sample.
pub fn area_complement(
    tail: &LaurentTail,
    unit: UnitImaginary,
    boundary_resolution: usize,
) -> Result<AreaComparison, VerifyError> {
    check_resolution(boundary_resolution)?;
    let unit_j = unit.orthogonal();
    let series = TruncatedSeries::new(tail.coeffs.clone())?;
    let split = split_coefficients(&series, unit, unit_j)?;
    let c1 = laurent_curve(&split.f1_coeffs, boundary_resolution);
    let c2 = laurent_curve(&split.f2_coeffs, boundary_resolution);
    let simple1 = is_simple_closed(&c1);
    let simple2 = is_simple_closed(&c2);
    let hypotheses = vec![
        Hypothesis::sampled("f1 univalent on boundary sample", simple1),
        Hypothesis::sampled("z + f2 univalent on boundary sample", simple2),
    ];
    if !(simple1 && simple2) {
        let which = if simple1 { "z + f2" } else { "f1" };
        return Err(VerifyError::HypothesisFailed(format!("{which} image of the unit circle is not simple")));
    }
    let f1_area = shoelace(&c1);
    let f2_area = shoelace(&c2);
    let formula_value = tail.area_formula();
    let oracle_value = f1_area + f2_area;
    Ok(AreaComparison {
        formula_value,
        oracle_value,
        f1_area,
        f2_area,
        relative_error: (formula_value - oracle_value).abs() / formula_value.abs(),
        unit_i: unit,
        unit_j,
        resolution: boundary_resolution,
        hypotheses,
    })
}

/// [`area_complement`] as a report: slack is `AREA_REL_TOL - relative_error`.
pub fn area_report(
    tail: &LaurentTail,
    unit: UnitImaginary,
    boundary_resolution: usize,
    tol: f64,
) -> Result<BoundReport, VerifyError> {
    let cmp = area_complement(tail, unit, boundary_resolution)?;
    let mut slack = Slack::new();
    let check = InequalityCheck::new("relative-error", cmp.relative_error, AREA_REL_TOL);
    slack.push(check.slack, Quaternion::ZERO, None);
    let mut report = finish(ReportParts {
        kind: BoundKind::AreaComplement,
        slack,
        parameters: BoundParameters { unit: Some(unit), resolution: Some(boundary_resolution), ..params(tol) },
        hypotheses: cmp.hypotheses.clone(),
        skipped_truncation: 0,
        checks: vec![
            InequalityCheck::new("formula-value", cmp.formula_value, cmp.formula_value),
            InequalityCheck::new("oracle-value", cmp.oracle_value, cmp.oracle_value),
            check,
        ],
    })?;
    report.extremal = false;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientKind {
    /// `sum n |a_n|^2 <= 2` and `|a_1| <= sqrt 2` for a Laurent tail.
    AreaSum,
    /// `|a_n| <= n`, `n >= 2`.
    Bieberbach,
    /// `|a_n| <= n`, `n >= 2`.
    StarlikeCoeff,
    /// `|a_n| <= 1`, `n >= 2`.
    ConvexCoeff,
}

/// Coefficient inequalities. For `AreaSum` the coefficients of `f` are read
/// as the Laurent tail `a_0..a_M`; class membership is asserted by the caller.
pub fn coefficient_bounds(f: &TruncatedSeries, kind: CoefficientKind, tol: f64) -> Result<BoundReport, VerifyError> {
    let mut slack = Slack::new();
    let mut checks = Vec::new();
    let (bound_kind, class) = match kind {
        CoefficientKind::AreaSum => {
            let s: f64 = f.coeffs().iter().enumerate().skip(1).map(|(n, c)| n as f64 * c.norm_sqr()).sum();
            let a1 = f.coeff(1).norm();
            let c1 = InequalityCheck::new("sum n |a_n|^2 <= 2", s, 2.0);
            let c2 = InequalityCheck::new("|a_1| <= sqrt 2", a1, SQRT_2);
            slack.push(c1.slack, Quaternion::ZERO, None);
            slack.push(c2.slack, f.coeff(1), Some(1));
            checks.push(c1);
            checks.push(c2);
            (BoundKind::AreaSum, "univalent exterior map with this Laurent tail")
        }
        _ => {
            if f.degree() < 2 {
                return Err(SeriesError::DegreeTooSmall(f.degree()).into());
            }
            let (bk, class) = match kind {
                CoefficientKind::Bieberbach => (BoundKind::Bieberbach, "univalent with coefficients in one slice"),
                CoefficientKind::StarlikeCoeff => (BoundKind::StarlikeCoeff, "slice-starlike"),
                _ => (BoundKind::ConvexCoeff, "slice-convex"),
            };
            for n in 2..=f.degree() {
                let bound = if kind == CoefficientKind::ConvexCoeff { 1.0 } else { n as f64 };
                slack.push(bound - f.coeff(n).norm(), f.coeff(n), Some(n));
            }
            (bk, class)
        }
    };
    finish(ReportParts {
        kind: bound_kind,
        slack,
        parameters: params(tol),
        hypotheses: vec![Hypothesis::asserted(class)],
        skipped_truncation: 0,
        checks,
    })
}

/// `sum_{k=1}^n |a_k|^2 <= sum_{k=1}^n |b_k|^2` for every `n` up to the
/// common degree; `f` subordinate to `g` is asserted by the caller.
pub fn rogosinski(f: &TruncatedSeries, g: &TruncatedSeries, tol: f64) -> Result<BoundReport, VerifyError> {
    let deg = f.degree().min(g.degree());
    let mut slack = Slack::new();
    let (mut sf, mut sg) = (0.0, 0.0);
    for n in 1..=deg {
        sf += f.coeff(n).norm_sqr();
        sg += g.coeff(n).norm_sqr();
        slack.push(sg - sf, f.coeff(n), Some(n));
    }
    finish(ReportParts {
        kind: BoundKind::Rogosinski,
        slack,
        parameters: params(tol),
        hypotheses: vec![Hypothesis::asserted("f subordinate to g through an intrinsic w")],
        skipped_truncation: 0,
        checks: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MNorm {
    MInf,
    MP { p: f64 },
    MInfSlice { unit: UnitImaginary },
    MPSlice { p: f64, unit: UnitImaginary },
}

/// Normalizing factor of the sphere mean, kept as displayed in the source
/// definition. The 3-sphere of radius `r` has measure `2 pi^2 r^3`.
pub const SPHERE_MEAN_FACTOR: f64 = 1.0 / (4.0 * PI);

fn sphere_point(r: f64, t1: f64, t2: f64, t3: f64) -> Quaternion {
    let (s1, s2) = (t1.sin(), t2.sin());
    Quaternion::new(r * t1.cos(), r * s1 * t2.cos(), r * s1 * s2 * t3.cos(), r * s1 * s2 * t3.sin())
}

/// `M_inf`, `M_p` over the sphere `|q| = r` and their slice versions on the
/// circle `r e^{I theta}`.
///
/// Sphere integrals use hyperspherical coordinates with
/// `theta_1, theta_2 in [0, pi]` (midpoint rule, `resolution` nodes) and
/// `theta_3 in [0, 2 pi)` (`2 resolution` nodes), surface element
/// `r^3 sin^2 theta_1 sin theta_2`, and the factor [`SPHERE_MEAN_FACTOR`].
/// The sphere maximum uses the closed node sets including the poles.
pub fn m_norm(f: &TruncatedSeries, which: MNorm, r: f64, resolution: usize) -> Result<f64, VerifyError> {
    check_radius(r)?;
    check_resolution(resolution)?;
    if let MNorm::MP { p } | MNorm::MPSlice { p, .. } = which {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(VerifyError::ParameterOutOfRange { name: "p", value: p, range: "[1, inf)" });
        }
    }
    let n = resolution;
    Ok(match which {
        MNorm::MInfSlice { unit } => slice_values(f, unit, r, n).into_iter().fold(0.0, f64::max),
        MNorm::MPSlice { p, unit } => {
            let mean = slice_values(f, unit, r, n).into_iter().map(|v| v.powf(p)).sum::<f64>() / n as f64;
            mean.powf(1.0 / p)
        }
        MNorm::MInf => {
            let rows: Vec<f64> = (0..=n)
                .into_par_iter()
                .map(|i| {
                    let t1 = PI * i as f64 / n as f64;
                    let mut best = 0.0_f64;
                    for j in 0..=n {
                        let t2 = PI * j as f64 / n as f64;
                        for k in 0..2 * n {
                            let t3 = PI * k as f64 / n as f64;
                            best = best.max(f.evaluate(sphere_point(r, t1, t2, t3)).norm());
                        }
                    }
                    best
                })
                .collect();
            rows.into_iter().fold(0.0, f64::max)
        }
        MNorm::MP { p } => {
            let h = PI / n as f64;
            let rows: Vec<f64> = (0..n)
                .into_par_iter()
                .map(|i| {
                    let t1 = h * (i as f64 + 0.5);
                    let mut acc = 0.0;
                    for j in 0..n {
                        let t2 = h * (j as f64 + 0.5);
                        let w = t1.sin().powi(2) * t2.sin();
                        for k in 0..2 * n {
                            let t3 = h * k as f64;
                            acc += w * f.evaluate(sphere_point(r, t1, t2, t3)).norm().powf(p);
                        }
                    }
                    acc
                })
                .collect();
            let integral = rows.into_iter().sum::<f64>() * h * h * h * r.powi(3);
            (SPHERE_MEAN_FACTOR * integral).powf(1.0 / p)
        }
    })
}

fn slice_values(f: &TruncatedSeries, unit: UnitImaginary, r: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            f.evaluate(embed_slice(r * t.cos(), r * t.sin(), unit)).norm()
        })
        .collect()
}

/// Sphere resolution used by [`subordination_suite`] for a given slice
/// resolution.
pub fn sphere_resolution(resolution: usize) -> usize {
    (resolution / 4).clamp(8, 64)
}

/// Norm inequalities for `f` subordinate to `g` on slice `I`:
///
/// 1. `M_inf,I(r, f) <= sqrt 2 M_inf,I(r, g)`
/// 2. `M_p,I(r, f) <= 2^(p+1) M_p,I(r, g)`
/// 3. `M_inf(r, f) <= sqrt 2 M_inf,I(r, g) <= sqrt 2 M_inf(r, g)`
/// 4. `M_p(r, f) <= 2^(2p+2) pi^2 M_p,I(r, g)`
/// 5. `|d_s f(0)| <= |d_s g(0)|`
///
/// `M_inf(r, g)` is the larger of the sphere and slice samples, so the second
/// half of item 3 holds by construction on the sample.
pub fn subordination_suite(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    unit: UnitImaginary,
    r: f64,
    p: f64,
    resolution: usize,
    tol: f64,
) -> Result<BoundReport, VerifyError> {
    if (f.coeff(0) - g.coeff(0)).norm() > COEFF_EPS {
        return Err(VerifyError::PrerequisiteNotMet("f(0) must equal g(0)".into()));
    }
    let sr = sphere_resolution(resolution);
    let mfi = m_norm(f, MNorm::MInfSlice { unit }, r, resolution)?;
    let mgi = m_norm(g, MNorm::MInfSlice { unit }, r, resolution)?;
    let mfpi = m_norm(f, MNorm::MPSlice { p, unit }, r, resolution)?;
    let mgpi = m_norm(g, MNorm::MPSlice { p, unit }, r, resolution)?;
    let mf = m_norm(f, MNorm::MInf, r, sr)?.max(mfi);
    let mg = m_norm(g, MNorm::MInf, r, sr)?.max(mgi);
    let mfp = m_norm(f, MNorm::MP { p }, r, sr)?;
    let checks = vec![
        InequalityCheck::new("M_inf,I(f) <= sqrt2 M_inf,I(g)", mfi, SQRT_2 * mgi),
        InequalityCheck::new("M_p,I(f) <= 2^(p+1) M_p,I(g)", mfpi, 2f64.powf(p + 1.0) * mgpi),
        InequalityCheck::new("M_inf(f) <= sqrt2 M_inf,I(g)", mf, SQRT_2 * mgi),
        InequalityCheck::new("sqrt2 M_inf,I(g) <= sqrt2 M_inf(g)", SQRT_2 * mgi, SQRT_2 * mg),
        InequalityCheck::new("M_p(f) <= 2^(2p+2) pi^2 M_p,I(g)", mfp, 2f64.powf(2.0 * p + 2.0) * PI * PI * mgpi),
        InequalityCheck::new("|d_s f(0)| <= |d_s g(0)|", f.coeff(1).norm(), g.coeff(1).norm()),
    ];
    let mut slack = Slack::new();
    for (i, c) in checks.iter().enumerate() {
        slack.push(c.slack, Quaternion::ZERO, Some(i));
    }
    finish(ReportParts {
        kind: BoundKind::Subordination,
        slack,
        parameters: BoundParameters {
            r: Some(r),
            p: Some(p),
            unit: Some(unit),
            resolution: Some(resolution),
            ..params(tol)
        },
        hypotheses: vec![
            Hypothesis::sampled("f(0) = g(0)", true),
            Hypothesis::asserted("f subordinate to g on the slice"),
        ],
        skipped_truncation: 0,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubordinationCertificate {
    pub w_intrinsic: bool,
    /// Largest sampled `|w(q)|`.
    pub max_w_norm: f64,
    /// Largest sampled `|w(q)| - |q|`; only bounded for intrinsic `w`.
    pub max_schwarz_excess: f64,
    pub points_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subordinate {
    pub series: TruncatedSeries,
    pub certificate: SubordinationCertificate,
}

/// `f = g ⦁ w` after sampling `|w(q)| < 1` on the grid and, for intrinsic
/// `w`, the Schwarz bound `|w(q)| <= |q| + tol`.
pub fn build_subordinate(
    g: &TruncatedSeries,
    w: &TruncatedSeries,
    grid: &SampleGrid,
    tol: f64,
) -> Result<Subordinate, VerifyError> {
    if w.coeff(0).norm() > COEFF_EPS {
        return Err(SeriesError::NonzeroConstantTerm(w.coeff(0)).into());
    }
    let w_intrinsic = classify(w) == Classification::Intrinsic;
    let points = grid.points();
    let values: Vec<(Quaternion, f64)> = points.par_iter().map(|&q| (q, w.evaluate(q).norm())).collect();
    let mut max_w_norm = 0.0_f64;
    let mut max_excess = f64::NEG_INFINITY;
    for &(q, v) in &values {
        if v >= 1.0 {
            return Err(VerifyError::SchwarzViolation { point: q, value: v, bound: 1.0 });
        }
        if w_intrinsic && v > q.norm() + tol {
            return Err(VerifyError::SchwarzViolation { point: q, value: v, bound: q.norm() });
        }
        max_w_norm = max_w_norm.max(v);
        max_excess = max_excess.max(v - q.norm());
    }
    Ok(Subordinate {
        series: bullet_compose(g, w)?,
        certificate: SubordinationCertificate {
            w_intrinsic,
            max_w_norm,
            max_schwarz_excess: max_excess,
            points_checked: values.len(),
        },
    })
}

/// At `samples` real points `t` spread evenly inside `(-delta, delta)`:
/// `|d_s f(t)| <= sqrt 2 / (1 - t^2)` and
/// `|-2t d_s f(t) + (1 - t^2) d_s^2 f(t)| <= 1 / (1 - t^2)`.
pub fn t_transform_bounds(f: &TruncatedSeries, delta: f64, samples: usize, tol: f64) -> Result<BoundReport, VerifyError> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(VerifyError::ParameterOutOfRange { name: "delta", value: delta, range: "(0, 1)" });
    }
    if samples == 0 {
        return Err(VerifyError::ParameterOutOfRange { name: "samples", value: 0.0, range: "[1, inf)" });
    }
    let df = slice_derivative(f);
    let d2f = slice_derivative(&df);
    let mut slack = Slack::new();
    for k in 0..samples {
        let t = -delta + 2.0 * delta * (k + 1) as f64 / (samples + 1) as f64;
        let q = Quaternion::real(t);
        let d1 = df.evaluate(q);
        let d2 = d2f.evaluate(q);
        let s = 1.0 - t * t;
        slack.push(SQRT_2 / s - d1.norm(), q, None);
        slack.push(1.0 / s - (d1.scale(-2.0 * t) + d2.scale(s)).norm(), q, None);
    }
    slack.count /= 2;
    finish(ReportParts {
        kind: BoundKind::TTransform,
        slack,
        parameters: BoundParameters { delta: Some(delta), samples: Some(samples), ..params(tol) },
        hypotheses: vec![Hypothesis::asserted("univalent splittings of f composed with T_t")],
        skipped_truncation: 0,
        checks: Vec::new(),
    })
}
