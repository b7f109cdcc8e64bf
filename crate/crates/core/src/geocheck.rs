//! Pointwise predicates sampled over the unit ball.
//!
//! A [`SampleGrid`] places `angles_per_circle` points on circles of the given
//! radii in every sampled slice `C_I`. Checks evaluate one real quantity per
//! point and report its minimum together with the point attaining it.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quat::{embed_slice, polar_form, Quaternion, UnitImaginary};
use crate::series::{slice_derivative, star_inverse, star_mul, SeriesError, TruncatedSeries};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const SINGULAR_EPS: f64 = 1e-10;
/// Points whose estimated truncation tail exceeds this are skipped.
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-6;
pub const DEFAULT_RADII: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
pub const DEFAULT_ANGLES: usize = 64;
pub const DEFAULT_UNITS: usize = 8;
pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_SEPARATION: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeoError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("series must satisfy a_0 = 0 and a_1 = 1")]
    NotNormalized,
    #[error("no grid point could be checked ({skipped_singular} singular, {skipped_truncation} beyond truncation)")]
    NoPointsChecked { skipped_singular: usize, skipped_truncation: usize },
    #[error("spiral angle {0} must lie in (-pi/2, pi/2)")]
    GammaOutOfRange(f64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Serializable description of a grid; units are regenerated from the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radii: Vec<f64>,
    pub angles_per_circle: usize,
    pub unit_count: usize,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            radii: DEFAULT_RADII.to_vec(),
            angles_per_circle: DEFAULT_ANGLES,
            unit_count: DEFAULT_UNITS,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridSpec", into = "GridSpec")]
pub struct SampleGrid {
    radii: Vec<f64>,
    angles_per_circle: usize,
    units: Vec<UnitImaginary>,
    seed: u64,
}

impl From<SampleGrid> for GridSpec {
    fn from(g: SampleGrid) -> Self {
        GridSpec {
            unit_count: g.units.len(),
            radii: g.radii,
            angles_per_circle: g.angles_per_circle,
            seed: g.seed,
        }
    }
}

impl TryFrom<GridSpec> for SampleGrid {
    type Error = GeoError;

    fn try_from(spec: GridSpec) -> Result<Self, GeoError> {
        SampleGrid::new(spec.radii, spec.angles_per_circle, spec.unit_count, spec.seed)
    }
}

impl Default for SampleGrid {
    fn default() -> Self {
        SampleGrid::try_from(GridSpec::default()).expect("default grid is valid")
    }
}

impl SampleGrid {
    /// The first four units are `i, j, k, (i+j+k)/sqrt 3`; the rest are
    /// uniform on the sphere, drawn from a ChaCha stream seeded by `seed`.
    pub fn new(radii: Vec<f64>, angles_per_circle: usize, unit_count: usize, seed: u64) -> Result<Self, GeoError> {
        if radii.is_empty() {
            return Err(GeoError::InvalidGrid("no radii".into()));
        }
        if let Some(r) = radii.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
            return Err(GeoError::InvalidGrid(format!("radius {r} not in (0, 1)")));
        }
        if angles_per_circle == 0 {
            return Err(GeoError::InvalidGrid("angles_per_circle must be positive".into()));
        }
        if unit_count < 4 {
            return Err(GeoError::InvalidGrid(format!("unit_count {unit_count} below the 4 fixed units")));
        }
        let diag = UnitImaginary::normalized(1.0, 1.0, 1.0).expect("nonzero");
        let mut units = vec![UnitImaginary::I, UnitImaginary::J, UnitImaginary::K, diag];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while units.len() < unit_count {
            let z: f64 = rng.gen_range(-1.0..=1.0);
            let phi: f64 = rng.gen_range(0.0..2.0 * PI);
            let rho = (1.0 - z * z).max(0.0).sqrt();
            if let Ok(u) = UnitImaginary::normalized(rho * phi.cos(), rho * phi.sin(), z) {
                units.push(u);
            }
        }
        Ok(Self { radii, angles_per_circle, units, seed })
    }

    pub fn with_units(mut self, units: Vec<UnitImaginary>) -> Result<Self, GeoError> {
        if units.is_empty() {
            return Err(GeoError::InvalidGrid("no units".into()));
        }
        self.units = units;
        Ok(self)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angles_per_circle(&self) -> usize {
        self.angles_per_circle
    }

    pub fn units(&self) -> &[UnitImaginary] {
        &self.units
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn spec(&self) -> GridSpec {
        self.clone().into()
    }

    /// Grid points `r e^{I theta}` on one slice, radius-major.
    pub fn slice_points(&self, unit: UnitImaginary) -> Vec<(f64, Quaternion)> {
        let n = self.angles_per_circle;
        self.radii
            .iter()
            .flat_map(|&r| {
                (0..n).map(move |k| {
                    let theta = 2.0 * PI * k as f64 / n as f64;
                    (r, embed_slice(r * theta.cos(), r * theta.sin(), unit))
                })
            })
            .collect()
    }

    /// All grid points, unit-major.
    pub fn points(&self) -> Vec<Quaternion> {
        self.units.iter().flat_map(|&u| self.slice_points(u).into_iter().map(|(_, q)| q)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpiralParamsRaw")]
pub struct SpiralParams {
    gamma: f64,
}

#[derive(Deserialize)]
struct SpiralParamsRaw {
    gamma: f64,
}

impl TryFrom<SpiralParamsRaw> for SpiralParams {
    type Error = GeoError;

    fn try_from(raw: SpiralParamsRaw) -> Result<Self, GeoError> {
        SpiralParams::new(raw.gamma)
    }
}

impl SpiralParams {
    pub fn new(gamma: f64) -> Result<Self, GeoError> {
        if gamma.abs() < FRAC_PI_2 {
            Ok(Self { gamma })
        } else {
            Err(GeoError::GammaOutOfRange(gamma))
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Condition {
    /// `Re d_s f(q)`.
    PositiveDerivRealPart,
    /// `Re[f(q)^{-1} q d_s f(q)]`.
    SliceStarlike,
    /// `Re[(d_s f(q))^{-1} q d_s^2 f(q)] + 1`.
    SliceConvex,
    /// `Re[e^{-I gamma} q d_s f(q) f(q)^{-1}]` on the slice `C_I` of `q`.
    Spirallike(SpiralParams),
    /// `pi/2 - |arg d_s f(q)|`.
    BoundedRotation,
    /// `Re h(q)` with `h = d_s f * (f/q)^{-*}`.
    PClassRatio,
    /// `min |f(p) - f(q)| - separation/2` over well-separated pairs on one slice.
    Injectivity { unit: UnitImaginary, separation: f64 },
}

impl Condition {
    pub fn name(&self) -> &'static str {
        match self {
            Condition::PositiveDerivRealPart => "positive-deriv-real-part",
            Condition::SliceStarlike => "slice-starlike",
            Condition::SliceConvex => "slice-convex",
            Condition::Spirallike(_) => "spirallike",
            Condition::BoundedRotation => "bounded-rotation",
            Condition::PClassRatio => "p-class-ratio",
            Condition::Injectivity { .. } => "injectivity",
        }
    }

    fn needs_normalized(&self) -> bool {
        matches!(
            self,
            Condition::SliceStarlike | Condition::SliceConvex | Condition::Spirallike(_) | Condition::PClassRatio
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub tol: f64,
    pub singular_eps: f64,
    pub truncation_tol: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, singular_eps: SINGULAR_EPS, truncation_tol: DEFAULT_TRUNCATION_TOL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceMargin {
    pub unit: UnitImaginary,
    pub worst_margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub passed: bool,
    pub worst_margin: f64,
    pub witness: Quaternion,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_pair: Option<[Quaternion; 2]>,
    pub points_checked: usize,
    pub skipped_singular: usize,
    pub skipped_truncation: usize,
    pub tolerance: f64,
    pub slice_margins: Vec<SliceMargin>,
}

enum Sample {
    Value(f64),
    Singular,
    Truncated,
}

struct Evaluator {
    cond: Condition,
    f: TruncatedSeries,
    df: TruncatedSeries,
    d2f: TruncatedSeries,
    h: Option<TruncatedSeries>,
    opts: CheckOptions,
}

impl Evaluator {
    fn new(f: &TruncatedSeries, cond: Condition, opts: CheckOptions) -> Result<Self, GeoError> {
        if cond.needs_normalized() && !f.is_normalized() {
            return Err(GeoError::NotNormalized);
        }
        let df = slice_derivative(f);
        let d2f = slice_derivative(&df);
        let h = match cond {
            Condition::PClassRatio => Some(star_mul(&df, &star_inverse(&f.shift_down(1))?)),
            _ => None,
        };
        Ok(Self { cond, f: f.clone(), df, d2f, h, opts })
    }

    fn tail(&self, r: f64) -> f64 {
        let series: &[&TruncatedSeries] = match self.cond {
            Condition::PositiveDerivRealPart | Condition::BoundedRotation => &[&self.df],
            Condition::SliceStarlike | Condition::Spirallike(_) => &[&self.f, &self.df],
            Condition::SliceConvex => &[&self.df, &self.d2f],
            Condition::PClassRatio => &[self.h.as_ref().expect("built for this condition")],
            Condition::Injectivity { .. } => &[&self.f],
        };
        series.iter().map(|s| s.tail_estimate(r)).fold(0.0, f64::max)
    }

    fn sample(&self, r: f64, q: Quaternion, unit: UnitImaginary) -> Sample {
        if self.tail(r) > self.opts.truncation_tol {
            return Sample::Truncated;
        }
        let eps = self.opts.singular_eps;
        let inv = |v: Quaternion| v.try_inv_eps(eps).ok();
        let value = match self.cond {
            Condition::PositiveDerivRealPart => Some(self.df.evaluate(q).w),
            Condition::SliceStarlike => {
                inv(self.f.evaluate(q)).map(|fi| fi.re_mul(q * self.df.evaluate(q)))
            }
            Condition::Spirallike(p) => inv(self.f.evaluate(q)).map(|fi| {
                let qdf = q * self.df.evaluate(q);
                let rotated = if p.gamma == 0.0 { qdf } else { unit.exp(-p.gamma) * qdf };
                rotated.re_mul(fi)
            }),
            Condition::SliceConvex => {
                inv(self.df.evaluate(q)).map(|di| di.re_mul(q * self.d2f.evaluate(q)) + 1.0)
            }
            Condition::BoundedRotation => polar_form(self.df.evaluate(q))
                .ok()
                .filter(|p| p.r > eps)
                .map(|p| FRAC_PI_2 - p.a),
            Condition::PClassRatio => Some(self.h.as_ref().expect("built").evaluate(q).w),
            Condition::Injectivity { .. } => unreachable!("handled by check_injectivity_slice"),
        };
        value.map_or(Sample::Singular, Sample::Value)
    }
}

struct Worst {
    margin: f64,
    witness: Quaternion,
    checked: usize,
    singular: usize,
    truncated: usize,
}

impl Worst {
    fn empty() -> Self {
        Self { margin: f64::INFINITY, witness: Quaternion::ZERO, checked: 0, singular: 0, truncated: 0 }
    }

    fn merge(&mut self, other: &Worst) {
        if other.margin < self.margin {
            self.margin = other.margin;
            self.witness = other.witness;
        }
        self.checked += other.checked;
        self.singular += other.singular;
        self.truncated += other.truncated;
    }
}

pub fn check_condition(
    f: &TruncatedSeries,
    cond: Condition,
    grid: &SampleGrid,
    tol: f64,
) -> Result<ConditionReport, GeoError> {
    check_condition_with(f, cond, grid, CheckOptions { tol, ..CheckOptions::default() })
}

pub fn check_condition_with(
    f: &TruncatedSeries,
    cond: Condition,
    grid: &SampleGrid,
    opts: CheckOptions,
) -> Result<ConditionReport, GeoError> {
    if let Condition::Injectivity { unit, separation } = cond {
        let mut report = check_injectivity_slice(f, unit, grid, separation)?;
        report.tolerance = opts.tol;
        return Ok(report);
    }
    let eval = Evaluator::new(f, cond, opts)?;
    let per_slice: Vec<Worst> = grid
        .units()
        .par_iter()
        .map(|&unit| {
            let mut w = Worst::empty();
            for (r, q) in grid.slice_points(unit) {
                match eval.sample(r, q, unit) {
                    Sample::Value(m) => {
                        w.checked += 1;
                        if m < w.margin {
                            w.margin = m;
                            w.witness = q;
                        }
                    }
                    Sample::Singular => w.singular += 1,
                    Sample::Truncated => w.truncated += 1,
                }
            }
            w
        })
        .collect();
    let mut total = Worst::empty();
    for w in &per_slice {
        total.merge(w);
    }
    if total.checked == 0 {
        return Err(GeoError::NoPointsChecked {
            skipped_singular: total.singular,
            skipped_truncation: total.truncated,
        });
    }
    let slice_margins = grid
        .units()
        .iter()
        .zip(&per_slice)
        .map(|(&unit, w)| SliceMargin { unit, worst_margin: (w.checked > 0).then_some(w.margin) })
        .collect();
    Ok(ConditionReport {
        condition: cond,
        passed: total.margin > opts.tol,
        worst_margin: total.margin,
        witness: total.witness,
        witness_pair: None,
        points_checked: total.checked,
        skipped_singular: total.singular,
        skipped_truncation: total.truncated,
        tolerance: opts.tol,
        slice_margins,
    })
}

/// Necessary condition for injectivity on `C_I`: every pair of grid points
/// farther apart than `separation` must have images at least `separation / 2`
/// apart. The margin is the smallest `|f(p) - f(q)| - separation / 2`.
/// The series is taken as the polynomial it stores; no truncation guard.
pub fn check_injectivity_slice(
    f: &TruncatedSeries,
    unit: UnitImaginary,
    grid: &SampleGrid,
    separation: f64,
) -> Result<ConditionReport, GeoError> {
    let pts: Vec<(Quaternion, Quaternion)> =
        grid.slice_points(unit).into_iter().map(|(_, q)| (q, f.evaluate(q))).collect();
    if pts.len() < 2 {
        return Err(GeoError::NoPointsChecked { skipped_singular: 0, skipped_truncation: 0 });
    }
    let half = 0.5 * separation;
    let rows: Vec<(f64, usize, usize)> = (0..pts.len())
        .into_par_iter()
        .map(|a| {
            let mut best = (f64::INFINITY, a, a);
            for b in (a + 1)..pts.len() {
                if pts[a].0.distance(pts[b].0) <= separation {
                    continue;
                }
                let m = pts[a].1.distance(pts[b].1) - half;
                if m < best.0 {
                    best = (m, a, b);
                }
            }
            best
        })
        .collect();
    let mut best = (f64::INFINITY, 0, 0);
    for row in rows {
        if row.0 < best.0 {
            best = row;
        }
    }
    let (margin, a, b) = best;
    Ok(ConditionReport {
        condition: Condition::Injectivity { unit, separation },
        passed: margin > 0.0,
        worst_margin: margin,
        witness: pts[a].0,
        witness_pair: (margin <= 0.0).then_some([pts[a].0, pts[b].0]),
        points_checked: pts.len(),
        skipped_singular: 0,
        skipped_truncation: 0,
        tolerance: 0.0,
        slice_margins: vec![SliceMargin { unit, worst_margin: Some(margin) }],
    })
}

/// `A(t) (cos B(t) + i sin B(t)) w0` with `A(t) = e^{-t cos gamma}` and
/// `B(t) = t sin gamma`.
pub fn spiral_curve(params: SpiralParams, w0: Quaternion, t: f64) -> Quaternion {
    let a = (-t * params.gamma.cos()).exp();
    let b = t * params.gamma.sin();
    (UnitImaginary::I.exp(b) * w0).scale(a)
}
