//! Truncated left power series `sum q^n a_n` with quaternionic coefficients
//! written on the right.
//!
//! Every series carries an explicit truncation degree `N`; all identities
//! computed here hold modulo `q^(N+1)`. The `*`-product is the coefficient
//! convolution, and `g ⦁ w = sum (w^{*n}) a_n` is the composition that keeps
//! the result a left power series.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quat::{embed_slice, Quaternion, UnitImaginary, REAL_EPS};

/// Threshold under which a coefficient counts as zero.
pub const COEFF_EPS: f64 = 1e-12;
/// Threshold under which a leading coefficient counts as non-invertible.
pub const INVERT_EPS: f64 = 1e-12;
/// Default truncation degree.
pub const DEFAULT_DEGREE: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("series needs at least one coefficient")]
    Empty,
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
    #[error("declared degree {declared} does not match {count} coefficients")]
    DegreeMismatch { declared: usize, count: usize },
    #[error("constant term {0} is not invertible")]
    NonInvertibleConstantTerm(Quaternion),
    #[error("inner series must vanish at the origin, found constant term {0}")]
    NonzeroConstantTerm(Quaternion),
    #[error("compositional inverse needs a_0 = 0 and invertible a_1 (a_0 = {a0}, a_1 = {a1})")]
    NotNormalizable { a0: Quaternion, a1: Quaternion },
    #[error("units are not orthogonal: <I, J> = {0}")]
    NonOrthogonalUnits(f64),
    #[error("degree {0} is too small for this operation")]
    DegreeTooSmall(usize),
}

/// Order of a series: index of its first nonzero coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Order {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    /// All coefficients real: the series maps every slice into itself.
    Intrinsic,
    /// All coefficients in one plane `C_I`.
    SlicePreserving(UnitImaginary),
    General,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Intrinsic => write!(f, "intrinsic"),
            Classification::SlicePreserving(u) => {
                let [x, y, z] = u.components();
                write!(f, "slice-preserving [{x}, {y}, {z}]")
            }
            Classification::General => write!(f, "general"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesJson", into = "SeriesJson")]
pub struct TruncatedSeries {
    coeffs: Vec<Quaternion>,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    degree: usize,
    coeffs: Vec<Quaternion>,
}

impl TryFrom<SeriesJson> for TruncatedSeries {
    type Error = SeriesError;

    fn try_from(raw: SeriesJson) -> Result<Self, SeriesError> {
        if raw.coeffs.len() != raw.degree + 1 {
            return Err(SeriesError::DegreeMismatch {
                declared: raw.degree,
                count: raw.coeffs.len(),
            });
        }
        TruncatedSeries::new(raw.coeffs)
    }
}

impl From<TruncatedSeries> for SeriesJson {
    fn from(s: TruncatedSeries) -> Self {
        SeriesJson { degree: s.degree(), coeffs: s.coeffs }
    }
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Quaternion>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(SeriesError::NonFinite { index });
        }
        Ok(Self { coeffs })
    }

    /// Series with real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Result<Self, SeriesError> {
        Self::new(coeffs.iter().map(|&c| Quaternion::real(c)).collect())
    }

    /// Builds coefficients `0..=degree` from a generator.
    pub fn from_fn(degree: usize, f: impl FnMut(usize) -> Quaternion) -> Self {
        let coeffs: Vec<Quaternion> = (0..=degree).map(f).collect();
        Self::new(coeffs).expect("generator produced a non-finite coefficient")
    }

    pub fn zero(degree: usize) -> Self {
        Self { coeffs: vec![Quaternion::ZERO; degree + 1] }
    }

    pub fn constant(c: Quaternion, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.coeffs[0] = c;
        s
    }

    pub fn one(degree: usize) -> Self {
        Self::constant(Quaternion::ONE, degree)
    }

    /// The identity series `q`.
    pub fn identity(degree: usize) -> Self {
        Self::monomial(1, Quaternion::ONE, degree)
    }

    /// `q^n a`, truncated (to zero) when `n > degree`.
    pub fn monomial(n: usize, a: Quaternion, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        if n <= degree {
            s.coeffs[n] = a;
        }
        s
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Quaternion> {
        self.coeffs
    }

    /// Coefficient `a_n`, zero beyond the truncation degree.
    #[inline]
    pub fn coeff(&self, n: usize) -> Quaternion {
        self.coeffs.get(n).copied().unwrap_or(Quaternion::ZERO)
    }

    /// Same series padded with zeros or truncated to `degree`.
    pub fn with_degree(&self, degree: usize) -> Self {
        Self::from_fn(degree, |n| self.coeff(n))
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(usize, Quaternion) -> Quaternion) -> Self {
        Self::from_fn(self.degree(), |n| f(n, self.coeffs[n]))
    }

    pub fn add(&self, other: &Self) -> Self {
        let deg = self.degree().max(other.degree());
        Self::from_fn(deg, |n| self.coeff(n) + other.coeff(n))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let deg = self.degree().max(other.degree());
        Self::from_fn(deg, |n| self.coeff(n) - other.coeff(n))
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|_, c| -c)
    }

    /// `f(q) a`: every coefficient multiplied by `a` on the right.
    pub fn mul_right(&self, a: Quaternion) -> Self {
        self.map_coeffs(|_, c| c * a)
    }

    /// Coefficients multiplied by `a` on the left. For non-real `a` this is
    /// not `a f(q)` pointwise.
    pub fn mul_left(&self, a: Quaternion) -> Self {
        self.map_coeffs(|_, c| a * c)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_coeffs(|_, c| c.scale(s))
    }

    /// Multiplication by `q^k`, keeping the degree.
    pub fn shift_up(&self, k: usize) -> Self {
        Self::from_fn(self.degree(), |n| if n >= k { self.coeff(n - k) } else { Quaternion::ZERO })
    }

    /// Division by `q^k`; the first `k` coefficients must be negligible.
    pub fn shift_down(&self, k: usize) -> Self {
        let deg = self.degree().saturating_sub(k);
        Self::from_fn(deg, |n| self.coeff(n + k))
    }

    /// Largest coefficient-wise distance to `other` over the common range.
    pub fn max_coeff_distance(&self, other: &Self) -> f64 {
        let deg = self.degree().max(other.degree());
        (0..=deg)
            .map(|n| (self.coeff(n) - other.coeff(n)).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_intrinsic(&self) -> bool {
        matches!(classify(self), Classification::Intrinsic)
    }

    /// `a_0 = 0` and `a_1 = 1` within [`COEFF_EPS`].
    pub fn is_normalized(&self) -> bool {
        self.degree() >= 1
            && self.coeff(0).norm() <= COEFF_EPS
            && (self.coeff(1) - Quaternion::ONE).norm() <= COEFF_EPS
    }

    pub fn evaluate(&self, q: Quaternion) -> Quaternion {
        evaluate(self, q)
    }

    /// Estimate of the omitted tail `sum_{n>N} q^n a_n` at `|q| = r` under a
    /// geometric majorant built from the last two coefficients:
    /// `max(|a_{N-1}|, |a_N|) r^(N+1) / (1 - r)`. Using two coefficients keeps
    /// odd and even series from looking exact.
    pub fn tail_estimate(&self, r: f64) -> f64 {
        if r >= 1.0 {
            return f64::INFINITY;
        }
        let n = self.degree();
        let last = self.coeff(n).norm().max(if n > 0 { self.coeff(n - 1).norm() } else { 0.0 });
        if last == 0.0 {
            return 0.0;
        }
        last * r.powi(n as i32 + 1) / (1.0 - r)
    }

    /// One coefficient per row: `n,w,x,y,z`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,w,x,y,z\n");
        for (n, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{n},{},{},{},{}\n", c.w, c.x, c.y, c.z));
        }
        out
    }
}

/// `*`-product truncated at `degree`: `c_n = sum_{r=0}^n a_r b_{n-r}`.
pub fn star_mul_to(f: &TruncatedSeries, g: &TruncatedSeries, degree: usize) -> TruncatedSeries {
    let mut out = vec![Quaternion::ZERO; degree + 1];
    for (r, &a) in f.coeffs().iter().enumerate().take(degree + 1) {
        if a == Quaternion::ZERO {
            continue;
        }
        for (s, &b) in g.coeffs().iter().enumerate().take(degree + 1 - r) {
            out[r + s] += a * b;
        }
    }
    TruncatedSeries { coeffs: out }
}

/// `*`-product at the larger of the two truncation degrees.
pub fn star_mul(f: &TruncatedSeries, g: &TruncatedSeries) -> TruncatedSeries {
    star_mul_to(f, g, f.degree().max(g.degree()))
}

/// `f^{*n}`; `n = 0` gives the constant 1.
pub fn star_pow(f: &TruncatedSeries, n: usize) -> TruncatedSeries {
    let mut acc = TruncatedSeries::one(f.degree());
    for _ in 0..n {
        acc = star_mul(&acc, f);
    }
    acc
}

/// Reciprocal with respect to the `*`-product.
pub fn star_inverse(f: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    let a0 = f.coeff(0);
    let a0_inv = a0
        .try_inv_eps(INVERT_EPS)
        .map_err(|_| SeriesError::NonInvertibleConstantTerm(a0))?;
    let deg = f.degree();
    let mut b = vec![Quaternion::ZERO; deg + 1];
    b[0] = a0_inv;
    for n in 1..=deg {
        let acc: Quaternion = (1..=n).map(|r| f.coeff(r) * b[n - r]).sum();
        b[n] = -(a0_inv * acc);
    }
    Ok(TruncatedSeries { coeffs: b })
}

pub fn order(f: &TruncatedSeries) -> Order {
    order_eps(f, COEFF_EPS)
}

pub fn order_eps(f: &TruncatedSeries, eps: f64) -> Order {
    f.coeffs()
        .iter()
        .position(|c| c.norm() > eps)
        .map_or(Order::Infinite, Order::Finite)
}

fn require_vanishing_constant(w: &TruncatedSeries) -> Result<(), SeriesError> {
    let b0 = w.coeff(0);
    if b0.norm() > COEFF_EPS {
        return Err(SeriesError::NonzeroConstantTerm(b0));
    }
    Ok(())
}

/// `(g ⦁ w)(q) = sum_n (w(q))^{*n} a_n`, truncated at the larger degree.
///
/// Powers of `w` are accumulated incrementally; since `w^{*n}` has order at
/// least `n`, the sum stops once `n` exceeds the truncation degree.
pub fn bullet_compose(g: &TruncatedSeries, w: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    require_vanishing_constant(w)?;
    let deg = g.degree().max(w.degree());
    let w = w.with_degree(deg).map_coeffs(|n, c| if n == 0 { Quaternion::ZERO } else { c });
    let mut out = vec![Quaternion::ZERO; deg + 1];
    let mut power = TruncatedSeries::one(deg);
    for n in 0..=g.degree().min(deg) {
        if n > 0 {
            power = star_mul_to(&power, &w, deg);
        }
        let a = g.coeff(n);
        if a == Quaternion::ZERO {
            continue;
        }
        for (k, slot) in out.iter_mut().enumerate().skip(n) {
            *slot += power.coeff(k) * a;
        }
    }
    Ok(TruncatedSeries { coeffs: out })
}

/// Compositional inverse of `g` with respect to `⦁`.
///
/// `Side::Right` returns `h` with `g ⦁ h = q`; `Side::Left` returns `h` with
/// `h ⦁ g = q`. Both need `a_0 = 0` and `a_1` invertible. For intrinsic `g`
/// the two coincide and both use the right recursion, which divides by `a_1`
/// rather than `a_1^n` and loses fewer digits to cancellation.
pub fn bullet_inverse(g: &TruncatedSeries, side: Side) -> Result<TruncatedSeries, SeriesError> {
    let a0 = g.coeff(0);
    let a1 = g.coeff(1);
    if g.degree() < 1 || a0.norm() > COEFF_EPS || a1.norm() <= INVERT_EPS {
        return Err(SeriesError::NotNormalizable { a0, a1 });
    }
    let a1_inv = a1.try_inv_eps(INVERT_EPS).map_err(|_| SeriesError::NotNormalizable { a0, a1 })?;
    Ok(match side {
        Side::Right => right_bullet_inverse(g, a1_inv),
        Side::Left if g.is_intrinsic() => right_bullet_inverse(g, a1_inv),
        Side::Left => left_bullet_inverse(g),
    })
}

// Solves b_n a_1 + P_n(b_1..b_{n-1}, a_2..a_n) = [n == 1] one coefficient at
// a time. powers[k][m] holds coefficient m of h^{*k}; coefficient n of h^{*k}
// for k >= 2 only involves b_1..b_{n-1}, so the table is filled column-wise.
fn right_bullet_inverse(g: &TruncatedSeries, a1_inv: Quaternion) -> TruncatedSeries {
    let deg = g.degree();
    let mut powers = vec![vec![Quaternion::ZERO; deg + 1]; deg + 1];
    let mut b = vec![Quaternion::ZERO; deg + 1];
    for n in 1..=deg {
        let mut p_n = Quaternion::ZERO;
        for k in 2..=n {
            let mut c = Quaternion::ZERO;
            for m in (k - 1)..n {
                c += powers[k - 1][m] * b[n - m];
            }
            powers[k][n] = c;
            p_n += c * g.coeff(k);
        }
        let target = if n == 1 { Quaternion::ONE } else { Quaternion::ZERO };
        b[n] = (target - p_n) * a1_inv;
        powers[1][n] = b[n];
    }
    TruncatedSeries { coeffs: b }
}

// Solves sum_{k=1}^n [g^{*k}]_n b_k = [n == 1], using [g^{*n}]_n = a_1^n.
fn left_bullet_inverse(g: &TruncatedSeries) -> TruncatedSeries {
    let deg = g.degree();
    let g0 = g.map_coeffs(|n, c| if n == 0 { Quaternion::ZERO } else { c });
    let mut powers = Vec::with_capacity(deg + 1);
    powers.push(TruncatedSeries::one(deg));
    for k in 1..=deg {
        let next = star_mul_to(&powers[k - 1], &g0, deg);
        powers.push(next);
    }
    let mut b = vec![Quaternion::ZERO; deg + 1];
    for n in 1..=deg {
        let target = if n == 1 { Quaternion::ONE } else { Quaternion::ZERO };
        let acc: Quaternion = (1..n).map(|k| powers[k].coeff(n) * b[k]).sum();
        let lead_inv = powers[n]
            .coeff(n)
            .try_inv()
            .expect("a_1^n is invertible when a_1 is");
        b[n] = lead_inv * (target - acc);
    }
    TruncatedSeries { coeffs: b }
}

/// Termwise derivative: coefficient `n` is `(n+1) a_{n+1}`.
pub fn slice_derivative(f: &TruncatedSeries) -> TruncatedSeries {
    let deg = f.degree();
    if deg == 0 {
        return TruncatedSeries::zero(0);
    }
    TruncatedSeries::from_fn(deg - 1, |n| f.coeff(n + 1).scale((n + 1) as f64))
}

/// `sum q^n a_n` by accumulating powers of `q`; the coefficients stay on the
/// right, so Horner's scheme does not apply.
pub fn evaluate(f: &TruncatedSeries, q: Quaternion) -> Quaternion {
    let mut acc = f.coeff(0);
    let mut power = Quaternion::ONE;
    for &a in &f.coeffs()[1..] {
        power = power * q;
        acc += power * a;
    }
    acc
}

/// Value on slice `I` from the values at `x + Jy` and `x - Jy`:
/// `1/2 [f(x+Jy) + f(x-Jy)] + 1/2 I J [f(x-Jy) - f(x+Jy)]`.
pub fn representation_formula(
    f_plus: Quaternion,
    f_minus: Quaternion,
    unit_i: UnitImaginary,
    unit_j: UnitImaginary,
) -> Quaternion {
    let ij = unit_i.to_quaternion() * unit_j.to_quaternion();
    (f_plus + f_minus).scale(0.5) + (ij * (f_minus - f_plus)).scale(0.5)
}

/// Coefficients of the splitting `f|_{C_I} = F + G J` with `F`, `G` valued in
/// `C_I`. Each entry is a pair `(re, im)` meaning `re + im I`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitPair {
    pub unit_i: UnitImaginary,
    pub unit_j: UnitImaginary,
    pub f1_coeffs: Vec<(f64, f64)>,
    pub f2_coeffs: Vec<(f64, f64)>,
}

impl SplitPair {
    pub fn f1_quaternion(&self, n: usize) -> Quaternion {
        let (re, im) = self.f1_coeffs[n];
        embed_slice(re, im, self.unit_i)
    }

    pub fn f2_quaternion(&self, n: usize) -> Quaternion {
        let (re, im) = self.f2_coeffs[n];
        embed_slice(re, im, self.unit_i)
    }

    /// `a_{1,n} + a_{2,n} J`.
    pub fn recombine(&self, n: usize) -> Quaternion {
        self.f1_quaternion(n) + self.f2_quaternion(n) * self.unit_j.to_quaternion()
    }

    /// Value of `F(z)` at `z = x + I y`, as a complex number `(re, im)`.
    pub fn eval_f1(&self, x: f64, y: f64) -> (f64, f64) {
        eval_complex(&self.f1_coeffs, x, y)
    }

    pub fn eval_f2(&self, x: f64, y: f64) -> (f64, f64) {
        eval_complex(&self.f2_coeffs, x, y)
    }
}

fn eval_complex(coeffs: &[(f64, f64)], x: f64, y: f64) -> (f64, f64) {
    let (mut pr, mut pi) = (1.0, 0.0);
    let (mut sr, mut si) = (0.0, 0.0);
    for &(cr, ci) in coeffs {
        sr += pr * cr - pi * ci;
        si += pr * ci + pi * cr;
        let t = pr * x - pi * y;
        pi = pr * y + pi * x;
        pr = t;
    }
    (sr, si)
}

/// Orthogonality threshold for [`split_coefficients`].
pub const ORTHO_TOL: f64 = 1e-10;

/// Writes each `a_n = a_{1,n} + a_{2,n} J` with `a_{1,n}, a_{2,n}` in `C_I`.
pub fn split_coefficients(
    f: &TruncatedSeries,
    unit_i: UnitImaginary,
    unit_j: UnitImaginary,
) -> Result<SplitPair, SeriesError> {
    let d = unit_i.dot(unit_j);
    if d.abs() > ORTHO_TOL {
        return Err(SeriesError::NonOrthogonalUnits(d));
    }
    let i = unit_i.to_quaternion();
    let j = unit_j.to_quaternion();
    let k = i * j;
    // a = c0 + c1 I + c2 J + c3 IJ and (c2 + c3 I) J = c2 J + c3 IJ.
    let (f1, f2) = f
        .coeffs()
        .iter()
        .map(|&a| {
            let c0 = a.w;
            let c1 = a.dot(i);
            let c2 = a.dot(j);
            let c3 = a.dot(k);
            ((c0, c1), (c2, c3))
        })
        .unzip();
    Ok(SplitPair { unit_i, unit_j, f1_coeffs: f1, f2_coeffs: f2 })
}

/// Even and odd parts in `f(x + I y) = alpha(x, y) + I beta(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceDecomposition {
    pub alpha: Quaternion,
    pub beta: Quaternion,
}

/// With `(x + i y)^n = u_n + i v_n`, `alpha = sum u_n a_n` and
/// `beta = sum v_n a_n`; neither depends on the slice.
pub fn slice_decomposition(f: &TruncatedSeries, x: f64, y: f64) -> SliceDecomposition {
    let (mut u, mut v) = (1.0, 0.0);
    let mut alpha = Quaternion::ZERO;
    let mut beta = Quaternion::ZERO;
    for &a in f.coeffs() {
        alpha += a.scale(u);
        beta += a.scale(v);
        let t = u * x - v * y;
        v = u * y + v * x;
        u = t;
    }
    SliceDecomposition { alpha, beta }
}

pub fn classify(f: &TruncatedSeries) -> Classification {
    classify_eps(f, REAL_EPS)
}

pub fn classify_eps(f: &TruncatedSeries, eps: f64) -> Classification {
    let Some(first) = f.coeffs().iter().find(|c| c.vec_norm() > eps) else {
        return Classification::Intrinsic;
    };
    let unit = UnitImaginary::normalized(first.x, first.y, first.z)
        .expect("vector part above eps is nonzero");
    let [ux, uy, uz] = unit.components();
    let coplanar = f.coeffs().iter().all(|c| {
        let cross = [c.y * uz - c.z * uy, c.z * ux - c.x * uz, c.x * uy - c.y * ux];
        (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt() <= eps
    });
    if coplanar {
        Classification::SlicePreserving(unit)
    } else {
        Classification::General
    }
}

/// Bisection tolerance of [`composition_radius_bound`].
pub const RADIUS_BISECTION_TOL: f64 = 1e-6;
/// Largest acceptable tail estimate of the majorant.
pub const MAJORANT_TAIL_TOL: f64 = 1e-6;

/// Largest `r` in `(0, 1)` (to [`RADIUS_BISECTION_TOL`]) with
/// `sum_{n>=1} r^n |b_n| < g_radius`, where the sum runs to the truncation
/// degree plus the tail estimate `|b_N| r^(N+1) / (1 - r)`. Radii whose tail
/// estimate exceeds [`MAJORANT_TAIL_TOL`] are rejected as not trusted.
/// Returns 0 when no radius qualifies.
pub fn composition_radius_bound(g_radius: f64, w: &TruncatedSeries) -> Result<f64, SeriesError> {
    require_vanishing_constant(w)?;
    let norms: Vec<f64> = w.coeffs().iter().map(|c| c.norm()).collect();
    let accepts = |r: f64| -> bool {
        if r >= 1.0 {
            return false;
        }
        let tail = w.tail_estimate(r);
        if tail > MAJORANT_TAIL_TOL {
            return false;
        }
        let mut p = 1.0;
        let mut sum = 0.0;
        for &b in &norms[1..] {
            p *= r;
            sum += p * b;
        }
        sum + tail < g_radius
    };
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    if !accepts(RADIUS_BISECTION_TOL) {
        return Ok(0.0);
    }
    while hi - lo > RADIUS_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if accepts(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Re-expands `f` about the real point `c`: the coefficients of `q -> f(c + q)`,
/// `b_k = sum_{n>=k} C(n, k) c^(n-k) a_n`, truncated at the same degree.
/// Composing with a real-coefficient series whose constant term is `c` then
/// reduces to `recenter(f, c) ⦁ (w - c)`.
pub fn recenter(f: &TruncatedSeries, c: f64) -> TruncatedSeries {
    let deg = f.degree();
    TruncatedSeries::from_fn(deg, |k| {
        let mut acc = Quaternion::ZERO;
        let mut binom = 1.0; // C(n, k) for n = k
        let mut cp = 1.0; // c^(n - k)
        for n in k..=deg {
            acc += f.coeff(n).scale(binom * cp);
            binom = binom * (n + 1) as f64 / (n + 1 - k) as f64;
            cp *= c;
        }
        acc
    })
}
