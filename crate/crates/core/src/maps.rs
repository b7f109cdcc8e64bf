//! Named series (Koebe, Carathéodory extremals, Möbius maps) and the
//! operators that keep normalized functions normalized.

use thiserror::Error;

use crate::quat::{Quaternion, UnitImaginary};
use crate::series::{
    classify, star_inverse, star_mul, Classification, SeriesError, TruncatedSeries, COEFF_EPS,
};

/// Tolerance on `|u| = 1` for [`rotate_conjugate`].
pub const ROTOR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("rotor must have unit norm, got {0}")]
    NonUnitRotor(f64),
    #[error("parameter {name} = {value} is outside {range}")]
    ParameterOutOfRange { name: &'static str, value: f64, range: &'static str },
    #[error("series must satisfy a_0 = 0 and a_1 = 1")]
    NotNormalized,
    #[error("series must have real coefficients")]
    NotIntrinsic,
    #[error("value {value} lies within {distance} of the image at {point}")]
    ValueInImage { value: f64, point: Quaternion, distance: f64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn require_normalized(f: &TruncatedSeries) -> Result<(), MapError> {
    if f.is_normalized() {
        Ok(())
    } else {
        Err(MapError::NotNormalized)
    }
}

fn require_intrinsic(f: &TruncatedSeries) -> Result<(), MapError> {
    match classify(f) {
        Classification::Intrinsic => Ok(()),
        _ => Err(MapError::NotIntrinsic),
    }
}

/// `K(q) = sum n q^n`.
pub fn koebe(degree: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(degree, |n| Quaternion::real(n as f64))
}

/// `q + sum_{n>=2} q^n 2 e^{I (n-1) theta} / n`.
pub fn caratheodory_extremal(theta: f64, unit: UnitImaginary, degree: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(degree, |n| match n {
        0 => Quaternion::ZERO,
        1 => Quaternion::ONE,
        _ => unit.exp((n - 1) as f64 * theta).scale(2.0 / n as f64),
    })
}

/// Coefficients of `r^{-1} f(r q)`: `a_n r^(n-1)`.
pub fn dilation(f: &TruncatedSeries, r: f64) -> Result<TruncatedSeries, MapError> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(MapError::ParameterOutOfRange { name: "r", value: r, range: "(0, 1]" });
    }
    Ok(f.map_coeffs(|n, c| c.scale(r.powi(n as i32 - 1))))
}

/// Coefficients `u a_n conj(u)` for a unit quaternion `u`.
pub fn rotate_conjugate(f: &TruncatedSeries, u: Quaternion) -> Result<TruncatedSeries, MapError> {
    let norm = u.norm();
    if (norm - 1.0).abs() > ROTOR_TOL {
        return Err(MapError::NonUnitRotor(norm));
    }
    let uc = u.conj();
    Ok(f.map_coeffs(|_, c| u * c * uc))
}

/// `e^{-I phi} f(e^{I phi} q)`. Not a left power series in general, so it is
/// evaluated pointwise.
pub fn rotation_eval(f: &TruncatedSeries, phi: f64, unit: UnitImaginary, q: Quaternion) -> Quaternion {
    unit.exp(-phi) * f.evaluate(unit.exp(phi) * q)
}

/// `T_t(q) = (q + t)(1 + t q)^{-1}`: `a_0 = t`, `a_n = (1 - t^2)(-t)^(n-1)`.
pub fn mobius_series(t: f64, degree: usize) -> Result<TruncatedSeries, MapError> {
    if t.is_nan() || t.abs() >= 1.0 {
        return Err(MapError::ParameterOutOfRange { name: "t", value: t, range: "(-1, 1)" });
    }
    Ok(TruncatedSeries::from_fn(degree, |n| {
        if n == 0 {
            Quaternion::real(t)
        } else {
            Quaternion::real((1.0 - t * t) * (-t).powi(n as i32 - 1))
        }
    }))
}

/// `A(f)(q) = int_0^q f(t) / t dt`: coefficients `a_k / k`.
pub fn alexander_op(f: &TruncatedSeries) -> Result<TruncatedSeries, MapError> {
    require_normalized(f)?;
    Ok(f.map_coeffs(|k, c| if k == 0 { Quaternion::ZERO } else { c / k as f64 }))
}

/// `L(f)(q) = 2 q^{-1} int_0^q f(t) dt`: coefficients `2 a_k / (k + 1)`.
pub fn libera_op(f: &TruncatedSeries) -> Result<TruncatedSeries, MapError> {
    require_normalized(f)?;
    Ok(f.map_coeffs(|k, c| match k {
        0 => Quaternion::ZERO,
        1 => Quaternion::ONE,
        _ => c.scale(2.0) / (k + 1) as f64,
    }))
}

/// `(q d/dq) f`: coefficients `n a_n`.
pub fn q_times_derivative(f: &TruncatedSeries) -> TruncatedSeries {
    f.map_coeffs(|n, c| c.scale(n as f64))
}

/// `g = (f a) * (a - f)^{-*}` for intrinsic `f` with `f(0) = 0`.
///
/// `a` must stay off the image of `f`; this is not checked here, see
/// [`ratio_transform_checked`].
pub fn ratio_transform(f: &TruncatedSeries, a: f64) -> Result<TruncatedSeries, MapError> {
    require_intrinsic(f)?;
    if f.coeff(0).norm() > COEFF_EPS {
        return Err(SeriesError::NonzeroConstantTerm(f.coeff(0)).into());
    }
    let aq = Quaternion::real(a);
    let denom = TruncatedSeries::constant(aq, f.degree()).sub(f);
    let inv = star_inverse(&denom)?;
    Ok(star_mul(&f.mul_right(aq), &inv))
}

/// [`ratio_transform`] after confirming that `a` stays at least `min_distance`
/// away from `f` on the given sample points.
pub fn ratio_transform_checked(
    f: &TruncatedSeries,
    a: f64,
    points: &[Quaternion],
    min_distance: f64,
) -> Result<TruncatedSeries, MapError> {
    let aq = Quaternion::real(a);
    for &p in points {
        let d = (f.evaluate(p) - aq).norm();
        if d <= min_distance {
            return Err(MapError::ValueInImage { value: a, point: p, distance: d });
        }
    }
    ratio_transform(f, a)
}

/// Odd square root `g(q) = sqrt(f(q^2)) = q + b_3 q^3 + ...` of a normalized
/// intrinsic `f`.
///
/// With `f(q) = q c(q)`, `c = 1 + a_2 q + a_3 q^2 + ...`, the star root `s`
/// of `c` with `s_0 = 1` satisfies `s_n = (c_n - sum_{k=1}^{n-1} s_k s_{n-k}) / 2`,
/// and `g_{2m+1} = s_m`.
pub fn odd_sqrt_transform(f: &TruncatedSeries) -> Result<TruncatedSeries, MapError> {
    require_normalized(f)?;
    require_intrinsic(f)?;
    let deg = f.degree();
    let half = (deg - 1) / 2;
    let mut s = vec![Quaternion::ZERO; half + 1];
    s[0] = Quaternion::ONE;
    for n in 1..=half {
        let cross: Quaternion = (1..n).map(|k| s[k] * s[n - k]).sum();
        s[n] = (f.coeff(n + 1) - cross).scale(0.5);
    }
    Ok(TruncatedSeries::from_fn(deg, |n| {
        if n % 2 == 1 {
            s[(n - 1) / 2]
        } else {
            Quaternion::ZERO
        }
    }))
}

/// `f(q^2)` truncated at the degree of `f`.
pub fn substitute_square(f: &TruncatedSeries) -> TruncatedSeries {
    TruncatedSeries::from_fn(f.degree(), |n| if n % 2 == 0 { f.coeff(n / 2) } else { Quaternion::ZERO })
}
