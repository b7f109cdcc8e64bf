//! Quaternion arithmetic, trigonometric form and slice-plane embedding.
//!
//! A quaternion `w + xi + yj + zk` is stored as four `f64` components. Every
//! other module in the crate builds on [`Quaternion`]; series coefficients,
//! evaluation points and function values are all quaternions.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Absolute threshold on the vector-part norm below which a quaternion is
/// treated as real, and on the full norm below which it is treated as zero.
pub const REAL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum QuatError {
    #[error("quaternion {0} is not invertible (norm below {1:e})")]
    ZeroDivision(Quaternion, f64),
    #[error("the zero quaternion has no trigonometric form")]
    ZeroArgument,
    #[error("vector ({0}, {1}, {2}) is not a unit imaginary")]
    NotUnit(f64, f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    #[inline]
    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Norm of the vector (imaginary) part.
    #[inline]
    pub fn vec_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Purely imaginary part `xi + yj + zk`.
    #[inline]
    pub fn vector(self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn is_real(self, eps: f64) -> bool {
        self.vec_norm() <= eps
    }

    /// Euclidean inner product in R^4.
    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// `Re(self * other)`. The expression is symmetric in its arguments, so
    /// `re_mul(a, b)` and `re_mul(b, a)` agree bit for bit.
    #[inline]
    pub fn re_mul(self, other: Self) -> f64 {
        self.w * other.w - self.x * other.x - self.y * other.y - self.z * other.z
    }

    #[inline]
    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    /// Inverse `conj(q) / |q|^2`, failing when `|q| < eps`.
    pub fn try_inv_eps(self, eps: f64) -> Result<Self, QuatError> {
        let n2 = self.norm_sqr();
        if n2.sqrt() < eps {
            return Err(QuatError::ZeroDivision(self, eps));
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    pub fn try_inv(self) -> Result<Self, QuatError> {
        self.try_inv_eps(REAL_EPS)
    }

    /// Non-negative integer power by repeated squaring.
    pub fn powi(self, n: u32) -> Self {
        let mut result = Quaternion::ONE;
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            base = base * base;
            e >>= 1;
        }
        result
    }

    /// Unit imaginary `I_q` of `q`; see [`unit_imaginary`].
    pub fn unit_imaginary(self) -> (UnitImaginary, bool) {
        unit_imaginary(self)
    }

    pub fn polar(self) -> Result<PolarForm, QuatError> {
        polar_form(self)
    }
}

/// Hamilton product of two quaternions.
#[inline]
pub fn qmul(a: Quaternion, b: Quaternion) -> Quaternion {
    Quaternion::new(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )
}

pub fn qinv(a: Quaternion) -> Result<Quaternion, QuatError> {
    a.try_inv()
}

impl Mul for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, rhs: Quaternion) -> Quaternion {
        qmul(self, rhs)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, rhs: f64) -> Quaternion {
        self.scale(rhs)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, rhs: Quaternion) -> Quaternion {
        rhs.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn div(self, rhs: f64) -> Quaternion {
        Quaternion::new(self.w / rhs, self.x / rhs, self.y / rhs, self.z / rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w + rhs.w, self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Add<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, rhs: f64) -> Quaternion {
        Quaternion::new(self.w + rhs, self.x, self.y, self.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, rhs: Quaternion) {
        *self = *self + rhs;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.w - rhs.w, self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, rhs: Quaternion) {
        *self = *self - rhs;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl std::iter::Sum for Quaternion {
    fn sum<It: Iterator<Item = Quaternion>>(iter: It) -> Self {
        iter.fold(Quaternion::ZERO, |acc, q| acc + q)
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.w, self.x, self.y, self.z)
    }
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_array().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let a = <[f64; 4]>::deserialize(deserializer)?;
        let q = Quaternion::from_array(a);
        if !q.is_finite() {
            return Err(serde::de::Error::custom("quaternion components must be finite"));
        }
        Ok(q)
    }
}

/// A purely imaginary unit quaternion; squares to -1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitImaginary {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitImaginary {
    pub const UNIT_TOL: f64 = 1e-12;

    pub const I: UnitImaginary = UnitImaginary { x: 1.0, y: 0.0, z: 0.0 };
    pub const J: UnitImaginary = UnitImaginary { x: 0.0, y: 1.0, z: 0.0 };
    pub const K: UnitImaginary = UnitImaginary { x: 0.0, y: 0.0, z: 1.0 };

    /// Accepts `(x, y, z)` whose norm is within [`Self::UNIT_TOL`] of one.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, QuatError> {
        let n = (x * x + y * y + z * z).sqrt();
        if !n.is_finite() || (n - 1.0).abs() > Self::UNIT_TOL {
            return Err(QuatError::NotUnit(x, y, z));
        }
        Ok(Self { x, y, z })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self, QuatError> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n.is_finite() && n > REAL_EPS) {
            return Err(QuatError::NotUnit(x, y, z));
        }
        Ok(Self { x: x / n, y: y / n, z: z / n })
    }

    /// The default unit used for real quaternions.
    pub fn default_unit() -> Self {
        Self::I
    }

    pub fn components(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn to_quaternion(self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }


    /// Inner product of the two units as vectors of R^3.
    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// `cos(theta) + I sin(theta)`.
    pub fn exp(self, theta: f64) -> Quaternion {
        let (s, c) = theta.sin_cos();
        Quaternion::new(c, self.x * s, self.y * s, self.z * s)
    }

    /// Some unit orthogonal to `self`, chosen deterministically.
    pub fn orthogonal(self) -> Self {
        // Cross with the coordinate axis least aligned with self.
        let ax = [self.x.abs(), self.y.abs(), self.z.abs()];
        let e = if ax[0] <= ax[1] && ax[0] <= ax[2] {
            [1.0, 0.0, 0.0]
        } else if ax[1] <= ax[2] {
            [0.0, 1.0, 0.0]
        } else {
            [0.0, 0.0, 1.0]
        };
        let c = [
            self.y * e[2] - self.z * e[1],
            self.z * e[0] - self.x * e[2],
            self.x * e[1] - self.y * e[0],
        ];
        Self::normalized(c[0], c[1], c[2]).expect("cross product with a non-parallel axis is nonzero")
    }
}

impl From<UnitImaginary> for Quaternion {
    fn from(u: UnitImaginary) -> Self {
        u.to_quaternion()
    }
}

impl Serialize for UnitImaginary {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.components().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UnitImaginary {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [x, y, z] = <[f64; 3]>::deserialize(deserializer)?;
        UnitImaginary::new(x, y, z).map_err(serde::de::Error::custom)
    }
}

/// Trigonometric form `r (cos a + I sin a)` with `a` in `[0, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarForm {
    pub r: f64,
    pub a: f64,
    pub unit: UnitImaginary,
    /// Set when `q` is real and `unit` is the configured default.
    pub degenerate: bool,
}

impl PolarForm {
    pub fn reconstruct(&self) -> Quaternion {
        self.unit.exp(self.a).scale(self.r)
    }
}

/// `I_q = vec(q) / |vec(q)|`; real `q` yields the default unit with the
/// degenerate flag set.
pub fn unit_imaginary(q: Quaternion) -> (UnitImaginary, bool) {
    unit_imaginary_eps(q, REAL_EPS)
}

pub fn unit_imaginary_eps(q: Quaternion, eps: f64) -> (UnitImaginary, bool) {
    let n = q.vec_norm();
    if n <= eps {
        return (UnitImaginary::default_unit(), true);
    }
    let u = UnitImaginary { x: q.x / n, y: q.y / n, z: q.z / n };
    (u, false)
}

pub fn polar_form(q: Quaternion) -> Result<PolarForm, QuatError> {
    let r = q.norm();
    if r <= REAL_EPS {
        return Err(QuatError::ZeroArgument);
    }
    let (unit, degenerate) = unit_imaginary(q);
    let a = if degenerate {
        if q.w > 0.0 {
            0.0
        } else {
            PI
        }
    } else {
        // atan2 keeps accuracy near 0 and pi where acos(w/r) does not.
        q.vec_norm().atan2(q.w)
    };
    Ok(PolarForm { r, a, unit, degenerate })
}

/// `x + I y`.
#[inline]
pub fn embed_slice(x: f64, y: f64, unit: UnitImaginary) -> Quaternion {
    Quaternion::new(x, unit.x * y, unit.y * y, unit.z * y)
}

impl Neg for UnitImaginary {
    type Output = Self;

    fn neg(self) -> Self {
        Self { x: -self.x, y: -self.y, z: -self.z }
    }
}
