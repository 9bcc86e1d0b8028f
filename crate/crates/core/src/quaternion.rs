//! Real quaternion algebra.
//!
//! Every signal value, kernel and transform output in this crate is a
//! [`Quaternion`]. Multiplication is the Hamilton product and is not
//! commutative, so the order of factors in every formula is significant.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element `w + x i + y j + z k` of the real quaternion algebra.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// One of the two imaginary units carrying the complex kernels: `i` acts from
/// the left, `j` from the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    I,
    J,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::I => f.write_str("i"),
            Axis::J => f.write_str("j"),
        }
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    /// `re + im * axis`, a member of the complex subalgebra spanned by `1` and `axis`.
    #[inline]
    pub fn on_axis(axis: Axis, re: f64, im: f64) -> Self {
        match axis {
            Axis::I => Quaternion::new(re, im, 0.0, 0.0),
            Axis::J => Quaternion::new(re, 0.0, im, 0.0),
        }
    }

    pub fn unit(axis: Axis) -> Self {
        Quaternion::on_axis(axis, 0.0, 1.0)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        // hypot-style scaling is unnecessary at the magnitudes used here
        self.norm_sqr().sqrt()
    }

    /// Multiplicative inverse, `None` for the zero quaternion.
    pub fn inverse(self) -> Option<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            None
        } else {
            Some(self.conj() * (1.0 / n2))
        }
    }

    pub fn scalar(self) -> f64 {
        self.w
    }

    pub fn vector(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    /// Largest absolute component difference, used by tests and residuals.
    pub fn max_abs_diff(self, other: Quaternion) -> f64 {
        let d = self - other;
        d.w.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.w, self.x, self.y, self.z)
    }
}

/// `cos(theta) + axis sin(theta)`.
#[inline]
pub fn unit_exp(axis: Axis, theta: f64) -> Quaternion {
    let (s, c) = theta.sin_cos();
    Quaternion::on_axis(axis, c, s)
}

/// Principal branch of `1 / sqrt(2 pi b axis)`:
/// `(2 pi |b|)^(-1/2) * exp(-axis sign(b) pi / 4)`.
pub fn inv_sqrt_2pib(axis: Axis, b: f64) -> Result<Quaternion> {
    if b == 0.0 {
        return Err(Error::DegenerateParameter(axis));
    }
    let scale = (2.0 * PI * b.abs()).sqrt().recip();
    Ok(unit_exp(axis, -b.signum() * FRAC_PI_4) * scale)
}

/// Principal branch of `sqrt(2 pi b axis)`, the reciprocal of [`inv_sqrt_2pib`].
pub fn sqrt_2pib(axis: Axis, b: f64) -> Result<Quaternion> {
    if b == 0.0 {
        return Err(Error::DegenerateParameter(axis));
    }
    let scale = (2.0 * PI * b.abs()).sqrt();
    Ok(unit_exp(axis, b.signum() * FRAC_PI_4) * scale)
}

/// `sqrt(d)` for a real `d`, taking the principal root inside the complex
/// subalgebra of `axis` when `d < 0`.
pub fn sqrt_on_axis(axis: Axis, d: f64) -> Quaternion {
    if d >= 0.0 {
        Quaternion::real(d.sqrt())
    } else {
        Quaternion::on_axis(axis, 0.0, (-d).sqrt())
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product; `p * q` generally differs from `q * p`.
impl Mul for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, r: Quaternion) {
        *self = *self + r;
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, r: Quaternion) {
        *self = *self - r;
    }
}

impl MulAssign<f64> for Quaternion {
    #[inline]
    fn mul_assign(&mut self, s: f64) {
        *self = *self * s;
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Quaternion>>(iter: I) -> Quaternion {
        iter.fold(Quaternion::ZERO, Add::add)
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    #[test]
    fn multiplication_table() {
        use Quaternion as Q;
        assert_eq!(Q::I * Q::J, Q::K);
        assert_eq!(Q::J * Q::K, Q::I);
        assert_eq!(Q::K * Q::I, Q::J);
        assert_eq!(Q::J * Q::I, -Q::K);
        assert_eq!(Q::K * Q::J, -Q::I);
        assert_eq!(Q::I * Q::K, -Q::J);
        for u in [Q::I, Q::J, Q::K] {
            assert_eq!(u * u, -Q::ONE);
        }
    }

    #[test]
    fn product_expansion() {
        assert_eq!(q(1.0, 1.0, 0.0, 0.0) * q(1.0, 0.0, 1.0, 0.0), q(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn conjugation() {
        assert_eq!(q(1.0, 1.0, 1.0, 1.0).conj(), q(1.0, -1.0, -1.0, -1.0));
        let p = q(2.0, -3.0, 0.0, 0.0);
        assert_eq!(p.conj().conj(), p);
        let lhs = (Quaternion::I * Quaternion::J).conj();
        let rhs = Quaternion::J.conj() * Quaternion::I.conj();
        assert_eq!(lhs, -Quaternion::K);
        assert_eq!(rhs, -Quaternion::K);
    }

    #[test]
    fn norms() {
        assert_eq!(q(1.0, 1.0, 1.0, 1.0).norm(), 2.0);
        assert_eq!(Quaternion::ZERO.norm(), 0.0);
        let p = q(1.0, 1.0, 0.0, 0.0);
        let r = q(1.0, 0.0, 1.0, 0.0);
        assert!(((p * r).norm() - 2.0).abs() < 1e-15);
        assert!((p.norm() * r.norm() - 2.0).abs() < 1e-15);
        assert!(Quaternion::ZERO.inverse().is_none());
    }

    #[test]
    fn unit_exp_values() {
        assert!(close(unit_exp(Axis::I, FRAC_PI_2), Quaternion::I, 1e-16));
        assert_eq!(unit_exp(Axis::J, 0.0), Quaternion::ONE);
        let prod = unit_exp(Axis::I, -FRAC_PI_4) * unit_exp(Axis::J, -FRAC_PI_4);
        assert!(close(prod, q(0.5, -0.5, -0.5, 0.5), 1e-15));
    }

    #[test]
    fn inv_sqrt_2pib_principal_branch() {
        let c = 0.282_094_791_773_878_14; // (2 pi)^(-1/2) * sqrt(2)/2
        assert!(close(inv_sqrt_2pib(Axis::I, 1.0).unwrap(), q(c, -c, 0.0, 0.0), 1e-15));
        assert!(close(inv_sqrt_2pib(Axis::J, 1.0).unwrap(), q(c, 0.0, -c, 0.0), 1e-15));
        assert!(close(inv_sqrt_2pib(Axis::I, -1.0).unwrap(), q(c, c, 0.0, 0.0), 1e-15));
        assert!(matches!(inv_sqrt_2pib(Axis::J, 0.0), Err(Error::DegenerateParameter(Axis::J))));
    }

    #[test]
    fn sqrt_2pib_is_reciprocal() {
        for b in [-3.0, -0.5, 0.25, 1.0, 7.0] {
            for axis in [Axis::I, Axis::J] {
                let p = sqrt_2pib(axis, b).unwrap() * inv_sqrt_2pib(axis, b).unwrap();
                assert!(close(p, Quaternion::ONE, 1e-14), "{axis} {b}: {p}");
            }
        }
    }

    #[test]
    fn sqrt_on_axis_squares_back() {
        assert_eq!(sqrt_on_axis(Axis::I, 4.0), Quaternion::real(2.0));
        let r = sqrt_on_axis(Axis::J, -4.0);
        assert_eq!(r * r, Quaternion::real(-4.0));
    }

    fn arb_q() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-10.0f64..10.0).prop_map(Quaternion::from_array)
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(p in arb_q(), r in arb_q()) {
            let lhs = (p * r).norm();
            let rhs = p.norm() * r.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }

        #[test]
        fn conj_is_anti_homomorphism(p in arb_q(), r in arb_q()) {
            let lhs = (p * r).conj();
            let rhs = r.conj() * p.conj();
            prop_assert!(lhs.max_abs_diff(rhs) <= 1e-14 * (1.0 + p.norm() * r.norm()));
        }

        #[test]
        fn conj_product_is_norm(p in arb_q()) {
            let prod = p * p.conj();
            prop_assert!(prod.max_abs_diff(Quaternion::real(p.norm_sqr())) <= 1e-12 * p.norm_sqr().max(1.0));
        }

        #[test]
        fn unit_exp_addition_law(a in -20.0f64..20.0, b in -20.0f64..20.0, i_axis in any::<bool>()) {
            let axis = if i_axis { Axis::I } else { Axis::J };
            let lhs = unit_exp(axis, a) * unit_exp(axis, b);
            prop_assert!(lhs.max_abs_diff(unit_exp(axis, a + b)) <= 1e-12);
        }

        #[test]
        fn inv_sqrt_squared(b in prop_oneof![-50.0f64..-1e-3, 1e-3f64..50.0], i_axis in any::<bool>()) {
            let axis = if i_axis { Axis::I } else { Axis::J };
            let s = inv_sqrt_2pib(axis, b).unwrap();
            // 1 / (2 pi b axis) = -axis / (2 pi b)
            let expected = Quaternion::unit(axis) * (-1.0 / (2.0 * PI * b));
            prop_assert!((s * s).max_abs_diff(expected) <= 1e-12 * expected.norm());
        }
    }
}
