//! Quaternion-valued signals on the plane.
//!
//! Everything that integrates over a signal does so through the [`Signal`]
//! trait, so analytic test signals, sums, conjugates and the convolution
//! operators of [`crate::convcorr`] can be fed to the same quadratures.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{unit_exp, Axis, Quaternion};

/// A point `(t1, t2)` of the plane.
pub type Point = [f64; 2];

pub trait Signal: Sync {
    fn eval(&self, t: Point) -> Quaternion;

    /// Short human-readable description recorded in reports.
    fn describe(&self) -> String {
        "signal".to_string()
    }
}

impl<S: Signal + ?Sized> Signal for &S {
    fn eval(&self, t: Point) -> Quaternion {
        (**self).eval(t)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

impl<S: Signal + ?Sized> Signal for Box<S> {
    fn eval(&self, t: Point) -> Quaternion {
        (**self).eval(t)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// Modulated Gaussian test signal
/// `exp(i mod_i t1) * coeff * exp(-alpha |t - shift|^2) * exp(j mod_j t2)`.
///
/// The `i` chirp multiplies from the left and the `j` chirp from the right,
/// matching the placement of the two kernels in the two-sided transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSignal {
    pub coeff: Quaternion,
    pub alpha: f64,
    pub shift: Point,
    pub mod_i: f64,
    pub mod_j: f64,
}

impl AnalyticSignal {
    pub fn new(coeff: Quaternion, alpha: f64, shift: Point, mod_i: f64, mod_j: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
        }
        Ok(AnalyticSignal { coeff, alpha, shift, mod_i, mod_j })
    }

    /// `exp(-pi |t|^2)`.
    pub fn unit_gaussian() -> Self {
        AnalyticSignal::gaussian(Quaternion::ONE, std::f64::consts::PI)
    }

    pub fn gaussian(coeff: Quaternion, alpha: f64) -> Self {
        AnalyticSignal { coeff, alpha, shift: [0.0, 0.0], mod_i: 0.0, mod_j: 0.0 }
    }

    pub fn with_coeff(mut self, coeff: Quaternion) -> Self {
        self.coeff = coeff;
        self
    }

    pub fn with_shift(mut self, shift: Point) -> Self {
        self.shift = shift;
        self
    }

    pub fn with_modulation(mut self, mod_i: f64, mod_j: f64) -> Self {
        self.mod_i = mod_i;
        self.mod_j = mod_j;
        self
    }

    /// Closed-form `L2` norm, `|coeff| sqrt(pi / (2 alpha))`.
    pub fn l2_norm(&self) -> f64 {
        self.coeff.norm() * (std::f64::consts::PI / (2.0 * self.alpha)).sqrt()
    }

    /// True when every value lies in the real axis.
    pub fn is_real(&self) -> bool {
        self.coeff.vector() == [0.0, 0.0, 0.0] && self.mod_i == 0.0 && self.mod_j == 0.0
    }
}

impl Signal for AnalyticSignal {
    #[inline]
    fn eval(&self, t: Point) -> Quaternion {
        let d1 = t[0] - self.shift[0];
        let d2 = t[1] - self.shift[1];
        let mut v = self.coeff * (-self.alpha * (d1 * d1 + d2 * d2)).exp();
        if self.mod_i != 0.0 {
            v = unit_exp(Axis::I, self.mod_i * t[0]) * v;
        }
        if self.mod_j != 0.0 {
            v = v * unit_exp(Axis::J, self.mod_j * t[1]);
        }
        v
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

/// Formats in the command-line syntax accepted by [`FromStr`]:
/// `coeff=w,x,y,z;alpha=..;shift=..,..;modi=..;modj=..`.
impl fmt::Display for AnalyticSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coeff;
        write!(
            f,
            "coeff={},{},{},{};alpha={};shift={},{};modi={};modj={}",
            c.w, c.x, c.y, c.z, self.alpha, self.shift[0], self.shift[1], self.mod_i, self.mod_j
        )
    }
}

fn parse_floats<const N: usize>(key: &str, s: &str) -> Result<[f64; N]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(Error::Parse(format!("{key} expects {N} comma-separated numbers, got {s:?}")));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| Error::Parse(format!("{key}: {p:?} is not a number")))?;
    }
    Ok(out)
}

/// Parses the `key=value;...` syntax; omitted keys keep the unit-Gaussian
/// defaults. A bare real `coeff=2` is accepted as shorthand.
impl FromStr for AnalyticSignal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut sig = AnalyticSignal::unit_gaussian();
        for field in s.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {field:?}")))?;
            match key.trim() {
                "coeff" => {
                    sig.coeff = if value.contains(',') {
                        Quaternion::from_array(parse_floats::<4>("coeff", value)?)
                    } else {
                        Quaternion::real(parse_floats::<1>("coeff", value)?[0])
                    }
                }
                "alpha" => sig.alpha = parse_floats::<1>("alpha", value)?[0],
                "shift" => sig.shift = parse_floats::<2>("shift", value)?,
                "modi" => sig.mod_i = parse_floats::<1>("modi", value)?[0],
                "modj" => sig.mod_j = parse_floats::<1>("modj", value)?[0],
                other => return Err(Error::Parse(format!("unknown signal key {other:?}"))),
            }
        }
        AnalyticSignal::new(sig.coeff, sig.alpha, sig.shift, sig.mod_i, sig.mod_j)
    }
}

/// The zero signal.
#[derive(Debug, Clone, Copy, Default)]
pub struct Zero;

impl Signal for Zero {
    fn eval(&self, _t: Point) -> Quaternion {
        Quaternion::ZERO
    }
    fn describe(&self) -> String {
        "0".to_string()
    }
}

/// Pointwise sum `a + b`.
#[derive(Debug, Clone, Copy)]
pub struct SumOf<A, B>(pub A, pub B);

impl<A: Signal, B: Signal> Signal for SumOf<A, B> {
    fn eval(&self, t: Point) -> Quaternion {
        self.0.eval(t) + self.1.eval(t)
    }
    fn describe(&self) -> String {
        format!("({}) + ({})", self.0.describe(), self.1.describe())
    }
}

/// Real multiple `scale * s`.
#[derive(Debug, Clone, Copy)]
pub struct Scaled<S> {
    pub scale: f64,
    pub inner: S,
}

impl<S: Signal> Signal for Scaled<S> {
    fn eval(&self, t: Point) -> Quaternion {
        self.inner.eval(t) * self.scale
    }
    fn describe(&self) -> String {
        format!("{} * ({})", self.scale, self.inner.describe())
    }
}

/// Pointwise quaternion conjugate.
#[derive(Debug, Clone, Copy)]
pub struct Conjugate<S>(pub S);

impl<S: Signal> Signal for Conjugate<S> {
    fn eval(&self, t: Point) -> Quaternion {
        self.0.eval(t).conj()
    }
    fn describe(&self) -> String {
        format!("conj({})", self.0.describe())
    }
}

/// Difference `a - b`.
pub fn difference<A: Signal, B: Signal>(a: A, b: B) -> SumOf<A, Scaled<B>> {
    SumOf(a, Scaled { scale: -1.0, inner: b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluation_order_is_left_i_right_j() {
        let f = AnalyticSignal::gaussian(Quaternion::ONE, 1.0).with_modulation(1.0, 1.0);
        let t = [0.3, -0.7];
        let env = (-(0.09f64 + 0.49)).exp();
        let expected = unit_exp(Axis::I, 0.3) * Quaternion::real(env) * unit_exp(Axis::J, -0.7);
        assert!(f.eval(t).max_abs_diff(expected) < 1e-15);
        // with a k-coefficient the sides no longer commute
        let g = f.with_coeff(Quaternion::K);
        let swapped = unit_exp(Axis::J, -0.7) * Quaternion::K * unit_exp(Axis::I, 0.3) * env;
        assert!(g.eval(t).max_abs_diff(swapped) > 1e-3);
    }

    #[test]
    fn magnitude_bounded_by_coeff() {
        let f = AnalyticSignal::new(Quaternion::new(1.0, 2.0, -1.0, 0.5), 0.8, [0.5, -1.0], 3.0, -2.0).unwrap();
        for k in 0..50 {
            let t = [-3.0 + 0.13 * k as f64, 2.0 - 0.09 * k as f64];
            assert!(f.eval(t).norm() <= f.coeff.norm() * (1.0 + 1e-15));
        }
    }

    #[test]
    fn real_coefficient_without_modulation_is_real() {
        let f = AnalyticSignal::gaussian(Quaternion::real(2.5), 1.3).with_shift([1.0, 0.0]);
        assert!(f.is_real());
        assert_eq!(f.eval([0.2, 0.4]).vector(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn closed_form_norm_matches_quadrature() {
        let f = AnalyticSignal::new(Quaternion::new(1.0, -2.0, 0.5, 1.0), 1.3, [0.4, -0.2], 2.0, -1.0).unwrap();
        let q = crate::grid::l2_norm(&crate::grid::sample(&f, crate::grid::GridSpec2D::new(64, 6.0).unwrap()));
        assert!((f.l2_norm() - q).abs() < 1e-12);
        assert!((AnalyticSignal::unit_gaussian().l2_norm() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn descriptor_round_trip() {
        let f = AnalyticSignal::new(Quaternion::new(1.0, 1.0, 1.0, 1.0), 2.0, [0.5, -0.25], 2.0, 0.0).unwrap();
        let parsed: AnalyticSignal = f.to_string().parse().unwrap();
        assert_eq!(parsed, f);
        let short: AnalyticSignal = "coeff=2;shift=1,0".parse().unwrap();
        assert_eq!(short.coeff, Quaternion::real(2.0));
        assert_eq!(short.alpha, std::f64::consts::PI);
        assert_eq!(short.shift, [1.0, 0.0]);
    }

    #[test]
    fn descriptor_errors() {
        assert!("alpha=-1".parse::<AnalyticSignal>().is_err());
        assert!("coeff=1,2".parse::<AnalyticSignal>().is_err());
        assert!("foo=1".parse::<AnalyticSignal>().is_err());
        assert!("alpha".parse::<AnalyticSignal>().is_err());
    }

    #[test]
    fn combinators() {
        let f = AnalyticSignal::unit_gaussian();
        let g = f.with_coeff(Quaternion::I);
        let t = [0.1, 0.2];
        assert_eq!(SumOf(f, g).eval(t), f.eval(t) + g.eval(t));
        assert_eq!(difference(f, f).eval(t), Quaternion::ZERO);
        assert_eq!(Conjugate(g).eval(t), -g.eval(t));
        assert_eq!(Zero.eval(t), Quaternion::ZERO);
    }
}
