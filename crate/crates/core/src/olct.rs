//! Offset linear canonical transform parameters, the `i`/`j` chirp kernels
//! and the two-sided quaternion transform built from them.
//!
//! The forward kernel on axis `e` is
//!
//! ```text
//! K(t, u) = (2 pi b e)^(-1/2) exp(e [a t^2 + 2t(r - u) - 2u(dr - bs) + d u^2 + d r^2] / (2b))
//! ```
//!
//! and the inverse kernel is its quaternion conjugate at the same `(t, u)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSpec2D, SignalGrid};
use crate::quaternion::{inv_sqrt_2pib, unit_exp, Axis, Quaternion};
use crate::signal::{Point, Signal};

const DET_TOLERANCE: f64 = 1e-12;

/// The augmented matrix `[a b | r; c d | s]` with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct OlctParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub r: f64,
    pub s: f64,
}

#[derive(Deserialize)]
struct RawParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    #[serde(default)]
    r: f64,
    #[serde(default)]
    s: f64,
}

impl TryFrom<RawParams> for OlctParams {
    type Error = Error;
    fn try_from(p: RawParams) -> Result<Self> {
        OlctParams::new(p.a, p.b, p.c, p.d, p.r, p.s)
    }
}

impl OlctParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64, r: f64, s: f64) -> Result<Self> {
        let det = a * d - b * c;
        if det.is_nan() || (det - 1.0).abs() > DET_TOLERANCE {
            return Err(Error::Determinant(det));
        }
        Ok(OlctParams { a, b, c, d, r, s })
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        match *v {
            [a, b, c, d, r, s] => OlctParams::new(a, b, c, d, r, s),
            [a, b, c, d] => OlctParams::new(a, b, c, d, 0.0, 0.0),
            _ => Err(Error::InvalidArgument(format!("parameter matrix needs 4 or 6 entries, got {}", v.len()))),
        }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.d, self.r, self.s]
    }

    pub fn is_degenerate(&self) -> bool {
        self.b == 0.0
    }
}

/// Linear canonical parameters: offsets `r = s = 0`.
pub fn qlct_params(a: f64, b: f64, c: f64, d: f64) -> Result<OlctParams> {
    OlctParams::new(a, b, c, d, 0.0, 0.0)
}

/// `(0, 1, -1, 0 | 0, 0)`, which turns the transform into the quaternion
/// Fourier transform.
pub fn qft_params() -> OlctParams {
    OlctParams { a: 0.0, b: 1.0, c: -1.0, d: 0.0, r: 0.0, s: 0.0 }
}

/// Left (`i`) and right (`j`) parameter matrices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamPair {
    #[serde(rename = "A1")]
    pub a1: OlctParams,
    #[serde(rename = "A2")]
    pub a2: OlctParams,
}

impl ParamPair {
    pub fn new(a1: OlctParams, a2: OlctParams) -> Self {
        ParamPair { a1, a2 }
    }

    pub fn qft() -> Self {
        ParamPair::new(qft_params(), qft_params())
    }

    pub fn symmetric(a: OlctParams) -> Self {
        ParamPair::new(a, a)
    }

    pub fn get(&self, axis: Axis) -> &OlctParams {
        match axis {
            Axis::I => &self.a1,
            Axis::J => &self.a2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("parameter pair serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// A kernel with its constant prefactor evaluated once.
#[derive(Debug, Clone, Copy)]
pub struct Kernel {
    axis: Axis,
    p: OlctParams,
    prefactor: Quaternion,
}

impl Kernel {
    pub fn new(axis: Axis, p: OlctParams) -> Result<Self> {
        Ok(Kernel { axis, p, prefactor: inv_sqrt_2pib(axis, p.b)? })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    /// Phase of the chirp factor at `(t, u)`, including the `d r^2` term
    /// folded in from the constant.
    #[inline]
    pub fn phase(&self, t: f64, u: f64) -> f64 {
        let OlctParams { a, b, d, r, s, .. } = self.p;
        (a * t * t + 2.0 * t * (r - u) - 2.0 * u * (d * r - b * s) + d * u * u + d * r * r) / (2.0 * b)
    }

    #[inline]
    pub fn eval(&self, t: f64, u: f64) -> Quaternion {
        self.prefactor * unit_exp(self.axis, self.phase(t, u))
    }

    #[inline]
    pub fn eval_inverse(&self, t: f64, u: f64) -> Quaternion {
        self.eval(t, u).conj()
    }

    /// Kernel values over the time coordinates `ts` at a fixed `u`.
    pub fn column(&self, ts: &[f64], u: f64) -> Vec<Quaternion> {
        ts.iter().map(|&t| self.eval(t, u)).collect()
    }
}

/// `K^axis_A(t, u)`, or its conjugate `K^{-axis}_A(t, u)` when `inverse`.
pub fn kernel(axis: Axis, p: &OlctParams, t: f64, u: f64, inverse: bool) -> Result<Quaternion> {
    let k = Kernel::new(axis, *p)?;
    Ok(if inverse { k.eval_inverse(t, u) } else { k.eval(t, u) })
}

/// Right-multiplied row sums `rows[k1] = sum_k2 values[k1][k2] * right[k2]`.
///
/// Together with [`left_fold`] this is the single summation order used by
/// every two-sided quadrature, so grid and pointwise evaluations agree bit
/// for bit.
#[inline]
pub(crate) fn row_sums(values: &[Quaternion], right: &[Quaternion]) -> Vec<Quaternion> {
    let n2 = right.len();
    values
        .chunks_exact(n2)
        .map(|row| {
            let mut acc = Quaternion::ZERO;
            for (v, k) in row.iter().zip(right) {
                acc += *v * *k;
            }
            acc
        })
        .collect()
}

#[inline]
pub(crate) fn left_fold(left: &[Quaternion], rows: &[Quaternion]) -> Quaternion {
    let mut acc = Quaternion::ZERO;
    for (k, r) in left.iter().zip(rows) {
        acc += *k * *r;
    }
    acc
}

/// `sum_k1 left[k1] * (sum_k2 values[k1][k2] * right[k2])`.
pub(crate) fn sandwich(left: &[Quaternion], values: &[Quaternion], right: &[Quaternion]) -> Quaternion {
    left_fold(left, &row_sums(values, right))
}

/// Two-sided transform `integral K^i(t1,u1) f(t) K^j(t2,u2) dt` by midpoint
/// quadrature over `spec`.
pub fn qolct_forward<S: Signal + ?Sized>(f: &S, params: &ParamPair, u: Point, spec: GridSpec2D) -> Result<Quaternion> {
    let ki = Kernel::new(Axis::I, params.a1)?;
    let kj = Kernel::new(Axis::J, params.a2)?;
    let ts = spec.coords();
    let left = ki.column(&ts, u[0]);
    let right = kj.column(&ts, u[1]);
    let values: Vec<Quaternion> = ts.iter().flat_map(|&t1| ts.iter().map(move |&t2| f.eval([t1, t2]))).collect();
    Ok(sandwich(&left, &values, &right) * spec.weight())
}

/// Inverse transform `integral K^{-i}(t1,u1) F(u) K^{-j}(t2,u2) du` of values
/// sampled on a `u` grid, evaluated at time `t`.
pub fn qolct_inverse(values: &SignalGrid, params: &ParamPair, t: Point) -> Result<Quaternion> {
    let ki = Kernel::new(Axis::I, params.a1)?;
    let kj = Kernel::new(Axis::J, params.a2)?;
    let us = values.spec.coords();
    let left: Vec<Quaternion> = us.iter().map(|&u| ki.eval_inverse(t[0], u)).collect();
    let right: Vec<Quaternion> = us.iter().map(|&u| kj.eval_inverse(t[1], u)).collect();
    Ok(sandwich(&left, &values.values, &right) * values.spec.weight())
}
