//! The Wigner-Ville distribution of the two-sided QOLCT.
//!
//! For `b1, b2 != 0`
//!
//! ```text
//! W_{f,g}(t, u) = integral K^i(n1,u1) f(t + n/2) conj(g(t - n/2)) K^j(n2,u2) dn
//! ```
//!
//! When `b1` or `b2` vanishes the corresponding kernel is replaced by a chirp
//! multiplication and the lag on that axis is fixed at `d (u - r)`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{fmt_f64, GridSpec2D, SignalGrid};
use crate::olct::{left_fold, row_sums, sandwich, Kernel, OlctParams, ParamPair};
use crate::quaternion::{sqrt_on_axis, unit_exp, Axis, Quaternion};
use crate::signal::{Point, Signal};

/// `h_{f,g}(t, n) = f(t + n/2) conj(g(t - n/2))`.
#[inline]
pub fn corr_product<F, G>(f: &F, g: &G, t: Point, n: Point) -> Quaternion
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    let plus = [t[0] + 0.5 * n[0], t[1] + 0.5 * n[1]];
    let minus = [t[0] - 0.5 * n[0], t[1] - 0.5 * n[1]];
    f.eval(plus) * g.eval(minus).conj()
}

#[derive(Debug, Clone, Copy)]
enum Branch {
    Regular { ki: Kernel, kj: Kernel },
    ChirpLeft { kj: Kernel },
    ChirpRight { ki: Kernel },
    ChirpBoth,
}

/// Chirp that replaces the kernel on an axis with `b = 0`:
/// `sqrt(d) exp(axis (c d (u - r)^2 / 2 + u r))`.
fn chirp_factor(axis: Axis, p: &OlctParams, u: f64) -> Quaternion {
    let du = u - p.r;
    let phase = 0.5 * p.c * p.d * du * du + u * p.r;
    sqrt_on_axis(axis, p.d) * unit_exp(axis, phase)
}

/// Evaluates the distribution for a fixed parameter pair and lag grid.
/// Left and right kernel columns, one per frequency coordinate.
type KernelColumns = (Vec<Vec<Quaternion>>, Vec<Vec<Quaternion>>);

#[derive(Debug, Clone)]
pub struct WvdEvaluator {
    params: ParamPair,
    n_spec: GridSpec2D,
    lags: Vec<f64>,
    branch: Branch,
}

impl WvdEvaluator {
    pub fn new(params: ParamPair, n_spec: GridSpec2D) -> Self {
        let ki = Kernel::new(Axis::I, params.a1).ok();
        let kj = Kernel::new(Axis::J, params.a2).ok();
        let branch = match (ki, kj) {
            (Some(ki), Some(kj)) => Branch::Regular { ki, kj },
            (None, Some(kj)) => Branch::ChirpLeft { kj },
            (Some(ki), None) => Branch::ChirpRight { ki },
            (None, None) => Branch::ChirpBoth,
        };
        WvdEvaluator { params, n_spec, lags: n_spec.coords(), branch }
    }

    pub fn params(&self) -> &ParamPair {
        &self.params
    }

    pub fn lag_spec(&self) -> GridSpec2D {
        self.n_spec
    }

    pub fn is_regular(&self) -> bool {
        matches!(self.branch, Branch::Regular { .. })
    }

    /// Correlation products `h(t, n)` over the lag grid, row-major in `(n1, n2)`.
    pub fn lag_products<F, G>(&self, f: &F, g: &G, t: Point) -> Vec<Quaternion>
    where
        F: Signal + ?Sized,
        G: Signal + ?Sized,
    {
        let mut out = Vec::with_capacity(self.lags.len() * self.lags.len());
        for &n1 in &self.lags {
            for &n2 in &self.lags {
                out.push(corr_product(f, g, t, [n1, n2]));
            }
        }
        out
    }

    /// `W_{f,g}(t, u)`.
    pub fn point<F, G>(&self, f: &F, g: &G, t: Point, u: Point) -> Quaternion
    where
        F: Signal + ?Sized,
        G: Signal + ?Sized,
    {
        match self.branch {
            Branch::Regular { ki, kj } => {
                let h = self.lag_products(f, g, t);
                self.regular_from_lags(&ki, &kj, &h, u)
            }
            _ => self.degenerate_point(f, g, t, u),
        }
    }

    /// `W(t, u)` for every `u` in `us`, sharing the lag products at `t`.
    pub fn at_time<F, G>(&self, f: &F, g: &G, t: Point, us: &[Point]) -> Vec<Quaternion>
    where
        F: Signal + ?Sized,
        G: Signal + ?Sized,
    {
        match self.branch {
            Branch::Regular { ki, kj } => {
                let h = self.lag_products(f, g, t);
                us.iter().map(|&u| self.regular_from_lags(&ki, &kj, &h, u)).collect()
            }
            _ => us.iter().map(|&u| self.degenerate_point(f, g, t, u)).collect(),
        }
    }

    fn regular_from_lags(&self, ki: &Kernel, kj: &Kernel, h: &[Quaternion], u: Point) -> Quaternion {
        let left = ki.column(&self.lags, u[0]);
        let right = kj.column(&self.lags, u[1]);
        sandwich(&left, h, &right) * self.n_spec.weight()
    }

    /// The u-slice `W(t, .)` on a full `u` grid, computed with the same
    /// summation order as [`WvdEvaluator::point`].
    pub fn slice<F, G>(&self, f: &F, g: &G, t: Point, u_spec: GridSpec2D) -> SignalGrid
    where
        F: Signal + ?Sized,
        G: Signal + ?Sized,
    {
        let columns = self.kernel_columns(u_spec);
        self.slice_with(f, g, t, u_spec, columns.as_ref())
    }

    fn kernel_columns(&self, u_spec: GridSpec2D) -> Option<KernelColumns> {
        match self.branch {
            Branch::Regular { ki, kj } => {
                let us = u_spec.coords();
                let left = us.iter().map(|&u| ki.column(&self.lags, u)).collect();
                let right = us.iter().map(|&u| kj.column(&self.lags, u)).collect();
                Some((left, right))
            }
            _ => None,
        }
    }

    fn slice_with<F, G>(&self, f: &F, g: &G, t: Point, u_spec: GridSpec2D, columns: Option<&KernelColumns>) -> SignalGrid
    where
        F: Signal + ?Sized,
        G: Signal + ?Sized,
    {
        let nu = u_spec.n;
        let mut values = vec![Quaternion::ZERO; nu * nu];
        match columns {
            Some((left, right)) => {
                let h = self.lag_products(f, g, t);
                let w = self.n_spec.weight();
                for (ku2, rcol) in right.iter().enumerate() {
                    let rows = row_sums(&h, rcol);
                    for (ku1, lcol) in left.iter().enumerate() {
                        values[ku1 * nu + ku2] = left_fold(lcol, &rows) * w;
                    }
                }
            }
            None => {
                for ku1 in 0..nu {
                    for ku2 in 0..nu {
                        values[ku1 * nu + ku2] = self.degenerate_point(f, g, t, u_spec.point(ku1, ku2));
                    }
                }
            }
        }
        SignalGrid { spec: u_spec, values }
    }

    fn degenerate_point<F, G>(&self, f: &F, g: &G, t: Point, u: Point) -> Quaternion
    where
        F: Signal + ?Sized,
        G: Signal + ?Sized,
    {
        let (p1, p2) = (&self.params.a1, &self.params.a2);
        let delta = self.n_spec.delta();
        let eval = |x1: f64, x2: f64| f.eval([t[0] + x1, t[1] + x2]) * g.eval([t[0] - x1, t[1] - x2]).conj();
        match self.branch {
            Branch::ChirpLeft { kj } => {
                let x1 = 0.5 * p1.d * (u[0] - p1.r);
                let mut acc = Quaternion::ZERO;
                for &n2 in &self.lags {
                    acc += eval(x1, 0.5 * n2) * kj.eval(n2, u[1]);
                }
                chirp_factor(Axis::I, p1, u[0]) * acc * delta
            }
            Branch::ChirpRight { ki } => {
                let x2 = 0.5 * p2.d * (u[1] - p2.r);
                let mut acc = Quaternion::ZERO;
                for &n1 in &self.lags {
                    acc += ki.eval(n1, u[0]) * eval(0.5 * n1, x2);
                }
                acc * chirp_factor(Axis::J, p2, u[1]) * delta
            }
            Branch::ChirpBoth => {
                let x1 = 0.5 * p1.d * (u[0] - p1.r);
                let x2 = 0.5 * p2.d * (u[1] - p2.r);
                chirp_factor(Axis::I, p1, u[0]) * eval(x1, x2) * chirp_factor(Axis::J, p2, u[1])
            }
            Branch::Regular { .. } => unreachable!("regular branch handled by the kernel path"),
        }
    }

    /// Full distribution over `t_spec x u_spec`, parallel over time cells.
    pub fn grid<F, G>(&self, f: &F, g: &G, t_spec: GridSpec2D, u_spec: GridSpec2D) -> WvdGrid
    where
        F: Signal + ?Sized,
        G: Signal + ?Sized,
    {
        let columns = self.kernel_columns(u_spec);
        let nt = t_spec.n;
        let slices: Vec<SignalGrid> = (0..nt * nt)
            .into_par_iter()
            .map(|idx| self.slice_with(f, g, t_spec.point(idx / nt, idx % nt), u_spec, columns.as_ref()))
            .collect();
        let mut values = Vec::with_capacity(nt * nt * u_spec.len());
        for s in slices {
            values.extend(s.values);
        }
        WvdGrid { t_spec, u_spec, values }
    }
}

/// `W_{f,g}(t, u)`, dispatching on which of `b1, b2` vanish.
pub fn wvd_point<F, G>(f: &F, g: &G, params: &ParamPair, t: Point, u: Point, n_spec: GridSpec2D) -> Quaternion
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    WvdEvaluator::new(*params, n_spec).point(f, g, t, u)
}

pub fn wvd_grid<F, G>(f: &F, g: &G, params: &ParamPair, t_spec: GridSpec2D, u_spec: GridSpec2D, n_spec: GridSpec2D) -> WvdGrid
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    WvdEvaluator::new(*params, n_spec).grid(f, g, t_spec, u_spec)
}

/// Distribution of sampled signals at the grid point `k`, restricting the lag
/// to even multiples of the grid spacing so that `t +- n/2` stay on the grid.
pub fn wvd_sampled(f: &SignalGrid, g: &SignalGrid, params: &ParamPair, k: (usize, usize), u: Point) -> Result<Quaternion> {
    if f.spec != g.spec {
        return Err(Error::Shape(format!("sampled WVD of {:?} and {:?}", f.spec, g.spec)));
    }
    let n = f.spec.n;
    if k.0 >= n || k.1 >= n {
        return Err(Error::Shape(format!("point {k:?} outside a {n}x{n} grid")));
    }
    let ki = Kernel::new(Axis::I, params.a1)?;
    let kj = Kernel::new(Axis::J, params.a2)?;
    let step = 2.0 * f.spec.delta();
    let reach = |k: usize| k.min(n - 1 - k) as isize;
    let (m1s, m2s) = (reach(k.0), reach(k.1));
    let offsets = |m: isize| (-m..=m).collect::<Vec<isize>>();
    let (o1, o2) = (offsets(m1s), offsets(m2s));
    let left: Vec<Quaternion> = o1.iter().map(|&m| ki.eval(m as f64 * step, u[0])).collect();
    let right: Vec<Quaternion> = o2.iter().map(|&m| kj.eval(m as f64 * step, u[1])).collect();
    let at = |base: usize, m: isize| (base as isize + m) as usize;
    let mut h = Vec::with_capacity(o1.len() * o2.len());
    for &m1 in &o1 {
        for &m2 in &o2 {
            h.push(f.get(at(k.0, m1), at(k.1, m2)) * g.get(at(k.0, -m1), at(k.1, -m2)).conj());
        }
    }
    Ok(sandwich(&left, &h, &right) * (step * step))
}

/// Which side of the recovered integral the `1 / conj(g(0))` factor goes on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuotientSide {
    /// As the reconstruction formula is typeset.
    #[default]
    Left,
    /// Undoes `h = f conj(g)` exactly for quaternion-valued `g(0)`.
    Right,
}

/// Smallest `|g(0)|` for which reconstruction is attempted.
pub const RECONSTRUCTION_MIN_G0: f64 = 1e-12;

/// Recovers `f(t)` from the slice `W_{f,g}(t/2, .)` sampled on a `u` grid:
/// `conj(g(0))^-1 * integral K^{-i}(t1,u1) W(t/2,u) K^{-j}(t2,u2) du`.
pub fn reconstruct(slice: &SignalGrid, g0: Quaternion, params: &ParamPair, t: Point, side: QuotientSide) -> Result<Quaternion> {
    let inv = g0.conj().inverse().filter(|_| g0.norm() > RECONSTRUCTION_MIN_G0).ok_or(Error::ReconstructionUndefined(g0.norm()))?;
    let integral = crate::olct::qolct_inverse(slice, params, t)?;
    Ok(match side {
        QuotientSide::Left => inv * integral,
        QuotientSide::Right => integral * inv,
    })
}

/// Evaluates the needed slice at `t/2` and reconstructs `f(t)`.
pub fn reconstruct_at<F, G>(
    f: &F,
    g: &G,
    params: &ParamPair,
    t: Point,
    u_spec: GridSpec2D,
    n_spec: GridSpec2D,
    side: QuotientSide,
) -> Result<Quaternion>
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    let g0 = g.eval([0.0, 0.0]);
    if g0.norm() <= RECONSTRUCTION_MIN_G0 {
        return Err(Error::ReconstructionUndefined(g0.norm()));
    }
    let eval = WvdEvaluator::new(*params, n_spec);
    let slice = eval.slice(f, g, [0.5 * t[0], 0.5 * t[1]], u_spec);
    reconstruct(&slice, g0, params, t, side)
}

/// Samples `W(t, u)` on `t_spec x u_spec`, indexed `(kt1, kt2, ku1, ku2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WvdGrid {
    pub t_spec: GridSpec2D,
    pub u_spec: GridSpec2D,
    pub values: Vec<Quaternion>,
}

impl WvdGrid {
    #[inline]
    fn index(&self, kt1: usize, kt2: usize, ku1: usize, ku2: usize) -> usize {
        let (nt, nu) = (self.t_spec.n, self.u_spec.n);
        ((kt1 * nt + kt2) * nu + ku1) * nu + ku2
    }

    pub fn get(&self, kt1: usize, kt2: usize, ku1: usize, ku2: usize) -> Quaternion {
        self.values[self.index(kt1, kt2, ku1, ku2)]
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// `W(t_k, .)` as a grid over `u`.
    pub fn slice_at_t(&self, kt1: usize, kt2: usize) -> SignalGrid {
        let start = self.index(kt1, kt2, 0, 0);
        SignalGrid { spec: self.u_spec, values: self.values[start..start + self.u_spec.len()].to_vec() }
    }

    /// `W(., u_k)` as a grid over `t`.
    pub fn slice_at_u(&self, ku1: usize, ku2: usize) -> SignalGrid {
        let nt = self.t_spec.n;
        let values = (0..nt * nt).map(|i| self.get(i / nt, i % nt, ku1, ku2)).collect();
        SignalGrid { spec: self.t_spec, values }
    }

    /// CSV with header `kt1,kt2,ku1,ku2,t1,t2,u1,u2,w,x,y,z`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["kt1", "kt2", "ku1", "ku2", "t1", "t2", "u1", "u2", "w", "x", "y", "z"])?;
        let (nt, nu) = (self.t_spec.n, self.u_spec.n);
        for kt1 in 0..nt {
            for kt2 in 0..nt {
                for ku1 in 0..nu {
                    for ku2 in 0..nu {
                        let q = self.get(kt1, kt2, ku1, ku2);
                        let t = self.t_spec.point(kt1, kt2);
                        let u = self.u_spec.point(ku1, ku2);
                        let mut rec = vec![kt1.to_string(), kt2.to_string(), ku1.to_string(), ku2.to_string()];
                        rec.extend([t[0], t[1], u[0], u[1], q.w, q.x, q.y, q.z].map(fmt_f64));
                        wtr.write_record(&rec)?;
                    }
                }
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

/// `<W1, W2> = integral integral W1(t,u) conj(W2(t,u)) du dt`.
pub fn wvd_inner_product(w1: &WvdGrid, w2: &WvdGrid) -> Result<Quaternion> {
    if w1.t_spec != w2.t_spec || w1.u_spec != w2.u_spec {
        return Err(Error::Shape("distribution grids differ".into()));
    }
    let s: Quaternion = w1.values.iter().zip(&w2.values).map(|(a, b)| *a * b.conj()).sum();
    Ok(s * (w1.t_spec.weight() * w1.u_spec.weight()))
}
