//! Uniform midpoint grids and the Riemann-sum quadrature behind every
//! integral over the plane.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;
use crate::signal::{Point, Signal};

/// `n` samples per axis on `[-L, L]`, placed at the cell midpoints
/// `t_k = -L + (k + 1/2) * 2L/n`. The layout is symmetric about the origin
/// and contains the origin exactly when `n` is odd.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec2D {
    pub n: usize,
    pub half_width: f64,
}

impl GridSpec2D {
    pub fn new(n: usize, half_width: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("grid needs at least one sample per axis".into()));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidArgument(format!("half width must be positive, got {half_width}")));
        }
        Ok(GridSpec2D { n, half_width })
    }

    /// Grid with spacing `delta`: `L = n delta / 2`. With odd `n` and
    /// `delta = 1/q` every multiple of `delta` inside the grid is a sample.
    pub fn with_spacing(n: usize, delta: f64) -> Result<Self> {
        GridSpec2D::new(n, 0.5 * n as f64 * delta)
    }

    #[inline]
    pub fn delta(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Quadrature weight of one cell, `delta^2`.
    #[inline]
    pub fn weight(&self) -> f64 {
        let d = self.delta();
        d * d
    }

    #[inline]
    pub fn coord(&self, k: usize) -> f64 {
        -self.half_width + (k as f64 + 0.5) * self.delta()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.coord(k)).collect()
    }

    #[inline]
    pub fn point(&self, k1: usize, k2: usize) -> Point {
        [self.coord(k1), self.coord(k2)]
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Index of the sample at coordinate `x`, if `x` lies on the lattice.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let k = (x + self.half_width) / self.delta() - 0.5;
        let r = k.round();
        if (k - r).abs() > 1e-9 || r < 0.0 || r >= self.n as f64 {
            None
        } else {
            Some(r as usize)
        }
    }

    /// Same extent, `n` scaled by `factor` (rounded, at least 1).
    pub fn refined(&self, factor: f64) -> Self {
        let n = ((self.n as f64) * factor).round().max(1.0) as usize;
        GridSpec2D { n, half_width: self.half_width }
    }

    /// Rounds `n` up to the next odd count so the origin is a sample.
    pub fn odd(&self) -> Self {
        GridSpec2D { n: self.n | 1, half_width: self.half_width }
    }
}

/// Samples of a signal on a [`GridSpec2D`], row-major in `(k1, k2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalGrid {
    pub spec: GridSpec2D,
    pub values: Vec<Quaternion>,
}

impl SignalGrid {
    pub fn new(spec: GridSpec2D, values: Vec<Quaternion>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::Shape(format!("{} values for a {}x{} grid", values.len(), spec.n, spec.n)));
        }
        Ok(SignalGrid { spec, values })
    }

    pub fn zeros(spec: GridSpec2D) -> Self {
        SignalGrid { spec, values: vec![Quaternion::ZERO; spec.len()] }
    }

    #[inline]
    pub fn get(&self, k1: usize, k2: usize) -> Quaternion {
        self.values[k1 * self.spec.n + k2]
    }

    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// Index `(k1, k2)` of the largest magnitude (first one on ties).
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0.0);
        for (idx, q) in self.values.iter().enumerate() {
            let m = q.norm();
            if m > best.1 {
                best = (idx, m);
            }
        }
        (best.0 / self.spec.n, best.0 % self.spec.n)
    }

    /// CSV with header `k1,k2,t1,t2,w,x,y,z`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["k1", "k2", "t1", "t2", "w", "x", "y", "z"])?;
        for k1 in 0..self.spec.n {
            for k2 in 0..self.spec.n {
                let q = self.get(k1, k2);
                let p = self.spec.point(k1, k2);
                wtr.write_record([
                    k1.to_string(),
                    k2.to_string(),
                    fmt_f64(p[0]),
                    fmt_f64(p[1]),
                    fmt_f64(q.w),
                    fmt_f64(q.x),
                    fmt_f64(q.y),
                    fmt_f64(q.z),
                ])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }

    /// Plain PGM (P2) of `|value|`, scaled so the largest modulus maps to
    /// 255. Rows follow `k1`, columns `k2`.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> Result<()> {
        let n = self.spec.n;
        let peak = self.max_norm();
        writeln!(out, "P2\n{n} {n}\n255")?;
        for k1 in 0..n {
            let row: Vec<String> = (0..n)
                .map(|k2| {
                    let v = if peak > 0.0 { self.get(k1, k2).norm() / peak } else { 0.0 };
                    ((v * 255.0).round() as u8).to_string()
                })
                .collect();
            writeln!(out, "{}", row.join(" "))?;
        }
        Ok(())
    }

    /// Reads the format written by [`SignalGrid::write_csv`]. The grid spec is
    /// recovered from the sample count and the first coordinate.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let header = rdr.headers()?.clone();
        if header.iter().collect::<Vec<_>>() != ["k1", "k2", "t1", "t2", "w", "x", "y", "z"] {
            return Err(Error::Parse(format!("unexpected signal grid header {header:?}")));
        }
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let num = |i: usize| -> Result<f64> { rec[i].parse().map_err(|_| Error::Parse(format!("bad number {:?}", &rec[i]))) };
            let k1: usize = rec[0].parse().map_err(|_| Error::Parse("bad k1".into()))?;
            let k2: usize = rec[1].parse().map_err(|_| Error::Parse("bad k2".into()))?;
            rows.push((k1, k2, num(2)?, Quaternion::new(num(4)?, num(5)?, num(6)?, num(7)?)));
        }
        let n = (rows.len() as f64).sqrt().round() as usize;
        if n == 0 || n * n != rows.len() {
            return Err(Error::Shape(format!("{} rows do not form a square grid", rows.len())));
        }
        // t_0 = -L (n - 1) / n; a single sample carries no extent information
        let t0 = rows.iter().find(|r| r.0 == 0).map(|r| r.2).unwrap_or(0.0);
        let spec = if n == 1 { GridSpec2D::new(1, 1.0)? } else { GridSpec2D::new(n, -t0 * n as f64 / (n as f64 - 1.0))? };
        let mut values = vec![Quaternion::ZERO; n * n];
        for (k1, k2, _, q) in rows {
            if k1 >= n || k2 >= n {
                return Err(Error::Shape(format!("index ({k1},{k2}) outside {n}x{n}")));
            }
            values[k1 * n + k2] = q;
        }
        SignalGrid::new(spec, values)
    }
}

/// Full-precision float formatting shared by every CSV writer.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// `values[k1][k2] = f(t_k1, t_k2)`.
pub fn sample<S: Signal + ?Sized>(f: &S, spec: GridSpec2D) -> SignalGrid {
    let n = spec.n;
    let values: Vec<Quaternion> = (0..n).into_par_iter().flat_map_iter(|k1| (0..n).map(move |k2| f.eval(spec.point(k1, k2)))).collect();
    SignalGrid { spec, values }
}

/// Midpoint quadrature `sum values * delta^2`.
pub fn integrate(g: &SignalGrid) -> Quaternion {
    g.values.iter().copied().sum::<Quaternion>() * g.spec.weight()
}

/// `<f, g> = integral f(t) conj(g(t)) dt`.
pub fn inner_product(f: &SignalGrid, g: &SignalGrid) -> Result<Quaternion> {
    if f.spec != g.spec {
        return Err(Error::Shape(format!("inner product of {:?} and {:?}", f.spec, g.spec)));
    }
    let s: Quaternion = f.values.iter().zip(&g.values).map(|(a, b)| *a * b.conj()).sum();
    Ok(s * f.spec.weight())
}

/// `||f||`, the square root of the scalar part of `<f, f>`.
pub fn l2_norm(f: &SignalGrid) -> f64 {
    let s: f64 = f.values.iter().map(|q| q.norm_sqr()).sum();
    (s * f.spec.weight()).sqrt()
}
