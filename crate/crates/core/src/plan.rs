//! Grid extents for each integration domain.
//!
//! Every quadrature here is a midpoint sum over a truncated square. For the
//! Gaussian family the decay rate of each integrand is known in closed form,
//! so the truncation can be placed where the integrand has fallen below
//! `exp(-DECAY)` instead of at one fixed half-width for every variable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec2D;
use crate::olct::{OlctParams, ParamPair};
use crate::signal::AnalyticSignal;

/// Exponent at which integrands are considered negligible.
pub const DECAY: f64 = 36.0;

/// Smallest grid size accepted anywhere.
pub const MIN_POINTS: usize = 8;

/// Point counts per integration variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSizes {
    pub n_t: usize,
    pub n_u: usize,
    pub n_n: usize,
    pub n_w: usize,
}

impl Default for GridSizes {
    fn default() -> Self {
        GridSizes { n_t: 24, n_u: 24, n_n: 48, n_w: 48 }
    }
}

impl GridSizes {
    pub fn uniform(n: usize) -> Self {
        GridSizes { n_t: n, n_u: n, n_n: n, n_w: n }
    }

    /// `n` points in `t` and `u`, twice as many in the lag and `w`. With
    /// fewer lag points than frequency points the aliased copies of the
    /// distribution fall inside the frequency window.
    pub fn base(n: usize) -> Self {
        GridSizes { n_t: n, n_u: n, n_n: 2 * n, n_w: 2 * n }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("n_t", self.n_t), ("n_u", self.n_u), ("n_n", self.n_n), ("n_w", self.n_w)] {
            if v < MIN_POINTS {
                return Err(Error::InvalidArgument(format!("{name} = {v} is below the minimum of {MIN_POINTS}")));
            }
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let s = |n: usize| ((n as f64 * factor).round() as usize).max(1);
        GridSizes { n_t: s(self.n_t), n_u: s(self.n_u), n_n: s(self.n_n), n_w: s(self.n_w) }
    }
}

/// Decay summary of a set of Gaussian signals: slowest rate, furthest
/// centre and largest modulation frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub alpha: f64,
    pub radius: f64,
    pub freq: f64,
}

impl Envelope {
    pub fn of(signals: &[&AnalyticSignal]) -> Self {
        let mut env = Envelope { alpha: f64::INFINITY, radius: 0.0, freq: 0.0 };
        for s in signals {
            env.alpha = env.alpha.min(s.alpha);
            env.radius = env.radius.max(s.shift[0].abs()).max(s.shift[1].abs());
            env.freq = env.freq.max(s.mod_i.abs()).max(s.mod_j.abs());
        }
        if !env.alpha.is_finite() {
            env.alpha = std::f64::consts::PI;
        }
        env
    }

    /// Envelope of a convolution or correlation of two members of `self`.
    pub fn combined(&self) -> Self {
        Envelope { alpha: 0.5 * self.alpha, radius: 2.0 * self.radius, freq: self.freq }
    }

    /// Half-width beyond which the signals themselves are negligible.
    pub fn signal_extent(&self) -> f64 {
        self.radius + (DECAY / self.alpha).sqrt()
    }

    /// Half-width in `t` (and `w`) of a distribution built from these signals.
    pub fn time_extent(&self) -> f64 {
        self.radius + (DECAY / (2.0 * self.alpha)).sqrt()
    }

    /// Half-width of the lag variable `n`.
    pub fn lag_extent(&self) -> f64 {
        2.0 * self.radius + (2.0 * DECAY / self.alpha).sqrt()
    }

    /// Half-width in `u` on one axis. The lag integrand is a Gaussian with
    /// complex rate `alpha/2 - i a/(2b)`; its transform decays like
    /// `exp(-w^2 Re(1/gamma) / 4)` in the frequency `w = (u - r)/b`.
    pub fn frequency_extent(&self, p: &OlctParams) -> f64 {
        if p.b == 0.0 {
            // the lag is pinned at d (u - r) and ad = 1 keeps d nonzero
            return p.r.abs() + self.lag_extent() / p.d.abs();
        }
        let (re, im) = (0.5 * self.alpha, -0.5 * p.a / p.b);
        let inv_re = re / (re * re + im * im);
        let omega = (DECAY / (0.25 * inv_re)).sqrt();
        p.r.abs() + p.b.abs() * (self.freq + omega)
    }
}

/// One grid per integration variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPlan {
    pub t: GridSpec2D,
    pub u: GridSpec2D,
    pub n: GridSpec2D,
    pub w: GridSpec2D,
    pub signal: GridSpec2D,
}

impl GridPlan {
    /// Extents from the decay of the given envelope.
    pub fn auto(env: &Envelope, params: &ParamPair, sizes: GridSizes) -> Result<Self> {
        sizes.validate()?;
        let u_half = env.frequency_extent(&params.a1).max(env.frequency_extent(&params.a2));
        Ok(GridPlan {
            t: GridSpec2D::new(sizes.n_t, env.time_extent())?,
            u: GridSpec2D::new(sizes.n_u, u_half)?,
            n: GridSpec2D::new(sizes.n_n, env.lag_extent())?,
            w: GridSpec2D::new(sizes.n_w, env.time_extent())?,
            signal: GridSpec2D::new(sizes.n_w, env.signal_extent())?,
        })
    }

    /// The same half-width for every variable.
    pub fn uniform(half_width: f64, sizes: GridSizes) -> Result<Self> {
        sizes.validate()?;
        Ok(GridPlan {
            t: GridSpec2D::new(sizes.n_t, half_width)?,
            u: GridSpec2D::new(sizes.n_u, half_width)?,
            n: GridSpec2D::new(sizes.n_n, half_width)?,
            w: GridSpec2D::new(sizes.n_w, half_width)?,
            signal: GridSpec2D::new(sizes.n_w, half_width)?,
        })
    }

    /// Same extents, point counts multiplied by `factor`.
    pub fn refined(&self, factor: f64) -> Self {
        GridPlan {
            t: self.t.refined(factor),
            u: self.u.refined(factor),
            n: self.n.refined(factor),
            w: self.w.refined(factor),
            signal: self.signal.refined(factor),
        }
    }

    pub fn sizes(&self) -> GridSizes {
        GridSizes { n_t: self.t.n, n_u: self.u.n, n_n: self.n.n, n_w: self.w.n }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::olct::qft_params;
    use std::f64::consts::PI;

    #[test]
    fn unit_gaussian_extents() {
        let env = Envelope::of(&[&AnalyticSignal::unit_gaussian()]);
        assert_eq!(env.alpha, PI);
        assert!((env.signal_extent() - (36.0 / PI).sqrt()).abs() < 1e-15);
        assert!((env.lag_extent() - 2.0 * env.time_extent()).abs() < 1e-14);
        // exp(-alpha L^2) = exp(-36) at the signal edge
        let l = env.signal_extent();
        assert!(((-PI * l * l).exp() - (-36.0f64).exp()).abs() < 1e-25);
        // QFT: omega^2 / (2 pi) = 36
        let lu = env.frequency_extent(&qft_params());
        assert!((lu * lu / (2.0 * PI) - 36.0).abs() < 1e-12);
    }

    #[test]
    fn envelope_of_several() {
        let a = AnalyticSignal::unit_gaussian().with_shift([0.5, -1.5]).with_modulation(2.0, 0.0);
        let b = AnalyticSignal::gaussian(crate::Quaternion::ONE, 1.0);
        let env = Envelope::of(&[&a, &b]);
        assert_eq!(env, Envelope { alpha: 1.0, radius: 1.5, freq: 2.0 });
        let c = env.combined();
        assert_eq!(c, Envelope { alpha: 0.5, radius: 3.0, freq: 2.0 });
        assert_eq!(Envelope::of(&[]).alpha, PI);
    }

    #[test]
    fn chirp_narrows_frequency_support() {
        let env = Envelope::of(&[&AnalyticSignal::unit_gaussian()]);
        let flat = OlctParams::new(0.0, 2.0, -0.5, 0.0, 0.0, 0.0).unwrap();
        let chirped = OlctParams::new(1.0, 2.0, 1.0, 3.0, 0.0, 0.0).unwrap();
        assert!(env.frequency_extent(&chirped) > env.frequency_extent(&flat));
    }

    #[test]
    fn plans() {
        let sizes = GridSizes::default();
        let plan = GridPlan::auto(&Envelope::of(&[]), &ParamPair::qft(), sizes).unwrap();
        assert_eq!(plan.sizes(), sizes);
        assert_eq!(plan.refined(1.5).sizes(), GridSizes { n_t: 36, n_u: 36, n_n: 72, n_w: 72 });
        let uni = GridPlan::uniform(6.0, GridSizes::uniform(16)).unwrap();
        assert_eq!(uni.u.half_width, 6.0);
        assert!(GridPlan::uniform(6.0, GridSizes::uniform(4)).is_err());
        assert_eq!(sizes.scaled(2.0), GridSizes { n_t: 48, n_u: 48, n_n: 96, n_w: 96 });
    }
}
