//! Convolution and correlation operators of the QOLCT and the two sides of
//! the associated distribution theorems.
//!
//! ```text
//! (f * g)(t) = integral Psi_i(z1,t1) f(z) g(t - z) Psi_j(z2,t2) dz
//! (f o g)(t) = integral e^{i (a1/b1) 2 z1 (z1 + t1)} conj(f(z)) g(z + t) e^{j (a2/b2) 2 z2 (z2 + t2)} dz
//! ```
//!
//! with `Psi_e(z, t) = exp(-e (a/b) 2 z (t - z))`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{sample, GridSpec2D};
use crate::olct::{sandwich, OlctParams, ParamPair};
use crate::quaternion::{sqrt_2pib, unit_exp, Axis, Quaternion};
use crate::signal::{Conjugate, Point, Signal};
use crate::wvd::{wvd_sampled, WvdEvaluator};

/// How the conjugated factor of the convolved signal enters the distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondFactor {
    /// `conj((f * g)(t - n/2))`, the distribution of `f * g` itself.
    #[default]
    ConjOfConvolution,
    /// `(conj f * conj g)(t - n/2)`.
    ConvolutionOfConjugates,
}

/// Sign of `r2^2` in the right-hand prefactor of the convolution theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrSign {
    /// `d2 (u2^2 + r2^2)`.
    #[default]
    StatementPlus,
    /// `d2 (u2^2 - r2^2)`.
    ProofMinus,
}

impl SecondFactor {
    pub fn flag(self) -> &'static str {
        match self {
            SecondFactor::ConjOfConvolution => "conj-conv",
            SecondFactor::ConvolutionOfConjugates => "conv-conj",
        }
    }
}

impl CorrSign {
    pub fn flag(self) -> &'static str {
        match self {
            CorrSign::StatementPlus => "plus",
            CorrSign::ProofMinus => "minus",
        }
    }
}

impl FromStr for SecondFactor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conj-conv" => Ok(SecondFactor::ConjOfConvolution),
            "conv-conj" => Ok(SecondFactor::ConvolutionOfConjugates),
            _ => Err(Error::Parse(format!("second factor must be conj-conv or conv-conj, got {s:?}"))),
        }
    }
}

impl FromStr for CorrSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(CorrSign::StatementPlus),
            "minus" => Ok(CorrSign::ProofMinus),
            _ => Err(Error::Parse(format!("sign must be plus or minus, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct TheoremVariant {
    pub second_factor: SecondFactor,
    pub corr_sign: CorrSign,
}

impl TheoremVariant {
    pub fn all() -> [TheoremVariant; 4] {
        let mut out = [TheoremVariant::default(); 4];
        let mut k = 0;
        for second_factor in [SecondFactor::ConjOfConvolution, SecondFactor::ConvolutionOfConjugates] {
            for corr_sign in [CorrSign::StatementPlus, CorrSign::ProofMinus] {
                out[k] = TheoremVariant { second_factor, corr_sign };
                k += 1;
            }
        }
        out
    }
}

impl fmt::Display for TheoremVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.second_factor.flag(), self.corr_sign.flag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    Convolution,
    Correlation,
}

fn ratio(axis: Axis, p: &OlctParams) -> Result<f64> {
    if p.b == 0.0 {
        return Err(Error::DegenerateParameter(axis));
    }
    Ok(p.a / p.b)
}

fn ratios(params: &ParamPair) -> Result<[f64; 2]> {
    Ok([ratio(Axis::I, &params.a1)?, ratio(Axis::J, &params.a2)?])
}

/// Weight function `exp(-axis (a/b) 2 z (t - z))`.
pub fn weight_psi(axis: Axis, p: &OlctParams, z: f64, t: f64) -> Result<Quaternion> {
    Ok(unit_exp(axis, -ratio(axis, p)? * 2.0 * z * (t - z)))
}

/// Convolution or correlation of `f` with `g`, evaluated by quadrature over
/// a fixed `z` grid. Samples of the first operand are cached.
#[derive(Debug, Clone)]
pub struct Combined<G> {
    op: Operator,
    ratio: [f64; 2],
    spec: GridSpec2D,
    zs: Vec<f64>,
    first: Vec<Quaternion>,
    g: G,
}

impl<G: Signal> Combined<G> {
    pub fn convolution<F: Signal + ?Sized>(f: &F, g: G, params: &ParamPair, spec: GridSpec2D) -> Result<Self> {
        Self::build(Operator::Convolution, f, g, params, spec)
    }

    pub fn correlation<F: Signal + ?Sized>(f: &F, g: G, params: &ParamPair, spec: GridSpec2D) -> Result<Self> {
        Self::build(Operator::Correlation, f, g, params, spec)
    }

    pub fn new<F: Signal + ?Sized>(op: Operator, f: &F, g: G, params: &ParamPair, spec: GridSpec2D) -> Result<Self> {
        Self::build(op, f, g, params, spec)
    }

    fn build<F: Signal + ?Sized>(op: Operator, f: &F, g: G, params: &ParamPair, spec: GridSpec2D) -> Result<Self> {
        let ratio = ratios(params)?;
        let mut first = sample(f, spec).values;
        if op == Operator::Correlation {
            first.iter_mut().for_each(|q| *q = q.conj());
        }
        Ok(Combined { op, ratio, spec, zs: spec.coords(), first, g })
    }

    pub fn operator(&self) -> Operator {
        self.op
    }

    fn weights(&self, axis: Axis, t: f64) -> Vec<Quaternion> {
        let r = self.ratio[axis as usize];
        self.zs
            .iter()
            .map(|&z| match self.op {
                Operator::Convolution => unit_exp(axis, -r * 2.0 * z * (t - z)),
                Operator::Correlation => unit_exp(axis, r * 2.0 * z * (z + t)),
            })
            .collect()
    }
}

impl<G: Signal> Signal for Combined<G> {
    fn eval(&self, t: Point) -> Quaternion {
        let n = self.zs.len();
        let mut h = Vec::with_capacity(n * n);
        for (k1, &z1) in self.zs.iter().enumerate() {
            for (k2, &z2) in self.zs.iter().enumerate() {
                let x = match self.op {
                    Operator::Convolution => [t[0] - z1, t[1] - z2],
                    Operator::Correlation => [z1 + t[0], z2 + t[1]],
                };
                h.push(self.first[k1 * n + k2] * self.g.eval(x));
            }
        }
        let left = self.weights(Axis::I, t[0]);
        let right = self.weights(Axis::J, t[1]);
        sandwich(&left, &h, &right) * self.spec.weight()
    }

    fn describe(&self) -> String {
        let name = match self.op {
            Operator::Convolution => "convolution",
            Operator::Correlation => "correlation",
        };
        format!("{name}({})", self.g.describe())
    }
}

/// `(f * g)(t)` by quadrature over `spec`.
pub fn convolve<F, G>(f: &F, g: &G, params: &ParamPair, t: Point, spec: GridSpec2D) -> Result<Quaternion>
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    Ok(Combined::convolution(f, g, params, spec)?.eval(t))
}

/// `(f o g)(t)` by quadrature over `spec`.
pub fn correlate<F, G>(f: &F, g: &G, params: &ParamPair, t: Point, spec: GridSpec2D) -> Result<Quaternion>
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    Ok(Combined::correlation(f, g, params, spec)?.eval(t))
}

/// Grids used by the theorem evaluators: `z` for the operator itself, `n`
/// for the distribution lag and `w` for the right-hand-side integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvSpecs {
    pub z: GridSpec2D,
    pub n: GridSpec2D,
    pub w: GridSpec2D,
}

/// `conj(conj f * conj g)`, the second factor under the conv-conj reading.
type ConjugatedCombined<'a, G> = Conjugate<Combined<Conjugate<&'a G>>>;

/// Both sides of the convolution and correlation theorems for one pair of
/// signals. Results over probe sets are laid out `[t][u]`.
pub struct TheoremSetup<'a, F: ?Sized, G: ?Sized> {
    pub f: &'a F,
    pub g: &'a G,
    pub params: ParamPair,
    pub specs: ConvSpecs,
}

impl<'a, F, G> TheoremSetup<'a, F, G>
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    pub fn new(f: &'a F, g: &'a G, params: ParamPair, specs: ConvSpecs) -> Self {
        TheoremSetup { f, g, params, specs }
    }

    fn operands(&self, op: Operator, variant: TheoremVariant) -> Result<(Combined<&'a G>, Option<ConjugatedCombined<'a, G>>)> {
        let first = Combined::new(op, self.f, self.g, &self.params, self.specs.z)?;
        let second = match variant.second_factor {
            SecondFactor::ConjOfConvolution => None,
            SecondFactor::ConvolutionOfConjugates => {
                Some(Conjugate(Combined::new(op, &Conjugate(self.f), Conjugate(self.g), &self.params, self.specs.z)?))
            }
        };
        Ok((first, second))
    }

    /// Distribution of the combined signal by nested quadrature.
    pub fn lhs(&self, op: Operator, variant: TheoremVariant, ts: &[Point], us: &[Point]) -> Result<Vec<Quaternion>> {
        let (first, second) = self.operands(op, variant)?;
        let second: &dyn Signal = match &second {
            Some(s) => s,
            None => &first,
        };
        let eval = WvdEvaluator::new(self.params, self.specs.n);
        let rows: Vec<Vec<Quaternion>> = ts.par_iter().map(|&t| eval.at_time(&first, second, t, us)).collect();
        Ok(rows.concat())
    }

    /// Same quantity by sampling the combined signal on `lattice` first and
    /// summing over lags that stay on the lattice. Every `t` must be a node.
    pub fn lhs_sampled(
        &self,
        op: Operator,
        variant: TheoremVariant,
        ts: &[Point],
        us: &[Point],
        lattice: GridSpec2D,
    ) -> Result<Vec<Quaternion>> {
        let (first, second) = self.operands(op, variant)?;
        let first_s = sample(&first, lattice);
        let second_s = match &second {
            Some(s) => sample(s, lattice),
            None => first_s.clone(),
        };
        let mut out = Vec::with_capacity(ts.len() * us.len());
        for t in ts {
            let node = |x: f64| {
                lattice
                    .index_of(x)
                    .filter(|&k| (lattice.coord(k) - x).abs() <= 1e-9 * lattice.delta())
                    .ok_or_else(|| Error::InvalidArgument(format!("{x} is not a node of the sampling lattice")))
            };
            let k = (node(t[0])?, node(t[1])?);
            for &u in us {
                out.push(wvd_sampled(&first_s, &second_s, &self.params, k, u)?);
            }
        }
        Ok(out)
    }

    /// The `w` integral between the prefactors.
    pub fn rhs_integrals(&self, op: Operator, ts: &[Point], us: &[Point]) -> Result<Vec<Quaternion>> {
        let [r1, r2] = ratios(&self.params)?;
        let eval = WvdEvaluator::new(self.params, self.specs.n);
        let w_spec = self.specs.w;
        let nw = w_spec.n;
        let ws: Vec<Point> = (0..nw * nw).map(|i| w_spec.point(i / nw, i % nw)).collect();
        let f_us: Vec<Point> = match op {
            Operator::Convolution => us.to_vec(),
            Operator::Correlation => us.iter().map(|u| [-u[0], -u[1]]).collect(),
        };
        let wff: Vec<Vec<Quaternion>> = ws.par_iter().map(|&w| eval.at_time(self.f, self.f, w, &f_us)).collect();
        let weight = w_spec.weight();
        let mut out = Vec::with_capacity(ts.len() * us.len());
        for &t in ts {
            let shifted = |w: Point| match op {
                Operator::Convolution => [t[0] - w[0], t[1] - w[1]],
                Operator::Correlation => [t[0] + w[0], t[1] + w[1]],
            };
            let wgg: Vec<Vec<Quaternion>> = ws.par_iter().map(|&w| eval.at_time(self.g, self.g, shifted(w), us)).collect();
            let chirps: Vec<(Quaternion, Quaternion)> = ws
                .iter()
                .map(|w| match op {
                    Operator::Convolution => {
                        (unit_exp(Axis::I, -r1 * 4.0 * w[0] * (t[0] - w[0])), unit_exp(Axis::J, -r2 * 4.0 * w[1] * (t[1] - w[1])))
                    }
                    Operator::Correlation => {
                        (unit_exp(Axis::I, r1 * 4.0 * w[0] * (t[0] + w[0])), unit_exp(Axis::J, r2 * 4.0 * w[1] * (t[1] + w[1])))
                    }
                })
                .collect();
            for iu in 0..us.len() {
                let mut acc = Quaternion::ZERO;
                for (iw, (left, right)) in chirps.iter().enumerate() {
                    acc += *left * wff[iw][iu] * wgg[iw][iu] * *right;
                }
                out.push(acc * weight);
            }
        }
        Ok(out)
    }

    /// Prefactors applied to the integrals.
    pub fn rhs(&self, op: Operator, variant: TheoremVariant, ts: &[Point], us: &[Point]) -> Result<Vec<Quaternion>> {
        let integrals = self.rhs_integrals(op, ts, us)?;
        apply_prefactors(&integrals, op, variant, &self.params, us)
    }
}

/// Multiplies `[t][u]` integrals by the left and right prefactors at each `u`.
pub fn apply_prefactors(
    integrals: &[Quaternion],
    op: Operator,
    variant: TheoremVariant,
    params: &ParamPair,
    us: &[Point],
) -> Result<Vec<Quaternion>> {
    let factors: Vec<(Quaternion, Quaternion)> = us.iter().map(|&u| prefactors(op, variant, params, u)).collect::<Result<_>>()?;
    Ok(integrals.iter().enumerate().map(|(k, q)| factors[k % us.len()].0 * *q * factors[k % us.len()].1).collect())
}

/// `sqrt(2 pi b e) exp(-e [d (u^2 + r^2) -+ 2u (d r - b s)] / (2b))` for both axes.
pub fn prefactors(op: Operator, variant: TheoremVariant, params: &ParamPair, u: Point) -> Result<(Quaternion, Quaternion)> {
    let (p1, p2) = (&params.a1, &params.a2);
    let offset = |p: &OlctParams, u: f64| match op {
        Operator::Convolution => -2.0 * u * (p.d * p.r - p.b * p.s),
        Operator::Correlation => 2.0 * u * (p.d * p.r - p.b * p.s),
    };
    let r2_sign = match (op, variant.corr_sign) {
        (Operator::Convolution, CorrSign::ProofMinus) => -1.0,
        _ => 1.0,
    };
    let phase1 = -(p1.d * (u[0] * u[0] + p1.r * p1.r) + offset(p1, u[0])) / (2.0 * p1.b);
    let phase2 = -(p2.d * (u[1] * u[1] + r2_sign * p2.r * p2.r) + offset(p2, u[1])) / (2.0 * p2.b);
    let left = sqrt_2pib(Axis::I, p1.b)? * unit_exp(Axis::I, phase1);
    let right = sqrt_2pib(Axis::J, p2.b)? * unit_exp(Axis::J, phase2);
    Ok((left, right))
}

/// Prefactors of the offset-free form, `sqrt(2 pi b e) exp(-e d u^2 / (2b))`.
/// The `j` factor is applied on the right, as in the general form.
pub fn qlct_prefactors(params: &ParamPair, u: Point) -> Result<(Quaternion, Quaternion)> {
    let (p1, p2) = (&params.a1, &params.a2);
    if [p1.r, p1.s, p2.r, p2.s].iter().any(|&v| v != 0.0) {
        return Err(Error::InvalidArgument("offset-free prefactors need r = s = 0".into()));
    }
    let left = sqrt_2pib(Axis::I, p1.b)? * unit_exp(Axis::I, -(p1.d * (u[0] * u[0])) / (2.0 * p1.b));
    let right = sqrt_2pib(Axis::J, p2.b)? * unit_exp(Axis::J, -(p2.d * (u[1] * u[1])) / (2.0 * p2.b));
    Ok((left, right))
}

fn single<F, G>(
    f: &F,
    g: &G,
    params: &ParamPair,
    specs: ConvSpecs,
    run: impl FnOnce(&TheoremSetup<'_, F, G>) -> Result<Vec<Quaternion>>,
) -> Result<Quaternion>
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    Ok(run(&TheoremSetup::new(f, g, *params, specs))?[0])
}

/// Distribution of `f * g` at `(t, u)` with the second factor read per `variant`.
pub fn wvd_of_convolution<F, G>(
    f: &F,
    g: &G,
    params: &ParamPair,
    t: Point,
    u: Point,
    specs: ConvSpecs,
    variant: TheoremVariant,
) -> Result<Quaternion>
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    single(f, g, params, specs, |s| s.lhs(Operator::Convolution, variant, &[t], &[u]))
}

/// Distribution of `f o g` at `(t, u)`.
pub fn wvd_of_correlation<F, G>(
    f: &F,
    g: &G,
    params: &ParamPair,
    t: Point,
    u: Point,
    specs: ConvSpecs,
    variant: TheoremVariant,
) -> Result<Quaternion>
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    single(f, g, params, specs, |s| s.lhs(Operator::Correlation, variant, &[t], &[u]))
}

/// Right-hand side of the convolution theorem at `(t, u)`.
pub fn conv_theorem_rhs<F, G>(
    f: &F,
    g: &G,
    params: &ParamPair,
    t: Point,
    u: Point,
    specs: ConvSpecs,
    variant: TheoremVariant,
) -> Result<Quaternion>
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    single(f, g, params, specs, |s| s.rhs(Operator::Convolution, variant, &[t], &[u]))
}

/// Right-hand side of the convolution theorem for offset-free parameters.
pub fn conv_theorem_rhs_qlct<F, G>(f: &F, g: &G, params: &ParamPair, t: Point, u: Point, specs: ConvSpecs) -> Result<Quaternion>
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    let (left, right) = qlct_prefactors(params, u)?;
    let integral = single(f, g, params, specs, |s| s.rhs_integrals(Operator::Convolution, &[t], &[u]))?;
    Ok(left * integral * right)
}

/// Right-hand side of the correlation theorem at `(t, u)`.
pub fn corr_theorem_rhs<F, G>(f: &F, g: &G, params: &ParamPair, t: Point, u: Point, specs: ConvSpecs) -> Result<Quaternion>
where
    F: Signal + ?Sized,
    G: Signal + ?Sized,
{
    single(f, g, params, specs, |s| s.rhs(Operator::Correlation, TheoremVariant::default(), &[t], &[u]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::olct::{qft_params, qlct_params};
    use crate::signal::{AnalyticSignal, Scaled, SumOf, Zero};
    use std::f64::consts::PI;

    fn l6(n: usize) -> GridSpec2D {
        GridSpec2D::new(n, 6.0).unwrap()
    }

    fn specs(n: usize) -> ConvSpecs {
        ConvSpecs { z: GridSpec2D::new(n, 4.0).unwrap(), n: GridSpec2D::new(n, 6.0).unwrap(), w: GridSpec2D::new(n, 3.0).unwrap() }
    }

    #[test]
    fn weight_function_values() {
        for (z, t) in [(0.0, 0.0), (1.0, 2.0), (-3.0, 0.5)] {
            assert_eq!(weight_psi(Axis::I, &qft_params(), z, t).unwrap(), Quaternion::ONE);
        }
        let p = OlctParams::new(1.0, 2.0, 1.0, 3.0, 0.5, -0.7).unwrap();
        assert_eq!(weight_psi(Axis::J, &p, 1.7, 1.7).unwrap(), Quaternion::ONE);
        let p = OlctParams::new(1.0, 1.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        assert!(weight_psi(Axis::I, &p, 1.0, 2.0).unwrap().max_abs_diff(unit_exp(Axis::I, -2.0)) < 1e-16);
        let degenerate = OlctParams::new(1.0, 0.0, 0.0, 1.0, 0.0, 0.0).unwrap();
        assert!(matches!(weight_psi(Axis::J, &degenerate, 1.0, 1.0), Err(Error::DegenerateParameter(Axis::J))));
    }

    #[test]
    fn gaussian_self_convolution() {
        let f = AnalyticSignal::unit_gaussian();
        let p = ParamPair::qft();
        let c0 = convolve(&f, &f, &p, [0.0, 0.0], l6(64)).unwrap();
        assert!(c0.max_abs_diff(Quaternion::real(0.5)) < 1e-4);
        let c1 = convolve(&f, &f, &p, [1.0, 1.0], l6(64)).unwrap();
        assert!(c1.max_abs_diff(Quaternion::real(0.5 * (-PI).exp())) < 1e-4);
        assert_eq!(convolve(&Zero, &f, &p, [0.3, 0.1], l6(16)).unwrap(), Quaternion::ZERO);
    }

    #[test]
    fn gaussian_autocorrelation() {
        let f = AnalyticSignal::unit_gaussian();
        let p = ParamPair::qft();
        let c0 = correlate(&f, &f, &p, [0.0, 0.0], l6(64)).unwrap();
        assert!(c0.max_abs_diff(Quaternion::real(0.5)) < 1e-4);
        let c1 = correlate(&f, &f, &p, [1.0, 1.0], l6(64)).unwrap();
        assert!(c1.max_abs_diff(Quaternion::real(0.5 * (-PI).exp())) < 1e-4);
        assert_eq!(correlate(&f, &Zero, &p, [0.3, 0.1], l6(16)).unwrap(), Quaternion::ZERO);
    }

    #[test]
    fn degenerate_parameters_rejected() {
        let f = AnalyticSignal::unit_gaussian();
        let p = ParamPair::new(OlctParams::new(1.0, 0.0, 2.0, 1.0, 0.0, 0.0).unwrap(), qft_params());
        assert!(matches!(convolve(&f, &f, &p, [0.0, 0.0], l6(8)), Err(Error::DegenerateParameter(Axis::I))));
        assert!(correlate(&f, &f, &p, [0.0, 0.0], l6(8)).is_err());
        assert!(conv_theorem_rhs(&f, &f, &p, [0.0, 0.0], [0.0, 0.0], specs(8), TheoremVariant::default()).is_err());
    }

    #[test]
    fn operators_are_bilinear() {
        let p = ParamPair::symmetric(OlctParams::new(1.0, 2.0, 1.0, 3.0, 0.5, -0.7).unwrap());
        let f = AnalyticSignal::new(Quaternion::new(1.0, 0.5, -0.25, 0.1), 2.0, [0.2, -0.1], 1.0, 0.5).unwrap();
        let g = AnalyticSignal::new(Quaternion::new(0.0, 1.0, 1.0, 0.3), 1.0, [-0.4, 0.3], 0.0, -1.0).unwrap();
        let h = AnalyticSignal::unit_gaussian().with_shift([0.5, 0.5]);
        let t = [0.4, -0.3];
        for op in [convolve::<dyn Signal, dyn Signal>, correlate::<dyn Signal, dyn Signal>] {
            let lhs = op(&SumOf(f, Scaled { scale: -1.5, inner: h }), &g, &p, t, l6(24)).unwrap();
            let rhs = op(&f, &g, &p, t, l6(24)).unwrap() - op(&h, &g, &p, t, l6(24)).unwrap() * 1.5;
            assert!(lhs.max_abs_diff(rhs) < 1e-12);
            let lhs = op(&f, &SumOf(g, Scaled { scale: 2.0, inner: h }), &p, t, l6(24)).unwrap();
            let rhs = op(&f, &g, &p, t, l6(24)).unwrap() + op(&f, &h, &p, t, l6(24)).unwrap() * 2.0;
            assert!(lhs.max_abs_diff(rhs) < 1e-12);
        }
    }

    #[test]
    fn variants_and_flags() {
        let all = TheoremVariant::all();
        assert_eq!(all.len(), 4);
        assert_eq!(all[0], TheoremVariant::default());
        assert_eq!(all[3].to_string(), "conv-conj/minus");
        assert_eq!("conv-conj".parse::<SecondFactor>().unwrap(), SecondFactor::ConvolutionOfConjugates);
        assert_eq!("minus".parse::<CorrSign>().unwrap(), CorrSign::ProofMinus);
        assert!("both".parse::<CorrSign>().is_err());
        let json = serde_json::to_string(&all[1]).unwrap();
        assert_eq!(json, r#"{"second_factor":"conj_of_convolution","corr_sign":"proof_minus"}"#);
    }

    #[test]
    fn second_factor_readings_agree_for_real_signals_at_qft() {
        let f = AnalyticSignal::unit_gaussian();
        let g = AnalyticSignal::gaussian(Quaternion::real(0.8), 4.0).with_shift([0.2, 0.0]);
        let p = ParamPair::qft();
        let [a, _, b, _] = TheoremVariant::all();
        for (t, u) in [([0.0, 0.0], [0.0, 0.0]), ([0.5, -0.5], [1.0, -1.0])] {
            let x = wvd_of_convolution(&f, &g, &p, t, u, specs(24), a).unwrap();
            let y = wvd_of_convolution(&f, &g, &p, t, u, specs(24), b).unwrap();
            assert!(x.max_abs_diff(y) < 1e-6 * x.norm().max(1.0));
        }
        let z = wvd_of_convolution(&Zero, &g, &p, [0.0, 0.0], [0.0, 0.0], specs(8), b).unwrap();
        assert_eq!(z, Quaternion::ZERO);
    }

    #[test]
    fn offset_free_path_matches_general_prefactors() {
        let f = AnalyticSignal::unit_gaussian();
        let g = AnalyticSignal::gaussian(Quaternion::real(1.0), 4.0);
        let p = ParamPair::new(qlct_params(1.0, 2.0, 1.0, 3.0).unwrap(), qlct_params(0.5, 1.0, -1.0, 0.0).unwrap());
        for u in [[0.0, 0.0], [1.0, -1.0], [0.3, 2.5]] {
            let (l, r) = prefactors(Operator::Convolution, TheoremVariant::default(), &p, u).unwrap();
            let (lq, rq) = qlct_prefactors(&p, u).unwrap();
            assert_eq!((l, r), (lq, rq));
            let t = [0.5, 0.0];
            let general = conv_theorem_rhs(&f, &g, &p, t, u, specs(12), TheoremVariant::default()).unwrap();
            let reduced = conv_theorem_rhs_qlct(&f, &g, &p, t, u, specs(12)).unwrap();
            assert_eq!(general, reduced);
        }
        let offset = ParamPair::symmetric(OlctParams::new(1.0, 2.0, 1.0, 3.0, 0.5, 0.0).unwrap());
        assert!(qlct_prefactors(&offset, [0.0, 0.0]).is_err());
    }

    #[test]
    fn sign_variant_only_touches_convolution_prefactor() {
        let p = ParamPair::symmetric(OlctParams::new(1.0, 2.0, 1.0, 3.0, 0.5, -0.7).unwrap());
        let [plus, minus, ..] = TheoremVariant::all();
        let u = [0.4, -0.2];
        let a = prefactors(Operator::Convolution, plus, &p, u).unwrap();
        let b = prefactors(Operator::Convolution, minus, &p, u).unwrap();
        assert_eq!(a.0, b.0);
        assert!(a.1.max_abs_diff(b.1) > 1e-3);
        // the two right factors differ by exp(-j d r^2 / b)
        let ratio = a.1 * b.1.inverse().unwrap();
        assert!(ratio.max_abs_diff(unit_exp(Axis::J, -3.0 * 0.25 / 2.0)) < 1e-14);
        assert_eq!(prefactors(Operator::Correlation, plus, &p, u).unwrap(), prefactors(Operator::Correlation, minus, &p, u).unwrap());
        // qft: sqrt(2 pi i) and sqrt(2 pi j)
        let (l, r) = prefactors(Operator::Convolution, plus, &ParamPair::qft(), u).unwrap();
        assert!(l.max_abs_diff(sqrt_2pib(Axis::I, 1.0).unwrap()) < 1e-15);
        assert!(r.max_abs_diff(sqrt_2pib(Axis::J, 1.0).unwrap()) < 1e-15);
    }

    #[test]
    fn zero_window_gives_zero_on_both_sides() {
        let f = AnalyticSignal::unit_gaussian();
        let p = ParamPair::qft();
        let (t, u) = ([0.0, 0.0], [1.0, -1.0]);
        assert_eq!(corr_theorem_rhs(&f, &Zero, &p, t, u, specs(8)).unwrap(), Quaternion::ZERO);
        assert_eq!(wvd_of_correlation(&f, &Zero, &p, t, u, specs(8), TheoremVariant::default()).unwrap(), Quaternion::ZERO);
    }

    #[test]
    fn sampled_route_matches_nested_quadrature() {
        let f = AnalyticSignal::unit_gaussian();
        let p = ParamPair::qft();
        let setup = TheoremSetup::new(&f, &f, p, ConvSpecs { z: GridSpec2D::new(32, 4.0).unwrap(), ..specs(32) });
        let ts = [[0.0, 0.0], [1.0, -1.0]];
        let us = [[0.0, 0.0], [1.0, -1.0]];
        let lattice = GridSpec2D::with_spacing(81, 0.125).unwrap();
        for op in [Operator::Convolution, Operator::Correlation] {
            let a = setup.lhs(op, TheoremVariant::default(), &ts, &us).unwrap();
            let b = setup.lhs_sampled(op, TheoremVariant::default(), &ts, &us, lattice).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!(x.max_abs_diff(*y) < 1e-6, "{op:?}: {x} vs {y}");
            }
        }
        assert!(setup.lhs_sampled(Operator::Convolution, TheoremVariant::default(), &[[0.01, 0.0]], &us, lattice).is_err());
    }
}
