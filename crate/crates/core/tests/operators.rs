use proptest::prelude::*;

use qwvd::convcorr::{conv_theorem_rhs, convolve, corr_theorem_rhs, correlate, weight_psi, TheoremVariant};
use qwvd::verify::{relative_residual, theorem_specs};
use qwvd::{qolct_forward, wvd_point, AnalyticSignal, Axis, GridSizes, GridSpec2D, OlctParams, ParamPair, Quaternion, Settings, Signal};

fn generic() -> ParamPair {
    ParamPair::symmetric(OlctParams::new(1.0, 2.0, 1.0, 3.0, 0.5, -0.7).unwrap())
}

/// Plain real-valued midpoint sum of f(z) g(t - z) over the lattice.
fn classical_convolution(f: &dyn Fn(f64, f64) -> f64, g: &dyn Fn(f64, f64) -> f64, spec: GridSpec2D, t: [f64; 2]) -> f64 {
    let h = spec.delta();
    let mut sum = 0.0;
    for k1 in 0..spec.n {
        for k2 in 0..spec.n {
            let (z1, z2) = (spec.coord(k1), spec.coord(k2));
            sum += f(z1, z2) * g(t[0] - z1, t[1] - z2);
        }
    }
    sum * h * h
}

#[test]
fn convolution_matches_real_double_loop() {
    let f = AnalyticSignal::gaussian(Quaternion::real(1.0), 2.0).with_shift([0.3, -0.2]);
    let g = AnalyticSignal::gaussian(Quaternion::real(-0.5), 1.0);
    let fr = |a: f64, b: f64| f.eval([a, b]).w;
    let gr = |a: f64, b: f64| g.eval([a, b]).w;
    let spec = GridSpec2D::new(8, 3.0).unwrap();
    for k1 in 0..spec.n {
        for k2 in 0..spec.n {
            let t = spec.point(k1, k2);
            let q = convolve(&f, &g, &ParamPair::qft(), t, spec).unwrap();
            let exact = classical_convolution(&fr, &gr, spec, t);
            assert!((q - Quaternion::real(exact)).norm() <= 1e-10, "{t:?}: {q} vs {exact}");
        }
    }
}

#[test]
fn theorem_right_sides_are_refinement_stable() {
    let f = AnalyticSignal::unit_gaussian();
    let g = AnalyticSignal::gaussian(Quaternion::real(1.0), 2.0);
    for params in [ParamPair::qft(), generic()] {
        let specs = |n| theorem_specs(&f, &g, &params, &Settings::default().with_sizes(GridSizes::uniform(n))).unwrap().1;
        let (coarse, fine) = (specs(24), specs(48));
        for (t, u) in [([0.0, 0.0], [0.0, 0.0]), ([0.5, -0.5], [1.0, 0.5])] {
            let v = TheoremVariant::default();
            let a = conv_theorem_rhs(&f, &g, &params, t, u, coarse, v).unwrap();
            let b = conv_theorem_rhs(&f, &g, &params, t, u, fine, v).unwrap();
            assert!(relative_residual(a, b) <= 1e-3, "convolution {t:?} {u:?}: {a} vs {b}");
            let a = corr_theorem_rhs(&f, &g, &params, t, u, coarse).unwrap();
            let b = corr_theorem_rhs(&f, &g, &params, t, u, fine).unwrap();
            assert!(relative_residual(a, b) <= 1e-3, "correlation {t:?} {u:?}: {a} vs {b}");
        }
    }
}

#[test]
fn degenerate_parameters_are_rejected() {
    let f = AnalyticSignal::unit_gaussian();
    let chirp = ParamPair::new(OlctParams::new(1.0, 0.0, 0.5, 1.0, 0.0, 0.0).unwrap(), qwvd::qft_params());
    let spec = GridSpec2D::new(16, 4.0).unwrap();
    assert!(convolve(&f, &f, &chirp, [0.0, 0.0], spec).is_err());
    assert!(correlate(&f, &f, &chirp, [0.0, 0.0], spec).is_err());
}

fn arb_params() -> impl Strategy<Value = OlctParams> {
    (-2.0f64..2.0, 0.5f64..2.0, -2.0f64..2.0, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b, d, r, s)| {
        // c from ad - bc = 1
        OlctParams::new(a, b, (a * d - 1.0) / b, d, r, s).unwrap()
    })
}

fn arb_coeff() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-2.0f64..2.0).prop_map(Quaternion::from_array)
}

fn arb_signal() -> impl Strategy<Value = AnalyticSignal> {
    (arb_coeff(), 1.0f64..4.0, prop::array::uniform2(-0.5f64..0.5), -1.0f64..1.0, -1.0f64..1.0)
        .prop_map(|(c, alpha, shift, mi, mj)| AnalyticSignal::new(c, alpha, shift, mi, mj).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn weight_has_unit_modulus(p in arb_params(), z in -5.0f64..5.0, t in -5.0f64..5.0, i_axis in any::<bool>()) {
        let axis = if i_axis { Axis::I } else { Axis::J };
        prop_assert!((weight_psi(axis, &p, z, t).unwrap().norm() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn convolution_is_bilinear(p in arb_params(), f in arb_signal(), g in arb_signal(), h in arb_signal(), a in -2.0f64..2.0, t in prop::array::uniform2(-1.0f64..1.0)) {
        let params = ParamPair::symmetric(p);
        let spec = GridSpec2D::new(16, 4.0).unwrap();
        let combo = qwvd::signal::SumOf(qwvd::signal::Scaled { scale: a, inner: f }, h);
        for corr in [false, true] {
            let run = |x: &dyn Signal, y: &dyn Signal| if corr {
                correlate(x, y, &params, t, spec).unwrap()
            } else {
                convolve(x, y, &params, t, spec).unwrap()
            };
            let lhs = run(&combo, &g);
            let rhs = run(&f, &g) * a + run(&h, &g);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()), "{lhs} vs {rhs}");
            let lhs = run(&g, &combo);
            let rhs = run(&g, &f) * a + run(&g, &h);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn transform_is_real_linear(p in arb_params(), f in arb_signal(), g in arb_signal(), a in -2.0f64..2.0, u in prop::array::uniform2(-2.0f64..2.0)) {
        let params = ParamPair::new(p, qwvd::qft_params());
        let spec = GridSpec2D::new(16, 4.0).unwrap();
        let combo = qwvd::signal::SumOf(qwvd::signal::Scaled { scale: a, inner: f }, g);
        let lhs = qolct_forward(&combo, &params, u, spec).unwrap();
        let rhs = qolct_forward(&f, &params, u, spec).unwrap() * a + qolct_forward(&g, &params, u, spec).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn cross_terms_expand(p in arb_params(), f in arb_signal(), g in arb_signal(), t in prop::array::uniform2(-1.0f64..1.0), u in prop::array::uniform2(-2.0f64..2.0)) {
        let params = ParamPair::symmetric(p);
        let spec = GridSpec2D::new(16, 4.0).unwrap();
        let sum = qwvd::signal::SumOf(f, g);
        let w = |x: &dyn Signal, y: &dyn Signal| wvd_point(x, y, &params, t, u, spec);
        let lhs = w(&sum, &sum);
        let rhs = w(&f, &f) + w(&f, &g) + w(&g, &f) + w(&g, &g);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }
}
