use std::f64::consts::PI;

use halfline::kernels::{projection_interval, projection_pm, resolvent_hm};
use halfline::quad::{integrate_interval, QuadPolicy};
use halfline::specfun::{bessel_k, Sign};
use halfline::transforms::{
    default_nodes, generalized_hankel_apply, generalized_hankel_transpose_apply, geometric_grid, hankel_apply,
    hankel_nu_apply, hankel_nu_transpose_apply, identity_suite, involution_j, multiplier, multiplier_apply,
    wave_gamma_form, DecayClass, MultiplierParams, SampledFunction, Variable,
};
use halfline::{Complex64, Error, ExtendedParam, OperatorSpec};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Wide enough that an intermediate transform has negligible mass outside.
fn wide_nodes() -> Vec<f64> {
    geometric_grid(1e-6, 1e5, 1500)
}

fn sampled<F: Fn(f64) -> Complex64>(nodes: Vec<f64>, f: F, decay: DecayClass) -> SampledFunction {
    SampledFunction::from_fn(nodes, f, decay).unwrap()
}

/// y^{m+1/2}e^{−y²/2}, a fixed point of F_m.
fn gaussian_profile(m: Complex64) -> impl Fn(f64) -> Complex64 {
    move |y| c(y, 0.0).powc(m + 0.5) * (-y * y / 2.0).exp()
}

fn max_error(g: &SampledFunction, exact: impl Fn(f64) -> Complex64) -> f64 {
    g.nodes.iter().zip(&g.values).map(|(&x, &v)| (v - exact(x)).norm()).fold(0.0, f64::max)
}

fn test_function() -> SampledFunction {
    sampled(
        geometric_grid(1e-5, 20.0, 1500),
        |y| c(y.powf(0.8) * (-y * y / 2.0).exp(), 0.0),
        DecayClass::GaussianLike,
    )
}

#[test]
fn sine_transform_is_self_reciprocal() {
    let f = sampled(geometric_grid(1e-4, 20.0, 1500), |y| c(y * (-y * y / 2.0).exp(), 0.0), DecayClass::GaussianLike);
    let g = hankel_apply(c(0.5, 0.0), &f, &default_nodes()).unwrap();
    let err = max_error(&g, |x| c(x * (-x * x / 2.0).exp(), 0.0));
    assert!(err < 1e-8, "{err:.2e}");
}

#[test]
fn macdonald_profile_maps_to_rational_function() {
    // F_m Ka_m = √(2/π)x^{m+1/2}/(1+x²).
    for m in [c(0.5, 0.0), c(0.25, 0.0), c(0.3, 0.2)] {
        let f = sampled(geometric_grid(1e-6, 50.0, 2000), |y| bessel_k(m, y).unwrap(), DecayClass::Exponential);
        let g = hankel_apply(m, &f, &default_nodes()).unwrap();
        let err = max_error(&g, |x| (2.0 / PI).sqrt() * c(x, 0.0).powc(m + 0.5) / (1.0 + x * x));
        assert!(err < 1e-8, "m={m}: {err:.2e}");
    }
}

#[test]
fn hankel_transform_is_an_involution() {
    let out = default_nodes();
    for m in [c(-0.4, 0.0), c(0.0, 0.0), c(0.5, 0.0), c(0.3, 0.2)] {
        let gaussian = sampled(geometric_grid(1e-4, 20.0, 1500), gaussian_profile(m), DecayClass::GaussianLike);
        let macdonald = sampled(geometric_grid(1e-6, 50.0, 2000), |y| bessel_k(m, y).unwrap(), DecayClass::Exponential);
        for f in [gaussian, macdonald] {
            let twice = hankel_apply(m, &hankel_apply(m, &f, &wide_nodes()).unwrap(), &out).unwrap();
            let reference = sampled(out.clone(), |x| f.value_at(x), f.decay_class);
            let err = twice.relative_l2_error(&reference).unwrap();
            assert!(err < 1e-6, "m={m}: {err:.2e}");
        }
    }
}

#[test]
fn kappa_zero_is_a_phase_times_hankel() {
    let (m, f, out) = (c(0.3, 0.0), test_function(), geometric_grid(0.05, 20.0, 40));
    let plain = hankel_apply(m, &f, &out).unwrap();
    for sign in [Sign::Minus, Sign::Plus] {
        let g = generalized_hankel_apply(m, ExtendedParam::zero(), sign, &f, &out).unwrap();
        let phase = (c(0.0, sign.value() * PI / 2.0) * m).exp();
        for (a, b) in g.values.iter().zip(&plain.values) {
            assert!((a - phase * b).norm() < 1e-12, "{a} vs {}", phase * b);
        }
    }
}

#[test]
fn kappa_infinity_is_hankel_of_minus_m() {
    let (m, f, out) = (c(0.3, 0.1), test_function(), geometric_grid(0.05, 20.0, 40));
    let plain = hankel_apply(-m, &f, &out).unwrap();
    for sign in [Sign::Minus, Sign::Plus] {
        let g = generalized_hankel_apply(m, ExtendedParam::infinity(), sign, &f, &out).unwrap();
        let phase = (c(0.0, -sign.value() * PI / 2.0) * m).exp();
        for (a, b) in g.values.iter().zip(&plain.values) {
            assert!((a - phase * b).norm() < 1e-12, "{a} vs {}", phase * b);
        }
    }
}

#[test]
fn generalized_transforms_are_biorthogonal() {
    let (f, out) = (test_function(), default_nodes());
    let reference = sampled(out.clone(), |x| f.value_at(x), DecayClass::GaussianLike);
    let (m, kappa, nu) = (c(0.3, 0.0), ExtendedParam::real(2.0), ExtendedParam::real(1.0));
    for sign in [Sign::Minus, Sign::Plus] {
        let forward = generalized_hankel_apply(m, kappa, sign, &f, &wide_nodes()).unwrap();
        let back = generalized_hankel_transpose_apply(m, kappa, sign.flip(), &forward, &out).unwrap();
        let err = back.relative_l2_error(&reference).unwrap();
        assert!(err < 1e-5, "kappa {sign:?}: {err:.2e}");

        let forward = hankel_nu_apply(nu, sign, &f, &wide_nodes()).unwrap();
        let back = hankel_nu_transpose_apply(nu, sign.flip(), &forward, &out).unwrap();
        let err = back.relative_l2_error(&reference).unwrap();
        assert!(err < 1e-5, "nu {sign:?}: {err:.2e}");
    }
}

#[test]
fn nu_infinity_is_hankel_zero() {
    let (f, out) = (test_function(), geometric_grid(0.05, 20.0, 40));
    let plain = hankel_apply(c(0.0, 0.0), &f, &out).unwrap();
    let g = hankel_nu_apply(ExtendedParam::infinity(), Sign::Minus, &f, &out).unwrap();
    for (a, b) in g.values.iter().zip(&plain.values) {
        assert!((a - b).norm() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn nu_signs_are_conjugate_for_real_data() {
    let (f, out) = (test_function(), geometric_grid(0.05, 20.0, 40));
    let nu = ExtendedParam::real(1.0);
    let minus = hankel_nu_apply(nu, Sign::Minus, &f, &out).unwrap();
    let plus = hankel_nu_apply(nu, Sign::Plus, &f, &out).unwrap();
    for (a, b) in minus.values.iter().zip(&plus.values) {
        assert!((a - b.conj()).norm() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn exceptional_parameters_are_refused() {
    // ς = −2κ at m = 1/2, so κ = i puts ς on the exceptional ray.
    let (f, out) = (test_function(), vec![1.0]);
    let r = generalized_hankel_apply(c(0.5, 0.0), ExtendedParam::finite(c(0.0, 1.0)), Sign::Minus, &f, &out);
    assert!(matches!(r, Err(Error::Exceptional(_))), "{r:?}");
    let r = hankel_nu_apply(ExtendedParam::finite(c(0.0, PI / 2.0)), Sign::Plus, &f, &out);
    assert!(matches!(r, Err(Error::Exceptional(_))), "{r:?}");
}

#[test]
fn involution_j_remaps_nodes() {
    let f = sampled(geometric_grid(1e-3, 1e3, 401), |x| c(x.powf(0.7) * (-x).exp(), 0.1 * x), DecayClass::Exponential);
    let twice = involution_j(&involution_j(&f));
    for ((a, b), (u, v)) in twice.nodes.iter().zip(&f.nodes).zip(twice.values.iter().zip(&f.values)) {
        assert!((a - b).abs() <= 4.0 * f64::EPSILON * b);
        assert!((u - v).norm() <= 4.0 * f64::EPSILON * v.norm());
    }
    let jf = involution_j(&f);
    assert!((jf.l2_norm() - f.l2_norm()).abs() < 1e-10 * f.l2_norm());
}

#[test]
fn symmetric_profile_is_fixed_by_j() {
    let h = |x: f64| c((-x * x - 1.0 / (x * x)).exp() / x.sqrt(), 0.0);
    let f = sampled(geometric_grid(1e-2, 1e2, 301), h, DecayClass::GaussianLike);
    let jf = involution_j(&f);
    for (&x, &v) in jf.nodes.iter().zip(&jf.values) {
        assert!((v - f.eval(x).unwrap()).norm() < 1e-12, "x={x}");
    }
}

#[test]
fn multiplier_registry() {
    let xi = multiplier("xi_m", &MultiplierParams { m: c(0.3, 0.0), ..Default::default() }).unwrap();
    assert!((xi.eval(0.0) - 1.0).norm() < 1e-15);
    for i in 0..=400 {
        let t = -20.0 + 0.1 * i as f64;
        assert!((xi.eval(t).norm() - 1.0).abs() < 1e-12, "t={t}");
    }
    for sign in [Sign::Plus, Sign::Minus] {
        let wnd = multiplier("wnd", &MultiplierParams { sign, ..Default::default() }).unwrap();
        for i in 0..=400 {
            let t = -20.0 + 0.1 * i as f64;
            let gamma_form = wave_gamma_form(c(-0.5, 0.0), c(0.5, 0.0), sign, t).unwrap();
            assert!((wnd.eval(t) - gamma_form).norm() < 1e-10, "t={t}");
        }
    }
    let g = multiplier("g_mk", &MultiplierParams { m: c(0.3, 0.0), sign: Sign::Minus, ..Default::default() }).unwrap();
    assert_eq!(g.variable, Variable::Position);
    assert!((g.eval(1.7) - c(0.0, -0.3 * PI).exp()).norm() < 1e-15);
    assert!(matches!(
        multiplier("xi_q", &MultiplierParams::default()),
        Err(Error::UnknownLabel(label)) if label == "xi_q"
    ));
}

#[test]
fn identity_suite_passes() {
    let report = identity_suite();
    assert!(report.len() >= 20);
    for check in &report {
        assert!(check.passed, "{}: {:.2e}", check.name, check.max_error);
    }
}

#[test]
fn hankel_agrees_with_mellin_multiplier() {
    // F_m = J Ξ_m(A).
    let out = geometric_grid(1e-2, 1e2, 120);
    let inverted: Vec<f64> = out.iter().rev().map(|x| 1.0 / x).collect();
    for m in [c(-0.4, 0.0), c(0.3, 0.2)] {
        let profile = gaussian_profile(m);
        let f = sampled(geometric_grid(1e-4, 20.0, 1500), move |y| profile(y) * (1.0 + y), DecayClass::GaussianLike);
        let direct = hankel_apply(m, &f, &out).unwrap();
        let xi = multiplier("xi_m", &MultiplierParams { m, ..Default::default() }).unwrap();
        let via = involution_j(&multiplier_apply(&xi, &f, &inverted).unwrap());
        let via = SampledFunction::new(out.clone(), via.values, via.decay_class).unwrap();
        let err = via.relative_l2_error(&direct).unwrap();
        assert!(err < 1e-4, "m={m}: {err:.2e}");
    }
}

fn apply_kernel<K: Fn(f64, f64) -> Complex64>(kernel: K, f: &SampledFunction, x: f64) -> Complex64 {
    let policy = QuadPolicy::exponential(1.0).with_tol(1e-12, 1e-10);
    let left = integrate_interval(|y| kernel(x, y) * f.value_at(y), 0.0, x, &policy).unwrap();
    let right = integrate_interval(|y| kernel(x, y) * f.value_at(y), x, 12.0, &policy).unwrap();
    left.value + right.value
}

fn relative_l2(nodes: &[f64], got: &[Complex64], want: &[Complex64]) -> f64 {
    let a = sampled(nodes.to_vec(), |_| c(0.0, 0.0), DecayClass::Compact);
    let got = SampledFunction::new(nodes.to_vec(), got.to_vec(), a.decay_class).unwrap();
    let want = SampledFunction::new(nodes.to_vec(), want.to_vec(), a.decay_class).unwrap();
    got.relative_l2_error(&want).unwrap()
}

#[test]
fn hankel_diagonalizes_the_resolvent() {
    let (m, k) = (c(0.3, 0.0), c(1.0, 0.0));
    let f = test_function();
    let out = geometric_grid(0.05, 8.0, 40);
    let g = hankel_apply(m, &f, &wide_nodes()).unwrap();
    let g = g.multiply(|p| 1.0 / (p * p + k * k)).unwrap();
    let via = hankel_apply(m, &g, &out).unwrap();
    let direct: Vec<Complex64> = out
        .iter()
        .map(|&x| apply_kernel(|x, y| resolvent_hm(m, k, x, y).unwrap().value, &f, x))
        .collect();
    let err = relative_l2(&out, &via.values, &direct);
    assert!(err < 1e-5, "{err:.2e}");
}

#[test]
fn transforms_diagonalize_interval_projections() {
    let (m, f) = (c(0.3, 0.0), test_function());
    let out = geometric_grid(0.05, 8.0, 30);
    let band = geometric_grid(1.0, 2.0, 200);

    let g = hankel_apply(m, &f, &band).unwrap();
    let g = SampledFunction::new(band.clone(), g.values, DecayClass::Compact).unwrap();
    let via = hankel_apply(m, &g, &out).unwrap();
    let spec = OperatorSpec::homogeneous(m).unwrap();
    let direct: Vec<Complex64> = out
        .iter()
        .map(|&x| apply_kernel(|x, y| projection_interval(&spec, 1.0, 4.0, x, y).unwrap(), &f, x))
        .collect();
    let err = relative_l2(&out, &via.values, &direct);
    assert!(err < 1e-4, "H_m: {err:.2e}");

    let kappa = ExtendedParam::real(2.0);
    let g = generalized_hankel_transpose_apply(m, kappa, Sign::Minus, &f, &band).unwrap();
    let g = SampledFunction::new(band.clone(), g.values, DecayClass::Compact).unwrap();
    let via = generalized_hankel_apply(m, kappa, Sign::Plus, &g, &out).unwrap();
    let spec = OperatorSpec::kappa(m, kappa).unwrap();
    let direct: Vec<Complex64> = out
        .iter()
        .map(|&x| apply_kernel(|x, y| projection_interval(&spec, 1.0, 4.0, x, y).unwrap(), &f, x))
        .collect();
    let err = relative_l2(&out, &via.values, &direct);
    assert!(err < 1e-4, "H_m,kappa: {err:.2e}");
}

#[test]
fn interchange_of_orders_on_the_rank_one_projection() {
    // (k/2)^{2m} F_m P_m f = (Q/2)^{2m} F_{−m} P_m f.
    let (m, k) = (c(0.3, 0.0), c(1.3, 0.0));
    let f = test_function();
    let nodes = geometric_grid(1e-6, 60.0, 2000);
    let pf: Vec<Complex64> = nodes
        .iter()
        .map(|&x| apply_kernel(|x, y| projection_pm(m, k, x, y).unwrap(), &f, x))
        .collect();
    let pf = SampledFunction::new(nodes, pf, DecayClass::Exponential).unwrap();
    let out = geometric_grid(1e-2, 1e2, 80);
    let left = hankel_apply(m, &pf, &out).unwrap();
    let right = hankel_apply(-m, &pf, &out).unwrap();
    let scale = (k / 2.0).powc(2.0 * m);
    let lhs: Vec<Complex64> = left.values.iter().map(|v| scale * v).collect();
    let rhs: Vec<Complex64> = out.iter().zip(&right.values).map(|(&x, v)| c(x / 2.0, 0.0).powc(2.0 * m) * v).collect();
    let err = relative_l2(&out, &lhs, &rhs);
    assert!(err < 1e-6, "{err:.2e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn xi_is_unimodular_for_real_orders(m in -0.95f64..3.0, t in -40.0f64..40.0) {
        let xi = multiplier("xi_m", &MultiplierParams { m: c(m, 0.0), ..Default::default() }).unwrap();
        prop_assert!((xi.eval(t).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wave_multiplier_is_a_product_of_xi(m in -0.9f64..0.9, mp in -0.9f64..0.9, mi in -0.5f64..0.5, t in -20.0f64..20.0) {
        let params = MultiplierParams { m: c(m, mi), m_prime: c(mp, 0.0), sign: Sign::Plus, ..Default::default() };
        let w = multiplier("wave_mm'", &params).unwrap().eval(t);
        let xi_m = multiplier("xi_m", &MultiplierParams { m: c(m, mi), ..Default::default() }).unwrap();
        let xi_mp = multiplier("xi_m", &MultiplierParams { m: c(mp, 0.0), ..Default::default() }).unwrap();
        let phase = (c(0.0, PI / 2.0) * (c(m, mi) - mp)).exp();
        prop_assert!((w - phase * xi_m.eval(-t) * xi_mp.eval(t)).norm() < 1e-10 * w.norm().max(1.0));
    }

    #[test]
    fn j_is_an_isometry(a in 0.2f64..3.0, b in 0.1f64..2.0) {
        let f = sampled(geometric_grid(1e-3, 1e3, 301), |x| c(x.powf(a) * (-b * x).exp(), 0.0), DecayClass::Exponential);
        let jf = involution_j(&f);
        prop_assert!((jf.l2_norm() - f.l2_norm()).abs() < 1e-10 * f.l2_norm());
    }
}
