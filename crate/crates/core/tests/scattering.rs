use std::f64::consts::PI;

use halfline::kernels::spectral_density;
use halfline::quad::{integrate_halfline, integrate_interval, QuadPolicy};
use halfline::scattering::{
    g_quadrature_check, moller_time_probe, propagation_probe, scattering_constant, scattering_diag, wave_multiplier,
    ScatteringPair,
};
use halfline::specfun::{ln_gamma, Sign, EULER_GAMMA};
use halfline::transforms::{
    geometric_grid, multiplier, multiplier_apply, DecayClass, Multiplier, MultiplierParams, SampledFunction, Variable,
};
use halfline::{Complex64, Error, ExtendedParam, OperatorSpec};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn i() -> Complex64 {
    Complex64::i()
}

fn pair(m: Complex64, m_prime: Complex64, sign: Sign) -> ScatteringPair {
    ScatteringPair::homogeneous(m, m_prime, sign).unwrap()
}

/// W^s_{m,m′}(t) = e^{s·iπ(m−m′)/2}·Γ((m+1−it)/2)Γ((m′+1+it)/2)/(Γ((m+1+it)/2)Γ((m′+1−it)/2)).
fn gamma_ratio(m: Complex64, m_prime: Complex64, s: f64, t: f64) -> Complex64 {
    let lg = |z: Complex64| ln_gamma(z).unwrap();
    let log = lg((m + 1.0 - i() * t) / 2.0) + lg((m_prime + 1.0 + i() * t) / 2.0)
        - lg((m + 1.0 + i() * t) / 2.0)
        - lg((m_prime + 1.0 - i() * t) / 2.0);
    (c(0.0, s * PI / 2.0) * (m - m_prime) + log).exp()
}

fn sampled<F: Fn(f64) -> Complex64>(nodes: Vec<f64>, f: F) -> SampledFunction {
    SampledFunction::from_fn(nodes, f, DecayClass::GaussianLike).unwrap()
}

fn probe_nodes() -> Vec<f64> {
    geometric_grid(1e-5, 20.0, 1500)
}

/// ∫ conj(a)·b dx over the common nodes, trapezoid in ln x.
fn inner(a: &SampledFunction, b: &SampledFunction) -> Complex64 {
    let x = &a.nodes;
    let term = |j: usize| a.values[j].conj() * b.values[j] * x[j];
    (1..x.len()).map(|j| 0.5 * (term(j - 1) + term(j)) * (x[j] / x[j - 1]).ln()).sum()
}

#[test]
fn scattering_constant_examples() {
    assert!((scattering_constant(c(0.4, 0.1), c(0.4, 0.1)) - 1.0).norm() < 1e-15);
    assert!((scattering_constant(c(-0.5, 0.0), c(0.5, 0.0)) + 1.0).norm() < 1e-15);
    for m in [c(0.3, 0.0), c(0.7, -0.2)] {
        let expected = (2.0 * PI * i() * m).exp();
        assert!((scattering_constant(-m, m) - expected).norm() < 1e-14);
    }
}

#[test]
fn scattering_constant_is_the_product_of_incoming_and_outgoing_waves() {
    // S = (W^+)*W^− for real orders.
    for (m, mp) in [(0.3, 1.1), (-0.5, 0.5), (2.2, -0.4)] {
        let (m, mp) = (c(m, 0.0), c(mp, 0.0));
        let plus = wave_multiplier(&pair(m, mp, Sign::Plus)).unwrap();
        let minus = wave_multiplier(&pair(m, mp, Sign::Minus)).unwrap();
        let s = scattering_constant(m, mp);
        for t in [-7.0, -1.3, 0.0, 0.4, 5.0] {
            let err = (plus.eval(t).conj() * minus.eval(t) - s).norm();
            assert!(err < 1e-12, "m={m} m'={mp} t={t}: {err:.2e}");
        }
    }
}

#[test]
fn neumann_dirichlet_wave_operator() {
    for (sign, s) in [(Sign::Plus, 1.0), (Sign::Minus, -1.0)] {
        let w = wave_multiplier(&pair(c(-0.5, 0.0), c(0.5, 0.0), sign)).unwrap();
        assert_eq!(w.label, "wnd");
        for k in 0..=80 {
            let t = -4.0 + 0.1 * k as f64;
            let expected = c(s * (PI * t).tanh(), -s / (PI * t).cosh());
            assert!((w.eval(t) - expected).norm() < 1e-10, "t={t}");
            assert!((w.eval(t) - gamma_ratio(c(-0.5, 0.0), c(0.5, 0.0), s, t)).norm() < 1e-10, "t={t}");
        }
    }
}

#[test]
fn opposite_order_wave_operator_at_zero() {
    for m in [c(0.3, 0.0), c(0.6, 0.25), c(-0.4, 0.1)] {
        for (sign, s) in [(Sign::Plus, 1.0), (Sign::Minus, -1.0)] {
            let w = wave_multiplier(&pair(-m, m, sign)).unwrap();
            assert_eq!(w.label, "wave_minus_m");
            let ratio = (1.0 + (-s * i() * PI * m).exp()) / (1.0 + (s * i() * PI * m).exp());
            assert!((w.eval(0.0) - ratio).norm() < 1e-13);
            assert!((w.eval(0.0) - (-s * i() * PI * m).exp()).norm() < 1e-13);
            for t in [-30.0, -2.0, 0.9, 40.0] {
                assert!((w.eval(t) - gamma_ratio(-m, m, s, t)).norm() < 1e-10, "m={m} t={t}");
            }
        }
    }
}

#[test]
fn wave_operator_for_orders_two_apart() {
    for m in [c(0.0, 0.0), c(0.3, 0.0), c(-0.6, 0.4)] {
        for (sign, s) in [(Sign::Plus, 1.0), (Sign::Minus, -1.0)] {
            let w = wave_multiplier(&pair(m + 2.0, m, sign)).unwrap();
            assert_eq!(w.label, "wave_m_plus2");
            for t in [-9.0, -0.5, 0.0, 1.5, 12.0] {
                let closed = -(m + 1.0 - i() * t) / (m + 1.0 + i() * t);
                assert!((w.eval(t) - closed).norm() < 1e-13);
                assert!((w.eval(t) - gamma_ratio(m + 2.0, m, s, t)).norm() < 1e-10, "m={m} t={t}");
            }
        }
    }
}

#[test]
fn generic_wave_operator_is_the_gamma_ratio() {
    let (m, mp) = (c(0.3, 0.2), c(1.4, -0.1));
    let w = wave_multiplier(&pair(m, mp, Sign::Minus)).unwrap();
    assert_eq!(w.label, "wave_mm'");
    for t in [-15.0, -1.0, 0.0, 2.0, 20.0] {
        assert!((w.eval(t) - gamma_ratio(m, mp, -1.0, t)).norm() < 1e-12);
    }
}

#[test]
fn wave_operator_limits_at_infinity() {
    for (m, mp) in [(c(0.3, 0.0), c(1.1, 0.0)), (c(-0.5, 0.0), c(0.5, 0.0)), (c(-0.3, 0.0), c(0.3, 0.0))] {
        for sign in [Sign::Plus, Sign::Minus] {
            let w = wave_multiplier(&pair(m, mp, sign)).unwrap();
            for (side, t) in [(Sign::Minus, -1e4), (Sign::Plus, 1e4)] {
                let err = (w.limit(side).unwrap() - w.eval(t)).norm();
                assert!(err < 1e-3, "{} {side:?}: {err:.2e}", w.label);
            }
        }
        let plus = wave_multiplier(&pair(m, mp, Sign::Plus)).unwrap();
        assert!((plus.limit(Sign::Plus).unwrap() - 1.0).norm() < 1e-15);
    }
}

#[test]
fn degenerate_kappa_reduces_to_homogeneous() {
    let zero = OperatorSpec::kappa(0.3, ExtendedParam::zero()).unwrap();
    let infinity = OperatorSpec::kappa(0.3, ExtendedParam::infinity()).unwrap();
    let h = OperatorSpec::homogeneous(1.2).unwrap();
    let a = wave_multiplier(&ScatteringPair::new(zero, h, Sign::Plus).unwrap()).unwrap();
    let b = wave_multiplier(&ScatteringPair::new(infinity, h, Sign::Plus).unwrap()).unwrap();
    for t in [-2.0, 0.5, 3.0] {
        assert!((a.eval(t) - gamma_ratio(c(0.3, 0.0), c(1.2, 0.0), 1.0, t)).norm() < 1e-12);
        assert!((b.eval(t) - gamma_ratio(c(-0.3, 0.0), c(1.2, 0.0), 1.0, t)).norm() < 1e-12);
    }
}

#[test]
fn non_homogeneous_pairs_are_refused() {
    let kappa = OperatorSpec::kappa(0.3, 2.0).unwrap();
    let h = OperatorSpec::homogeneous(0.3).unwrap();
    let p = ScatteringPair::new(kappa, h, Sign::Plus).unwrap();
    assert!(matches!(wave_multiplier(&p), Err(Error::Domain(_))));
    let p = ScatteringPair::new(h, OperatorSpec::nu(1.0), Sign::Minus).unwrap();
    assert!(matches!(wave_multiplier(&p), Err(Error::Domain(_))));
    let exceptional = OperatorSpec::Kappa(c(0.5, 0.0), ExtendedParam::finite(i()));
    assert!(matches!(ScatteringPair::new(exceptional, h, Sign::Plus), Err(Error::Exceptional(_))));
}

#[test]
fn diagonal_multiplier_for_homogeneous_operators() {
    let a = OperatorSpec::homogeneous(0.4).unwrap();
    let b = OperatorSpec::homogeneous(c(1.3, 0.2)).unwrap();
    let g = scattering_diag(&a, &b).unwrap();
    assert_eq!(g.variable, Variable::Position);
    let s = scattering_constant(c(0.4, 0.0), c(1.3, 0.2));
    let zero = scattering_diag(&OperatorSpec::kappa(0.3, 0.0).unwrap(), &OperatorSpec::kappa(0.3, 0.0).unwrap()).unwrap();
    for x in [1e-3, 0.5, 7.0] {
        assert!((g.eval(x) - s).norm() < 1e-14);
        assert!((zero.eval(x) - 1.0).norm() < 1e-14);
    }
}

#[test]
fn diagonal_multiplier_is_unimodular_when_self_adjoint() {
    let spec = OperatorSpec::kappa(0.3, 1.7).unwrap();
    let free = OperatorSpec::homogeneous(0.0).unwrap();
    let minus = scattering_diag(&spec, &free).unwrap();
    let plus = scattering_diag(&free, &spec).unwrap();
    for x in geometric_grid(1e-4, 1e4, 200) {
        assert!((minus.eval(x).norm() - 1.0).abs() < 1e-12, "x={x}");
        assert!((plus.eval(x).norm() - 1.0).abs() < 1e-12, "x={x}");
    }
}

#[test]
fn diagonal_multiplier_for_the_logarithmic_family() {
    let spec = OperatorSpec::nu(1.0);
    let free = OperatorSpec::homogeneous(0.0).unwrap();
    let minus = scattering_diag(&spec, &free).unwrap();
    let plus = scattering_diag(&free, &spec).unwrap();
    for x in geometric_grid(1e-4, 1e4, 200) {
        let l = EULER_GAMMA + (x / 2.0).ln() - 1.0;
        let expected = (l + i() * PI / 2.0) / (l - i() * PI / 2.0);
        assert!((minus.eval(x) - expected).norm() < 1e-13, "x={x}");
        assert!((plus.eval(x) - expected.conj()).norm() < 1e-13, "x={x}");
        assert!((minus.eval(x).norm() - 1.0).abs() < 1e-13);
    }
    let exceptional = OperatorSpec::nu(c(0.0, PI / 2.0));
    assert!(matches!(scattering_diag(&exceptional, &free), Err(Error::Exceptional(_))));
}

#[test]
fn diagonal_multiplier_matches_transform_composition() {
    for (spec, tol) in [
        (OperatorSpec::kappa(0.3, 0.0).unwrap(), 1e-6),
        (OperatorSpec::kappa(0.3, 2.0).unwrap(), 1e-4),
        (OperatorSpec::nu(1.0), 1e-4),
    ] {
        let check = g_quadrature_check(&spec).unwrap();
        assert!(check.max_error() < tol, "{spec:?}: {check:?}");
    }
}

/// x·(1+x²)e^{−x²/2} and (1+x²/2)e^{−x²/2}: their sine and cosine
/// transforms are again Gaussian-class.
fn odd_profile(x: f64) -> Complex64 {
    c(x * (1.0 + x * x) * (-0.5 * x * x).exp(), 0.0)
}

fn even_profile(x: f64) -> Complex64 {
    c((1.0 + 0.5 * x * x) * (-0.5 * x * x).exp(), 0.0)
}

#[test]
fn moller_probe_is_constant_for_equal_orders() {
    let f = sampled(probe_nodes(), odd_profile);
    let g = sampled(probe_nodes(), |x| c(x * (-0.5 * x * x).exp(), 0.3 * x * x * x * (-0.5 * x * x).exp()));
    let probe = moller_time_probe(&pair(c(0.5, 0.0), c(0.5, 0.0), Sign::Plus), &f, &g, &[0.0, 10.0, 50.0]).unwrap();
    let expected = inner(&g, &f);
    for v in &probe.values {
        assert!((v - expected).norm() < 1e-8 * expected.norm(), "{v} vs {expected}");
    }
}

#[test]
fn moller_probe_converges_to_the_wave_operator() {
    let f = sampled(probe_nodes(), odd_profile);
    let g = sampled(probe_nodes(), even_profile);
    let p = pair(c(-0.5, 0.0), c(0.5, 0.0), Sign::Plus);
    let probe = moller_time_probe(&p, &f, &g, &[10.0, 50.0, 200.0]).unwrap();
    // (g | W^+ f) through the Mellin representation of W^+.
    let w = wave_multiplier(&p).unwrap();
    let wf = multiplier_apply(&w, &f, &geometric_grid(1e-12, 20.0, 1200)).unwrap();
    let g_on = sampled(wf.nodes.clone(), even_profile);
    let reference = inner(&g_on, &wf);
    assert!((probe.limit - reference).norm() < 1e-6, "{} vs {reference}", probe.limit);
    let errors: Vec<f64> = probe.values.iter().map(|v| (v - reference).norm()).collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    assert!(errors[2] < 5e-2, "{errors:?}");
}

#[test]
fn moller_probe_for_negative_times() {
    let f = sampled(probe_nodes(), odd_profile);
    let g = sampled(probe_nodes(), even_profile);
    let probe = moller_time_probe(&pair(c(-0.5, 0.0), c(0.5, 0.0), Sign::Minus), &f, &g, &[-50.0, -200.0]).unwrap();
    let errors = probe.errors();
    assert!(errors[1] < errors[0] && errors[1] < 5e-2, "{errors:?}");
}

/// Ξ_m(−t)Ξ_{m′}(t), with its limits at ∓∞ attached.
fn xi_ratio(m: f64, mp: f64) -> Multiplier {
    let (m, mp) = (c(m, 0.0), c(mp, 0.0));
    let f = move |t: f64| gamma_ratio(m, mp, 0.0, t);
    let half = c(0.0, PI / 2.0) * (m - mp);
    Multiplier::new("xi_ratio", Variable::Dilation, f).with_limits(half.exp(), (-half).exp())
}

fn bump(center: f64, width: f64) -> impl Fn(f64) -> Complex64 + Sync {
    move |x: f64| c((-((x - center) / width).powi(2)).exp(), 0.0)
}

#[test]
fn propagation_limit() {
    let psi = xi_ratio(-0.5, 0.5);
    let probe = propagation_probe(&psi, bump(-2.0, 0.7), bump(-2.5, 1.0), (-7.5, 1.8), 1e3).unwrap();
    assert!((probe.limit / probe.limit.norm() - i()).norm() < 1e-12);
    assert!(probe.error() < 5e-2, "{probe:?}");
    let probe = propagation_probe(&psi, bump(-2.0, 0.7), bump(-2.5, 1.0), (-7.5, 1.8), -1e3).unwrap();
    assert!((probe.limit / probe.limit.norm() + i()).norm() < 1e-12);
    assert!(probe.error() < 5e-2, "{probe:?}");
}

#[test]
fn propagation_with_a_constant_multiplier_is_exact() {
    let psi = Multiplier::new("two", Variable::Dilation, |_| c(2.0, 0.0)).with_limits(c(2.0, 0.0), c(2.0, 0.0));
    for t in [0.0, 3.0, 40.0] {
        let probe = propagation_probe(&psi, bump(-1.0, 0.5), bump(-1.2, 0.8), (-5.0, 1.5), t).unwrap();
        assert!(probe.error() < 1e-12, "{probe:?}");
    }
    let xi = multiplier("xi_m", &MultiplierParams::default()).unwrap();
    assert!(matches!(
        propagation_probe(&xi, bump(0.0, 1.0), bump(0.0, 1.0), (-6.0, 6.0), 1.0),
        Err(Error::Domain(_))
    ));
}

/// ∫∫ conj(a(x))p(k; x, y)b(y)dx dy, with b negligible beyond 12 and a
/// continued past its last node as a power law.
fn density_sandwich(spec: &OperatorSpec, k: f64, a: &SampledFunction, b: &dyn Fn(f64) -> Complex64) -> Complex64 {
    let policy = QuadPolicy::exponential(1.0).with_tol(1e-13, 1e-10);
    let inner = |x: f64| {
        integrate_interval(|y| spectral_density(spec, k, x, y).unwrap() * b(y), 0.0, 12.0, &policy)
            .unwrap()
            .value
    };
    let outer = |x: f64| a.value_at(x).conj() * inner(x);
    let mut total = c(0.0, 0.0);
    let mut lo = 0.0;
    for hi in [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0] {
        total += integrate_interval(outer, lo, hi, &policy).unwrap().value;
        lo = hi;
    }
    let tail = QuadPolicy::oscillatory(PI / k, PI / k).with_tol(1e-13, 1e-9);
    total + integrate_halfline(|w| outer(lo + w), &tail).unwrap().value
}

#[test]
fn wave_operators_intertwine_spectral_densities() {
    // (W^*g | p_{m′}(k²)f) = (g | p_m(k²)W f).
    let nodes = geometric_grid(1e-5, 1e3, 900);
    let f = |x: f64| c(x.powf(0.8) * (-0.5 * x * x).exp(), 0.0);
    let g = |x: f64| c(x.powf(1.3) * (1.0 + x) * (-0.5 * x * x).exp(), 0.0);
    let fs = sampled(geometric_grid(1e-5, 20.0, 1500), f);
    let gs = sampled(geometric_grid(1e-5, 20.0, 1500), g);
    for (m, mp, sign) in [(-0.5, 0.5, Sign::Plus), (0.3, 1.1, Sign::Minus)] {
        let w = wave_multiplier(&pair(c(m, 0.0), c(mp, 0.0), sign)).unwrap();
        let w_star = {
            let w = w.clone();
            Multiplier::new("adjoint", Variable::Dilation, move |t| w.eval(t).conj())
        };
        let wf = multiplier_apply(&w, &fs, &nodes).unwrap();
        let wg = multiplier_apply(&w_star, &gs, &nodes).unwrap();
        let left = OperatorSpec::homogeneous(m).unwrap();
        let right = OperatorSpec::homogeneous(mp).unwrap();
        for k in [0.7, 1.6] {
            let lhs = density_sandwich(&right, k, &wg, &f);
            // The density is real and symmetric for real orders.
            let rhs = density_sandwich(&left, k, &wf, &g).conj();
            let err = (lhs - rhs).norm() / lhs.norm();
            assert!(err < 1e-4, "m={m} m'={mp} k={k}: {lhs} vs {rhs} ({err:.2e})");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wave_multipliers_obey_the_chain_rule(
        m in -0.9f64..2.5, mp in -0.9f64..2.5, mpp in -0.9f64..2.5,
        im in -0.5f64..0.5, t in -20.0f64..20.0, plus in any::<bool>()
    ) {
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let (a, b, d) = (c(m, im), c(mp, 0.0), c(mpp, -im));
        let direct = wave_multiplier(&pair(a, d, sign)).unwrap().eval(t);
        let chained = wave_multiplier(&pair(a, b, sign)).unwrap().eval(t) * wave_multiplier(&pair(b, d, sign)).unwrap().eval(t);
        prop_assert!((direct - chained).norm() < 1e-10 * direct.norm().max(1.0));
    }

    #[test]
    fn transposed_wave_multiplier_is_the_reversed_pair(
        m in -0.9f64..2.5, mp in -0.9f64..2.5, im in -0.5f64..0.5, t in -20.0f64..20.0, plus in any::<bool>()
    ) {
        // W^{±t}_{m,m′} = W^∓_{m′,m}, and A^t = −A.
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let p = pair(c(m, im), c(mp, 0.0), sign);
        let w = wave_multiplier(&p).unwrap().eval(-t);
        let swapped = wave_multiplier(&p.swapped()).unwrap().eval(t);
        prop_assert!((w - swapped).norm() < 1e-10 * w.norm().max(1.0));
    }

    #[test]
    fn wave_multiplier_is_unimodular_for_real_orders(
        m in -0.99f64..4.0, mp in -0.99f64..4.0, t in -50.0f64..50.0, plus in any::<bool>()
    ) {
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let w = wave_multiplier(&pair(c(m, 0.0), c(mp, 0.0), sign)).unwrap().eval(t);
        prop_assert!((w.norm() - 1.0).abs() < 1e-10);
    }
}
