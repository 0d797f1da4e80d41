//! Wave operators W^±_{m,m′} = F^±_m F^{∓t}_{m′} as functions of the dilation
//! generator A, the diagonal scattering multipliers G^−·G^+ for the
//! one-parameter families, and time-dependent probes of the strong limits.
//!
//! Under (Wf)(x) = x^{−1/2}f(ln x), which maps L²(ℝ) onto L²(ℝ₊), A becomes
//! the momentum P and Q² becomes e^{2Q}. The probes evaluate
//! (v | e^{itQ²}φ(A)e^{−itQ²}u) on a uniform grid in s = ln x, with φ(P)
//! applied by FFT.

use std::f64::consts::{FRAC_PI_2, PI};
use std::thread;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::operators::{canonicalize, classify, OperatorSpec};
use crate::specfun::Sign;
use crate::transforms::{
    generalized_hankel_apply, generalized_hankel_transpose_apply, geometric_grid, hankel_apply, hankel_nu_apply,
    hankel_nu_transpose_apply, multiplier, wave_gamma_form, xi, DecayClass, Multiplier, MultiplierParams,
    SampledFunction, Variable,
};

/// Agreement required between a closed-form special case and the Γ-ratio form.
const SPECIAL_CASE_TOL: f64 = 1e-10;
/// A profile is treated as zero where it falls below this fraction of its peak.
const SUPPORT_TOL: f64 = 1e-10;
/// Zero padding on both sides of the support, in units of s = ln x.
const PAD: f64 = 40.0;
/// Frequency allowance, beyond the chirp, for the profiles themselves.
const BANDWIDTH: f64 = 200.0;
/// Nyquist frequency over the highest frequency present.
const OVERSAMPLING: f64 = 1.25;
const MAX_POINTS: usize = 1 << 24;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// S_{m,m′} = e^{−iπ(m−m′)}, the scattering operator of a homogeneous pair.
pub fn scattering_constant(m: Complex64, m_prime: Complex64) -> Complex64 {
    (c(0.0, -PI) * (m - m_prime)).exp()
}

/// The pair (H_left, H_right) with the sign of W^± = F^±_left F^{∓t}_right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringPair {
    pub left: OperatorSpec,
    pub right: OperatorSpec,
    pub sign: Sign,
}

impl ScatteringPair {
    pub fn new(left: OperatorSpec, right: OperatorSpec, sign: Sign) -> Result<Self> {
        for spec in [&left, &right] {
            if classify(spec)?.exceptional {
                return Err(Error::Exceptional(format!("{spec:?}")));
            }
        }
        Ok(ScatteringPair { left, right, sign })
    }

    pub fn homogeneous(m: Complex64, m_prime: Complex64, sign: Sign) -> Result<Self> {
        ScatteringPair::new(OperatorSpec::homogeneous(m)?, OperatorSpec::homogeneous(m_prime)?, sign)
    }

    /// (H_right, H_left) with the opposite sign, so that W^{±t}_{m,m′} is
    /// the multiplier of the swapped pair at −t.
    pub fn swapped(&self) -> Self {
        ScatteringPair {
            left: self.right,
            right: self.left,
            sign: self.sign.flip(),
        }
    }

    /// The orders (m, m′) when both sides reduce to homogeneous operators.
    pub fn orders(&self) -> Result<(Complex64, Complex64)> {
        let order = |spec: &OperatorSpec| {
            canonicalize(spec).as_homogeneous().ok_or_else(|| {
                Error::Domain(format!("{spec:?} is not homogeneous; use scattering_diag instead"))
            })
        };
        Ok((order(&self.left)?, order(&self.right)?))
    }
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-14 * (1.0 + a.norm())
}

/// W^±_{m,m′}(t) for a homogeneous pair. The closed forms for (N, D),
/// (−m, m) and (m+2, m) are returned when they apply, after checking them
/// against the Γ-ratio form.
pub fn wave_multiplier(pair: &ScatteringPair) -> Result<Multiplier> {
    let (m, m_prime) = pair.orders()?;
    let mut params = MultiplierParams {
        m,
        m_prime,
        sign: pair.sign,
        ..MultiplierParams::default()
    };
    let label = if close(m, c(-0.5, 0.0)) && close(m_prime, c(0.5, 0.0)) {
        "wnd"
    } else if close(m, -m_prime) && m_prime.re.abs() < 1.0 && m_prime != c(0.0, 0.0) {
        params.m = m_prime;
        "wave_minus_m"
    } else if close(m - m_prime, c(2.0, 0.0)) {
        params.m = m_prime;
        "wave_m_plus2"
    } else {
        "wave_mm'"
    };
    let w = multiplier(label, &params)?;
    if label != "wave_mm'" {
        for t in [-4.0, -0.7, 0.0, 0.3, 2.5] {
            let reference = wave_gamma_form(m, m_prime, pair.sign, t)?;
            let error = (w.eval(t) - reference).norm();
            if !(error <= SPECIAL_CASE_TOL * reference.norm().max(1.0)) {
                return Err(Error::NoConvergence(format!(
                    "`{label}` differs from the gamma form by {error:e} at t = {t}"
                )));
            }
        }
    }
    Ok(w)
}

/// G^s for one operator as a function of x: F^{st}F^s.
pub fn g_multiplier(spec: &OperatorSpec, sign: Sign) -> Result<Multiplier> {
    if classify(spec)?.exceptional {
        return Err(Error::Exceptional(format!("{spec:?}")));
    }
    let params = MultiplierParams {
        sign,
        ..MultiplierParams::default()
    };
    match *spec {
        OperatorSpec::Homogeneous(m) => {
            let value = (c(0.0, sign.value() * PI) * m).exp();
            Ok(Multiplier::new("g_mk", Variable::Position, move |_| value))
        }
        OperatorSpec::Kappa(m, kappa) => multiplier("g_mk", &MultiplierParams { m, kappa, ..params }),
        OperatorSpec::Nu(nu) => multiplier("g0_nu", &MultiplierParams { nu, ..params }),
    }
}

/// The diagonalized scattering multiplier G^−_left(x)·G^+_right(x).
pub fn scattering_diag(left: &OperatorSpec, right: &OperatorSpec) -> Result<Multiplier> {
    let minus = g_multiplier(left, Sign::Minus)?;
    let plus = g_multiplier(right, Sign::Plus)?;
    Ok(Multiplier::new("scattering_diag", Variable::Position, move |x| {
        minus.eval(x) * plus.eval(x)
    }))
}

/// L²-relative discrepancy between G^s·f and F^{st}F^s f, per sign.
#[derive(Debug, Clone, PartialEq)]
pub struct GCheck {
    pub spec: OperatorSpec,
    pub minus: f64,
    pub plus: f64,
}

impl GCheck {
    pub fn max_error(&self) -> f64 {
        self.minus.max(self.plus)
    }
}

fn transform_pair(spec: &OperatorSpec, sign: Sign, f: &SampledFunction) -> Result<SampledFunction> {
    let wide = geometric_grid(1e-6, 1e5, 1500);
    let out = f.nodes.clone();
    match *spec {
        OperatorSpec::Homogeneous(m) => {
            let phase = (c(0.0, sign.value() * PI) * m).exp();
            hankel_apply(m, &hankel_apply(m, f, &wide)?, &out)?.multiply(|_| phase)
        }
        OperatorSpec::Kappa(m, kappa) => generalized_hankel_transpose_apply(
            m,
            kappa,
            sign,
            &generalized_hankel_apply(m, kappa, sign, f, &wide)?,
            &out,
        ),
        OperatorSpec::Nu(nu) => {
            hankel_nu_transpose_apply(nu, sign, &hankel_nu_apply(nu, sign, f, &wide)?, &out)
        }
    }
}

/// Compares the closed form of G^∓ with the composition (F^∓)^t F^∓ applied
/// to the test function x^{0.8}e^{−x²/2}.
pub fn g_quadrature_check(spec: &OperatorSpec) -> Result<GCheck> {
    let nodes = geometric_grid(1e-4, 12.0, 400);
    let f = SampledFunction::from_fn(
        nodes,
        |x| c(x.powf(0.8) * (-0.5 * x * x).exp(), 0.0),
        DecayClass::GaussianLike,
    )?;
    let error = |sign: Sign| -> Result<f64> {
        let g = g_multiplier(spec, sign)?;
        let closed = f.multiply(|x| g.eval(x))?;
        transform_pair(spec, sign, &f)?.relative_l2_error(&closed)
    };
    Ok(GCheck {
        spec: *spec,
        minus: error(Sign::Minus)?,
        plus: error(Sign::Plus)?,
    })
}

/// Uniform grid s_j = s0 + j·h, j < n, on which the probes run.
struct LogGrid {
    s0: f64,
    h: f64,
    n: usize,
}

impl LogGrid {
    fn new(support: (f64, f64), t_max: f64) -> Result<Self> {
        let (lo, hi) = support;
        let top = 2.0 * t_max.abs() * (2.0 * hi).exp() + BANDWIDTH;
        let h = PI / (OVERSAMPLING * top);
        let n = ((hi - lo + 2.0 * PAD) / h).ceil() as usize;
        let n = n.next_power_of_two();
        if n > MAX_POINTS {
            return Err(Error::Domain(format!(
                "time {t_max} on the support [{lo}, {hi}] in ln x needs more than {MAX_POINTS} points"
            )));
        }
        Ok(LogGrid { s0: lo - PAD, h, n })
    }

    fn s(&self, j: usize) -> f64 {
        self.s0 + j as f64 * self.h
    }

    /// The frequency of FFT bin k.
    fn xi(&self, k: usize) -> f64 {
        let k = if k < self.n / 2 { k as f64 } else { k as f64 - self.n as f64 };
        2.0 * PI * k / (self.n as f64 * self.h)
    }

    fn sample<F: Fn(f64) -> Complex64 + Sync>(&self, f: F) -> Vec<Complex64> {
        par_fill(self.n, |j| f(self.s(j)))
    }

    /// φ at every FFT frequency; fails if any value is not finite.
    fn multiplier<F: Fn(f64) -> Complex64 + Sync>(&self, phi: F) -> Result<Vec<Complex64>> {
        let out = par_fill(self.n, |k| phi(self.xi(k)));
        match out.iter().position(|p| !(p.re.is_finite() && p.im.is_finite())) {
            Some(k) => Err(Error::NoConvergence(format!("multiplier is not finite at {}", self.xi(k)))),
            None => Ok(out),
        }
    }
}

fn par_fill<F: Fn(usize) -> Complex64 + Sync>(n: usize, f: F) -> Vec<Complex64> {
    let workers = thread::available_parallelism().map_or(1, |w| w.get());
    let chunk = n.div_ceil(workers).max(1);
    let mut out = vec![c(0.0, 0.0); n];
    thread::scope(|scope| {
        for (i, part) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                for (j, v) in part.iter_mut().enumerate() {
                    *v = f(i * chunk + j);
                }
            });
        }
    });
    out
}

/// (v | e^{ite^{2Q}}φ(P)e^{−ite^{2Q}}u) on L²(ℝ) at each time, with φ
/// sampled at the FFT frequencies.
fn sandwich(grid: &LogGrid, phi: &[Complex64], u: &[Complex64], v: &[Complex64], times: &[f64]) -> Vec<Complex64> {
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(grid.n);
    let inverse = planner.plan_fft_inverse(grid.n);
    let e2s: Vec<f64> = (0..grid.n).map(|j| (2.0 * grid.s(j)).exp()).collect();
    thread::scope(|scope| {
        let handles: Vec<_> = times
            .iter()
            .map(|&t| {
                let (forward, inverse, e2s) = (&forward, &inverse, &e2s);
                scope.spawn(move || {
                    let chirp = |j: usize| Complex64::from_polar(1.0, -t * e2s[j]);
                    let mut w: Vec<Complex64> = u.iter().enumerate().map(|(j, &x)| chirp(j) * x).collect();
                    forward.process(&mut w);
                    w.iter_mut().zip(phi).for_each(|(x, p)| *x *= p);
                    inverse.process(&mut w);
                    let sum: Complex64 = w
                        .iter()
                        .zip(v)
                        .enumerate()
                        .map(|(j, (&x, &y))| (chirp(j) * y).conj() * x)
                        .sum();
                    sum * grid.h / grid.n as f64
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("probe thread panicked")).collect()
    })
}

/// The interval of s = ln x, around the peak of e^{s/2}|f(e^s)|, outside
/// which the profile stays below the floor; quadrature noise further out is
/// ignored.
fn log_support(f: &SampledFunction) -> Result<(f64, f64)> {
    let profile = |s: f64| (0.5 * s).exp() * f.value_at(s.exp()).norm();
    let logs: Vec<f64> = f.nodes.iter().map(|x| x.ln()).collect();
    let levels: Vec<f64> = logs.iter().map(|&s| profile(s)).collect();
    let (top, peak) = levels
        .iter()
        .enumerate()
        .fold((0, 0.0), |best, (j, &v)| if v > best.1 { (j, v) } else { best });
    if peak == 0.0 {
        return Ok((logs[0], logs[0]));
    }
    let floor = SUPPORT_TOL * peak;
    let hi = (top..logs.len()).find(|&j| levels[j] < floor).ok_or_else(|| {
        Error::Domain("the transformed test function does not decay within the sampled range".into())
    })?;
    let mut lo = match (0..=top).rev().find(|&j| levels[j] < floor) {
        Some(j) => logs[j],
        None => logs[0],
    };
    let mut steps = 0;
    while profile(lo) >= floor {
        lo -= 0.5;
        steps += 1;
        if steps > 400 {
            return Err(Error::Domain("the transformed test function does not vanish at 0".into()));
        }
    }
    Ok((lo, logs[hi]))
}

/// Time-dependent matrix elements of e^{itH_m}e^{−itH_{m′}}, and the limit
/// they approach.
#[derive(Debug, Clone, PartialEq)]
pub struct MollerProbe {
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
    /// (g | W^± f) for the sign of the pair.
    pub limit: Complex64,
}

impl MollerProbe {
    pub fn errors(&self) -> Vec<f64> {
        self.values.iter().map(|v| (v - self.limit).norm()).collect()
    }
}

/// (g | e^{itH_m}e^{−itH_{m′}}f) at each time, computed as
/// (F_{m̄}g | e^{itQ²}Ξ_m(−A)Ξ_{m′}(A)e^{−itQ²}F_{m′}f). As t → ±∞ this tends
/// to (g | W^± f); times should carry the sign of the pair. The transforms
/// F_{m′}f and F_{m̄}g must decay faster than any power.
pub fn moller_time_probe(
    pair: &ScatteringPair,
    f: &SampledFunction,
    g: &SampledFunction,
    times: &[f64],
) -> Result<MollerProbe> {
    let (m, m_prime) = pair.orders()?;
    let wide = geometric_grid(1e-6, 1e5, 1500);
    let u = hankel_apply(m_prime, f, &wide)?;
    let v = hankel_apply(m.conj(), g, &wide)?;
    let (lu, hu) = log_support(&u)?;
    let (lv, hv) = log_support(&v)?;
    let support = (lu.min(lv), hu.max(hv));
    let t_max = times.iter().fold(0.0_f64, |a, t| a.max(t.abs()));
    let grid = LogGrid::new(support, t_max)?;
    let profile = |w: &SampledFunction| {
        grid.sample(|s| {
            if s < support.0 || s > support.1 {
                c(0.0, 0.0)
            } else {
                (0.5 * s).exp() * w.value_at(s.exp())
            }
        })
    };
    let (us, vs) = (profile(&u), profile(&v));
    let phi = grid.multiplier(|k| {
        let value = xi(m, c(-k, 0.0)).and_then(|a| Ok(a * xi(m_prime, c(k, 0.0))?));
        value.unwrap_or(c(f64::NAN, f64::NAN))
    })?;
    let values = sandwich(&grid, &phi, &us, &vs, times);
    let overlap: Complex64 = us.iter().zip(&vs).map(|(a, b)| b.conj() * a).sum::<Complex64>() * grid.h;
    let phase = (c(0.0, pair.sign.value() * FRAC_PI_2) * (m - m_prime)).exp();
    Ok(MollerProbe {
        times: times.to_vec(),
        values,
        limit: phase * overlap,
    })
}

/// One evaluation of the propagation limit on L²(ℝ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationProbe {
    pub t: f64,
    /// (f₁ | e^{ite^{2Q}}ψ(−P)e^{−ite^{2Q}}f₂).
    pub value: Complex64,
    /// ψ(±∞)(f₁ | f₂) for t ≷ 0.
    pub limit: Complex64,
}

impl PropagationProbe {
    pub fn error(&self) -> f64 {
        (self.value - self.limit).norm()
    }
}

/// Evaluates (f₁ | e^{ite^{2Q}}ψ(−P)e^{−ite^{2Q}}f₂) for functions on ℝ that
/// are negligible outside `window`, and the limit ψ(±∞)(f₁ | f₂). The
/// multiplier must be a function of A with known limits at ±∞.
pub fn propagation_probe<F1, F2>(psi: &Multiplier, f1: F1, f2: F2, window: (f64, f64), t: f64) -> Result<PropagationProbe>
where
    F1: Fn(f64) -> Complex64 + Sync,
    F2: Fn(f64) -> Complex64 + Sync,
{
    if psi.variable != Variable::Dilation {
        return Err(Error::Domain(format!("`{}` is not a function of A", psi.label)));
    }
    let side = if t >= 0.0 { Sign::Plus } else { Sign::Minus };
    let at_infinity = psi
        .limit(side)
        .ok_or_else(|| Error::Domain(format!("`{}` has no known limit at infinity", psi.label)))?;
    let grid = LogGrid::new(window, t)?;
    let inside = |s: f64| s >= window.0 && s <= window.1;
    let u = grid.sample(|s| if inside(s) { f2(s) } else { c(0.0, 0.0) });
    let v = grid.sample(|s| if inside(s) { f1(s) } else { c(0.0, 0.0) });
    let phi = grid.multiplier(|k| psi.eval(-k))?;
    let value = sandwich(&grid, &phi, &u, &v, &[t])[0];
    let overlap: Complex64 = u.iter().zip(&v).map(|(a, b)| b.conj() * a).sum::<Complex64>() * grid.h;
    Ok(PropagationProbe {
        t,
        value,
        limit: at_infinity * overlap,
    })
}
