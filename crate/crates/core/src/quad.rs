//! Adaptive quadrature on (0,∞) and complex root finding.
//!
//! Finite intervals use globally adaptive 15-point Gauss–Kronrod. The half-line
//! is split into a segment near 0, integrated after x = a·e^{−u}, a middle part,
//! and a tail handled according to the declared decay.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// How the integrand behaves as x → ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailStrategy {
    /// |f(x)| ≲ poly(x)·e^{−rate·x}.
    ExponentialBound { rate: f64 },
    /// Oscillating, slowly decaying tail; panels are cut at
    /// `first_zero + j·half_period` and the partial sums accelerated.
    OscillatoryPartition { first_zero: f64, half_period: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPolicy {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub tail_cutoff_strategy: TailStrategy,
}

impl QuadPolicy {
    pub fn exponential(rate: f64) -> Self {
        QuadPolicy {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_subdivisions: 2000,
            tail_cutoff_strategy: TailStrategy::ExponentialBound { rate },
        }
    }

    pub fn oscillatory(first_zero: f64, half_period: f64) -> Self {
        QuadPolicy {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            tail_cutoff_strategy: TailStrategy::OscillatoryPartition {
                first_zero,
                half_period,
            },
        }
    }

    /// Tail partition at the large-argument zeros of Ja_m(b·x),
    /// b·x_n ≈ nπ + πm/2 + 3π/4.
    pub fn bessel_tail(m_re: f64, b: f64) -> Self {
        let first = (0.75 * PI + 0.5 * PI * m_re).max(0.25 * PI) / b;
        Self::oscillatory(first, PI / b)
    }

    pub fn with_tol(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    fn tol(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_k = fc.norm() * WGK[7];
    let mut vals = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 7];
    for (j, v) in vals.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kron += (f1 + f2) * WGK[j];
        abs_k += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
        *v = (f1, f2);
    }
    if !(kron.re.is_finite() && kron.im.is_finite()) {
        return Err(Error::NoConvergence(format!("integrand not finite on [{a}, {b}]")));
    }
    let mean = kron * 0.5;
    let mut asc = WGK[7] * (fc - mean).norm();
    for (j, (f1, f2)) in vals.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).norm() + (f2 - mean).norm());
    }
    let asc = asc * half.abs();
    let mut err = ((kron - gauss) * half).norm();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * abs_k * half.abs();
    if floor > err {
        err = floor;
    }
    Ok(Panel {
        a,
        b,
        value: kron * half,
        error: err,
    })
}

/// Globally adaptive Gauss–Kronrod on a finite interval.
pub fn integrate_interval<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    policy: &QuadPolicy,
) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let first = gk15(&mut f, a, b)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut evals = 15;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut splits = 0;
    while error > policy.tol(value) {
        if splits >= policy.max_subdivisions {
            return Err(Error::NoConvergence(format!(
                "quadrature on [{a}, {b}] after {splits} subdivisions (error {error:.2e})"
            )));
        }
        let worst = heap.pop().expect("heap holds every panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel at floating-point resolution; accept what we have.
            heap.push(worst);
            break;
        }
        let left = gk15(&mut f, worst.a, mid)?;
        let right = gk15(&mut f, mid, worst.b)?;
        evals += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        splits += 1;
        if splits % 64 == 0 {
            // Re-sum to stop drift from the running updates.
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok(QuadResult {
        value,
        error_estimate: error,
        evaluations: evals,
    })
}

/// ∫_a^b f(k)e^{iωk} dk for a smooth, non-oscillating amplitude f, by Levin
/// collocation: with p′ + iωp = f solved on Chebyshev–Lobatto nodes the
/// integral is [p e^{iωk}]_a^b, at a cost independent of ω. Low frequencies,
/// where the collocation system degenerates, go to plain quadrature.
pub fn integrate_fourier<F: FnMut(f64) -> Complex64>(
    mut f: F,
    omega: f64,
    a: f64,
    b: f64,
    policy: &QuadPolicy,
) -> Result<QuadResult> {
    if (omega * (b - a)).abs() < 2.0 * PI {
        return integrate_interval(|k| f(k) * Complex64::from_polar(1.0, omega * k), a, b, policy);
    }
    let mut total = QuadResult {
        value: Complex64::new(0.0, 0.0),
        error_estimate: 0.0,
        evaluations: 0,
    };
    let mut pending = vec![(a, b, 0)];
    while let Some((lo, hi, depth)) = pending.pop() {
        if (omega * (hi - lo)).abs() < 2.0 * PI {
            let share = (hi - lo) / (b - a);
            let r = integrate_interval(
                |k| f(k) * Complex64::from_polar(1.0, omega * k),
                lo,
                hi,
                &policy.with_tol(policy.abs_tol * share, policy.rel_tol),
            )?;
            total.value += r.value;
            total.error_estimate += r.error_estimate;
            total.evaluations += r.evaluations;
            continue;
        }
        let (value, error) = levin_panel(&mut f, omega, lo, hi)?;
        total.evaluations += LEVIN_NODES;
        if error <= policy.tol(value) * (hi - lo) / (b - a) || depth >= LEVIN_DEPTH {
            if !(error <= policy.tol(value)) {
                return Err(Error::NoConvergence(format!(
                    "oscillatory quadrature on [{lo}, {hi}] at ω = {omega} (error {error:.2e})"
                )));
            }
            total.value += value;
            total.error_estimate += error;
        } else {
            let mid = 0.5 * (lo + hi);
            pending.push((lo, mid, depth + 1));
            pending.push((mid, hi, depth + 1));
        }
    }
    Ok(total)
}

const LEVIN_NODES: usize = 33;
const LEVIN_DEPTH: usize = 10;

/// Levin collocation with 17 and 33 nested nodes; returns the finer value and
/// the difference as error.
fn levin_panel<F: FnMut(f64) -> Complex64>(f: &mut F, omega: f64, a: f64, b: f64) -> Result<(Complex64, f64)> {
    let n = LEVIN_NODES;
    let half = 0.5 * (b - a);
    let s: Vec<f64> = (0..n).map(|i| (PI * i as f64 / (n - 1) as f64).cos()).collect();
    let values: Vec<Complex64> = s.iter().map(|&si| f(a + half * (si + 1.0))).collect();
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NoConvergence(format!("non-finite integrand on [{a}, {b}]")));
    }
    let fine = levin_solve(&s, &values, omega, a, b)?;
    let coarse_s: Vec<f64> = s.iter().step_by(2).copied().collect();
    let coarse_v: Vec<Complex64> = values.iter().step_by(2).copied().collect();
    let coarse = levin_solve(&coarse_s, &coarse_v, omega, a, b)?;
    Ok((fine, (fine - coarse).norm()))
}

fn levin_solve(s: &[f64], values: &[Complex64], omega: f64, a: f64, b: f64) -> Result<Complex64> {
    let n = s.len();
    let scale = 2.0 / (b - a);
    let iw = Complex64::new(0.0, omega);
    let mut matrix = DMatrix::<Complex64>::zeros(n, n);
    let mut t = vec![0.0; n];
    let mut u = vec![0.0; n];
    for (i, &si) in s.iter().enumerate() {
        // T_j and T_j′ = j·U_{j−1} by their three-term recurrences.
        t[0] = 1.0;
        u[0] = 1.0;
        if n > 1 {
            t[1] = si;
            u[1] = 2.0 * si;
        }
        for j in 2..n {
            t[j] = 2.0 * si * t[j - 1] - t[j - 2];
            u[j] = 2.0 * si * u[j - 1] - u[j - 2];
        }
        for j in 0..n {
            let dt = if j == 0 { 0.0 } else { j as f64 * u[j - 1] };
            matrix[(i, j)] = scale * dt + iw * t[j];
        }
    }
    let rhs = DVector::from_column_slice(values);
    let c = matrix
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::NoConvergence(format!("singular collocation system at ω = {omega}")))?;
    let p_hi: Complex64 = c.iter().sum();
    let p_lo: Complex64 = c.iter().enumerate().map(|(j, &cj)| if j % 2 == 0 { cj } else { -cj }).sum();
    Ok(p_hi * Complex64::from_polar(1.0, omega * b) - p_lo * Complex64::from_polar(1.0, omega * a))
}

/// ∫₀^a f by x = a·e^{−u}, which turns x^α and log endpoint behaviour into
/// exponential decay in u.
fn integrate_near_zero<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    a: f64,
    policy: &QuadPolicy,
) -> Result<QuadResult> {
    let mut total = QuadResult {
        value: Complex64::new(0.0, 0.0),
        error_estimate: 0.0,
        evaluations: 0,
    };
    let width = 4.0;
    let mut u0 = 0.0;
    let mut quiet = 0;
    while u0 < 740.0 {
        let seg = integrate_interval(
            |u| {
                let x = a * (-u).exp();
                if x == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                f(x) * x
            },
            u0,
            u0 + width,
            &policy.with_tol(policy.abs_tol * 0.1, policy.rel_tol),
        )?;
        total.value += seg.value;
        total.error_estimate += seg.error_estimate;
        total.evaluations += seg.evaluations;
        u0 += width;
        if seg.value.norm() < 1e-3 * policy.tol(total.value) {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    Ok(total)
}

/// ∫₀^∞ f(x) dx for an integrand whose decay class is given by the policy.
pub fn integrate_halfline<F: FnMut(f64) -> Complex64>(
    mut f: F,
    policy: &QuadPolicy,
) -> Result<QuadResult> {
    match policy.tail_cutoff_strategy {
        TailStrategy::ExponentialBound { rate } => {
            if !(rate > 0.0) {
                return Err(Error::Domain(format!("exponential rate {rate}")));
            }
            let scale = 1.0 / rate;
            let head = integrate_near_zero(&mut f, scale, policy)?;
            let tail = exponential_tail(&mut f, scale, rate, policy, head.value)?;
            Ok(combine(head, tail))
        }
        TailStrategy::OscillatoryPartition {
            first_zero,
            half_period,
        } => {
            let a = first_zero.min(half_period).max(1e-300);
            let head = integrate_near_zero(&mut f, a, policy)?;
            let mid = integrate_interval(&mut f, a, first_zero, policy)?;
            let tail = oscillatory_tail(&mut f, first_zero, half_period, policy)?;
            Ok(combine(combine(head, mid), tail))
        }
    }
}

fn combine(a: QuadResult, b: QuadResult) -> QuadResult {
    QuadResult {
        value: a.value + b.value,
        error_estimate: a.error_estimate + b.error_estimate,
        evaluations: a.evaluations + b.evaluations,
    }
}

fn exponential_tail<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    start: f64,
    rate: f64,
    policy: &QuadPolicy,
    head: Complex64,
) -> Result<QuadResult> {
    let width = 4.0 / rate;
    let mut total = QuadResult {
        value: Complex64::new(0.0, 0.0),
        error_estimate: 0.0,
        evaluations: 0,
    };
    let mut x = start;
    let mut quiet = 0;
    loop {
        let seg = integrate_interval(&mut *f, x, x + width, policy)?;
        total = combine(total, seg);
        x += width;
        let tol = policy.tol(head + total.value) * 0.1;
        if seg.value.norm() < tol && (x - start) * rate > 8.0 {
            quiet += 1;
            if quiet >= 2 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
        if (x - start) * rate > 800.0 {
            return Err(Error::NoConvergence(format!(
                "integrand not decaying at rate {rate} (|panel| = {:.2e} at x = {x})",
                seg.value.norm()
            )));
        }
    }
}

fn oscillatory_tail<F: FnMut(f64) -> Complex64>(
    f: &mut F,
    start: f64,
    half_period: f64,
    policy: &QuadPolicy,
) -> Result<QuadResult> {
    const MIN_PANELS: usize = 12;
    const MAX_PANELS: usize = 20_000;
    const EULER_WINDOW: usize = 40;
    const RICHARDSON_WINDOW: usize = 16;
    let mut sums: Vec<Complex64> = Vec::new();
    let mut partial = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut evals = 0;
    let mut previous: Option<Complex64> = None;
    let mut agree = 0;
    let mut extrapolated: Vec<(usize, Complex64)> = Vec::new();
    for j in 0..MAX_PANELS {
        let a = start + j as f64 * half_period;
        let seg = integrate_interval(&mut *f, a, a + half_period, &policy.with_tol(policy.abs_tol * 0.1, policy.rel_tol * 0.1))?;
        partial += seg.value;
        error += seg.error_estimate;
        evals += seg.evaluations;
        sums.push(partial);
        if sums.len() < MIN_PANELS {
            continue;
        }
        if seg.value.norm() < 1e-3 * policy.tol(partial) {
            return Ok(QuadResult {
                value: partial,
                error_estimate: error,
                evaluations: evals,
            });
        }
        let n = sums.len();
        if n < 8 * RICHARDSON_WINDOW {
            let estimate = euler_accelerate(&sums[n.saturating_sub(EULER_WINDOW)..]);
            if let Some(prev) = previous {
                if (estimate - prev).norm() < 0.1 * policy.tol(estimate) {
                    agree += 1;
                    if agree >= 2 {
                        return Ok(QuadResult {
                            value: estimate,
                            error_estimate: error + (estimate - prev).norm(),
                            evaluations: evals,
                        });
                    }
                } else {
                    agree = 0;
                }
            }
            previous = Some(estimate);
            continue;
        }
        // A non-oscillating remainder (e.g. ~1/x² on a diagonal) survives the
        // averaging as a drift in powers of 1/N, removed by extrapolation. Its
        // error is judged against the estimate from half as many panels, since
        // neighbouring estimates share most of their bias.
        if !n.is_multiple_of(16) {
            continue;
        }
        let at = |q: usize| euler_accelerate(&sums[n / q - RICHARDSON_WINDOW..n / q]);
        let estimate = richardson_halving(&[at(8), at(4), at(2), at(1)]);
        extrapolated.push((n, estimate));
        if let Some(&(_, half)) = extrapolated.iter().find(|&&(k, _)| 2 * k == n) {
            let drift = (estimate - half).norm() / 15.0;
            if drift < policy.tol(estimate) {
                return Ok(QuadResult {
                    value: estimate,
                    error_estimate: error + drift,
                    evaluations: evals,
                });
            }
        }
    }
    Err(Error::NoConvergence(format!(
        "oscillatory tail after {MAX_PANELS} panels"
    )))
}

/// Euler's transformation of a sequence of partial sums: repeated averaging of
/// neighbours, which annihilates alternating and slowly rotating components.
pub fn euler_accelerate(sums: &[Complex64]) -> Complex64 {
    let mut t: Vec<Complex64> = sums.to_vec();
    while t.len() > 1 {
        for i in 0..t.len() - 1 {
            t[i] = 0.5 * (t[i] + t[i + 1]);
        }
        t.pop();
    }
    t[0]
}

/// Richardson extrapolation to h → 0 of `values[i] = v(h₀/2^i)`, assuming
/// an expansion in integer powers of h.
pub fn richardson_halving(values: &[Complex64]) -> Complex64 {
    let mut t = values.to_vec();
    let mut factor = 1.0;
    for level in 1..t.len() {
        factor *= 2.0;
        for i in (level..t.len()).rev() {
            t[i] = t[i] + (t[i] - t[i - 1]) / (factor - 1.0);
        }
    }
    t[t.len() - 1]
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * p - pm) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Starting information for [`find_root`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootSeed {
    Point(Complex64),
    Pair(Complex64, Complex64),
    /// Real bracket with a sign change of Re g.
    Bracket(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootPolicy {
    pub x_tol: f64,
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for RootPolicy {
    fn default() -> Self {
        RootPolicy {
            x_tol: 1e-14,
            f_tol: 1e-15,
            max_iter: 100,
        }
    }
}

/// Secant iteration in the complex plane, falling back to Newton-like damping
/// when the secant step is degenerate; brackets are refined by bisection first.
pub fn find_root<G: FnMut(Complex64) -> Result<Complex64>>(
    mut g: G,
    seed: RootSeed,
    policy: &RootPolicy,
) -> Result<Complex64> {
    let (mut z0, mut z1) = match seed {
        RootSeed::Point(z) => {
            let h = 1e-4 * z.norm().max(1.0);
            (z, z + Complex64::new(h, 0.5 * h))
        }
        RootSeed::Pair(a, b) => (a, b),
        RootSeed::Bracket(a, b) => {
            let (mut lo, mut hi) = (a, b);
            let mut flo = g(Complex64::new(lo, 0.0))?.re;
            let fhi = g(Complex64::new(hi, 0.0))?.re;
            if flo * fhi > 0.0 {
                return Err(Error::Domain(format!("[{a}, {b}] does not bracket a root")));
            }
            for _ in 0..30 {
                let mid = 0.5 * (lo + hi);
                let fm = g(Complex64::new(mid, 0.0))?.re;
                if fm * flo <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            (Complex64::new(lo, 0.0), Complex64::new(hi, 0.0))
        }
    };
    let mut g0 = g(z0)?;
    let mut g1 = g(z1)?;
    for _ in 0..policy.max_iter {
        if g1.norm() <= policy.f_tol {
            return Ok(z1);
        }
        let denom = g1 - g0;
        let step = if denom.norm() == 0.0 {
            Complex64::new(policy.x_tol.max(1e-8) * z1.norm().max(1.0), 0.0)
        } else {
            g1 * (z1 - z0) / denom
        };
        z0 = z1;
        g0 = g1;
        z1 -= step;
        g1 = g(z1)?;
        if step.norm() <= policy.x_tol * z1.norm().max(1.0) {
            return Ok(z1);
        }
    }
    Err(Error::NoConvergence(format!(
        "root iteration diverged; last iterate {z1}, |g| = {:.2e}",
        g1.norm()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(16);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn finite_interval() {
        let p = QuadPolicy::exponential(1.0);
        let r = integrate_interval(|x| Complex64::new(x.sqrt(), 0.0), 0.0, 1.0, &p).unwrap();
        assert!((r.value.re - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn roots() {
        let p = RootPolicy::default();
        let r = find_root(|z| Ok(z * z - 2.0), RootSeed::Point(Complex64::new(1.0, 0.0)), &p).unwrap();
        assert!((r - 2f64.sqrt()).norm() < 1e-12);
        let r = find_root(|z| Ok(z.exp() + 1.0), RootSeed::Point(Complex64::new(0.0, 3.0)), &p).unwrap();
        assert!((r - Complex64::new(0.0, PI)).norm() < 1e-12);
        let r = find_root(|z| Ok(z.cos()), RootSeed::Bracket(1.0, 2.0), &p).unwrap();
        assert!((r.re - PI / 2.0).abs() < 1e-12);
    }
}
