//! Hankel transforms F_m, the incoming/outgoing transforms F^∓_{m,κ} and
//! F^{ν∓}_0, the inversion J, and functions of the dilation generator A.
//!
//! Every kernel is written as Σ_j c_j(q)·B_j(pq) with p the position and q the
//! spectral variable, B_j ∈ {Ja_μ, Ya_0}. Small arguments pq are integrated by
//! Gauss–Kronrod; beyond, each B_j is split into Ha^± and the two
//! e^{±ipq} parts go to Levin collocation.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::capture;
use crate::operators::{classify, varsigma, ExtendedParam, OperatorSpec};
use crate::quad::{integrate_fourier, integrate_halfline, integrate_interval, QuadPolicy};
use crate::specfun::{bessel_j, hankel_pm, ln_gamma, neumann, Sign, EULER_GAMMA};

/// Per-node quadrature target.
pub const NODE_TOL: f64 = 1e-9;
/// Mellin-side trapezoid: t ∈ [−MELLIN_SPAN, MELLIN_SPAN] with this step.
pub const MELLIN_SPAN: f64 = 60.0;
pub const MELLIN_STEP: f64 = 0.05;

const STENCIL: usize = 8;
const SPLIT_ARGUMENT: f64 = 4.0;
const HEAD_SPAN: f64 = 40.0;
/// Samples below this fraction of the peak count as zero for fast-decaying classes.
const TRIM: f64 = 1e-11;
/// An output whose last sample is below this fraction of its peak is taken as
/// fast-decaying.
const NEGLIGIBLE: f64 = 1e-9;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Behaviour of a sampled function beyond its last node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayClass {
    /// Negligible beyond the last node.
    GaussianLike,
    /// Negligible beyond the last node.
    Exponential,
    /// f(y) = f(last)(last/y)^p beyond the last node, p > 0.
    Power(f64),
    /// Zero outside [first, last], at both ends.
    Compact,
}

impl DecayClass {
    fn infer(nodes: &[f64], values: &[Complex64]) -> DecayClass {
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let n = nodes.len();
        let (a, b) = (values[n - 2].norm(), values[n - 1].norm());
        if b <= NEGLIGIBLE * peak || a == 0.0 {
            return DecayClass::Exponential;
        }
        let p = -(b / a).ln() / (nodes[n - 1] / nodes[n - 2]).ln();
        // A flat or growing end is quadrature noise on a negligible tail.
        if p > 0.0 {
            DecayClass::Power(p)
        } else {
            DecayClass::Exponential
        }
    }
}

/// Samples of a function on (0, ∞), interpolated in ln y by local 8-point
/// Lagrange polynomials. Below the first node the function continues as the
/// power law through the first two samples (unless `Compact`).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub nodes: Vec<f64>,
    pub values: Vec<Complex64>,
    pub decay_class: DecayClass,
    logs: Vec<f64>,
}

impl SampledFunction {
    pub fn new(nodes: Vec<f64>, values: Vec<Complex64>, decay_class: DecayClass) -> Result<Self> {
        if nodes.len() < 2 || nodes.len() != values.len() {
            return Err(Error::Domain(format!(
                "{} nodes and {} values",
                nodes.len(),
                values.len()
            )));
        }
        if !(nodes[0] > 0.0) || nodes.windows(2).any(|w| !(w[1] > w[0])) || !nodes[nodes.len() - 1].is_finite() {
            return Err(Error::Domain("nodes must be positive and strictly increasing".into()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Domain("non-finite sample".into()));
        }
        if let DecayClass::Power(p) = decay_class {
            if !(p > 0.0) {
                return Err(Error::Domain(format!("power decay needs p > 0, got {p}")));
            }
        }
        let logs = nodes.iter().map(|y| y.ln()).collect();
        Ok(SampledFunction {
            nodes,
            values,
            decay_class,
            logs,
        })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(nodes: Vec<f64>, f: F, decay_class: DecayClass) -> Result<Self> {
        let values = nodes.iter().map(|&y| f(y)).collect();
        Self::new(nodes, values, decay_class)
    }

    pub fn first(&self) -> f64 {
        self.nodes[0]
    }

    pub fn last(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Interpolated value; `None` outside [first, last].
    pub fn eval(&self, y: f64) -> Option<Complex64> {
        if !(y >= self.first() && y <= self.last()) {
            return None;
        }
        let s = y.ln();
        let n = self.nodes.len();
        let w = STENCIL.min(n);
        let i = self.logs.partition_point(|&l| l < s);
        let start = i.saturating_sub(w / 2).min(n - w);
        let logs = &self.logs[start..start + w];
        let mut sum = c(0.0, 0.0);
        for (j, &lj) in logs.iter().enumerate() {
            let mut weight = 1.0;
            for (k, &lk) in logs.iter().enumerate() {
                if k != j {
                    weight *= (s - lk) / (lj - lk);
                }
            }
            sum += self.values[start + j] * weight;
        }
        Some(sum)
    }

    /// Value on all of (0, ∞), with the head and tail continuations.
    pub fn value_at(&self, y: f64) -> Complex64 {
        if let Some(v) = self.eval(y) {
            return v;
        }
        if y < self.first() {
            return match self.head_exponent() {
                Some(alpha) => self.values[0] * c(y / self.first(), 0.0).powc(alpha),
                None => c(0.0, 0.0),
            };
        }
        match self.tail_exponent() {
            Some(beta) => self.values[self.values.len() - 1] * c(self.last() / y, 0.0).powc(beta),
            None => c(0.0, 0.0),
        }
    }

    /// β with f(y) = f(last)(last/y)^β beyond the last node: Re β = p, and the
    /// imaginary part follows the last two samples.
    fn tail_exponent(&self) -> Option<Complex64> {
        let DecayClass::Power(p) = self.decay_class else {
            return None;
        };
        let n = self.nodes.len();
        let (a, b) = (self.values[n - 2], self.values[n - 1]);
        let drift = if a.norm() > 0.0 && b.norm() > 0.0 {
            -((b / a).ln() / (self.nodes[n - 1] / self.nodes[n - 2]).ln()).im
        } else {
            0.0
        };
        Some(c(p, drift))
    }

    /// α with f(y) ≈ f(first)(y/first)^α near 0, when there is a head at all.
    fn head_exponent(&self) -> Option<Complex64> {
        let (v0, v1) = (self.values[0], self.values[1]);
        if self.decay_class == DecayClass::Compact || v0.norm() == 0.0 || v1.norm() == 0.0 {
            return None;
        }
        Some((v1 / v0).ln() / (self.nodes[1] / self.nodes[0]).ln())
    }

    /// Index one past the last sample that matters.
    fn effective_end(&self) -> usize {
        match self.decay_class {
            DecayClass::Power(_) | DecayClass::Compact => self.nodes.len(),
            DecayClass::GaussianLike | DecayClass::Exponential => {
                let peak = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
                let last = self.values.iter().rposition(|v| v.norm() > TRIM * peak).unwrap_or(0);
                (last + 2).min(self.nodes.len())
            }
        }
    }

    /// ‖f‖₂ over the sampled range, by the trapezoid rule in ln y.
    pub fn l2_norm(&self) -> f64 {
        trapezoid_log(&self.nodes, |i| self.values[i].norm_sqr()).sqrt()
    }

    /// ‖self − reference‖₂ / ‖reference‖₂ on common nodes.
    pub fn relative_l2_error(&self, reference: &SampledFunction) -> Result<f64> {
        if self.nodes != reference.nodes {
            return Err(Error::Domain("relative error needs identical nodes".into()));
        }
        let diff = trapezoid_log(&self.nodes, |i| (self.values[i] - reference.values[i]).norm_sqr());
        Ok(diff.sqrt() / reference.l2_norm())
    }

    /// Pointwise product with a function of the node.
    pub fn multiply<F: Fn(f64) -> Complex64>(&self, g: F) -> Result<SampledFunction> {
        let values = self.nodes.iter().zip(&self.values).map(|(&y, &v)| v * g(y)).collect();
        SampledFunction::new(self.nodes.clone(), values, self.decay_class)
    }
}

fn trapezoid_log<F: Fn(usize) -> f64>(nodes: &[f64], g: F) -> f64 {
    nodes
        .windows(2)
        .enumerate()
        .map(|(i, w)| 0.5 * (w[1] / w[0]).ln() * (g(i) * w[0] + g(i + 1) * w[1]))
        .sum()
}

/// n points from lo to hi in geometric progression.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { hi } else { lo * (ratio * i as f64).exp() }).collect()
}

/// 400 geometric nodes on [1e-3, 1e3].
pub fn default_nodes() -> Vec<f64> {
    geometric_grid(1e-3, 1e3, 400)
}

#[derive(Debug, Clone, Copy)]
enum Bessel {
    J(Complex64),
    Y0,
}

impl Bessel {
    fn value(self, z: f64) -> Result<Complex64> {
        match self {
            Bessel::J(mu) => bessel_j(mu, z),
            Bessel::Y0 => neumann(0.0, z),
        }
    }

    /// B(z) = Σ± (weight·Ha^±(z)e^{∓iz})·e^{±iz}; returns the bracket.
    fn part(self, side: Sign, z: f64) -> Result<Complex64> {
        let s = side.value();
        let (mu, weight) = match self {
            Bessel::J(mu) => (mu, c(0.5, 0.0)),
            Bessel::Y0 => (c(0.0, 0.0), c(0.0, -0.5 * s)),
        };
        Ok(weight * hankel_pm(mu, side, z)? * Complex64::from_polar(1.0, -s * z))
    }
}

#[derive(Debug, Clone, Copy)]
enum Family {
    Hankel(Complex64),
    /// ς = num/den; phase sign s for F^s.
    Kappa { m: Complex64, num: Complex64, den: Complex64, s: f64 },
    Nu { num: Complex64, den: Complex64, s: f64 },
}

impl Family {
    fn terms(&self, q: f64) -> [(Complex64, Bessel); 2] {
        let norm = (2.0 / PI).sqrt();
        match *self {
            Family::Hankel(m) => [(c(norm, 0.0), Bessel::J(m)), (c(0.0, 0.0), Bessel::J(m))],
            Family::Kappa { m, num, den, s } => {
                let power = c(q / 2.0, 0.0).powc(2.0 * m);
                let phase = (c(0.0, s * FRAC_PI_2) * m).exp();
                let d = den - num * (c(0.0, s * PI) * m).exp() * power;
                let pre = norm * phase / d;
                [(pre * den, Bessel::J(m)), (-pre * num * power, Bessel::J(-m))]
            }
            Family::Nu { num, den, s } => {
                let l = den * (EULER_GAMMA + (q / 2.0).ln()) - num;
                let d = l + c(0.0, s * FRAC_PI_2) * den;
                [(norm * l / d, Bessel::J(c(0.0, 0.0))), (-norm * FRAC_PI_2 * den / d, Bessel::Y0)]
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Kernel {
    family: Family,
    transpose: bool,
    tol: f64,
}

impl Kernel {
    fn spectral(&self, out: f64, var: f64) -> f64 {
        if self.transpose {
            out
        } else {
            var
        }
    }

    fn value(&self, out: f64, var: f64) -> Result<Complex64> {
        let mut sum = c(0.0, 0.0);
        for (coef, b) in self.family.terms(self.spectral(out, var)) {
            if coef != c(0.0, 0.0) {
                sum += coef * b.value(out * var)?;
            }
        }
        Ok(sum)
    }

    fn part(&self, side: Sign, out: f64, var: f64) -> Result<Complex64> {
        let mut sum = c(0.0, 0.0);
        for (coef, b) in self.family.terms(self.spectral(out, var)) {
            if coef != c(0.0, 0.0) {
                sum += coef * b.part(side, out * var)?;
            }
        }
        Ok(sum)
    }

    fn apply(&self, f: &SampledFunction, out_nodes: &[f64]) -> Result<SampledFunction> {
        if let Some(alpha) = f.head_exponent() {
            if !(alpha.re > -1.0) {
                return Err(Error::Domain(format!("f ~ y^{alpha} is not integrable at 0")));
            }
        }
        let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(out_nodes.len().max(1));
        let chunk = out_nodes.len().div_ceil(threads).max(1);
        let values: Result<Vec<Complex64>> = std::thread::scope(|scope| {
            let handles: Vec<_> = out_nodes
                .chunks(chunk)
                .map(|xs| scope.spawn(move || xs.iter().map(|&x| self.at(f, x)).collect::<Result<Vec<_>>>()))
                .collect();
            let mut all = Vec::with_capacity(out_nodes.len());
            for h in handles {
                all.extend(h.join().expect("transform worker panicked")?);
            }
            Ok(all)
        });
        let values = values?;
        let decay = DecayClass::infer(out_nodes, &values);
        SampledFunction::new(out_nodes.to_vec(), values, decay)
    }

    /// ∫ K(x, v) f(v) dv at one output node.
    fn at(&self, f: &SampledFunction, x: f64) -> Result<Complex64> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::Domain(format!("output node {x}")));
        }
        let policy = QuadPolicy::exponential(1.0).with_tol(0.1 * self.tol, 1e-11);
        let end = f.effective_end();
        let v0 = f.first();
        let vend = f.nodes[end - 1];
        let integrand = |v: f64| Ok(self.value(x, v)? * f.value_at(v));
        let mut total = c(0.0, 0.0);

        if f.head_exponent().is_some() {
            total += capture(
                |s: f64| {
                    let v = v0 * (-s).exp();
                    Ok(integrand(v)? * v)
                },
                |g| integrate_interval(g, 0.0, HEAD_SPAN, &policy),
            )?;
        }

        let cut = (SPLIT_ARGUMENT / x).clamp(v0, vend);
        total += capture(|v: f64| integrand(v), |g| integrate_interval(g, v0, cut, &policy))?;
        // Geometric panels keep the amplitude resolvable when [cut, vend]
        // spans decades.
        let mut lo = cut;
        while lo < vend {
            let hi = (2.0 * lo).min(vend);
            let share = policy.with_tol(policy.abs_tol * (hi - lo) / (vend - cut), policy.rel_tol);
            for side in [Sign::Plus, Sign::Minus] {
                let amplitude = |v: f64| Ok(self.part(side, x, v)? * f.value_at(v));
                total += match capture(amplitude, |g| integrate_fourier(g, side.value() * x, lo, hi, &share)) {
                    Ok(v) => v,
                    Err(Error::NoConvergence(_)) => capture(
                        |v: f64| Ok(amplitude(v)? * Complex64::from_polar(1.0, side.value() * x * v)),
                        |g| integrate_interval(g, lo, hi, &share),
                    )?,
                    Err(e) => return Err(e),
                };
            }
            lo = hi;
        }

        if let DecayClass::Power(_) = f.decay_class {
            let tail = QuadPolicy::oscillatory(0.5 * PI / x, PI / x).with_tol(0.1 * self.tol, 1e-11);
            total += capture(|w: f64| integrand(vend + w), |g| integrate_halfline(g, &tail))?;
        }
        Ok(total)
    }
}

/// Any of the transforms below, chosen at run time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transform {
    /// F_m, Re m > −1.
    Hankel(Complex64),
    /// F^s_{m,κ}, or its transpose.
    Kappa {
        m: Complex64,
        kappa: ExtendedParam,
        sign: Sign,
        transpose: bool,
    },
    /// F^{νs}_0, or its transpose.
    Nu { nu: ExtendedParam, sign: Sign, transpose: bool },
}

impl Transform {
    pub fn apply(&self, f: &SampledFunction, out_nodes: &[f64]) -> Result<SampledFunction> {
        self.apply_with_tol(f, out_nodes, NODE_TOL)
    }

    /// As [`Transform::apply`] with a per-node absolute quadrature target.
    pub fn apply_with_tol(&self, f: &SampledFunction, out_nodes: &[f64], tol: f64) -> Result<SampledFunction> {
        if !(tol > 0.0) {
            return Err(Error::Domain(format!("quadrature tolerance must be positive, got {tol}")));
        }
        let (family, transpose) = match *self {
            Transform::Hankel(m) => {
                if !(m.re > -1.0) {
                    return Err(Error::Domain(format!("Hankel transform needs Re m > -1, got {m}")));
                }
                (Family::Hankel(m), false)
            }
            Transform::Kappa {
                m,
                kappa,
                sign,
                transpose,
            } => (kappa_family(m, kappa, sign)?, transpose),
            Transform::Nu { nu, sign, transpose } => (nu_family(nu, sign)?, transpose),
        };
        Kernel {
            family,
            transpose,
            tol,
        }
        .apply(f, out_nodes)
    }
}

/// (F_m f)(x) = ∫√(2/π)Ja_m(xy)f(y)dy, Re m > −1.
pub fn hankel_apply(m: Complex64, f: &SampledFunction, out_nodes: &[f64]) -> Result<SampledFunction> {
    Transform::Hankel(m).apply(f, out_nodes)
}

fn kappa_family(m: Complex64, kappa: ExtendedParam, sign: Sign) -> Result<Family> {
    let spec = OperatorSpec::kappa(m, kappa)?;
    if classify(&spec)?.exceptional {
        return Err(Error::Exceptional(format!("(m, kappa) = ({m}, {kappa:?})")));
    }
    let s = varsigma(m, kappa)?;
    Ok(Family::Kappa {
        m,
        num: s.num(),
        den: s.den(),
        s: sign.value(),
    })
}

fn nu_family(nu: ExtendedParam, sign: Sign) -> Result<Family> {
    if classify(&OperatorSpec::nu(nu))?.exceptional {
        return Err(Error::Exceptional(format!("nu = {nu:?}")));
    }
    Ok(Family::Nu {
        num: nu.num(),
        den: nu.den(),
        s: sign.value(),
    })
}

/// F^s_{m,κ} with kernel
/// e^{s·iπm/2}√(2/π)(Ja_m(xy) − ςJa_{−m}(xy)(y/2)^{2m})/(1 − ςe^{s·iπm}(y/2)^{2m}).
pub fn generalized_hankel_apply(
    m: Complex64,
    kappa: ExtendedParam,
    sign: Sign,
    f: &SampledFunction,
    out_nodes: &[f64],
) -> Result<SampledFunction> {
    let transpose = false;
    Transform::Kappa { m, kappa, sign, transpose }.apply(f, out_nodes)
}

/// The transpose F^{s t}_{m,κ}: the same kernel with x and y exchanged.
pub fn generalized_hankel_transpose_apply(
    m: Complex64,
    kappa: ExtendedParam,
    sign: Sign,
    f: &SampledFunction,
    out_nodes: &[f64],
) -> Result<SampledFunction> {
    let transpose = true;
    Transform::Kappa { m, kappa, sign, transpose }.apply(f, out_nodes)
}

/// F^{νs}_0 with kernel
/// √(2/π)((γ+ln(y/2)−ν)Ja_0(xy) − (π/2)Ya_0(xy))/(γ+ln(y/2)−ν + s·iπ/2).
pub fn hankel_nu_apply(nu: ExtendedParam, sign: Sign, f: &SampledFunction, out_nodes: &[f64]) -> Result<SampledFunction> {
    let transpose = false;
    Transform::Nu { nu, sign, transpose }.apply(f, out_nodes)
}

/// The transpose of [`hankel_nu_apply`].
pub fn hankel_nu_transpose_apply(
    nu: ExtendedParam,
    sign: Sign,
    f: &SampledFunction,
    out_nodes: &[f64],
) -> Result<SampledFunction> {
    let transpose = true;
    Transform::Nu { nu, sign, transpose }.apply(f, out_nodes)
}

/// (Jf)(x) = f(1/x)/x, by remapping the nodes.
pub fn involution_j(f: &SampledFunction) -> SampledFunction {
    let nodes: Vec<f64> = f.nodes.iter().rev().map(|y| 1.0 / y).collect();
    let values: Vec<Complex64> = f.nodes.iter().zip(&f.values).rev().map(|(&y, &v)| v * y).collect();
    let decay = match f.decay_class {
        DecayClass::Compact => DecayClass::Compact,
        _ => match f.head_exponent() {
            Some(alpha) if alpha.re > -1.0 && f.values[0].norm() > NEGLIGIBLE * peak(&f.values) => {
                DecayClass::Power(alpha.re + 1.0)
            }
            _ => DecayClass::GaussianLike,
        },
    };
    let logs = nodes.iter().map(|y: &f64| y.ln()).collect();
    SampledFunction {
        nodes,
        values,
        decay_class: decay,
        logs,
    }
}

fn peak(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Mf(t) = ∫y^{−1/2−it}f(y)dy, with the head and tail continuations of f
/// integrated in closed form.
pub fn mellin_transform(f: &SampledFunction, t: f64) -> Result<Complex64> {
    let e = c(0.5, -t);
    let end = f.effective_end();
    let (s0, s1) = (f.logs[0], f.logs[end - 1]);
    let policy = QuadPolicy::exponential(1.0).with_tol(1e-13, 1e-12);
    let mut total = capture(
        |s: f64| Ok((e * s).exp() * f.value_at(s.exp())),
        |g| integrate_interval(g, s0, s1, &policy),
    )?;
    if let Some(alpha) = f.head_exponent() {
        total += f.values[0] * (e * s0).exp() / (alpha + e);
    }
    if let DecayClass::Power(p) = f.decay_class {
        if !(p > 0.5) {
            return Err(Error::Domain(format!("Mellin transform needs power decay p > 1/2, got {p}")));
        }
        let beta = f.tail_exponent().expect("power class");
        total += f.values[f.values.len() - 1] * (e * s1).exp() / (beta - e);
    }
    Ok(total)
}

/// ψ(A)f on out_nodes through the Mellin representation
/// (ψ(A)f)(x) = (1/2π)∫ψ(t)x^{−1/2+it}Mf(t)dt, trapezoid in t.
pub fn multiplier_apply(psi: &Multiplier, f: &SampledFunction, out_nodes: &[f64]) -> Result<SampledFunction> {
    if psi.variable != Variable::Dilation {
        return Err(Error::Domain(format!("`{}` is not a function of A", psi.label)));
    }
    let n = (2.0 * MELLIN_SPAN / MELLIN_STEP).round() as usize;
    let samples: Vec<(f64, Complex64)> = (0..=n)
        .map(|i| {
            let t = -MELLIN_SPAN + i as f64 * MELLIN_STEP;
            Ok((t, psi.eval(t) * mellin_transform(f, t)?))
        })
        .collect::<Result<_>>()?;
    let values = out_nodes
        .iter()
        .map(|&x| {
            let lx = x.ln();
            let sum: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(i, &(t, v))| {
                    let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                    w * v * (c(-0.5, t) * lx).exp()
                })
                .sum();
            sum * MELLIN_STEP / (2.0 * PI)
        })
        .collect::<Vec<_>>();
    let decay = DecayClass::infer(out_nodes, &values);
    SampledFunction::new(out_nodes.to_vec(), values, decay)
}

/// Which variable a multiplier is a function of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    /// The spectral variable t ∈ ℝ of A.
    Dilation,
    /// The position x > 0.
    Position,
}

#[derive(Clone)]
pub struct Multiplier {
    pub label: String,
    pub variable: Variable,
    eval: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    limits: Option<[Complex64; 2]>,
}

impl fmt::Debug for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Multiplier")
            .field("label", &self.label)
            .field("variable", &self.variable)
            .finish()
    }
}

impl Multiplier {
    pub fn new<F: Fn(f64) -> Complex64 + Send + Sync + 'static>(label: &str, variable: Variable, eval: F) -> Self {
        Multiplier {
            label: label.to_string(),
            variable,
            eval: Arc::new(eval),
            limits: None,
        }
    }

    /// Attaches the limits at −∞ and +∞.
    pub fn with_limits(mut self, at_minus: Complex64, at_plus: Complex64) -> Self {
        self.limits = Some([at_minus, at_plus]);
        self
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        (self.eval)(t)
    }

    /// The limit at +∞ (`Plus`) or −∞ (`Minus`), when it exists and is known.
    pub fn limit(&self, side: Sign) -> Option<Complex64> {
        self.limits.map(|[lo, hi]| match side {
            Sign::Minus => lo,
            Sign::Plus => hi,
        })
    }
}

/// Parameters for [`multiplier`]; each label reads the fields it needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierParams {
    pub m: Complex64,
    pub m_prime: Complex64,
    pub kappa: ExtendedParam,
    pub nu: ExtendedParam,
    pub sign: Sign,
}

impl Default for MultiplierParams {
    fn default() -> Self {
        MultiplierParams {
            m: c(0.0, 0.0),
            m_prime: c(0.0, 0.0),
            kappa: ExtendedParam::zero(),
            nu: ExtendedParam::infinity(),
            sign: Sign::Plus,
        }
    }
}

pub const LABELS: [&str; 9] = [
    "xi_m",
    "xi0_pm",
    "wave_mm'",
    "wave_minus_m",
    "wave_m_plus2",
    "wnd",
    "g_mk",
    "g0_nu",
    "y0_tanh",
];

/// Ξ_m(t) = e^{i ln2·t}Γ((m+1+it)/2)/Γ((m+1−it)/2), for complex t as well.
pub fn xi(m: Complex64, t: Complex64) -> Result<Complex64> {
    let i = Complex64::i();
    let a = (m + 1.0 + i * t) / 2.0;
    let b = (m + 1.0 - i * t) / 2.0;
    Ok((i * LN_2 * t + ln_gamma(a)? - ln_gamma(b)?).exp())
}

/// Ξ_0^s(t) = (1/π)Γ((1+it)/2)²e^{i ln2·t}e^{−sπt/2}.
pub fn xi0_pm(sign: Sign, t: f64) -> Result<Complex64> {
    let g = ln_gamma(c(0.5, 0.5 * t))?;
    Ok((2.0 * g + c(-sign.value() * FRAC_PI_2 * t, LN_2 * t)).exp() / PI)
}

fn nan() -> Complex64 {
    c(f64::NAN, f64::NAN)
}

fn order_check(m: Complex64) -> Result<()> {
    if m.re > -1.0 && m.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("order {m} needs Re m > -1")))
    }
}

/// W^s_{m,m′}(t) = e^{s·iπ(m−m′)/2}Ξ_m(−t)Ξ_{m′}(t).
pub fn wave_gamma_form(m: Complex64, m_prime: Complex64, sign: Sign, t: f64) -> Result<Complex64> {
    let phase = (c(0.0, sign.value() * FRAC_PI_2) * (m - m_prime)).exp();
    Ok(phase * xi(m, c(-t, 0.0))? * xi(m_prime, c(t, 0.0))?)
}

/// W^s_{m,m′} at −∞ and +∞: e^{(s+1)iπ(m−m′)/2} and e^{(s−1)iπ(m−m′)/2}.
fn wave_limits(m: Complex64, m_prime: Complex64, sign: Sign) -> (Complex64, Complex64) {
    let s = sign.value();
    let half = c(0.0, FRAC_PI_2) * (m - m_prime);
    (((s + 1.0) * half).exp(), ((s - 1.0) * half).exp())
}

/// The multiplier registry. Labels and the parameters they read:
///
/// * `xi_m` (m): Ξ_m(t);
/// * `xi0_pm` (sign): Ξ_0^±(t);
/// * `wave_mm'` (m, m′, sign): W^±_{m,m′}(t) = e^{±iπ(m−m′)/2}Ξ_m(−t)Ξ_{m′}(t);
/// * `wave_minus_m` (m, sign): W^±_{−m,m}(t) = (e^{±πt}+e^{∓iπm})/(e^{±πt}+e^{±iπm});
/// * `wave_m_plus2` (m): W^±_{m+2,m}(t) = −(m+1−it)/(m+1+it);
/// * `wnd` (sign): W^±_{N,D}(t) = ±tanh(πt) ∓ i/cosh(πt);
/// * `g_mk` (m, κ, sign), of x: G^s_{m,κ}(x) = e^{s·iπm}(1 − ςe^{−s·iπm}(x/2)^{2m})/(1 − ςe^{s·iπm}(x/2)^{2m});
/// * `g0_nu` (ν, sign), of x: G^{νs}_0(x) = (γ+ln(x/2)−ν − s·iπ/2)/(γ+ln(x/2)−ν + s·iπ/2);
/// * `y0_tanh`: iΞ_0(t)tanh(πt/2), so that the Ya_0 transform is J·(this)(A).
pub fn multiplier(label: &str, params: &MultiplierParams) -> Result<Multiplier> {
    let MultiplierParams {
        m,
        m_prime,
        kappa,
        nu,
        sign,
    } = *params;
    let s = sign.value();
    let i = Complex64::i();
    Ok(match label {
        "xi_m" => {
            order_check(m)?;
            Multiplier::new(label, Variable::Dilation, move |t| xi(m, c(t, 0.0)).unwrap_or_else(|_| nan()))
        }
        "xi0_pm" => Multiplier::new(label, Variable::Dilation, move |t| xi0_pm(sign, t).unwrap_or_else(|_| nan())),
        "wave_mm'" => {
            order_check(m)?;
            order_check(m_prime)?;
            let (lo, hi) = wave_limits(m, m_prime, sign);
            Multiplier::new(label, Variable::Dilation, move |t| {
                wave_gamma_form(m, m_prime, sign, t).unwrap_or_else(|_| nan())
            })
            .with_limits(lo, hi)
        }
        "wave_minus_m" => {
            if !(m.re.abs() < 1.0) {
                return Err(Error::Domain(format!("W_(-m,m) needs |Re m| < 1, got {m}")));
            }
            let (num_phase, den_phase) = ((-s * i * PI * m).exp(), (s * i * PI * m).exp());
            let (lo, hi) = wave_limits(-m, m, sign);
            Multiplier::new(label, Variable::Dilation, move |t| {
                // Divide through by e^{±πt} where it is large.
                let e = (s * PI * t).exp();
                if e > 1.0 {
                    (1.0 + num_phase / e) / (1.0 + den_phase / e)
                } else {
                    (e + num_phase) / (e + den_phase)
                }
            })
            .with_limits(lo, hi)
        }
        "wave_m_plus2" => {
            order_check(m)?;
            Multiplier::new(label, Variable::Dilation, move |t| -(m + 1.0 - i * t) / (m + 1.0 + i * t))
                .with_limits(c(1.0, 0.0), c(1.0, 0.0))
        }
        "wnd" => {
            let (lo, hi) = wave_limits(c(-0.5, 0.0), c(0.5, 0.0), sign);
            Multiplier::new(label, Variable::Dilation, move |t| c(s * (PI * t).tanh(), -s / (PI * t).cosh()))
                .with_limits(lo, hi)
        }
        "g_mk" => {
            let spec = OperatorSpec::kappa(m, kappa)?;
            if classify(&spec)?.exceptional {
                return Err(Error::Exceptional(format!("(m, kappa) = ({m}, {kappa:?})")));
            }
            let v = varsigma(m, kappa)?;
            let (num, den) = (v.num(), v.den());
            let phase = (s * i * PI * m).exp();
            Multiplier::new(label, Variable::Position, move |x| {
                let power = c(x / 2.0, 0.0).powc(2.0 * m);
                phase * (den - num * power / phase) / (den - num * power * phase)
            })
        }
        "g0_nu" => {
            if classify(&OperatorSpec::nu(nu))?.exceptional {
                return Err(Error::Exceptional(format!("nu = {nu:?}")));
            }
            let (num, den) = (nu.num(), nu.den());
            Multiplier::new(label, Variable::Position, move |x| {
                if den == c(0.0, 0.0) {
                    return c(1.0, 0.0);
                }
                let l = den * (EULER_GAMMA + (x / 2.0).ln()) - num;
                let shift = s * i * FRAC_PI_2 * den;
                (l - shift) / (l + shift)
            })
        }
        "y0_tanh" => Multiplier::new(label, Variable::Dilation, move |t| {
            i * xi(c(0.0, 0.0), c(t, 0.0)).unwrap_or_else(|_| nan()) * (0.5 * PI * t).tanh()
        }),
        other => return Err(Error::UnknownLabel(other.to_string())),
    })
}

/// One pointwise identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// t ∈ [−20, 20] in steps of 0.05.
fn t_grid() -> impl Iterator<Item = f64> {
    (0..=800).map(|i| -20.0 + 0.05 * i as f64)
}

fn check<F: Fn(f64) -> Result<(Complex64, Complex64)>>(name: &str, tol: f64, pair: F) -> IdentityCheck {
    let mut worst = 0.0_f64;
    for t in t_grid() {
        let err = match pair(t) {
            Ok((lhs, rhs)) => (lhs - rhs).norm() / rhs.norm().max(1.0),
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(if err.is_nan() { f64::INFINITY } else { err });
    }
    IdentityCheck {
        name: name.to_string(),
        max_error: worst,
        tolerance: tol,
        passed: worst <= tol,
    }
}

/// The Ξ-calculus identities at the default tolerance 1e-10.
pub fn identity_suite() -> Vec<IdentityCheck> {
    identity_suite_with(1e-10)
}

pub fn identity_suite_with(tol: f64) -> Vec<IdentityCheck> {
    let i = Complex64::i();
    let real = |t: f64| c(t, 0.0);
    let mut out = Vec::new();
    for m in [c(0.3, 0.0), c(0.2, 0.35)] {
        out.push(check(&format!("xi_reflection(m={m})"), tol, |t| {
            let ratio = (0.5 * PI * (m + i * t)).cos() / (0.5 * PI * (m - i * t)).cos();
            Ok((xi(-m, real(t))?, xi(m, real(t))? * ratio))
        }));
        out.push(check(&format!("xi_shift_two(m={m})"), tol, |t| {
            Ok((xi(m + 2.0, real(t))?, xi(m, real(t))? * (m + 1.0 + i * t) / (m + 1.0 - i * t)))
        }));
        out.push(check(&format!("xi_cos_sum(m={m})"), tol, |t| {
            let shifted = real(t) - 2.0 * i * m;
            let lhs = xi(-m, shifted)? * xi(m, -shifted)? + xi(m, real(t))? * xi(-m, real(-t))?;
            Ok((lhs, 2.0 * (PI * m).cos()))
        }));
    }
    out.push(check("xi_unimodular(m=0.3)", tol, |t| {
        Ok((c(xi(c(0.3, 0.0), real(t))?.norm(), 0.0), c(1.0, 0.0)))
    }));
    let zero = c(0.0, 0.0);
    out.push(check("xi0_inverse", tol, |t| Ok((xi(zero, real(-t))? * xi(zero, real(t))?, c(1.0, 0.0)))));
    for sign in [Sign::Plus, Sign::Minus] {
        let s = sign.value();
        let label = if s > 0.0 { "+" } else { "-" };
        let weight = move |t: f64| c((-s * FRAC_PI_2 * t).exp() / (FRAC_PI_2 * t).cosh(), 0.0);
        out.push(check(&format!("xi0_pm_product({label})"), tol, |t| {
            Ok((xi(zero, real(-t))? * xi0_pm(sign, t)?, weight(t)))
        }));
        out.push(check(&format!("xi0_pm_product_reversed({label})"), tol, |t| {
            Ok((xi0_pm(sign.flip(), -t)? * xi(zero, real(t))?, weight(t)))
        }));
        out.push(check(&format!("xi0_pm_square({label})"), tol, |t| {
            Ok((xi0_pm(sign.flip(), -t)? * xi0_pm(sign, t)?, weight(t) * weight(t)))
        }));
        out.push(check(&format!("xi0_pm_tanh({label})"), tol, |t| {
            let x0 = xi(zero, real(t))?;
            Ok((xi0_pm(sign, t)? - x0, -s * x0 * (FRAC_PI_2 * t).tanh()))
        }));
        let wnd = multiplier(
            "wnd",
            &MultiplierParams {
                sign,
                ..Default::default()
            },
        )
        .expect("wnd is registered");
        out.push(check(&format!("wnd_gamma_form({label})"), tol, |t| {
            Ok((wnd.eval(t), wave_gamma_form(c(-0.5, 0.0), c(0.5, 0.0), sign, t)?))
        }));
        for m in [c(0.3, 0.0), c(0.25, 0.2)] {
            let params = MultiplierParams {
                m,
                sign,
                ..Default::default()
            };
            let minus = multiplier("wave_minus_m", &params).expect("registered");
            out.push(check(&format!("wave_minus_m_gamma_form(m={m},{label})"), tol, |t| {
                Ok((minus.eval(t), wave_gamma_form(-m, m, sign, t)?))
            }));
            let plus2 = multiplier("wave_m_plus2", &params).expect("registered");
            out.push(check(&format!("wave_m_plus2_gamma_form(m={m},{label})"), tol, |t| {
                Ok((plus2.eval(t), wave_gamma_form(m + 2.0, m, sign, t)?))
            }));
        }
    }
    let y0 = multiplier("y0_tanh", &MultiplierParams::default()).expect("registered");
    out.push(check("y0_tanh_from_hankel_pair", tol, |t| {
        Ok((y0.eval(t), (xi0_pm(Sign::Plus, t)? - xi0_pm(Sign::Minus, t)?) / (2.0 * i)))
    }));
    out
}
