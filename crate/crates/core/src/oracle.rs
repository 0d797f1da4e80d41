//! ODE shooting for L_{m²}u = zu, independent of the Bessel evaluators: the
//! boundary solutions start from Frobenius series (rational in m and z) and
//! are carried by adaptive Runge–Kutta; the decaying solution starts from
//! its two-term asymptotic form far out.

use num_complex::Complex64;
use ode_solvers::{Dopri5, OutputType, SVector, System};

use crate::error::{Error, Result};
use crate::kernels::resolvent;
use crate::operators::OperatorSpec;
use crate::quad::{find_root, integrate_halfline, integrate_interval, QuadPolicy, RootPolicy, RootSeed};

const FROBENIUS_TERMS: usize = 12;

type State = SVector<f64, 6>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    /// Frobenius handoff point.
    pub x_start: f64,
    /// Where boundary and decaying solutions are compared.
    pub x_match: f64,
    /// Where the decaying solution is seeded.
    pub x_far: f64,
    pub ode_tol: f64,
}

impl ShootingConfig {
    /// Defaults scaled to k = √(−z): x_far = 40/Re k, x_match ≈ 1/|k|. On
    /// the spectrum (Re k = 0) only the boundary solution is available.
    pub fn for_energy(z: Complex64) -> Result<Self> {
        let k = (-z).sqrt();
        let x_far = if k.re > 0.0 { 40.0 / k.re } else { f64::INFINITY };
        let config = ShootingConfig {
            x_start: 1e-3,
            x_match: (1.0 / k.norm()).clamp(0.05, 2.0).min(0.25 * x_far),
            x_far,
            ode_tol: 1e-10,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.x_start && self.x_start < self.x_match && self.x_match < self.x_far && self.ode_tol > 0.0) {
            return Err(Error::Domain(format!("invalid shooting configuration {self:?}")));
        }
        Ok(())
    }
}

fn sqrt_minus(z: Complex64) -> Result<Complex64> {
    let k = (-z).sqrt();
    if !(k.re > 0.0) {
        return Err(Error::Domain(format!("needs Re √(−z) > 0, got z = {z}")));
    }
    Ok(k)
}

/// u″ = ((m² − ¼)/x² − z)u, plus I′ = u·f when a source is attached.
struct Radial<'a> {
    c: Complex64,
    z: Complex64,
    source: Option<&'a dyn Fn(f64) -> Complex64>,
}

impl System<f64, State> for Radial<'_> {
    fn system(&self, x: f64, y: &State, dy: &mut State) {
        let u = Complex64::new(y[0], y[1]);
        let du = Complex64::new(y[2], y[3]);
        let ddu = (self.c / (x * x) - self.z) * u;
        let di = self.source.map_or(Complex64::new(0.0, 0.0), |f| u * f(x));
        *dy = State::from([du.re, du.im, ddu.re, ddu.im, di.re, di.im]);
    }
}

/// (u, u′, I) at a point.
#[derive(Debug, Clone, Copy)]
struct Point {
    u: Complex64,
    du: Complex64,
    integral: Complex64,
}

fn pack(p: Point) -> State {
    State::from([p.u.re, p.u.im, p.du.re, p.du.im, p.integral.re, p.integral.im])
}

fn unpack(y: &State) -> Point {
    Point {
        u: Complex64::new(y[0], y[1]),
        du: Complex64::new(y[2], y[3]),
        integral: Complex64::new(y[4], y[5]),
    }
}

/// Integrates from `x0` to each of `targets` in turn (monotone in either
/// direction).
fn integrate(
    m: Complex64,
    z: Complex64,
    source: Option<&dyn Fn(f64) -> Complex64>,
    x0: f64,
    start: Point,
    targets: &[f64],
    tol: f64,
) -> Result<Vec<Point>> {
    let scale = start.u.norm().max(start.du.norm()).max(f64::MIN_POSITIVE);
    let mut x = x0;
    let mut y = pack(start);
    let mut out = Vec::with_capacity(targets.len());
    for &target in targets {
        if target != x {
            let system = Radial { c: m * m - 0.25, z, source };
            let mut solver = Dopri5::new(system, x, target, target - x, y, tol, tol * 1e-12 * scale);
            solver.set_output(OutputType::Sparse);
            solver.integrate().map_err(|e| Error::Stiff(e.to_string()))?;
            y = *solver.y_out().last().expect("solver records the end point");
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::Stiff(format!("non-finite solution near x = {target}")));
            }
            x = target;
        }
        out.push(unpack(&y));
    }
    Ok(out)
}

/// x^{1/2+μ}Σ a_n x^{2n} with a_n = −z a_{n−1}/(4n(n+μ)), and its derivative.
fn frobenius(mu: Complex64, z: Complex64, x: f64) -> (Complex64, Complex64) {
    let (mut a, mut u, mut du) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for n in 0..FROBENIUS_TERMS {
        if n > 0 {
            let nf = n as f64;
            a *= -z / (4.0 * nf * (nf + mu));
        }
        let s = 0.5 + mu + 2.0 * n as f64;
        let p = a * (s * x.ln()).exp();
        u += p;
        du += s * p / x;
    }
    (u, du)
}

/// The m = 0 logarithmic solution x^{1/2}ln x·Σa_n x^{2n} + x^{1/2}Σb_n x^{2n},
/// with b_0 = 0 and 4n²b_n = −4n a_n − z b_{n−1}.
fn frobenius_log(z: Complex64, x: f64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let (u0, du0) = frobenius(zero, z, x);
    let (mut a, mut b, mut w, mut dw) = (Complex64::new(1.0, 0.0), zero, zero, zero);
    for n in 1..FROBENIUS_TERMS {
        let nf = n as f64;
        a *= -z / (4.0 * nf * nf);
        b = (-4.0 * nf * a - z * b) / (4.0 * nf * nf);
        let s = 0.5 + 2.0 * nf;
        let p = b * x.powf(s);
        w += p;
        dw += s * p / x;
    }
    (u0 * x.ln() + w, du0 * x.ln() + u0 / x + dw)
}

/// The boundary solution as a combination Σ c_i·(basis solution i), each
/// basis solution given by its seed at x_start.
fn boundary_basis(spec: &OperatorSpec, z: Complex64, x: f64) -> Result<Vec<(Complex64, Point)>> {
    spec.validate()?;
    let seed = |(u, du): (Complex64, Complex64)| Point { u, du, integral: Complex64::new(0.0, 0.0) };
    Ok(match *spec {
        OperatorSpec::Homogeneous(m) => vec![(Complex64::new(1.0, 0.0), seed(frobenius(m, z, x)))],
        OperatorSpec::Kappa(m, kappa) => {
            if !(m.re.abs() < 1.0) {
                return Err(Error::Domain(format!("needs |Re m| < 1, got m = {m}")));
            }
            // κ x^{1/2−m} + x^{1/2+m}
            let mut basis = Vec::new();
            if kappa.den().norm() != 0.0 {
                basis.push((kappa.den(), seed(frobenius(m, z, x))));
            }
            if kappa.num().norm() != 0.0 {
                basis.push((kappa.num(), seed(frobenius(-m, z, x))));
            }
            basis
        }
        OperatorSpec::Nu(nu) => {
            // x^{1/2}ln x + ν x^{1/2}
            let mut basis = Vec::new();
            if nu.den().norm() != 0.0 {
                basis.push((nu.den(), seed(frobenius_log(z, x))));
            }
            if nu.num().norm() != 0.0 {
                basis.push((nu.num(), seed(frobenius(Complex64::new(0.0, 0.0), z, x))));
            }
            basis
        }
    })
}

fn combine(parts: &[(Complex64, Vec<Point>)], i: usize) -> Point {
    let zero = Complex64::new(0.0, 0.0);
    parts.iter().fold(Point { u: zero, du: zero, integral: zero }, |acc, (c, pts)| Point {
        u: acc.u + c * pts[i].u,
        du: acc.du + c * pts[i].du,
        integral: acc.integral + c * pts[i].integral,
    })
}

/// The boundary solution carried from x_start to each of `xs` (increasing),
/// with ∫_0^x u f accumulated when a source is given.
fn boundary_points(
    config: &ShootingConfig,
    spec: &OperatorSpec,
    z: Complex64,
    source: Option<&dyn Fn(f64) -> Complex64>,
    xs: &[f64],
) -> Result<Vec<Point>> {
    let m = spec.order();
    let mut parts = Vec::new();
    for (i, (c, mut start)) in boundary_basis(spec, z, config.x_start)?.into_iter().enumerate() {
        if let Some(f) = source {
            // Below x_start the series is the solution.
            let policy = QuadPolicy::exponential(1.0).with_tol(1e-16, 1e-12);
            let head = integrate_interval(
                |x| match boundary_basis(spec, z, x) {
                    Ok(basis) => basis[i].1.u * f(x),
                    Err(_) => Complex64::new(f64::NAN, 0.0),
                },
                0.0,
                config.x_start,
                &policy,
            )?;
            start.integral = head.value;
        }
        parts.push((c, integrate(m, z, source, config.x_start, start, xs, config.ode_tol)?));
    }
    Ok((0..xs.len()).map(|i| combine(&parts, i)).collect())
}

/// The decaying solution, seeded as e^{−kx}(1 + (4m² − 1)/(8kx)) at x_far and
/// normalised to be O(1) at x_match, carried to each of `xs` (decreasing);
/// with a source, ∫_x^{x_far} u f is accumulated (as −I).
fn decaying_points(
    config: &ShootingConfig,
    m: Complex64,
    z: Complex64,
    source: Option<&dyn Fn(f64) -> Complex64>,
    xs: &[f64],
) -> Result<Vec<Point>> {
    let k = sqrt_minus(z)?;
    let x = config.x_far;
    let c = (4.0 * m * m - 1.0) / (8.0 * k);
    let start = Point {
        u: 1.0 + c / x,
        du: -k * (1.0 + c / x) - c / (x * x),
        integral: Complex64::new(0.0, 0.0),
    };
    let points = integrate(m, z, source, x, start, xs, config.ode_tol)?;
    let norm = (-k * (config.x_far - config.x_match)).exp();
    Ok(points
        .into_iter()
        .map(|p| Point { u: p.u * norm, du: p.du * norm, integral: p.integral * norm })
        .collect())
}

/// The solution of (L_{m²} − z)u = 0 with the family's behaviour at 0
/// (x^{1/2+m}; κx^{1/2−m} + x^{1/2+m}; x^{1/2}ln x + νx^{1/2}), at x ≤ x_match.
pub fn boundary_solution(spec: &OperatorSpec, z: Complex64, x: f64) -> Result<Complex64> {
    let config = ShootingConfig::for_energy(z)?;
    boundary_solution_with(&config, spec, z, x)
}

pub fn boundary_solution_with(config: &ShootingConfig, spec: &OperatorSpec, z: Complex64, x: f64) -> Result<Complex64> {
    config.validate()?;
    if !(0.0 < x && x <= config.x_match) {
        return Err(Error::Domain(format!("x = {x} outside (0, x_match = {}]", config.x_match)));
    }
    if x < config.x_start {
        return Ok(boundary_basis(spec, z, x)?.iter().map(|(c, p)| c * p.u).sum());
    }
    Ok(boundary_points(config, spec, z, None, &[x])?[0].u)
}

/// Wronskian u_b u_d′ − u_b′ u_d at x_match; analytic in z.
fn raw_wronskian(config: &ShootingConfig, spec: &OperatorSpec, z: Complex64) -> Result<(Complex64, f64)> {
    let b = boundary_points(config, spec, z, None, &[config.x_match])?[0];
    let d = decaying_points(config, spec.order(), z, None, &[config.x_match])?[0];
    let w = b.u * d.du - b.du * d.u;
    Ok((w, (b.u * d.du).norm() + (b.du * d.u).norm()))
}

/// Normalised Wronskian of the boundary solution against the decaying one
/// at x_match: zero iff z is an eigenvalue, of modulus ≤ 1.
pub fn eigen_residual(spec: &OperatorSpec, z: Complex64) -> Result<Complex64> {
    let config = ShootingConfig::for_energy(z)?;
    eigen_residual_with(&config, spec, z)
}

pub fn eigen_residual_with(config: &ShootingConfig, spec: &OperatorSpec, z: Complex64) -> Result<Complex64> {
    config.validate()?;
    let (w, size) = raw_wronskian(config, spec, z)?;
    Ok(w / size)
}

/// Secant refinement of an eigenvalue guess on the (analytic) Wronskian;
/// returns the root and the normalised residual there.
pub fn refine_eigenvalue(spec: &OperatorSpec, guess: Complex64) -> Result<(Complex64, Complex64)> {
    let config = ShootingConfig::for_energy(guess)?;
    let policy = RootPolicy { x_tol: 1e-10, f_tol: 0.0, max_iter: 40 };
    let root = find_root(|z| Ok(raw_wronskian(&config, spec, z)?.0), RootSeed::Point(guess), &policy)?;
    Ok((root, eigen_residual_with(&config, spec, root)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BvpReport {
    pub points: Vec<f64>,
    /// Variation of parameters with the shooting solutions.
    pub ode: Vec<Complex64>,
    /// ∫R(x, y)f(y)dy by quadrature of the closed-form kernel.
    pub kernel: Vec<Complex64>,
    /// sup|ode − kernel| / sup|kernel|.
    pub relative_error: f64,
}

/// Solves (L + k²)u = f by variation of parameters with the shooting
/// solutions and compares with the resolvent kernel applied by quadrature,
/// on a grid of x ∈ [0.1/Re k, 5/Re k]. f must decay at least like e^{−x}.
pub fn resolvent_bvp_check<F: Fn(f64) -> Complex64>(spec: &OperatorSpec, k: Complex64, f: F) -> Result<BvpReport> {
    if !(k.re > 0.0) {
        return Err(Error::Domain(format!("needs Re k > 0, got k = {k}")));
    }
    let z = -k * k;
    let mut config = ShootingConfig::for_energy(z)?;
    config.ode_tol = 1e-11;
    let points: Vec<f64> = (1..=25).map(|i| 0.2 * i as f64 / k.re).collect();
    let source: &dyn Fn(f64) -> Complex64 = &f;

    let forward = boundary_points(&config, spec, z, Some(source), &points)?;
    let backward_targets: Vec<f64> = points.iter().rev().copied().collect();
    let mut backward = decaying_points(&config, spec.order(), z, Some(source), &backward_targets)?;
    backward.reverse();

    // u = (u_d ∫_0^x u_b f + u_b ∫_x^∞ u_d f)/(u_b′u_d − u_b u_d′)
    let mut ode = Vec::with_capacity(points.len());
    for (b, d) in forward.iter().zip(&backward) {
        let w = b.du * d.u - b.u * d.du;
        ode.push((d.u * b.integral + b.u * (-d.integral)) / w);
    }

    let policy = QuadPolicy::exponential(k.re.min(1.0)).with_tol(1e-13, 1e-11);
    let mut kernel = Vec::with_capacity(points.len());
    for &x in &points {
        let mut failure = None;
        let mut g = |y: f64| match resolvent(spec, k, x, y) {
            Ok(r) => r.value * f(y),
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(f64::NAN, 0.0)
            }
        };
        let near = integrate_interval(&mut g, 0.0, x, &policy);
        let far = integrate_halfline(|s| g(x + s), &policy);
        if let Some(e) = failure {
            return Err(e);
        }
        kernel.push(near?.value + far?.value);
    }

    let scale = kernel.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let diff = ode.iter().zip(&kernel).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(BvpReport { points, ode, kernel, relative_error: diff / scale })
}
