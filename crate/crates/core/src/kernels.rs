//! Integral kernels of resolvents, their boundary values on (0, ∞), spectral
//! densities and spectral projections for H_m, H_{m,κ} and H_0^ν.
//!
//! Every kernel is piecewise: the regular solution is evaluated at min(x, y)
//! and the outgoing/decaying one at max(x, y).

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{varsigma, ExtendedParam, OperatorSpec};
use crate::quad::{integrate_fourier, integrate_interval, QuadPolicy, QuadResult};
use crate::specfun::{bessel_i, bessel_j, bessel_k, hankel_pm, neumann, Sign, EULER_GAMMA};

/// Denominators below this (relative) size are treated as poles.
pub const POLE_GUARD: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// x ≤ y
    AboveDiagonal,
    /// x > y
    BelowDiagonal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub regime: Regime,
}

/// Where the resolvent is evaluated: at z = −k² with Re k > 0, or at the
/// boundary value z = k² ± i0 with k > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralParam {
    OffAxis(Complex64),
    Boundary { k: f64, side: Sign },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelRequest {
    pub spec: OperatorSpec,
    pub spectral_param: SpectralParam,
    pub x: f64,
    pub y: f64,
}

impl KernelRequest {
    pub fn evaluate(&self) -> Result<KernelValue> {
        match self.spectral_param {
            SpectralParam::OffAxis(k) => resolvent(&self.spec, k, self.x, self.y),
            SpectralParam::Boundary { k, side } => boundary_resolvent(&self.spec, k, side, self.x, self.y),
        }
    }
}

fn ordered(x: f64, y: f64) -> Result<(f64, f64, Regime)> {
    if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::Domain(format!("kernel points must be positive, got ({x}, {y})")));
    }
    Ok(if x <= y {
        (x, y, Regime::AboveDiagonal)
    } else {
        (y, x, Regime::BelowDiagonal)
    })
}

fn check_offaxis(k: Complex64) -> Result<()> {
    if !(k.re > 0.0) || !k.im.is_finite() {
        return Err(Error::Domain(format!("resolvent needs Re k > 0, got k = {k}")));
    }
    Ok(())
}

fn check_boundary(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!("boundary values need k > 0, got k = {k}")));
    }
    Ok(())
}

fn kappa_order(m: Complex64) -> Result<()> {
    if !(m.re.abs() < 1.0) {
        return Err(Error::Domain(format!("needs |Re m| < 1, got m = {m}")));
    }
    Ok(())
}

/// (1/k) Ia_m(k·min) Ka_m(k·max), the kernel of (H_m + k²)^{−1}.
pub fn resolvent_hm(m: Complex64, k: Complex64, x: f64, y: f64) -> Result<KernelValue> {
    check_offaxis(k)?;
    let (lo, hi, regime) = ordered(x, y)?;
    let value = bessel_i(m, k * lo)? * bessel_k(m, k * hi)? / k;
    Ok(KernelValue { value, regime })
}

/// The rank-one projection P_m(−k²) = (sin πm/m) k Ka_m(kx)Ka_m(ky), with
/// π k Ka_0 Ka_0 at m = 0.
pub fn projection_pm(m: Complex64, k: Complex64, x: f64, y: f64) -> Result<Complex64> {
    kappa_order(m)?;
    check_offaxis(k)?;
    let (x, y, _) = ordered(x, y)?;
    let weight = if m.norm() < 1e-8 {
        // sin(πm)/m = π(1 − π²m²/6 + …)
        PI * (1.0 - PI * PI * m * m / 6.0)
    } else {
        (PI * m).sin() / m
    };
    Ok(weight * k * bessel_k(m, k * x)? * bessel_k(m, k * y)?)
}

/// ς(k/2)^{2m} as a projective pair (num, den).
fn kappa_weight(m: Complex64, kappa: ExtendedParam, k: Complex64) -> Result<(Complex64, Complex64)> {
    let s = varsigma(m, kappa)?;
    Ok((s.num() * (k / 2.0).powc(2.0 * m), s.den()))
}

fn pole_check(den: Complex64, size: f64, estimate: Complex64) -> Result<()> {
    if den.norm() < POLE_GUARD * size.max(f64::MIN_POSITIVE) {
        return Err(Error::EigenvaluePole { estimate });
    }
    Ok(())
}

/// Kernel of (H_{m,κ} + k²)^{−1}:
/// (Ia_m(kx) − ς(k/2)^{2m}Ia_{−m}(kx)) Ka_m(ky) / (k(1 − ς(k/2)^{2m})) for x ≤ y.
pub fn resolvent_hmk(m: Complex64, kappa: ExtendedParam, k: Complex64, x: f64, y: f64) -> Result<KernelValue> {
    check_offaxis(k)?;
    let (lo, hi, regime) = ordered(x, y)?;
    let (wn, wd) = kappa_weight(m, kappa, k)?;
    let den = wd - wn;
    pole_check(den, wd.norm().max(wn.norm()), -k * k)?;
    let regular = if wn.norm() == 0.0 {
        bessel_i(m, k * lo)? * wd
    } else if wd.norm() == 0.0 {
        -wn * bessel_i(-m, k * lo)?
    } else {
        bessel_i(m, k * lo)? * wd - wn * bessel_i(-m, k * lo)?
    };
    let value = regular * bessel_k(m, k * hi)? / (k * den);
    Ok(KernelValue { value, regime })
}

/// The same kernel as R_m − ς(k/2)^{2m}/(1 − ς(k/2)^{2m}) · (m/k²) P_m.
pub fn resolvent_hmk_via_projection(
    m: Complex64,
    kappa: ExtendedParam,
    k: Complex64,
    x: f64,
    y: f64,
) -> Result<Complex64> {
    let (wn, wd) = kappa_weight(m, kappa, k)?;
    let den = wd - wn;
    pole_check(den, wd.norm().max(wn.norm()), -k * k)?;
    let coefficient = wn / den;
    Ok(resolvent_hm(m, k, x, y)?.value - coefficient * m / (k * k) * projection_pm(m, k, x, y)?)
}

/// γ + ln(k/2) − ν as a projective pair (num, den).
fn nu_offset(nu: ExtendedParam, k: Complex64) -> (Complex64, Complex64) {
    let c = EULER_GAMMA + (k / 2.0).ln();
    (c * nu.den() - nu.num(), nu.den())
}

/// Kernel of (H_0^ν + k²)^{−1}:
/// (Ia_0(kx) + π/(2(γ + ln(k/2) − ν)) Ka_0(kx)) Ka_0(ky)/k for x ≤ y.
pub fn resolvent_h0nu(nu: ExtendedParam, k: Complex64, x: f64, y: f64) -> Result<KernelValue> {
    check_offaxis(k)?;
    let (lo, hi, regime) = ordered(x, y)?;
    let (dn, dd) = nu_offset(nu, k);
    pole_check(dn, dd.norm().max(nu.num().norm()), -k * k)?;
    let zero = Complex64::new(0.0, 0.0);
    let regular = bessel_i(zero, k * lo)? + PI * dd / (2.0 * dn) * bessel_k(zero, k * lo)?;
    let value = regular * bessel_k(zero, k * hi)? / k;
    Ok(KernelValue { value, regime })
}

/// The same kernel as R_0 + P_0/(2k²(γ + ln(k/2) − ν)).
pub fn resolvent_h0nu_via_projection(nu: ExtendedParam, k: Complex64, x: f64, y: f64) -> Result<Complex64> {
    let (dn, dd) = nu_offset(nu, k);
    pole_check(dn, dd.norm().max(nu.num().norm()), -k * k)?;
    let zero = Complex64::new(0.0, 0.0);
    Ok(resolvent_hm(zero, k, x, y)?.value + dd / (2.0 * k * k * dn) * projection_pm(zero, k, x, y)?)
}

/// Resolvent kernel of any spec at z = −k².
pub fn resolvent(spec: &OperatorSpec, k: Complex64, x: f64, y: f64) -> Result<KernelValue> {
    spec.validate()?;
    match *spec {
        OperatorSpec::Homogeneous(m) => resolvent_hm(m, k, x, y),
        OperatorSpec::Kappa(m, kappa) => resolvent_hmk(m, kappa, k, x, y),
        OperatorSpec::Nu(nu) => resolvent_h0nu(nu, k, x, y),
    }
}

/// Resolvent kernel at a complex energy z ∉ [0, ∞), via k = √(−z).
pub fn resolvent_at(spec: &OperatorSpec, z: Complex64, x: f64, y: f64) -> Result<Complex64> {
    Ok(resolvent(spec, (-z).sqrt(), x, y)?.value)
}

fn exceptional_check(den: Complex64, size: f64, k: f64) -> Result<()> {
    if den.norm() < POLE_GUARD * size.max(f64::MIN_POSITIVE) {
        return Err(Error::Exceptional(format!("spectral singularity at k = {k}")));
    }
    Ok(())
}

/// Regular solution at the boundary, J-side, and the family factor
/// multiplying ±(i/k) J·Ha^±, for x ≤ y.
fn boundary_parts(spec: &OperatorSpec, k: f64, side: Sign, lo: f64) -> Result<(Complex64, Complex64)> {
    let kc = Complex64::new(k, 0.0);
    let s = side.value();
    match *spec {
        OperatorSpec::Homogeneous(m) => Ok((bessel_j(m, k * lo)?, Complex64::new(1.0, 0.0))),
        OperatorSpec::Kappa(m, kappa) => {
            let (wn, wd) = kappa_weight(m, kappa, kc)?;
            let den = wd - wn * (-s * I * PI * m).exp();
            exceptional_check(den, wd.norm().max(wn.norm()), k)?;
            let regular = regular_kappa(m, wn, wd, k * lo)?;
            Ok((regular, 1.0 / den))
        }
        OperatorSpec::Nu(nu) => {
            let (dn, dd) = nu_offset(nu, kc);
            let den = dn - s * I * FRAC_PI_2 * dd;
            exceptional_check(den, dd.norm().max(nu.num().norm()), k)?;
            Ok((regular_nu(dn, dd, k * lo)?, 1.0 / den))
        }
    }
}

fn regular_kappa(m: Complex64, wn: Complex64, wd: Complex64, z: f64) -> Result<Complex64> {
    Ok(if wn.norm() == 0.0 {
        wd * bessel_j(m, z)?
    } else if wd.norm() == 0.0 {
        -wn * bessel_j(-m, z)?
    } else {
        wd * bessel_j(m, z)? - wn * bessel_j(-m, z)?
    })
}

fn regular_nu(dn: Complex64, dd: Complex64, z: f64) -> Result<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    Ok(dn * bessel_j(zero, z)? - FRAC_PI_2 * dd * neumann(zero, z)?)
}

/// Kernel of R(k² ± i0), k > 0.
pub fn boundary_resolvent(spec: &OperatorSpec, k: f64, side: Sign, x: f64, y: f64) -> Result<KernelValue> {
    spec.validate()?;
    check_boundary(k)?;
    let (lo, hi, regime) = ordered(x, y)?;
    let (regular, factor) = boundary_parts(spec, k, side, lo)?;
    let m = spec.order();
    let value = side.value() * I / k * factor * regular * hankel_pm(m, side, Complex64::new(k * hi, 0.0))?;
    Ok(KernelValue { value, regime })
}

/// The regular solution at the boundary (J side) with the k-dependent
/// coefficients of its family frozen.
#[derive(Debug, Clone, Copy)]
enum Regular {
    Homogeneous(Complex64),
    Kappa { m: Complex64, wn: Complex64, wd: Complex64 },
    Nu { dn: Complex64, dd: Complex64 },
}

impl Regular {
    /// The solution and 1/(π·|Wronskian-type factor|²) entering the density.
    fn at(spec: &OperatorSpec, k: f64) -> Result<(Regular, Complex64)> {
        let kc = Complex64::new(k, 0.0);
        Ok(match *spec {
            OperatorSpec::Homogeneous(m) => (Regular::Homogeneous(m), Complex64::new(1.0 / PI, 0.0)),
            OperatorSpec::Kappa(m, kappa) => {
                let (wn, wd) = kappa_weight(m, kappa, kc)?;
                let (sin, cos) = ((PI * m).sin(), (PI * m).cos());
                let den = wd * wd * sin * sin + (wd * cos - wn) * (wd * cos - wn);
                exceptional_check(den, wd.norm_sqr().max(wn.norm_sqr()), k)?;
                (Regular::Kappa { m, wn, wd }, 1.0 / (PI * den))
            }
            OperatorSpec::Nu(nu) => {
                let (dn, dd) = nu_offset(nu, kc);
                let den = dn * dn + FRAC_PI_2 * FRAC_PI_2 * dd * dd;
                exceptional_check(den, dd.norm_sqr().max(nu.num().norm_sqr()), k)?;
                (Regular::Nu { dn, dd }, 1.0 / (PI * den))
            }
        })
    }

    fn value(&self, z: f64) -> Result<Complex64> {
        match *self {
            Regular::Homogeneous(m) => bessel_j(m, z),
            Regular::Kappa { m, wn, wd } => regular_kappa(m, wn, wd, z),
            Regular::Nu { dn, dd } => regular_nu(dn, dd, z),
        }
    }

    /// The Ha^± part of the solution with its phase e^{±iz} removed, so that
    /// value(z) = Σ_± part(±, z)·e^{±iz} with slowly varying parts.
    fn part(&self, side: Sign, z: f64) -> Result<Complex64> {
        let zc = Complex64::new(z, 0.0);
        let h = match *self {
            Regular::Homogeneous(m) => 0.5 * hankel_pm(m, side, zc)?,
            Regular::Kappa { m, wn, wd } => {
                let mut h = Complex64::new(0.0, 0.0);
                if wd.norm() != 0.0 {
                    h += wd * hankel_pm(m, side, zc)?;
                }
                if wn.norm() != 0.0 {
                    h -= wn * hankel_pm(-m, side, zc)?;
                }
                0.5 * h
            }
            Regular::Nu { dn, dd } => {
                (0.5 * dn + side.value() * I * FRAC_PI_2 * 0.5 * dd) * hankel_pm(Complex64::new(0.0, 0.0), side, zc)?
            }
        };
        Ok(h * Complex64::from_polar(1.0, -side.value() * z))
    }
}

/// Spectral density p(k²; x, y) = (R(k² + i0) − R(k² − i0))/(2πi), as a
/// density in the energy k².
pub fn spectral_density(spec: &OperatorSpec, k: f64, x: f64, y: f64) -> Result<Complex64> {
    spec.validate()?;
    check_boundary(k)?;
    let (lo, hi, _) = ordered(x, y)?;
    let (regular, weight) = Regular::at(spec, k)?;
    Ok(weight * regular.value(k * lo)? * regular.value(k * hi)? / k)
}

/// Kernel of 1_{[a,b]}(H) = 2∫_{√a}^{√b} p(k²) k dk.
pub fn projection_interval(spec: &OperatorSpec, a: f64, b: f64, x: f64, y: f64) -> Result<Complex64> {
    projection_interval_with(spec, a, b, x, y, &QuadPolicy::exponential(1.0).with_tol(1e-13, 1e-11))
}

/// Beyond this many radians of phase across the interval the density is
/// integrated as a sum of smooth amplitudes times e^{±ikx ± iky}.
const OSCILLATION_SPLIT: f64 = 50.0;
/// A solution is split into its Ha^± parts only where kx exceeds this.
const SPLIT_ARGUMENT: f64 = 2.0;

pub fn projection_interval_with(
    spec: &OperatorSpec,
    a: f64,
    b: f64,
    x: f64,
    y: f64,
    policy: &QuadPolicy,
) -> Result<Complex64> {
    spec.validate()?;
    let (x, y, _) = ordered(x, y)?;
    if !(0.0 < a && a < b && b.is_finite()) {
        return Err(Error::Domain(format!("interval [{a}, {b}] must satisfy 0 < a < b")));
    }
    let (ka, kb) = (a.sqrt(), b.sqrt());
    if x.max(y) * (kb - ka) < OSCILLATION_SPLIT {
        return capture(|k| Ok(2.0 * k * spectral_density(spec, k, x, y)?), |g| {
            integrate_interval(g, ka, kb, policy)
        });
    }
    let mut cuts = vec![ka, kb];
    for s in [x, y] {
        let c = SPLIT_ARGUMENT / s;
        if ka < c && c < kb {
            cuts.push(c);
        }
    }
    cuts.sort_by(f64::total_cmp);
    let mut total = Complex64::new(0.0, 0.0);
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let split_x = x * lo >= SPLIT_ARGUMENT * (1.0 - 1e-12);
        let split_y = y * lo >= SPLIT_ARGUMENT * (1.0 - 1e-12);
        let sides_x: &[Option<Sign>] = if split_x { &[Some(Sign::Plus), Some(Sign::Minus)] } else { &[None] };
        let sides_y: &[Option<Sign>] = if split_y { &[Some(Sign::Plus), Some(Sign::Minus)] } else { &[None] };
        for &sx in sides_x {
            for &sy in sides_y {
                let omega = sx.map_or(0.0, |s| s.value() * x) + sy.map_or(0.0, |s| s.value() * y);
                let piece = |s: Option<Sign>, r: &Regular, z: f64| match s {
                    Some(side) => r.part(side, z),
                    None => r.value(z),
                };
                total += capture(
                    |k| {
                        let (r, weight) = Regular::at(spec, k)?;
                        Ok(2.0 * weight * piece(sx, &r, k * x)? * piece(sy, &r, k * y)?)
                    },
                    |g| integrate_fourier(g, omega, lo, hi, policy),
                )?;
            }
        }
    }
    Ok(total)
}

/// Runs a quadrature over a fallible integrand, reporting the first failure
/// instead of the NaN it is replaced with.
pub(crate) fn capture<G, Q>(mut g: G, quad: Q) -> Result<Complex64>
where
    G: FnMut(f64) -> Result<Complex64>,
    Q: FnOnce(&mut dyn FnMut(f64) -> Complex64) -> Result<QuadResult>,
{
    let mut failure = None;
    let r = quad(&mut |k| match g(k) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            Complex64::new(f64::NAN, 0.0)
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(r?.value)
}

/// Riesz projection −(1/2πi)∮R(z)dz over the circle |z − center| = radius,
/// by the trapezoid rule (exponentially accurate for analytic integrands).
pub fn riesz_projection(
    spec: &OperatorSpec,
    center: Complex64,
    radius: f64,
    x: f64,
    y: f64,
    nodes: usize,
) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let e = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64);
        // dz = i·radius·e dθ
        sum += resolvent_at(spec, center + radius * e, x, y)? * radius * e;
    }
    Ok(-sum / nodes as f64)
}
