use num_complex::Complex64;

use super::param::ExtendedParam;
use crate::error::{Error, Result};
use crate::specfun::gamma;

/// Tolerance for "on the boundary of the strip |Im w| < π" and similar
/// equalities in the parameter space.
pub const EXCEPTIONAL_TOL: f64 = 1e-10;
const REALITY_TOL: f64 = 1e-12;

/// One operator of the three families.
///
/// * `Homogeneous(m)`: H_m, boundary condition x^{1/2+m} at 0.
/// * `Kappa(m, κ)`: H_{m,κ}, boundary condition κx^{1/2−m} + x^{1/2+m}.
/// * `Nu(ν)`: H_0^ν, boundary condition x^{1/2}ln x + νx^{1/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorSpec {
    Homogeneous(Complex64),
    Kappa(Complex64, ExtendedParam),
    Nu(ExtendedParam),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub homogeneous: bool,
    pub self_adjoint: bool,
    pub exceptional: bool,
}

impl OperatorSpec {
    pub fn homogeneous(m: impl Into<Complex64>) -> Result<Self> {
        let s = OperatorSpec::Homogeneous(m.into());
        s.validate()?;
        Ok(s)
    }

    pub fn kappa(m: impl Into<Complex64>, kappa: impl Into<ExtendedParam>) -> Result<Self> {
        let s = OperatorSpec::Kappa(m.into(), kappa.into());
        s.validate()?;
        Ok(s)
    }

    pub fn nu(nu: impl Into<ExtendedParam>) -> Self {
        OperatorSpec::Nu(nu.into())
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            OperatorSpec::Homogeneous(m) => {
                if !(m.re > -1.0) || !m.im.is_finite() {
                    return Err(Error::InvalidSpec(format!("H_m needs Re m > -1, got m = {m}")));
                }
            }
            OperatorSpec::Kappa(m, _) => {
                if !(m.re.abs() < 1.0) || !m.im.is_finite() || m == Complex64::new(0.0, 0.0) {
                    return Err(Error::InvalidSpec(format!(
                        "H_(m,kappa) needs |Re m| < 1 and m != 0, got m = {m}"
                    )));
                }
            }
            OperatorSpec::Nu(_) => {}
        }
        Ok(())
    }

    /// The order of the Bessel functions entering kernels, or 0 for `Nu`.
    pub fn order(&self) -> Complex64 {
        match *self {
            OperatorSpec::Homogeneous(m) | OperatorSpec::Kappa(m, _) => m,
            OperatorSpec::Nu(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// The homogeneous operator this spec reduces to, if any: H_{m,0} = H_m,
    /// H_{m,∞} = H_{−m}, H_0^∞ = H_0.
    pub fn as_homogeneous(&self) -> Option<Complex64> {
        match *self {
            OperatorSpec::Homogeneous(m) => Some(m),
            OperatorSpec::Kappa(m, k) if k.is_zero() => Some(m),
            OperatorSpec::Kappa(m, k) if k.is_infinite() => Some(-m),
            OperatorSpec::Nu(nu) if nu.is_infinite() => Some(Complex64::new(0.0, 0.0)),
            _ => None,
        }
    }
}

/// ς = κΓ(−m)/Γ(m), kept projective so that κ ∈ {0, ∞} need no division.
pub fn varsigma(m: Complex64, kappa: ExtendedParam) -> Result<ExtendedParam> {
    OperatorSpec::kappa(m, kappa)?;
    ExtendedParam::new(kappa.num() * gamma(-m)?, kappa.den() * gamma(m)?)
}

/// Im((ln ς + 2πij)/m) = offset + j·step.
pub(crate) fn strip_position(m: Complex64, varsigma: Complex64) -> (f64, f64) {
    let alpha = varsigma.ln();
    let offset = (alpha / m).im;
    let step = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) / m).im;
    (offset, step)
}

fn kappa_exceptional(m: Complex64, kappa: ExtendedParam) -> Result<bool> {
    let s = varsigma(m, kappa)?;
    let Some(s) = s.value().filter(|v| v.norm() > 0.0) else {
        return Ok(false);
    };
    let (offset, step) = strip_position(m, s);
    let pi = std::f64::consts::PI;
    Ok([pi, -pi].iter().any(|&target| {
        let j = if step == 0.0 {
            0.0
        } else {
            ((target - offset) / step).round()
        };
        (offset + j * step - target).abs() < EXCEPTIONAL_TOL
    }))
}

pub fn classify(spec: &OperatorSpec) -> Result<Classification> {
    spec.validate()?;
    let pi = std::f64::consts::PI;
    Ok(match *spec {
        OperatorSpec::Homogeneous(m) => Classification {
            homogeneous: true,
            self_adjoint: m.im == 0.0,
            exceptional: false,
        },
        OperatorSpec::Kappa(m, k) => {
            let real_pair = m.im == 0.0 && k.is_real(REALITY_TOL);
            let unitary_pair = m.re == 0.0
                && k.value().is_some_and(|v| (v.norm() - 1.0).abs() <= REALITY_TOL);
            Classification {
                homogeneous: k.is_zero() || k.is_infinite(),
                self_adjoint: real_pair || unitary_pair,
                exceptional: kappa_exceptional(m, k)?,
            }
        }
        OperatorSpec::Nu(nu) => Classification {
            homogeneous: nu.is_infinite(),
            self_adjoint: nu.is_real(REALITY_TOL),
            exceptional: nu
                .value()
                .is_some_and(|v| (v.im.abs() - pi / 2.0).abs() < EXCEPTIONAL_TOL),
        },
    })
}

/// U_τ H U_{−τ} = e^{−2τ}H′; returns (H′, e^{−2τ}). Hence σ(H′) = e^{2τ}σ(H).
pub fn dilation_transform(spec: &OperatorSpec, tau: f64) -> Result<(OperatorSpec, f64)> {
    spec.validate()?;
    let moved = match *spec {
        OperatorSpec::Homogeneous(m) => OperatorSpec::Homogeneous(m),
        OperatorSpec::Kappa(m, k) => OperatorSpec::Kappa(m, k.scale((-2.0 * tau * m).exp())),
        OperatorSpec::Nu(nu) => OperatorSpec::Nu(match nu.value() {
            Some(v) => ExtendedParam::finite(v + tau),
            None => nu,
        }),
    };
    Ok((moved, (-2.0 * tau).exp()))
}

pub fn adjoint(spec: &OperatorSpec) -> OperatorSpec {
    match *spec {
        OperatorSpec::Homogeneous(m) => OperatorSpec::Homogeneous(m.conj()),
        OperatorSpec::Kappa(m, k) => OperatorSpec::Kappa(m.conj(), k.conj()),
        OperatorSpec::Nu(nu) => OperatorSpec::Nu(nu.conj()),
    }
}

/// Representative under H_{m,κ} = H_{−m,1/κ} with Re m > 0, or Im m > 0 when
/// Re m = 0.
pub fn canonicalize(spec: &OperatorSpec) -> OperatorSpec {
    match *spec {
        OperatorSpec::Kappa(m, k) if m.re < 0.0 || (m.re == 0.0 && m.im < 0.0) => {
            OperatorSpec::Kappa(-m, k.inverse())
        }
        other => other,
    }
}

/// κ = (νm − 1)/(νm + 1): the H_{m,κ} that tends to H_0^ν as m → 0.
pub fn blowup(m: Complex64, nu: ExtendedParam) -> Result<ExtendedParam> {
    let (a, b) = (nu.num() * m, nu.den());
    ExtendedParam::new(a - b, a + b)
}
