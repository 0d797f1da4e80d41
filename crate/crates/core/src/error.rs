use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at non-positive integer {0}")]
    Pole(Complex64),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("-k^2 is an eigenvalue (z = {estimate})")]
    EigenvaluePole { estimate: Complex64 },
    #[error("exceptional parameters: {0}")]
    Exceptional(String),
    #[error("unknown multiplier label `{0}`")]
    UnknownLabel(String),
    #[error("point spectrum is infinite; an enumeration window is required")]
    WindowRequired,
    #[error("invalid operator specification: {0}")]
    InvalidSpec(String),
    #[error("ODE integration failed: {0}")]
    Stiff(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn finite(z: Complex64, what: &str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else if z.re.is_nan() || z.im.is_nan() {
        Err(Error::NoConvergence(format!("{what} produced NaN")))
    } else {
        Err(Error::Overflow(what.to_string()))
    }
}
