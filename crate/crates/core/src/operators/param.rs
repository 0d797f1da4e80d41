use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A point of the Riemann sphere ℂ ∪ {∞}, stored as a ratio num/den scaled so
/// that max(|num|, |den|) = 1.
#[derive(Debug, Clone, Copy)]
pub struct ExtendedParam {
    num: Complex64,
    den: Complex64,
}

impl ExtendedParam {
    pub fn new(num: Complex64, den: Complex64) -> Result<Self> {
        let scale = num.norm().max(den.norm());
        if !scale.is_finite() || scale == 0.0 || num.is_nan() || den.is_nan() {
            return Err(Error::Domain(format!("projective pair ({num}, {den})")));
        }
        Ok(ExtendedParam {
            num: num / scale,
            den: den / scale,
        })
    }

    pub fn finite(z: Complex64) -> Self {
        if z.is_infinite() {
            return Self::infinity();
        }
        Self::new(z, ONE).expect("finite value")
    }

    pub fn real(x: f64) -> Self {
        Self::finite(Complex64::new(x, 0.0))
    }

    pub fn zero() -> Self {
        ExtendedParam { num: ZERO, den: ONE }
    }

    pub fn infinity() -> Self {
        ExtendedParam { num: ONE, den: ZERO }
    }

    pub fn num(&self) -> Complex64 {
        self.num
    }

    pub fn den(&self) -> Complex64 {
        self.den
    }

    pub fn is_infinite(&self) -> bool {
        self.den == ZERO
    }

    pub fn is_zero(&self) -> bool {
        self.num == ZERO
    }

    /// The finite value, or `None` at ∞.
    pub fn value(&self) -> Option<Complex64> {
        (!self.is_infinite()).then(|| self.num / self.den)
    }

    pub fn inverse(&self) -> Self {
        ExtendedParam {
            num: self.den,
            den: self.num,
        }
    }

    pub fn conj(&self) -> Self {
        ExtendedParam {
            num: self.num.conj(),
            den: self.den.conj(),
        }
    }

    /// Multiplication by a finite nonzero scalar; fixes 0 and ∞.
    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.num * c, self.den).expect("nonzero scale")
    }

    /// Chordal distance on the Riemann sphere, in [0, 1].
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        let cross = (self.num * other.den - other.num * self.den).norm();
        let na = (self.num.norm_sqr() + self.den.norm_sqr()).sqrt();
        let nb = (other.num.norm_sqr() + other.den.norm_sqr()).sqrt();
        cross / (na * nb)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.chordal_distance(other) <= tol
    }

    /// Whether the point lies on ℝ ∪ {∞}.
    pub fn is_real(&self, tol: f64) -> bool {
        (self.num * self.den.conj()).im.abs() <= tol
    }
}

impl PartialEq for ExtendedParam {
    fn eq(&self, other: &Self) -> bool {
        self.chordal_distance(other) == 0.0
    }
}

impl From<Complex64> for ExtendedParam {
    fn from(z: Complex64) -> Self {
        Self::finite(z)
    }
}

impl From<f64> for ExtendedParam {
    fn from(x: f64) -> Self {
        Self::real(x)
    }
}

impl fmt::Display for ExtendedParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            None => write!(f, "inf"),
            Some(z) => write!(f, "{z}"),
        }
    }
}
