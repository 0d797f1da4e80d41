//! Bessel family "for dimension 1": Ia, Ka, Ja, Ha±, Ya at complex order and
//! argument, principal branch.
//!
//! Routing for Ka (after Ka_m = Ka_{-m} has put Re m ≥ 0):
//! * |z| ≤ 2: power series, `(Ia_{-m} - Ia_m)/sin(πm)`, or the order-analytic
//!   expansion when m is within 1e-4 of an integer;
//! * 2 < |z| ≤ asymptotic_radius: Steed's continued fraction (CF2) for the
//!   reduced order, then upward recurrence;
//! * beyond: the large-argument expansion.
//!
//! Ja/Ha/Ya are obtained from Ka at the rotated arguments e^{∓iπ/2}z except for
//! small arguments, where the alternating series is accurate.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::gamma::{digamma, rgamma};
use crate::error::{finite, Error, Result};

const SMALL_Z: f64 = 2.0;
const NEAR_INTEGER: f64 = 1e-4;
const ASYMPTOTIC_TERMS: usize = 40;
const CF2_MAX_ITER: usize = 200_000;
const ZETA3: f64 = 1.202_056_903_159_594_3;

/// The order m of a Bessel function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Order(pub Complex64);

impl Order {
    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl From<f64> for Order {
    fn from(m: f64) -> Self {
        Order(Complex64::new(m, 0.0))
    }
}

impl From<Complex64> for Order {
    fn from(m: Complex64) -> Self {
        Order(m)
    }
}

/// Choice of outgoing (+) or incoming (−) branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPolicy {
    pub rel_tol: f64,
    pub max_terms: usize,
    pub asymptotic_radius: f64,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        SeriesPolicy {
            rel_tol: 1e-15,
            max_terms: 300,
            asymptotic_radius: 25.0,
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn on_cut(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0
}

fn check_domain(z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if on_cut(z) {
        return Err(Error::Domain(format!("{z} lies on (-inf, 0]")));
    }
    Ok(())
}

impl SeriesPolicy {
    pub fn bessel_i(&self, m: impl Into<Order>, z: impl Into<Complex64>) -> Result<Complex64> {
        let (m, z) = (m.into().0, z.into());
        check_domain(z)?;
        finite(self.ia(m, z)?, "Ia")
    }

    pub fn bessel_k(&self, m: impl Into<Order>, z: impl Into<Complex64>) -> Result<Complex64> {
        let (m, z) = (m.into().0, z.into());
        check_domain(z)?;
        finite(self.ka(m, z)?, "Ka")
    }

    pub fn bessel_j(&self, m: impl Into<Order>, z: impl Into<Complex64>) -> Result<Complex64> {
        let (m, z) = (m.into().0, z.into());
        check_domain(z)?;
        finite(self.ja(m, z)?, "Ja")
    }

    pub fn hankel_pm(
        &self,
        m: impl Into<Order>,
        sign: Sign,
        z: impl Into<Complex64>,
    ) -> Result<Complex64> {
        let (m, z) = (m.into().0, z.into());
        check_domain(z)?;
        finite(self.ha(m, sign, z)?, "Ha")
    }

    pub fn neumann(&self, m: impl Into<Order>, z: impl Into<Complex64>) -> Result<Complex64> {
        let (m, z) = (m.into().0, z.into());
        check_domain(z)?;
        let hp = self.ha(m, Sign::Plus, z)?;
        let hm = self.ha(m, Sign::Minus, z)?;
        finite((hp - hm) / c(0.0, 2.0), "Ya")
    }

    // ---- Ia ------------------------------------------------------------

    fn ia(&self, m: Complex64, z: Complex64) -> Result<Complex64> {
        if z.re > 700.0 {
            return Err(Error::Overflow(format!("Ia at Re z = {}", z.re)));
        }
        let r = z.norm();
        if r > self.asymptotic_radius {
            return Ok(self.ia_asymptotic(m, z));
        }
        if r <= SMALL_Z || r - z.re.abs() <= 3.0 {
            return self.power_series(m, z, false);
        }
        if z.re >= 0.0 {
            return self.ia_wronskian(m, z);
        }
        // Ia_m(u e^{±iπ}) = e^{±iπ(m+1/2)} Ia_m(u)
        let s = if z.im >= 0.0 { 1.0 } else { -1.0 };
        Ok((c(0.0, s * PI) * (m + 0.5)).exp() * self.ia_wronskian(m, -z)?)
    }

    /// Ia from the ratio Ia_{m+1}/Ia_m (CF1) and W(Ka, Ia) = 1; Re z ≥ 0.
    fn ia_wronskian(&self, m: Complex64, z: Complex64) -> Result<Complex64> {
        let ratio = cf1(m, z)?;
        let k0 = self.ka(m, z)?;
        let k1 = self.ka(m + 1.0, z)?;
        let lead = (m + 0.5) / z;
        // Ia' = Ia (ratio + lead), Ka' = -Ka_{m+1} + lead Ka
        let dk = -k1 + lead * k0;
        Ok(1.0 / ((ratio + lead) * k0 - dk))
    }

    fn ia_asymptotic(&self, m: Complex64, z: Complex64) -> Complex64 {
        let i = Complex64::i();
        let grow = 0.5 * z.exp() * asymptotic_sum(m, -z);
        if z.arg().abs() < PI / 4.0 {
            return grow;
        }
        let phase = if z.im >= 0.0 {
            (i * PI * (m - 0.5)).exp()
        } else {
            (-i * PI * (m - 0.5)).exp()
        };
        grow - 0.5 * phase * (-z).exp() * asymptotic_sum(m, z)
    }

    /// Σ √π (±1)^n (z/2)^{2n+m+1/2} / (n! Γ(m+n+1)); `alternating` selects Ja.
    fn power_series(&self, m: Complex64, z: Complex64, alternating: bool) -> Result<Complex64> {
        // Negative integer orders: the leading terms vanish; use the symmetry.
        if m.im == 0.0 && m.re < 0.0 && m.re == m.re.round() {
            return self.power_series(-m, z, alternating);
        }
        let half = z / 2.0;
        let q = if alternating { -half * half } else { half * half };
        let mut term = PI.sqrt() * (half.ln() * (m + 0.5)).exp() * rgamma(m + 1.0);
        let mut sum = term;
        for n in 0..self.max_terms {
            let nf = n as f64;
            term *= q / ((nf + 1.0) * (m + nf + 1.0));
            sum += term;
            if term.norm() <= self.rel_tol * sum.norm() && (nf + 1.0) * (nf + 1.0) > q.norm() {
                return Ok(sum);
            }
        }
        Err(Error::NoConvergence(format!(
            "power series at m = {m}, z = {z} after {} terms",
            self.max_terms
        )))
    }

    // ---- Ka ------------------------------------------------------------

    fn ka(&self, m: Complex64, z: Complex64) -> Result<Complex64> {
        if z.re < -700.0 {
            return Err(Error::Overflow(format!("Ka at Re z = {}", z.re)));
        }
        let m = if m.re < 0.0 { -m } else { m };
        let r = z.norm();
        if r > self.asymptotic_radius {
            return Ok((-z).exp() * asymptotic_sum(m, z));
        }
        if r > SMALL_Z {
            if z.re >= 0.0 {
                return cf2(m, z);
            }
            // Continue from u = −z in the right half-plane.
            let u = -z;
            let s = if z.im >= 0.0 { -1.0 } else { 1.0 };
            let phase = (c(0.0, s * PI) * (m - 0.5)).exp();
            return Ok(phase * cf2(m, u)? + 2.0 * self.ia(m, u)?);
        }
        let n = m.re.round();
        let mu = m - n;
        if mu.norm() < NEAR_INTEGER {
            let (k0, dk0) = self.ka_near_zero_order(mu, z)?;
            if n == 0.0 {
                return Ok(k0);
            }
            let k1 = (mu + 0.5) * k0 / z - dk0;
            return Ok(recur_up(mu, z, k0, k1, n as usize));
        }
        let s = (PI * m).sin();
        Ok((self.power_series(-m, z, false)? - self.power_series(m, z, false)?) / s)
    }

    /// Ka_μ(z) and ∂_z Ka_μ(z) for |μ| < 1e-4, accurate to O(μ^4).
    ///
    /// With φ_n(μ) = (z/2)^μ / Γ(μ+n+1), the odd part of φ_n divided by sin(πμ)
    /// is expanded to second order in μ; derivatives of 1/Γ at n+1 come from
    /// ψ(n+1) and the polygamma values at integers.
    fn ka_near_zero_order(&self, mu: Complex64, z: Complex64) -> Result<(Complex64, Complex64)> {
        let half = z / 2.0;
        let l = half.ln();
        let mu2 = mu * mu;
        let pi2 = PI * PI;
        let mut psi = digamma(c(1.0, 0.0))?;
        let mut psi1 = pi2 / 6.0;
        let mut psi2 = -2.0 * ZETA3;
        let mut power = half.sqrt() * PI.sqrt(); // √π (z/2)^{2n+1/2}/n!
        let mut sum = c(0.0, 0.0);
        let mut dsum = c(0.0, 0.0);
        for n in 0..self.max_terms {
            let nf = n as f64;
            if n > 0 {
                psi += 1.0 / nf;
                psi1 -= 1.0 / (nf * nf);
                psi2 += 2.0 / (nf * nf * nf);
                power *= half * half / (nf * nf);
            }
            // r = 1/n! is folded into `power`.
            let d = l - psi;
            let phi1 = d;
            let phi3 = d * d * d - 3.0 * psi1 * d - psi2;
            let coef = -(2.0 / PI) * (phi1 + mu2 * (phi3 / 6.0 + pi2 * phi1 / 6.0));
            let dcoef = -(2.0 / PI) * (1.0 + mu2 * ((3.0 * d * d - 3.0 * psi1) / 6.0 + pi2 / 6.0));
            let term = power * coef;
            sum += term;
            dsum += power / z * ((2.0 * nf + 0.5) * coef + dcoef);
            if term.norm() <= self.rel_tol * sum.norm() && n > 2 {
                return Ok((sum, dsum));
            }
        }
        Err(Error::NoConvergence(format!("near-zero-order Ka at z = {z}")))
    }

    /// Ka_m(z e^{i·rot}) continued across the cut when |arg z + rot| exceeds π.
    fn ka_rotated(&self, m: Complex64, z: Complex64, rot: f64) -> Result<Complex64> {
        let total = z.arg() + rot;
        let i = Complex64::i();
        if total > PI {
            // Ka_m(u e^{iπ}) = e^{-iπ(m-1/2)} Ka_m(u) + 2 Ia_m(u)
            let u = z * (i * (rot - PI)).exp();
            Ok((-i * PI * (m - 0.5)).exp() * self.ka(m, u)? + 2.0 * self.ia(m, u)?)
        } else if total <= -PI {
            let u = z * (i * (rot + PI)).exp();
            Ok((i * PI * (m - 0.5)).exp() * self.ka(m, u)? + 2.0 * self.ia(m, u)?)
        } else {
            let w = z * (i * rot).exp();
            // Keep exact axis values exact after the rotation.
            let w = if total == 0.0 { c(w.re, 0.0) } else { w };
            self.ka(m, w)
        }
    }

    // ---- Ja, Ha --------------------------------------------------------

    fn ja(&self, m: Complex64, z: Complex64) -> Result<Complex64> {
        let r = z.norm();
        if r <= SMALL_Z || r - z.im.abs() <= 3.0 {
            return self.power_series(m, z, true);
        }
        Ok(0.5 * (self.ha(m, Sign::Plus, z)? + self.ha(m, Sign::Minus, z)?))
    }

    fn ha(&self, m: Complex64, sign: Sign, z: Complex64) -> Result<Complex64> {
        let s = sign.value();
        let phase = (c(0.0, -s * FRAC_PI_2) * (m + 0.5)).exp();
        Ok(phase * self.ka_rotated(m, z, -s * FRAC_PI_2)?)
    }
}

/// Σ a_k(m) z^{-k} with a_k = Π_{j≤k}(4m² − (2j−1)²)/(k! 8^k), truncated once
/// terms drop below 1e-17 or start growing.
fn asymptotic_sum(m: Complex64, z: Complex64) -> Complex64 {
    let mu = 4.0 * m * m;
    let mut term = c(1.0, 0.0);
    let mut sum = term;
    let mut last = f64::INFINITY;
    for k in 1..ASYMPTOTIC_TERMS {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf * z);
        let size = term.norm();
        if size > last {
            break;
        }
        sum += term;
        if size < 1e-17 * sum.norm() {
            break;
        }
        last = size;
    }
    sum
}

/// I_{m+1}(z)/I_m(z) by the continued fraction 1/(2(m+1)/z + 1/(2(m+2)/z + …)),
/// modified Lentz.
fn cf1(m: Complex64, z: Complex64) -> Result<Complex64> {
    let tiny = 1e-150;
    let inv = 1.0 / z;
    let mut f = c(tiny, 0.0);
    let mut cc = f;
    let mut d = c(0.0, 0.0);
    for k in 1..CF2_MAX_ITER {
        let b = 2.0 * (m + k as f64) * inv;
        d = b + d;
        if d.norm() < tiny {
            d = c(tiny, 0.0);
        }
        cc = b + 1.0 / cc;
        if cc.norm() < tiny {
            cc = c(tiny, 0.0);
        }
        d = 1.0 / d;
        let delta = cc * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-15 {
            return Ok(f);
        }
    }
    Err(Error::NoConvergence(format!("CF1 at m = {m}, z = {z}")))
}

/// (Ka_μ, Ka_{μ+1}) → Ka_{μ+n} by K_{ν+1} = K_{ν−1} + (2ν/z) K_ν.
fn recur_up(mu: Complex64, z: Complex64, k0: Complex64, k1: Complex64, n: usize) -> Complex64 {
    let (mut a, mut b) = (k0, k1);
    for i in 0..n {
        let nu = mu + 1.0 + i as f64;
        let next = a + 2.0 * nu / z * b;
        a = b;
        b = next;
    }
    a
}

/// Steed's continued fraction for Ka_μ, Ka_{μ+1} with |Re μ| ≤ 1/2, then recurrence.
fn cf2(m: Complex64, z: Complex64) -> Result<Complex64> {
    let n = m.re.round();
    let mu = m - n;
    let one = c(1.0, 0.0);
    let mut b = 2.0 * (one + z);
    let mut d = one / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = c(0.0, 0.0);
    let mut q2 = one;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut cc = a1;
    let mut a = -a1;
    let mut s = one + q * delh;
    let mut converged = false;
    for i in 2..CF2_MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        cc = -a * cc / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += cc * qnew;
        b += 2.0;
        d = one / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.norm() < 1e-16 * s.norm() && delh.norm() < 1e-16 * h.norm() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(format!("CF2 at m = {m}, z = {z}")));
    }
    h *= a1;
    let k0 = (-z).exp() / s;
    let k1 = k0 * (mu + z + 0.5 - h) / z;
    Ok(recur_up(mu, z, k0, k1, n as usize))
}

macro_rules! default_fn {
    ($(#[$doc:meta])* $name:ident($($arg:ident: $ty:ty),*)) => {
        $(#[$doc])*
        pub fn $name($($arg: $ty),*) -> Result<Complex64> {
            SeriesPolicy::default().$name($($arg),*)
        }
    };
}

default_fn!(
    /// Ia_m(z) = √(πz/2) I_m(z).
    bessel_i(m: impl Into<Order>, z: impl Into<Complex64>)
);
default_fn!(
    /// Ka_m(z) = √(2z/π) K_m(z), the MacDonald function; even in m.
    bessel_k(m: impl Into<Order>, z: impl Into<Complex64>)
);
default_fn!(
    /// Ja_m(z) = √(πz/2) J_m(z).
    bessel_j(m: impl Into<Order>, z: impl Into<Complex64>)
);
default_fn!(
    /// Ha_m^±(z) = e^{∓iπ(m+1/2)/2} Ka_m(e^{∓iπ/2} z).
    hankel_pm(m: impl Into<Order>, sign: Sign, z: impl Into<Complex64>)
);
default_fn!(
    /// Ya_m(z) = (Ha_m^+(z) − Ha_m^−(z)) / 2i.
    neumann(m: impl Into<Order>, z: impl Into<Complex64>)
);
