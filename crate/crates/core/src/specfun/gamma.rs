//! Complex gamma, log-gamma and digamma.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

// B_{2k} / (2k (2k-1)) for the Stirling series.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn pole_check(z: Complex64) -> Result<()> {
    if z.re <= 0.0 && z.im == 0.0 && z.re == z.re.round() {
        return Err(Error::Pole(z));
    }
    Ok(())
}

/// Sum `A(z)` of the Lanczos approximation with the shift `z -> z - 1` applied.
fn lanczos_sum(z: Complex64) -> (Complex64, Complex64) {
    let mut a = Complex64::new(LANCZOS[0], 0.0);
    let mut da = Complex64::new(0.0, 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        let d = z + i as f64;
        a += c / d;
        da -= c / (d * d);
    }
    (a, da)
}

/// Γ(z) on the principal branch. Lanczos near the real axis; away from it the
/// Lanczos form loses about 1e-13, so exp(ln Γ) from the Stirling series is used.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    pole_check(z)?;
    if z.im.abs() > 4.0 {
        return Ok(ln_gamma(z)?.exp());
    }
    if z.re < 0.5 {
        let s = (PI * z).sin();
        return Ok(PI / (s * gamma(1.0 - z)?));
    }
    let zm = z - 1.0;
    let (a, _) = lanczos_sum(zm);
    let t = zm + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * t.powc(zm + 0.5) * (-t).exp() * a)
}

/// 1/Γ(z), entire; exactly zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    match gamma(z) {
        Ok(g) => 1.0 / g,
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

fn ln_sin_pi(z: Complex64) -> Complex64 {
    let w = PI * z;
    if w.im.abs() < 30.0 {
        return w.sin().ln();
    }
    let i = Complex64::i();
    if w.im > 0.0 {
        (0.5 * i).ln() - i * w + (1.0 - (2.0 * i * w).exp()).ln()
    } else {
        (-0.5 * i).ln() + i * w + (1.0 - (-2.0 * i * w).exp()).ln()
    }
}

/// ln Γ(z); the imaginary part is continuous along vertical lines but is not
/// reduced to (−π, π]. Only `exp` of differences of this function is meaningful.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    pole_check(z)?;
    if z.re < 0.5 {
        return Ok(PI.ln() - ln_sin_pi(z) - ln_gamma(1.0 - z)?);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 16.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += c * p;
        p *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift)
}

/// ψ(z) = Γ'(z)/Γ(z), from the logarithmic derivative of the Lanczos form.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    pole_check(z)?;
    if z.re < 0.5 {
        // ψ(1−z) − ψ(z) = π cot(πz)
        let w = PI * z;
        return Ok(digamma(1.0 - z)? - PI * w.cos() / w.sin());
    }
    let zm = z - 1.0;
    let (a, da) = lanczos_sum(zm);
    let t = zm + LANCZOS_G + 0.5;
    Ok(t.ln() + (zm + 0.5) / t - 1.0 + da / a)
}
