use std::f64::consts::PI;

use num_complex::Complex64;

use super::spec::{classify, strip_position, varsigma, OperatorSpec};
use super::param::ExtendedParam;
use crate::error::{Error, Result};
use crate::specfun::EULER_GAMMA;

/// Records whose |Im w| is this close to π are flagged.
pub const NEAR_BOUNDARY: f64 = 1e-8;
/// Largest |j| ever visited; also the effective range when a side is unbounded.
const J_LIMIT: f64 = 1e15;

/// One eigenvalue z = −4e^{−w} with w = (ln ς + 2πij)/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenvalueRecord {
    pub j: i64,
    pub w: Complex64,
    pub z: Complex64,
    pub near_boundary: bool,
}

/// Restricts which eigenvalues are listed. Infinite spectra need at least one
/// bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub max_count: Option<usize>,
    /// Inclusive range for |z|.
    pub modulus: Option<(f64, f64)>,
}

impl Default for Window {
    fn default() -> Self {
        Window {
            max_count: Some(10_000),
            modulus: Some((1e-12, 1e12)),
        }
    }
}

impl Window {
    pub fn unbounded() -> Self {
        Window {
            max_count: None,
            modulus: None,
        }
    }

    fn admits(&self, z: Complex64) -> bool {
        self.modulus
            .is_none_or(|(lo, hi)| (lo..=hi).contains(&z.norm()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenCount {
    Finite(usize),
    Infinite,
}

fn record(j: i64, w: Complex64) -> EigenvalueRecord {
    EigenvalueRecord {
        j,
        w,
        z: -4.0 * (-w).exp(),
        near_boundary: PI - w.im.abs() < NEAR_BOUNDARY,
    }
}

/// Narrows (lo, hi) to the j with lo′ < offset + j·step < hi′.
fn intersect(range: &mut (f64, f64), offset: f64, step: f64, lo: f64, hi: f64) {
    if step == 0.0 {
        if !(lo < offset && offset < hi) {
            *range = (1.0, 0.0);
        }
        return;
    }
    let (a, b) = ((lo - offset) / step, (hi - offset) / step);
    let (a, b) = if step > 0.0 { (a, b) } else { (b, a) };
    // one integer of slack; the strict test is repeated per record
    range.0 = range.0.max(a.floor() - 1.0);
    range.1 = range.1.min(b.ceil() + 1.0);
}

pub fn eigenvalues(spec: &OperatorSpec, window: &Window) -> Result<Vec<EigenvalueRecord>> {
    classify(spec)?;
    let mut out = match *spec {
        OperatorSpec::Homogeneous(_) => Vec::new(),
        OperatorSpec::Nu(nu) => match nu.value() {
            Some(v) if v.im.abs() < PI / 2.0 => {
                let r = record(0, 2.0 * (EULER_GAMMA - v));
                if window.admits(r.z) {
                    vec![r]
                } else {
                    Vec::new()
                }
            }
            _ => Vec::new(),
        },
        OperatorSpec::Kappa(m, kappa) => kappa_eigenvalues(m, kappa, window)?,
    };
    out.sort_by(|a, b| b.z.norm().total_cmp(&a.z.norm()).then(a.j.cmp(&b.j)));
    Ok(out)
}

fn kappa_eigenvalues(m: Complex64, kappa: ExtendedParam, window: &Window) -> Result<Vec<EigenvalueRecord>> {
    let Some(s) = varsigma(m, kappa)?.value().filter(|v| v.norm() > 0.0) else {
        return Ok(Vec::new());
    };
    let alpha = s.ln();
    let base = alpha / m;
    let shift = Complex64::new(0.0, 2.0 * PI) / m;
    let (offset, step) = strip_position(m, s);
    let mut range = (-J_LIMIT, J_LIMIT);
    intersect(&mut range, offset, step, -PI, PI);
    if let Some((lo, hi)) = window.modulus {
        // |z| = 4e^{−Re w}
        let (lo_w, hi_w) = ((4.0 / hi).ln(), (4.0 / lo).ln());
        intersect(&mut range, base.re, shift.re, lo_w - 1e-12, hi_w + 1e-12);
    }
    if range.0 > range.1 {
        return Ok(Vec::new());
    }
    let unbounded = range.0 <= -J_LIMIT || range.1 >= J_LIMIT;
    if unbounded && window.max_count.is_none() {
        return Err(Error::WindowRequired);
    }
    let cap = window.max_count.unwrap_or(usize::MAX);
    let (lo, hi) = (range.0 as i64, range.1 as i64);
    // Walk outward from the branch closest to j = 0 so that truncation keeps
    // the principal branches.
    let start = 0i64.clamp(lo, hi);
    let mut out = Vec::new();
    let visit = |j: i64, out: &mut Vec<EigenvalueRecord>| {
        let w = base + shift * j as f64;
        if w.im.abs() < PI {
            let r = record(j, w);
            if window.admits(r.z) {
                out.push(r);
            }
        }
    };
    visit(start, &mut out);
    let mut d = 1i64;
    while out.len() < cap && (start - d >= lo || start + d <= hi) {
        if start + d <= hi {
            visit(start + d, &mut out);
        }
        if start - d >= lo && out.len() < cap {
            visit(start - d, &mut out);
        }
        d += 1;
    }
    out.truncate(cap);
    Ok(out)
}

/// #{j ∈ ℤ | 0 < γ + j < β}, by the integer/fractional-part case analysis.
pub fn lemma_count(beta: f64, gamma: f64) -> usize {
    const TOL: f64 = 1e-10;
    let is_int = |x: f64| (x - x.round()).abs() < TOL;
    let frac = |x: f64| x - x.floor();
    let b_int = beta.floor();
    if is_int(beta) {
        let b = beta.round() as usize;
        if is_int(gamma) {
            b.saturating_sub(1)
        } else {
            b
        }
    } else if is_int(gamma) || frac(beta) <= frac(gamma) {
        b_int as usize
    } else {
        b_int as usize + 1
    }
}

/// Number of eigenvalues of H_{m,κ} for κ ∉ {0, ∞}, by direct enumeration,
/// cross-checked against the integer-part bracket [N, N+1].
pub fn count_eigenvalues(m: Complex64, kappa: ExtendedParam) -> Result<EigenCount> {
    if kappa.is_zero() || kappa.is_infinite() {
        return Err(Error::InvalidSpec("count needs kappa outside {0, inf}".into()));
    }
    let s = varsigma(m, kappa)?.value().expect("finite varsigma");
    let (offset, step) = strip_position(m, s);
    if m.re == 0.0 {
        return Ok(if offset.abs() < PI {
            EigenCount::Infinite
        } else {
            EigenCount::Finite(0)
        });
    }
    // integers strictly inside ((−π − offset)/step, (π − offset)/step)
    let (a, b) = ((-PI - offset) / step, (PI - offset) / step);
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    let direct = (b.ceil() - a.floor() - 1.0).max(0.0) as usize;

    let n2 = m.norm_sqr();
    let beta = n2 / m.re.abs();
    let alpha = s.ln();
    let gamma = alpha.im / (2.0 * PI) - alpha.re * m.im / (2.0 * PI * m.re) + n2 / (2.0 * m.re.abs());
    let by_lemma = lemma_count(beta, gamma);
    let n = (beta.ceil() - 1.0).max(0.0) as usize;
    if direct != by_lemma || !(n..=n + 1).contains(&direct) {
        return Err(Error::Exceptional(format!(
            "eigenvalue count {direct} disagrees with the strip count {by_lemma} (N = {n})"
        )));
    }
    Ok(EigenCount::Finite(direct))
}
