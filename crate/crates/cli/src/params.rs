//! Parsing of numeric flags: complex values, extended parameters and grids.

use halfline::specfun::EULER_GAMMA;
use halfline::{Complex64, ExtendedParam};

fn real(text: &str) -> Result<f64, String> {
    let text = text.trim();
    if text == "euler" {
        return Ok(EULER_GAMMA);
    }
    let value: f64 = text.parse().map_err(|_| format!("`{text}` is not a number"))?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{text}` is not finite"))
    }
}

/// `re,im` or `re`; either component may be `euler`.
pub fn complex(text: &str) -> Result<Complex64, String> {
    match text.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(real(re)?, real(im)?)),
        None => Ok(Complex64::new(real(text)?, 0.0)),
    }
}

/// As [`complex`], or `inf`.
pub fn extended(text: &str) -> Result<ExtendedParam, String> {
    if text.trim() == "inf" {
        Ok(ExtendedParam::infinity())
    } else {
        complex(text).map(ExtendedParam::finite)
    }
}

/// Two reals separated by a comma.
pub fn real_pair(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = text.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{text}`"))?;
    Ok((real(a)?, real(b)?))
}

/// Comma-separated reals.
pub fn real_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',').map(real).collect()
}

/// `lo:hi:n` for n evenly spaced points, or a comma-separated list.
pub fn grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [lo, hi, n] => {
            let (lo, hi) = (real(lo)?, real(hi)?);
            let n: usize = n.trim().parse().map_err(|_| format!("`{n}` is not a point count"))?;
            match n {
                0 => Err("a grid needs at least one point".into()),
                1 => Ok(vec![lo]),
                _ => Ok((0..n).map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64).collect()),
            }
        }
        [_] => real_list(text),
        _ => Err(format!("expected `lo:hi:n` or a list, got `{text}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(complex("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(complex("-1,0.25").unwrap(), Complex64::new(-1.0, 0.25));
        assert_eq!(complex("euler,0").unwrap().re, EULER_GAMMA);
        assert!(complex("1,x").is_err());
        assert!(complex("nan").is_err());
    }

    #[test]
    fn extended_forms() {
        assert!(extended("inf").unwrap().is_infinite());
        assert_eq!(extended("2,0").unwrap().value(), Some(Complex64::new(2.0, 0.0)));
    }

    #[test]
    fn grids() {
        assert_eq!(grid("1:2:3").unwrap(), vec![1.0, 1.5, 2.0]);
        assert_eq!(grid("0.5,3").unwrap(), vec![0.5, 3.0]);
        assert_eq!(grid("4:9:1").unwrap(), vec![4.0]);
        assert!(grid("1:2").is_err());
        assert!(grid("1:2:0").is_err());
    }
}
