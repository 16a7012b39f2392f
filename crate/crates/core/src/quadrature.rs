//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

const MIN_DEPTH: u32 = 3;
const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` until the local Richardson error estimate is
/// below `max(abs_tol, rel_tol * |I|)`.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let fa = f(lo);
    let fb = f(hi);
    let m = 0.5 * (lo + hi);
    let fm = f(m);
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    // coarse magnitude estimate for the relative criterion
    let scale = {
        let q1 = f(lo + 0.25 * (hi - lo));
        let q3 = f(lo + 0.75 * (hi - lo));
        (hi - lo) / 12.0 * (fa.abs() + 4.0 * q1.abs() + 2.0 * fm.abs() + 4.0 * q3.abs() + fb.abs())
    };
    let eps = abs_tol.max(rel_tol * scale);
    let value = recurse(f, lo, hi, fa, fm, fb, whole, eps, 0)?;
    if !value.is_finite() {
        return Err(Error::QuadratureFailed { a, b });
    }
    Ok(sign * value)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::QuadratureFailed { a, b });
    }
    if depth >= MIN_DEPTH && (delta.abs() <= 15.0 * eps || (m - a) <= f64::EPSILON * m.abs()) {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::QuadratureFailed { a, b });
    }
    let l = recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1)?;
    let r = recurse(f, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive_simpson(&|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12, 0.0).unwrap();
        assert!((v - 0.0).abs() < 1e-13);
    }

    #[test]
    fn gaussian_integral() {
        let v = adaptive_simpson(&|x: f64| (-x * x).exp(), -8.0, 8.0, 1e-13, 0.0).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let f = |x: f64| x.cos();
        let a = adaptive_simpson(&f, 0.0, 1.0, 1e-12, 0.0).unwrap();
        let b = adaptive_simpson(&f, 1.0, 0.0, 1e-12, 0.0).unwrap();
        assert!((a + b).abs() < 1e-15);
        assert!((a - 1f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn nan_integrand_is_an_error() {
        assert!(adaptive_simpson(&|_x: f64| f64::NAN, 0.0, 1.0, 1e-10, 0.0).is_err());
    }
}
