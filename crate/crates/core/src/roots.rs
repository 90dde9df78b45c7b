//! Bracketed scalar solvers.

use crate::error::{HoloError, Result};

/// Brent's method on a bracket `[a, b]` with `f(a)` and `f(b)` of opposite
/// sign. Returns the abscissa to within `xtol` (plus a few ulps).
pub fn brent<F>(mut f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(HoloError::numerics(format!(
            "root is not bracketed by [{a}, {b}] (f = {fa}, {fb})"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(HoloError::numerics(format!(
        "Brent iteration did not converge within {max_iter} steps"
    )))
}

/// Bisection on a boolean indicator. `lo` and `hi` must carry different
/// indicator values; the returned point lies within `xtol` of the flip.
pub fn bisect_flip<F>(mut indicator: F, lo: f64, hi: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<bool>,
{
    let (mut lo, mut hi) = (lo, hi);
    let at_lo = indicator(lo)?;
    let at_hi = indicator(hi)?;
    if at_lo == at_hi {
        return Err(HoloError::Bracket { lo, hi });
    }
    while (hi - lo).abs() > xtol {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if indicator(mid)? == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section minimization on `[lo, hi]`; returns `(argmin, min)`.
pub fn golden_section<F>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while (b - a).abs() > xtol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_cubic_root() {
        let r = brent(|x| Ok(x * x * x - 2.0), 0.0, 2.0, 1e-15, 100).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn brent_rejects_unbracketed() {
        assert!(brent(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 100).is_err());
    }

    #[test]
    fn bisect_flip_locates_threshold() {
        let r = bisect_flip(|x| Ok(x > 0.3), 0.0, 1.0, 1e-10).unwrap();
        assert!((r - 0.3).abs() < 1e-10);
        assert!(matches!(
            bisect_flip(|x| Ok(x > 0.3), 0.5, 1.0, 1e-10),
            Err(HoloError::Bracket { .. })
        ));
    }

    #[test]
    fn golden_section_minimizes_parabola() {
        let (x, v) =
            golden_section(|x| Ok((x - 0.25) * (x - 0.25) + 1.0), 0.0, 1.0, 1e-10).unwrap();
        // a flat minimum only resolves the abscissa to about sqrt(eps)
        assert!((x - 0.25).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-15);
    }
}
