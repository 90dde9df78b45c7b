//! Strip and interval RT surfaces from the conserved-momentum first integral.
//!
//! For a strip of width `l` whose surface reaches depth `z*`:
//!
//! ```text
//! l(z*)    = 2 ∫_0^{z*} u^{d-1} / ( sqrt(f) sqrt(1 - u^{2(d-1)}) ) dz,   u = z/z*
//! A(eps)   = 2 ∫_eps^{z*} dz / ( z^{d-1} sqrt(f) sqrt(1 - u^{2(d-1)}) )
//! ```
//!
//! Areas are renormalized with the vacuum counterterm: the divergent piece
//! `2 ∫ z^{1-d} dz` is integrated exactly from `eps`, while the remainder is
//! integrated from the boundary. This keeps the cutoff dependence exactly
//! `2 ln(1/eps)` (for `d = 2`) so that it cancels identically in mutual and
//! tripartite information.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};
use crate::geometry::{validate_geometry, BulkGeometry, GeometryKind, UnitsConvention};
use crate::quadrature::QuadratureSpec;
use crate::roots::brent;

/// Distance below the horizon kept free when bracketing turning points.
const HORIZON_GUARD: f64 = 64.0 * f64::EPSILON;

/// Grid used to enumerate turning-point brackets of tabulated profiles.
const TABULATED_SCAN_POINTS: usize = 48;

/// Relative distance from a tabulated horizon where the scan grid stops.
const SCAN_HORIZON_GAP: f64 = 1.0 / 1024.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// A single U-shaped surface reaching `z_star`.
    ConnectedU,
    /// Two vertical sheets ending on the hard wall.
    WallDisconnected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurningPointSolution {
    pub z_star: f64,
    pub width: f64,
    pub area_reg: f64,
    pub cutoff: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripEntropy {
    pub solution: TurningPointSolution,
    pub entropy: f64,
}

/// `1 + x + ... + x^{n-1}`, the factor left after pulling `1 - x` out of
/// `1 - x^n`.
#[inline]
fn geometric_sum(n: u32, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for _ in 0..n {
        sum += term;
        term *= x;
    }
    sum
}

fn check_turning_point(geom: &BulkGeometry, z_star: f64) -> Result<()> {
    if !geom.contains_depth(z_star) {
        return Err(HoloError::domain(format!(
            "turning point z* = {z_star} is outside the {} bulk domain",
            geom.label()
        )));
    }
    Ok(())
}

/// Coordinate width `l(z*)` of the connected surface with turning point `z*`.
pub fn width_of_turning_point(
    geom: &BulkGeometry,
    z_star: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    validate_geometry(geom)?;
    check_turning_point(geom, z_star)?;
    width_unchecked(geom, z_star, quad)
}

fn width_unchecked(geom: &BulkGeometry, z_star: f64, quad: &QuadratureSpec) -> Result<f64> {
    let n = geom.d - 1;
    // z = z* sin(theta); the factor cos(theta)/sqrt(1 - s^{2n}) reduces to
    // 1/sqrt(1 + s^2 + ... + s^{2(n-1)}).
    let integral = quad.integrate(0.0, FRAC_PI_2, |theta| {
        let s = theta.sin();
        let f = geom.f_raw(z_star * s);
        s.powi(n as i32) / (f.sqrt() * geometric_sum(n, s * s).sqrt())
    })?;
    Ok(2.0 * z_star * integral)
}

/// `2 ∫_a^b z^{1-d} dz`.
fn counterterm(d: u32, a: f64, b: f64) -> f64 {
    if d == 2 {
        2.0 * (b / a).ln()
    } else {
        let p = 2.0 - d as f64;
        2.0 * (a.powf(p) - b.powf(p)) / (d as f64 - 2.0)
    }
}

/// Renormalized area of the connected surface with turning point `z*` at
/// cutoff `eps`, per unit transverse volume.
pub fn regularized_strip_area(
    geom: &BulkGeometry,
    z_star: f64,
    eps: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    validate_geometry(geom)?;
    check_turning_point(geom, z_star)?;
    check_cutoff(eps, z_star)?;
    area_unchecked(geom, z_star, eps, quad)
}

fn check_cutoff(eps: f64, depth: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(HoloError::domain(format!(
            "cutoff must be positive, got {eps}"
        )));
    }
    if eps >= depth {
        return Err(HoloError::domain(format!(
            "cutoff {eps} is not below the surface depth {depth}"
        )));
    }
    Ok(())
}

fn area_unchecked(
    geom: &BulkGeometry,
    z_star: f64,
    eps: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let d = geom.d;
    let n = d - 1;
    let z_mid = z_star * FRAC_1_SQRT_2;

    // Near-boundary remainder: z^{1-d} (h - 1) with h = 1/sqrt(f (1 - u^{2n})),
    // written so that h - 1 never suffers cancellation.
    let near = quad.integrate(0.0, z_mid, |z| {
        let u2n = (z / z_star).powi(2 * n as i32);
        let f = geom.f_raw(z);
        let q = f * (1.0 - u2n);
        let sq = q.sqrt();
        let h_minus_one = (geom.one_minus_f_raw(z) + f * u2n) / (sq * (1.0 + sq));
        z.powi(1 - d as i32) * h_minus_one
    })?;

    // Turning-point piece in theta, z = z* sin(theta).
    let deep = quad.integrate(FRAC_PI_4, FRAC_PI_2, |theta| {
        let s = theta.sin();
        let f = geom.f_raw(z_star * s);
        1.0 / (s.powi(n as i32) * f.sqrt() * geometric_sum(n, s * s).sqrt())
    })?;

    let dimensionless = 2.0 * near
        + 2.0 * z_star.powi(2 - d as i32) * deep
        // the deep piece carries the full integrand above z_mid, so only
        // the divergent part below it is added back
        + counterterm(d, eps, z_mid);
    Ok(geom.radius.powi(n as i32) * dimensionless)
}

/// Area of the two vertical sheets ending on the wall.
fn wall_area(geom: &BulkGeometry, z_w: f64, eps: f64) -> Result<f64> {
    check_cutoff(eps, z_w)?;
    Ok(geom.radius.powi(geom.d as i32 - 1) * counterterm(geom.d, eps, z_w))
}

/// Entropy of a strip (interval for `d = 2`) of width `width`.
///
/// The connected turning point is found by bracketed root finding on the
/// monotone width relation. In a hard-wall geometry the wall-ending branch
/// competes and the smaller area wins; ties go to the connected branch.
pub fn entropy_of_strip(
    geom: &BulkGeometry,
    width: f64,
    eps: f64,
    units: &UnitsConvention,
    quad: &QuadratureSpec,
) -> Result<StripEntropy> {
    let solution = strip_solution(geom, width, eps, quad)?;
    units.validate()?;
    Ok(StripEntropy {
        solution,
        entropy: solution.area_reg / units.four_g_n,
    })
}

/// Minimal-area surface for a strip of width `width`, without unit
/// conversion.
pub fn strip_solution(
    geom: &BulkGeometry,
    width: f64,
    eps: f64,
    quad: &QuadratureSpec,
) -> Result<TurningPointSolution> {
    validate_geometry(geom)?;
    quad.validate()?;
    if !(width > 0.0 && width.is_finite()) {
        return Err(HoloError::domain(format!(
            "strip width must be positive, got {width}"
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(HoloError::domain(format!(
            "cutoff must be positive, got {eps}"
        )));
    }

    let mut best: Option<TurningPointSolution> = None;
    for z_star in connected_turning_points(geom, width, eps, quad)? {
        let area_reg = area_unchecked(geom, z_star, eps, quad)?;
        let candidate = TurningPointSolution {
            z_star,
            width,
            area_reg,
            cutoff: eps,
            branch: Branch::ConnectedU,
        };
        if best.is_none_or(|b| candidate.area_reg < b.area_reg) {
            best = Some(candidate);
        }
    }

    if let GeometryKind::HardWall { z_w } = geom.kind {
        let area_reg = wall_area(geom, z_w, eps)?;
        if best.is_none_or(|b| area_reg < b.area_reg) {
            best = Some(TurningPointSolution {
                z_star: z_w,
                width,
                area_reg,
                cutoff: eps,
                branch: Branch::WallDisconnected,
            });
        }
    }

    best.ok_or_else(|| {
        HoloError::numerics(format!(
            "no connected surface of width {width} exists in the {} geometry",
            geom.label()
        ))
    })
}

/// All turning points whose width equals `width`.
fn connected_turning_points(
    geom: &BulkGeometry,
    width: f64,
    eps: f64,
    quad: &QuadratureSpec,
) -> Result<Vec<f64>> {
    let lo = eps;
    let residual = |z: f64| width_unchecked(geom, z, quad).map(|w| w - width);
    let r_lo = residual(lo)?;
    if r_lo >= 0.0 {
        return Err(HoloError::domain(format!(
            "cutoff {eps} is too coarse for a strip of width {width}"
        )));
    }

    let hi = match &geom.kind {
        GeometryKind::PureAds => {
            let mut hi = 10.0 * width;
            let mut tries = 0;
            while residual(hi)? < 0.0 {
                hi *= 2.0;
                tries += 1;
                if tries > 60 {
                    return Err(HoloError::numerics("failed to bracket the turning point"));
                }
            }
            hi
        }
        GeometryKind::BlackBrane { z_h } => approach_horizon(&residual, lo, *z_h, 0.5)?
            .ok_or_else(|| {
                HoloError::numerics(format!(
                    "width {width} is beyond the resolvable near-horizon reach"
                ))
            })?,
        GeometryKind::HardWall { z_w } => {
            if *z_w <= lo || residual(*z_w)? < 0.0 {
                return Ok(Vec::new());
            }
            *z_w
        }
        GeometryKind::Tabulated { profile } => {
            let z_max = profile.max_depth();
            let roots = if profile.has_horizon() {
                let soft = z_max * (1.0 - SCAN_HORIZON_GAP);
                let mut roots = scan_brackets(&residual, lo, r_lo, soft)?;
                if soft > lo && residual(soft)? < 0.0 {
                    if let Some(hi) =
                        approach_horizon(&residual, soft, z_max, 0.5 * SCAN_HORIZON_GAP)?
                    {
                        roots.push(brent(&residual, soft, hi, 0.0, 200)?);
                    }
                }
                roots
            } else {
                scan_brackets(&residual, lo, r_lo, z_max)?
            };
            if roots.is_empty() {
                return Err(HoloError::numerics(format!(
                    "width {width} is not reached by any turning point of the tabulated profile"
                )));
            }
            return Ok(roots);
        }
    };

    let root = brent(residual, lo, hi, 0.0, 200)?;
    Ok(vec![root])
}

/// Walks `z_h (1 - 2^-k)` towards the horizon until the residual turns
/// non-negative, so the bracket end stays as far from the horizon as the
/// width allows.
fn approach_horizon<F>(residual: &F, lo: f64, z_h: f64, first_gap: f64) -> Result<Option<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut gap = first_gap;
    loop {
        let z = if gap > HORIZON_GUARD {
            z_h * (1.0 - gap)
        } else {
            z_h * (1.0 - HORIZON_GUARD)
        };
        if z > lo && residual(z)? >= 0.0 {
            return Ok(Some(z));
        }
        if gap <= HORIZON_GUARD {
            return Ok(None);
        }
        gap *= 0.5;
    }
}

/// Sign-change scan over a geometric grid, refined by Brent on each bracket.
fn scan_brackets<F>(residual: &F, lo: f64, r_lo: f64, hi: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64>,
{
    if hi <= lo {
        return Ok(Vec::new());
    }
    let ratio = (hi / lo).powf(1.0 / (TABULATED_SCAN_POINTS - 1) as f64);
    let mut roots = Vec::new();
    let (mut z_prev, mut r_prev) = (lo, r_lo);
    for k in 1..TABULATED_SCAN_POINTS {
        let z = if k == TABULATED_SCAN_POINTS - 1 {
            hi
        } else {
            lo * ratio.powi(k as i32)
        };
        let r = residual(z)?;
        if r == 0.0 {
            roots.push(z);
        } else if r_prev != 0.0 && r.signum() != r_prev.signum() {
            roots.push(brent(residual, z_prev, z, 0.0, 200)?);
        }
        z_prev = z;
        r_prev = r;
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn vacuum_width_is_twice_turning_point() {
        let w = width_of_turning_point(&BulkGeometry::pure_ads(2), 0.5, &q()).unwrap();
        assert!((w - 1.0).abs() < 1e-12, "{w}");
    }

    #[test]
    fn btz_width_matches_artanh() {
        let g = BulkGeometry::black_brane(2, 1.0);
        let w = width_of_turning_point(&g, 0.99, &q()).unwrap();
        let exact = 2.0 * 0.99f64.atanh();
        assert!((w - exact).abs() < 1e-10, "{w} vs {exact}");
        assert!((exact - 5.293305).abs() < 1e-6);
    }

    #[test]
    fn ads4_width_matches_oracle() {
        // 2 ∫_0^1 u^2/sqrt(1-u^4) du = 2 sqrt(pi) Γ(3/4)/Γ(1/4)
        let w = width_of_turning_point(&BulkGeometry::pure_ads(3), 1.0, &q()).unwrap();
        assert!((w - 1.198140234735592).abs() < 1e-10, "{w}");
    }

    #[test]
    fn turning_point_at_horizon_is_rejected() {
        let g = BulkGeometry::black_brane(2, 1.0);
        assert!(matches!(
            width_of_turning_point(&g, 1.0, &q()),
            Err(HoloError::Domain(_))
        ));
        let w = BulkGeometry::hard_wall(2, 0.5);
        assert!(width_of_turning_point(&w, 0.5, &q()).is_ok());
        assert!(width_of_turning_point(&w, 0.6, &q()).is_err());
    }

    #[test]
    fn vacuum_area_has_log_form() {
        let a = regularized_strip_area(&BulkGeometry::pure_ads(2), 0.5, 0.01, &q()).unwrap();
        assert!((a - 2.0 * 100f64.ln()).abs() < 1e-10, "{a}");
        assert!((a - 9.210340).abs() < 1e-6);
    }

    #[test]
    fn cutoff_at_turning_point_is_domain_error() {
        let e = regularized_strip_area(&BulkGeometry::pure_ads(2), 0.5, 0.5, &q()).unwrap_err();
        assert!(matches!(e, HoloError::Domain(_)));
    }

    #[test]
    fn btz_area_matches_closed_form() {
        let g = BulkGeometry::black_brane(2, 1.0);
        let z_star = 0.5f64.tanh();
        let a = regularized_strip_area(&g, z_star, 0.01, &q()).unwrap();
        let exact = 2.0 * (200.0 * 0.5f64.sinh()).ln();
        assert!((a - exact).abs() < 1e-9, "{a} vs {exact}");
        assert!((a - 9.292990).abs() < 1e-6);
    }

    #[test]
    fn strip_entropy_examples() {
        let u = UnitsConvention::default();
        let s = entropy_of_strip(&BulkGeometry::pure_ads(2), 1.0, 0.01, &u, &q()).unwrap();
        assert!((s.entropy - 9.210340).abs() < 1e-6);
        assert!((s.solution.z_star - 0.5).abs() < 1e-12);
        assert_eq!(s.solution.branch, Branch::ConnectedU);

        let s = entropy_of_strip(&BulkGeometry::black_brane(2, 1.0), 1.0, 0.01, &u, &q()).unwrap();
        assert!((s.entropy - 9.292990).abs() < 1e-6);
    }

    #[test]
    fn hard_wall_prefers_wall_branch_for_wide_intervals() {
        let u = UnitsConvention::default();
        let g = BulkGeometry::hard_wall(2, 0.5);
        let s = entropy_of_strip(&g, 0.8, 0.01, &u, &q()).unwrap();
        assert_eq!(s.solution.branch, Branch::WallDisconnected);
        assert!((s.entropy - 2.0 * 50f64.ln()).abs() < 1e-12);
        assert!((s.entropy - 7.824046).abs() < 1e-6);
        // connected candidate would have been 2 ln(80)
        assert!(2.0 * 80f64.ln() > s.entropy);

        let narrow = entropy_of_strip(&g, 0.3, 0.01, &u, &q()).unwrap();
        assert_eq!(narrow.solution.branch, Branch::ConnectedU);
        // beyond 2 z_w no connected surface fits above the wall
        let wide = entropy_of_strip(&g, 1.5, 0.01, &u, &q()).unwrap();
        assert_eq!(wide.solution.branch, Branch::WallDisconnected);
    }

    #[test]
    fn four_g_n_rescales_entropy() {
        let g = BulkGeometry::pure_ads(2);
        let a = entropy_of_strip(&g, 1.0, 0.01, &UnitsConvention::new(1.0).unwrap(), &q()).unwrap();
        let b = entropy_of_strip(&g, 1.0, 0.01, &UnitsConvention::new(2.0).unwrap(), &q()).unwrap();
        assert!((a.entropy - 2.0 * b.entropy).abs() < 1e-12);
    }

    #[test]
    fn higher_dimensional_vacuum_strip() {
        // the finite part scales as 1/z*, so A(eps) - 2/eps is inversely
        // proportional to the width
        let g = BulkGeometry::pure_ads(3);
        let eps = 1e-3;
        let a1 = strip_solution(&g, 1.0, eps, &q()).unwrap().area_reg - 2.0 / eps;
        let a2 = strip_solution(&g, 2.0, eps, &q()).unwrap().area_reg - 2.0 / eps;
        assert!((a1 - 2.0 * a2).abs() < 1e-9, "{a1} {a2}");
        assert!(a1 < 0.0);
    }

    #[test]
    fn cutoff_too_coarse_is_domain_error() {
        let u = UnitsConvention::default();
        let e = entropy_of_strip(&BulkGeometry::pure_ads(2), 0.01, 0.01, &u, &q()).unwrap_err();
        assert!(matches!(e, HoloError::Domain(_)));
    }

    #[test]
    fn tabulated_flat_profile_matches_vacuum() {
        let g = BulkGeometry::tabulated(2, vec![(0.0, 1.0), (5.0, 1.0), (10.0, 1.0)]);
        let u = UnitsConvention::default();
        let s = entropy_of_strip(&g, 1.0, 0.01, &u, &q()).unwrap();
        assert!(
            (s.entropy - 2.0 * 100f64.ln()).abs() < 1e-9,
            "{}",
            s.entropy
        );
    }

    #[test]
    fn tabulated_btz_profile_tracks_closed_form() {
        let samples: Vec<(f64, f64)> = (0..=200)
            .map(|i| {
                let z = i as f64 / 200.0;
                (z, 1.0 - z * z)
            })
            .collect();
        let g = BulkGeometry::tabulated(2, samples);
        assert_eq!(crate::geometry::horizon_depth(&g), Some(1.0));
        let u = UnitsConvention::default();
        let s = entropy_of_strip(&g, 1.0, 0.01, &u, &q()).unwrap();
        // interpolation error only
        assert!((s.entropy - 9.292990).abs() < 1e-4, "{}", s.entropy);
    }
}
