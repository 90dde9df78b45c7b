//! Geodesic distances on the constant-time slice `(L^2/z^2)(dx^2 + dz^2/f)`.

use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};
use crate::geometry::{validate_geometry, BulkGeometry, GeometryKind};
use crate::quadrature::QuadratureSpec;
use crate::roots::brent;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BulkPoint {
    pub x: f64,
    pub z: f64,
}

impl BulkPoint {
    pub fn new(x: f64, z: f64) -> Self {
        Self { x, z }
    }
}

fn check_point(geom: &BulkGeometry, p: BulkPoint) -> Result<()> {
    if !p.x.is_finite() || !geom.contains_depth(p.z) {
        return Err(HoloError::domain(format!(
            "point ({}, {}) is not inside the {} bulk",
            p.x,
            p.z,
            geom.label()
        )));
    }
    Ok(())
}

/// Geodesic length between two bulk points of the constant-time slice.
///
/// The vacuum slice is the hyperbolic plane and the planar BTZ slice is a
/// hyperbolic plane in Fermi coordinates around the horizon; both have
/// closed forms. Other geometries are handled by [`geodesic_distance_shooting`].
pub fn bulk_geodesic_distance(
    geom: &BulkGeometry,
    p1: BulkPoint,
    p2: BulkPoint,
    quad: &QuadratureSpec,
) -> Result<f64> {
    check_point(geom, p1)?;
    check_point(geom, p2)?;
    if p1 == p2 {
        return Ok(0.0);
    }
    match geom.kind {
        GeometryKind::PureAds | GeometryKind::HardWall { .. } => {
            Ok(geom.radius * hyperbolic_distance(p1, p2))
        }
        GeometryKind::BlackBrane { z_h } if geom.d == 2 => {
            Ok(geom.radius * btz_slice_distance(z_h, p1, p2))
        }
        _ => geodesic_distance_shooting(geom, p1, p2, quad),
    }
}

/// `cosh D = 1 + (dx^2 + dz^2) / (2 z1 z2)`, evaluated through `sinh(D/2)`.
pub(crate) fn hyperbolic_distance(p1: BulkPoint, p2: BulkPoint) -> f64 {
    let dx = p1.x - p2.x;
    let dz = p1.z - p2.z;
    let chord = (dx * dx + dz * dz).sqrt();
    2.0 * (chord / (2.0 * (p1.z * p2.z).sqrt())).asinh()
}

/// `cosh D = (z_h^2/(z1 z2)) (cosh(dx/z_h) - sqrt(f1 f2))` rearranged so that
/// `cosh D - 1` is formed without cancellation.
pub(crate) fn btz_slice_distance(z_h: f64, p1: BulkPoint, p2: BulkPoint) -> f64 {
    let a = p1.z / z_h;
    let b = p2.z / z_h;
    let sh = ((p1.x - p2.x) / (2.0 * z_h)).sinh();
    let root = ((1.0 - a * a) * (1.0 - b * b)).sqrt();
    let cosh_minus_one = (2.0 * sh * sh + (a - b) * (a - b) / (1.0 - a * b + root)) / (a * b);
    2.0 * (0.5 * cosh_minus_one).sqrt().asinh()
}

/// Geodesic length by shooting on the conserved momentum `k = 1/z_t`, where
/// `z_t` is the (possibly virtual) turning depth of the geodesic.
///
/// The family is parametrized by `tau` in `[0, 2)`: `tau <= 1` are arcs that
/// rise monotonically from the shallower to the deeper endpoint
/// (`z_t = z_deep / tau`), `tau > 1` are arcs that dip below both endpoints
/// before turning.
pub fn geodesic_distance_shooting(
    geom: &BulkGeometry,
    p1: BulkPoint,
    p2: BulkPoint,
    quad: &QuadratureSpec,
) -> Result<f64> {
    validate_geometry(geom)?;
    check_point(geom, p1)?;
    check_point(geom, p2)?;
    if p1 == p2 {
        return Ok(0.0);
    }
    let (za, zb) = if p1.z <= p2.z {
        (p1.z, p2.z)
    } else {
        (p2.z, p1.z)
    };
    let dx = (p1.x - p2.x).abs();

    if dx == 0.0 {
        let radial = quad.integrate(za.ln(), zb.ln(), |t| 1.0 / geom.f_raw(t.exp()).sqrt())?;
        return Ok(geom.radius * radial);
    }

    let family = GeodesicFamily { geom, za, zb, quad };
    let at_one = family.offset(1.0)?;
    let tau = if dx <= at_one {
        brent(|tau| family.offset(tau).map(|x| x - dx), 0.0, 1.0, 0.0, 200)?
    } else {
        let (tau_lo, tau_hi) = family.bracket(dx)?.ok_or_else(|| {
            HoloError::numerics(format!(
                "no geodesic with separation {dx} stays inside the domain"
            ))
        })?;
        brent(
            |tau| family.offset(tau).map(|x| x - dx),
            tau_lo,
            tau_hi,
            0.0,
            200,
        )?
    };
    Ok(geom.radius * family.length(tau)?)
}

struct GeodesicFamily<'a> {
    geom: &'a BulkGeometry,
    za: f64,
    zb: f64,
    quad: &'a QuadratureSpec,
}

impl GeodesicFamily<'_> {
    fn depth_ceiling(&self) -> f64 {
        let limit = self.geom.depth_limit().unwrap_or(f64::INFINITY);
        match &self.geom.kind {
            GeometryKind::Tabulated { profile } if !profile.has_horizon() => limit,
            _ => limit * (1.0 - 64.0 * f64::EPSILON),
        }
    }

    /// Turning branch bracket `[tau_lo, tau_hi]` whose offsets straddle `dx`,
    /// approaching the depth ceiling only as far as needed.
    fn bracket(&self, dx: f64) -> Result<Option<(f64, f64)>> {
        let bounded = self.depth_ceiling().is_finite();
        let mut tau_lo = 1.0;
        let mut step = 0.5;
        for _ in 0..1100 {
            let tau = if bounded {
                2.0 - step
            } else {
                1.0 + 1.0 / step
            };
            if self.offset(tau)? >= dx {
                return Ok(Some((tau_lo, tau)));
            }
            tau_lo = tau;
            if bounded && step <= 64.0 * f64::EPSILON {
                return Ok(None);
            }
            step *= 0.5;
        }
        Ok(None)
    }

    fn turning_depth(&self, tau: f64) -> f64 {
        if tau <= 1.0 {
            self.zb / tau
        } else {
            let ceiling = self.depth_ceiling();
            if ceiling.is_finite() {
                self.zb + (tau - 1.0) * (ceiling - self.zb)
            } else {
                self.zb * tau
            }
        }
    }

    /// `z_t ∫ sin(theta) / sqrt(f(z_t sin theta)) dtheta` over `[asin(lo/z_t), asin(hi/z_t)]`.
    fn offset_piece(&self, zt: f64, lo: f64, hi: f64) -> Result<f64> {
        let t0 = (lo / zt).min(1.0).asin();
        let t1 = (hi / zt).min(1.0).asin();
        let v = self.quad.integrate(t0, t1, |theta| {
            let s = theta.sin();
            s / self.geom.f_raw(zt * s).sqrt()
        })?;
        Ok(zt * v)
    }

    fn length_piece(&self, zt: f64, lo: f64, hi: f64) -> Result<f64> {
        let t0 = (lo / zt).min(1.0).asin();
        let t1 = (hi / zt).min(1.0).asin();
        self.quad.integrate(t0, t1, |theta| {
            let s = theta.sin();
            1.0 / (s * self.geom.f_raw(zt * s).sqrt())
        })
    }

    fn offset(&self, tau: f64) -> Result<f64> {
        if tau <= 0.0 {
            return Ok(0.0);
        }
        let zt = self.turning_depth(tau);
        if tau <= 1.0 {
            self.offset_piece(zt, self.za, self.zb)
        } else {
            Ok(self.offset_piece(zt, self.za, zt)? + self.offset_piece(zt, self.zb, zt)?)
        }
    }

    fn length(&self, tau: f64) -> Result<f64> {
        let zt = self.turning_depth(tau);
        if tau <= 1.0 {
            self.length_piece(zt, self.za, self.zb)
        } else {
            Ok(self.length_piece(zt, self.za, zt)? + self.length_piece(zt, self.zb, zt)?)
        }
    }
}

/// Horizontal offset between the anchor of a `d = 2` RT geodesic with
/// turning point `z_star` and its point at depth `z <= z_star`.
pub(crate) fn arc_offset(
    geom: &BulkGeometry,
    z_star: f64,
    z: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    match geom.kind {
        GeometryKind::PureAds | GeometryKind::HardWall { .. } => {
            Ok(z_star - (z_star * z_star - z * z).max(0.0).sqrt())
        }
        GeometryKind::BlackBrane { z_h } if geom.d == 2 => {
            let num = z_h + z_star;
            let den = (z_h * z_h - z * z).sqrt() + (z_star * z_star - z * z).max(0.0).sqrt();
            Ok(z_h * (num / den).ln())
        }
        _ => {
            let phi = (z / z_star).min(1.0).asin();
            let v = quad.integrate(0.0, phi, |theta| {
                let s = theta.sin();
                s / geom.f_raw(z_star * s).sqrt()
            })?;
            Ok(z_star * v)
        }
    }
}
