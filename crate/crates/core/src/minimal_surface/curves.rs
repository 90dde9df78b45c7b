//! Parametrized bulk curves and the minimal geodesic distance between them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{HoloError, Result};
use crate::geometry::BulkGeometry;
use crate::quadrature::QuadratureSpec;
use crate::roots::golden_section;

use super::geodesic::{arc_offset, bulk_geodesic_distance, BulkPoint};
use super::strip::{strip_solution, Branch};

/// Grid resolution of the coarse scan in [`min_distance_between_curves`].
pub const CURVE_GRID: usize = 64;

const PARAM_FLOOR: f64 = 1e-12;

/// A bulk curve parametrized by `s` in `(0, 1)`.
pub trait BulkCurve: Sync {
    fn point(&self, s: f64) -> Result<BulkPoint>;
}

/// RT geodesic of a `d = 2` interval `[a, b]`, given by its turning depth.
#[derive(Debug, Clone)]
pub struct RtArc {
    geom: BulkGeometry,
    quad: QuadratureSpec,
    pub a: f64,
    pub b: f64,
    pub z_star: f64,
}

impl RtArc {
    pub fn new(
        geom: &BulkGeometry,
        a: f64,
        b: f64,
        z_star: f64,
        quad: &QuadratureSpec,
    ) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(HoloError::domain(format!(
                "arc anchors [{a}, {b}] are not ordered"
            )));
        }
        if !geom.contains_depth(z_star) {
            return Err(HoloError::domain(format!(
                "turning depth {z_star} is outside the {} bulk",
                geom.label()
            )));
        }
        Ok(Self {
            geom: geom.clone(),
            quad: *quad,
            a,
            b,
            z_star,
        })
    }
}

impl BulkCurve for RtArc {
    fn point(&self, s: f64) -> Result<BulkPoint> {
        let s = s.clamp(PARAM_FLOOR, 1.0 - PARAM_FLOOR);
        let z = self.z_star * (PI * s).sin();
        let offset = arc_offset(&self.geom, self.z_star, z, &self.quad)?;
        let x = if s <= 0.5 {
            self.a + offset
        } else {
            self.b - offset
        };
        Ok(BulkPoint::new(x, z))
    }
}

/// Wall branch of an interval in a hard-wall geometry: the vertical line at
/// `a`, the wall segment `z = z_w` and the vertical line at `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WallContour {
    pub a: f64,
    pub b: f64,
    pub z_w: f64,
}

impl BulkCurve for WallContour {
    fn point(&self, s: f64) -> Result<BulkPoint> {
        let s = s.clamp(PARAM_FLOOR, 1.0 - PARAM_FLOOR);
        let total = 2.0 * self.z_w + (self.b - self.a);
        let p = s * total;
        Ok(if p <= self.z_w {
            BulkPoint::new(self.a, p)
        } else if p <= self.z_w + (self.b - self.a) {
            BulkPoint::new(self.a + (p - self.z_w), self.z_w)
        } else {
            BulkPoint::new(self.b, total - p)
        })
    }
}

/// The minimal RT curve of a `d = 2` interval at cutoff `eps`.
#[derive(Debug, Clone)]
pub enum RtCurve {
    Arc(RtArc),
    Wall(WallContour),
}

impl RtCurve {
    pub fn of_interval(
        geom: &BulkGeometry,
        a: f64,
        b: f64,
        eps: f64,
        quad: &QuadratureSpec,
    ) -> Result<Self> {
        let sol = strip_solution(geom, b - a, eps, quad)?;
        match sol.branch {
            Branch::ConnectedU => Ok(Self::Arc(RtArc::new(geom, a, b, sol.z_star, quad)?)),
            Branch::WallDisconnected => Ok(Self::Wall(WallContour {
                a,
                b,
                z_w: sol.z_star,
            })),
        }
    }
}

impl BulkCurve for RtCurve {
    fn point(&self, s: f64) -> Result<BulkPoint> {
        match self {
            Self::Arc(c) => c.point(s),
            Self::Wall(c) => c.point(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveDistance {
    pub distance: f64,
    pub s: f64,
    pub t: f64,
}

/// Minimum of the bulk geodesic distance between points of two curves.
///
/// A `64 x 64` scan over cell centres picks the starting cell, then
/// golden-section searches alternate between the two parameters.
pub fn min_distance_between_curves<C1, C2>(
    geom: &BulkGeometry,
    curve1: &C1,
    curve2: &C2,
    quad: &QuadratureSpec,
) -> Result<CurveDistance>
where
    C1: BulkCurve + ?Sized,
    C2: BulkCurve + ?Sized,
{
    let h = 1.0 / CURVE_GRID as f64;
    let centres: Vec<f64> = (0..CURVE_GRID).map(|i| (i as f64 + 0.5) * h).collect();
    let pts1 = centres
        .iter()
        .map(|&s| curve1.point(s))
        .collect::<Result<Vec<_>>>()?;
    let pts2 = centres
        .iter()
        .map(|&t| curve2.point(t))
        .collect::<Result<Vec<_>>>()?;

    let mut best = (f64::INFINITY, 0usize, 0usize);
    for (i, &p) in pts1.iter().enumerate() {
        for (j, &q) in pts2.iter().enumerate() {
            let d = bulk_geodesic_distance(geom, p, q, quad)?;
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    if best.0 < 1e-9 {
        return Err(HoloError::domain("curves intersect"));
    }

    let dist = |s: f64, t: f64| -> Result<f64> {
        bulk_geodesic_distance(geom, curve1.point(s)?, curve2.point(t)?, quad)
    };
    let window = |c: f64| ((c - h).max(0.0), (c + h).min(1.0));
    let (mut s, mut t, mut value) = (centres[best.1], centres[best.2], best.0);
    for _ in 0..200 {
        let (lo, hi) = window(s);
        let (s_new, v_s) = golden_section(|x| dist(x, t), lo, hi, 1e-10)?;
        let (lo, hi) = window(t);
        let (t_new, v_t) = golden_section(|y| dist(s_new, y), lo, hi, 1e-10)?;
        let step = (s_new - s).abs().max((t_new - t).abs());
        let candidate = v_s.min(v_t);
        if candidate <= value {
            value = candidate;
            s = s_new;
            t = t_new;
        }
        if step < 1e-10 {
            break;
        }
    }
    if value < 1e-9 {
        return Err(HoloError::domain("curves intersect"));
    }
    Ok(CurveDistance {
        distance: value,
        s,
        t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn semicircle(r: f64) -> RtArc {
        RtArc::new(
            &BulkGeometry::pure_ads(2),
            -r,
            r,
            r,
            &QuadratureSpec::default(),
        )
        .unwrap()
    }

    #[test]
    fn vacuum_arc_is_a_semicircle() {
        let arc = semicircle(0.7);
        for s in [0.1, 0.3, 0.5, 0.8] {
            let p = arc.point(s).unwrap();
            assert!((p.x * p.x + p.z * p.z - 0.49).abs() < 1e-12);
        }
    }

    #[test]
    fn concentric_semicircles() {
        let g = BulkGeometry::pure_ads(2);
        let q = QuadratureSpec::default();
        let d = min_distance_between_curves(&g, &semicircle(2.2), &semicircle(0.2), &q).unwrap();
        assert!((d.distance - 11f64.ln()).abs() < 1e-9, "{d:?}");
        let d =
            min_distance_between_curves(&g, &semicircle(1.0), &semicircle(1f64.exp()), &q).unwrap();
        assert!((d.distance - 1.0).abs() < 1e-9);
    }

    #[test]
    fn identical_curves_intersect() {
        let g = BulkGeometry::pure_ads(2);
        let e = min_distance_between_curves(
            &g,
            &semicircle(1.0),
            &semicircle(1.0),
            &QuadratureSpec::default(),
        );
        assert!(matches!(e, Err(HoloError::Domain(_))));
    }

    #[test]
    fn wall_contour_distance_to_inner_arc() {
        let g = BulkGeometry::hard_wall(2, 0.5);
        let q = QuadratureSpec::default();
        let wall = WallContour {
            a: -2.0,
            b: 2.0,
            z_w: 0.5,
        };
        let d = min_distance_between_curves(&g, &wall, &semicircle(0.1), &q).unwrap();
        assert!((d.distance - 5f64.ln()).abs() < 1e-9, "{d:?}");
    }

    #[test]
    fn btz_arc_closes_at_both_anchors() {
        let g = BulkGeometry::black_brane(2, 1.0);
        let q = QuadratureSpec::default();
        let curve = RtCurve::of_interval(&g, 0.0, 3.0, 0.01, &q).unwrap();
        let left = curve.point(PARAM_FLOOR).unwrap();
        let right = curve.point(1.0).unwrap();
        let apex = curve.point(0.5).unwrap();
        assert!(left.x.abs() < 1e-9 && (right.x - 3.0).abs() < 1e-9);
        assert!((apex.x - 1.5).abs() < 1e-9);
    }
}
