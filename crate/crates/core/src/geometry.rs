//! Static planar bulk geometries
//! `ds^2 = (L^2/z^2) (-f(z) dt^2 + dx_i^2 + dz^2/f(z))` with the boundary at
//! `z = 0` and the interior at large `z`.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{HoloError, Result};

/// Tolerance on `|f - 1|` at the shallowest tabulated sample.
pub const ASYMPTOTIC_TOL: f64 = 1e-6;

/// Wall depth used when a hard-wall descriptor omits `z_w`.
pub const DEFAULT_WALL_DEPTH: f64 = 0.5;

fn default_radius() -> f64 {
    1.0
}

fn default_dimension() -> u32 {
    2
}

fn default_wall_depth() -> f64 {
    DEFAULT_WALL_DEPTH
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BulkGeometry {
    /// AdS radius.
    #[serde(rename = "L", default = "default_radius")]
    pub radius: f64,
    /// Boundary spacetime dimension; the bulk has `d + 1` dimensions.
    #[serde(default = "default_dimension")]
    pub d: u32,
    #[serde(flatten)]
    pub kind: GeometryKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeometryKind {
    PureAds,
    /// `f = 1 - (z/z_h)^d`.
    BlackBrane {
        z_h: f64,
    },
    /// Space truncated at `z = z_w`; `f` stays 1.
    HardWall {
        #[serde(default = "default_wall_depth")]
        z_w: f64,
    },
    Tabulated {
        profile: TabulatedProfile,
    },
}

impl BulkGeometry {
    pub fn pure_ads(d: u32) -> Self {
        Self {
            radius: 1.0,
            d,
            kind: GeometryKind::PureAds,
        }
    }

    pub fn black_brane(d: u32, z_h: f64) -> Self {
        Self {
            radius: 1.0,
            d,
            kind: GeometryKind::BlackBrane { z_h },
        }
    }

    pub fn hard_wall(d: u32, z_w: f64) -> Self {
        Self {
            radius: 1.0,
            d,
            kind: GeometryKind::HardWall { z_w },
        }
    }

    pub fn tabulated(d: u32, samples: Vec<(f64, f64)>) -> Self {
        Self {
            radius: 1.0,
            d,
            kind: GeometryKind::Tabulated {
                profile: TabulatedProfile::from_samples(samples),
            },
        }
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    pub fn label(&self) -> &'static str {
        match self.kind {
            GeometryKind::PureAds => "pure_ads",
            GeometryKind::BlackBrane { .. } => "black_brane",
            GeometryKind::HardWall { .. } => "hard_wall",
            GeometryKind::Tabulated { .. } => "tabulated",
        }
    }

    /// Deepest admissible depth, if the space does not extend to infinity.
    pub fn depth_limit(&self) -> Option<f64> {
        match &self.kind {
            GeometryKind::PureAds => None,
            GeometryKind::BlackBrane { z_h } => Some(*z_h),
            GeometryKind::HardWall { z_w } => Some(*z_w),
            GeometryKind::Tabulated { profile } => Some(profile.max_depth()),
        }
    }

    pub fn wall_depth(&self) -> Option<f64> {
        match self.kind {
            GeometryKind::HardWall { z_w } => Some(z_w),
            _ => None,
        }
    }

    /// `true` when `f` is identically 1 on the whole domain.
    pub fn is_conformally_flat_slice(&self) -> bool {
        matches!(
            self.kind,
            GeometryKind::PureAds | GeometryKind::HardWall { .. }
        )
    }

    /// Whether `z` is a point of the bulk where `f > 0` (horizons excluded,
    /// walls included).
    pub fn contains_depth(&self, z: f64) -> bool {
        if !(z > 0.0 && z.is_finite()) {
            return false;
        }
        match &self.kind {
            GeometryKind::PureAds => true,
            GeometryKind::BlackBrane { z_h } => z < *z_h,
            GeometryKind::HardWall { z_w } => z <= *z_w,
            GeometryKind::Tabulated { profile } => {
                let zmax = profile.max_depth();
                if profile.has_horizon() {
                    z < zmax
                } else {
                    z <= zmax
                }
            }
        }
    }

    /// `f(z)` without domain checks. Callers guarantee `0 < z <= depth_limit`.
    #[inline]
    pub(crate) fn f_raw(&self, z: f64) -> f64 {
        match &self.kind {
            GeometryKind::PureAds | GeometryKind::HardWall { .. } => 1.0,
            GeometryKind::BlackBrane { z_h } => one_minus_power(z / z_h, self.d),
            GeometryKind::Tabulated { profile } => profile.eval(z),
        }
    }

    /// `1 - f(z)` without cancellation for the analytic profiles.
    #[inline]
    pub(crate) fn one_minus_f_raw(&self, z: f64) -> f64 {
        match &self.kind {
            GeometryKind::PureAds | GeometryKind::HardWall { .. } => 0.0,
            GeometryKind::BlackBrane { z_h } => (z / z_h).powi(self.d as i32),
            GeometryKind::Tabulated { profile } => 1.0 - profile.eval(z),
        }
    }

    /// Stable identifier derived from the canonical serialized form.
    pub fn geometry_id(&self) -> String {
        let digest = self.digest();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    fn digest(&self) -> [u8; 32] {
        let canonical = serde_json::to_string(self).expect("geometry serializes");
        Sha256::digest(canonical.as_bytes()).into()
    }
}

/// `1 - r^d` evaluated as `(1 - r)(1 + r + ... + r^{d-1})` to keep relative
/// precision as `r -> 1`.
#[inline]
fn one_minus_power(r: f64, d: u32) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for _ in 0..d {
        sum += term;
        term *= r;
    }
    (1.0 - r) * sum
}

/// Sampled blackening profile with monotone cubic (Fritsch-Butland)
/// interpolation. The AdS boundary value `f(0) = 1` is used as an anchor
/// when the first sample sits at positive depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct TabulatedProfile {
    samples: Vec<(f64, f64)>,
    knots_z: Vec<f64>,
    knots_f: Vec<f64>,
    slopes: Vec<f64>,
}

impl From<Vec<(f64, f64)>> for TabulatedProfile {
    fn from(samples: Vec<(f64, f64)>) -> Self {
        Self::from_samples(samples)
    }
}

impl From<TabulatedProfile> for Vec<(f64, f64)> {
    fn from(p: TabulatedProfile) -> Self {
        p.samples
    }
}

impl TabulatedProfile {
    pub fn from_samples(samples: Vec<(f64, f64)>) -> Self {
        let mut knots_z = Vec::with_capacity(samples.len() + 1);
        let mut knots_f = Vec::with_capacity(samples.len() + 1);
        if samples.first().is_some_and(|&(z, _)| z > 0.0) {
            knots_z.push(0.0);
            knots_f.push(1.0);
        }
        for &(z, f) in &samples {
            knots_z.push(z);
            knots_f.push(f);
        }
        let slopes = pchip_slopes(&knots_z, &knots_f);
        Self {
            samples,
            knots_z,
            knots_f,
            slopes,
        }
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn max_depth(&self) -> f64 {
        self.knots_z.last().copied().unwrap_or(0.0)
    }

    pub fn has_horizon(&self) -> bool {
        self.knots_f.last().is_some_and(|&f| f <= 0.0)
    }

    fn validate(&self) -> Result<()> {
        if self.samples.len() < 2 {
            return Err(HoloError::InvalidProfile(
                "at least two samples are required".into(),
            ));
        }
        for (i, &(z, f)) in self.samples.iter().enumerate() {
            if !(z.is_finite() && f.is_finite()) {
                return Err(HoloError::InvalidProfile(format!(
                    "sample {i} is not finite"
                )));
            }
        }
        let (z0, f0) = self.samples[0];
        if z0 < 0.0 {
            return Err(HoloError::NonPositiveParameter {
                name: "profile depth",
                value: z0,
            });
        }
        if (f0 - 1.0).abs() >= ASYMPTOTIC_TOL {
            return Err(HoloError::NonAsymptoticallyAds(f0));
        }
        for (i, pair) in self.samples.windows(2).enumerate() {
            if pair[1].0 <= pair[0].0 {
                return Err(HoloError::NonMonotoneProfile { index: i + 1 });
            }
        }
        let last = self.samples.len() - 1;
        for (i, &(_, f)) in self.samples.iter().enumerate() {
            if i < last && f <= 0.0 {
                return Err(HoloError::InvalidProfile(format!(
                    "f must be positive before the last sample (sample {i} has f = {f})"
                )));
            }
            if i == last && f < 0.0 {
                return Err(HoloError::InvalidProfile(format!(
                    "last sample has negative f = {f}"
                )));
            }
        }
        Ok(())
    }

    /// Interpolated value; `z` must lie inside the knot range.
    fn eval(&self, z: f64) -> f64 {
        let zs = &self.knots_z;
        let k = match zs.partition_point(|&k| k <= z) {
            0 => 0,
            p if p >= zs.len() => zs.len() - 2,
            p => p - 1,
        };
        let h = zs[k + 1] - zs[k];
        let t = (z - zs[k]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.knots_f[k]
            + h10 * h * self.slopes[k]
            + h01 * self.knots_f[k + 1]
            + h11 * h * self.slopes[k + 1]
    }
}

fn pchip_slopes(z: &[f64], f: &[f64]) -> Vec<f64> {
    let n = z.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let h: Vec<f64> = z.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (f[k + 1] - f[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut m = vec![0.0; n];
    for k in 1..n - 1 {
        let (d0, d1) = (delta[k - 1], delta[k]);
        if d0 * d1 > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            m[k] = (w1 + w2) / (w1 / d0 + w2 / d1);
        }
    }
    m[0] = pchip_end(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = pchip_end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    m
}

fn pchip_end(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

/// Checks every structural invariant of the geometry.
pub fn validate_geometry(geom: &BulkGeometry) -> Result<()> {
    if !(geom.radius > 0.0 && geom.radius.is_finite()) {
        return Err(HoloError::NonPositiveParameter {
            name: "L",
            value: geom.radius,
        });
    }
    if geom.d < 2 {
        return Err(HoloError::domain(format!(
            "boundary dimension d must be at least 2, got {}",
            geom.d
        )));
    }
    match &geom.kind {
        GeometryKind::PureAds => Ok(()),
        GeometryKind::BlackBrane { z_h } => positive("z_h", *z_h),
        GeometryKind::HardWall { z_w } => positive("z_w", *z_w),
        GeometryKind::Tabulated { profile } => profile.validate(),
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(HoloError::NonPositiveParameter { name, value })
    }
}

/// `f(z)`. The horizon itself (`f = 0`) and the wall are admissible.
pub fn blackening_factor(geom: &BulkGeometry, z: f64) -> Result<f64> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(HoloError::domain(format!(
            "depth must be positive, got {z}"
        )));
    }
    if let Some(limit) = geom.depth_limit() {
        if z > limit {
            return Err(HoloError::domain(format!(
                "depth {z} lies beyond the {} domain edge at {limit}",
                geom.label()
            )));
        }
    }
    Ok(geom.f_raw(z))
}

/// Horizon depth, where `f` vanishes. A hard wall is not a horizon.
pub fn horizon_depth(geom: &BulkGeometry) -> Option<f64> {
    match &geom.kind {
        GeometryKind::BlackBrane { z_h } => Some(*z_h),
        GeometryKind::Tabulated { profile } if profile.has_horizon() => Some(profile.max_depth()),
        _ => None,
    }
}

/// Boundary energy scale `mu = 1/z` associated with bulk depth `z`.
pub fn energy_scale_of_depth(z: f64) -> Result<f64> {
    if z > 0.0 && z.is_finite() {
        Ok(1.0 / z)
    } else {
        Err(HoloError::domain(format!(
            "energy scale needs a positive depth, got {z} (z = 0 is the UV boundary)"
        )))
    }
}

/// Normalization of entropies: `S = Area / (4 G_N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsConvention {
    #[serde(rename = "four_G_N", default = "default_radius")]
    pub four_g_n: f64,
}

impl Default for UnitsConvention {
    fn default() -> Self {
        Self { four_g_n: 1.0 }
    }
}

impl UnitsConvention {
    pub fn new(four_g_n: f64) -> Result<Self> {
        positive("four_G_N", four_g_n)?;
        Ok(Self { four_g_n })
    }

    pub fn validate(&self) -> Result<()> {
        positive("four_G_N", self.four_g_n)
    }

    /// Brown-Henneaux central charge `c = 3L / (2 G_N)`.
    pub fn central_charge(&self, radius: f64) -> f64 {
        3.0 * radius / (2.0 * (self.four_g_n / 4.0))
    }
}
