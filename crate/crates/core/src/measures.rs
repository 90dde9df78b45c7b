//! Entanglement measures of boundary interval configurations.
//!
//! All multi-interval quantities are built from one primitive: the entropy
//! of a single chord, i.e. the RT surface of an interval with the chord's
//! endpoint separation. Unions compete over non-crossing pairings of the
//! endpoints.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cache::{SolutionCache, SolutionKey};
use crate::error::{HoloError, Result};
use crate::geometry::{validate_geometry, BulkGeometry, UnitsConvention};
use crate::minimal_surface::{
    min_distance_between_curves, strip_solution, Branch, RtCurve, TurningPointSolution,
};
use crate::quadrature::QuadratureSpec;

/// Largest number of intervals accepted by the union competition.
pub const MAX_UNION_INTERVALS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(f64, f64)", into = "(f64, f64)")]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(HoloError::domain(format!(
                "[{a}, {b}] is not a proper interval"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }
}

impl TryFrom<(f64, f64)> for Interval {
    type Error = HoloError;

    fn try_from((a, b): (f64, f64)) -> Result<Self> {
        Self::new(a, b)
    }
}

impl From<Interval> for (f64, f64) {
    fn from(iv: Interval) -> Self {
        (iv.a, iv.b)
    }
}

/// Sorted, pairwise disjoint intervals with strictly positive gaps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(HoloError::domain(
                "an interval set needs at least one interval",
            ));
        }
        for iv in &intervals {
            Interval::new(iv.a, iv.b)?;
        }
        for pair in intervals.windows(2) {
            if !(pair[0].b < pair[1].a) {
                return Err(HoloError::domain(format!(
                    "intervals [{}, {}] and [{}, {}] overlap or are out of order",
                    pair[0].a, pair[0].b, pair[1].a, pair[1].b
                )));
            }
        }
        Ok(Self { intervals })
    }

    /// Sorts by left endpoint before validating.
    pub fn from_unsorted(mut intervals: Vec<Interval>) -> Result<Self> {
        intervals.sort_by(|x, y| x.a.total_cmp(&y.a));
        Self::new(intervals)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    fn endpoints(&self) -> Vec<f64> {
        self.intervals.iter().flat_map(|iv| [iv.a, iv.b]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Connected,
    Disconnected,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Connected => "connected",
            Phase::Disconnected => "disconnected",
        }
    }
}

impl From<Branch> for Phase {
    fn from(b: Branch) -> Self {
        match b {
            Branch::ConnectedU => Phase::Connected,
            Branch::WallDisconnected => Phase::Disconnected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureResult {
    /// Reported value: clamped at 0, and exactly 0 in the disconnected phase.
    pub value: f64,
    /// Unclamped connected-minus-disconnected difference.
    pub raw: f64,
    pub phase: Phase,
    pub cutoff: f64,
    pub geometry_id: String,
}

/// Minimal union entropy together with the winning chords.
#[derive(Debug, Clone, PartialEq)]
pub struct UnionEntropy {
    pub entropy: f64,
    pub chords: Vec<(f64, f64)>,
}

impl UnionEntropy {
    /// `true` when every chord spans exactly one of the intervals.
    pub fn is_disconnected(&self, set: &IntervalSet) -> bool {
        self.chords.len() == set.len()
            && self
                .chords
                .iter()
                .zip(set.intervals())
                .all(|(&(x, y), iv)| x == iv.a && y == iv.b)
    }
}

/// Evaluation context shared by all measures of one geometry.
#[derive(Debug, Clone)]
pub struct MeasureEngine {
    geom: BulkGeometry,
    units: UnitsConvention,
    quad: QuadratureSpec,
    geometry_id: String,
    cache: Option<Arc<SolutionCache>>,
}

impl MeasureEngine {
    pub fn new(geom: BulkGeometry, units: UnitsConvention, quad: QuadratureSpec) -> Result<Self> {
        validate_geometry(&geom)?;
        units.validate()?;
        quad.validate()?;
        let geometry_id = geom.geometry_id();
        Ok(Self {
            geom,
            units,
            quad,
            geometry_id,
            cache: None,
        })
    }

    pub fn with_cache(mut self, cache: Arc<SolutionCache>) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn geometry(&self) -> &BulkGeometry {
        &self.geom
    }

    pub fn units(&self) -> &UnitsConvention {
        &self.units
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quad
    }

    pub fn geometry_id(&self) -> &str {
        &self.geometry_id
    }

    fn require_intervals(&self) -> Result<()> {
        if self.geom.d != 2 {
            return Err(HoloError::domain(format!(
                "interval measures need d = 2, got d = {}; use strip entropies instead",
                self.geom.d
            )));
        }
        Ok(())
    }

    /// RT surface of a single chord of length `width`.
    pub fn chord(&self, width: f64, eps: f64) -> Result<TurningPointSolution> {
        match &self.cache {
            Some(cache) => cache.get_or_try_insert(
                SolutionKey::new(&self.geometry_id, width, eps, &self.quad),
                || strip_solution(&self.geom, width, eps, &self.quad),
            ),
            None => strip_solution(&self.geom, width, eps, &self.quad),
        }
    }

    fn chord_entropy(&self, width: f64, eps: f64) -> Result<f64> {
        Ok(self.chord(width, eps)?.area_reg / self.units.four_g_n)
    }

    pub fn entanglement_entropy_interval(&self, interval: Interval, eps: f64) -> Result<f64> {
        self.require_intervals()?;
        let iv = Interval::new(interval.a, interval.b)?;
        self.chord_entropy(iv.length(), eps)
    }

    /// Minimum over non-crossing perfect matchings of the `2n` endpoints.
    /// Ties resolve towards pairing each endpoint with its nearest
    /// right neighbour, hence towards the disconnected configuration.
    pub fn union_entropy_intervals(&self, set: &IntervalSet, eps: f64) -> Result<UnionEntropy> {
        self.require_intervals()?;
        if set.len() > MAX_UNION_INTERVALS {
            return Err(HoloError::domain(format!(
                "union competition supports at most {MAX_UNION_INTERVALS} intervals, got {}",
                set.len()
            )));
        }
        let pts = set.endpoints();
        let m = pts.len();
        let mut chord = vec![vec![f64::NAN; m]; m];
        for i in 0..m {
            for k in ((i + 1)..m).step_by(2) {
                chord[i][k] = self.chord_entropy(pts[k] - pts[i], eps)?;
            }
        }

        // best[i][j]: optimum over endpoints i..j (exclusive j), choice[i][j]: partner of i
        let mut best = vec![vec![0.0; m + 1]; m + 1];
        let mut choice = vec![vec![usize::MAX; m + 1]; m + 1];
        for len in (2..=m).step_by(2) {
            for i in 0..=(m - len) {
                let j = i + len;
                let mut value = f64::INFINITY;
                for k in ((i + 1)..j).step_by(2) {
                    let v = chord[i][k] + best[i + 1][k] + best[k + 1][j];
                    if v < value {
                        value = v;
                        choice[i][j] = k;
                    }
                }
                best[i][j] = value;
            }
        }

        let mut chords = Vec::with_capacity(set.len());
        let mut stack = vec![(0usize, m)];
        while let Some((i, j)) = stack.pop() {
            if i >= j {
                continue;
            }
            let k = choice[i][j];
            chords.push((pts[i], pts[k]));
            stack.push((k + 1, j));
            stack.push((i + 1, k));
        }
        chords.sort_by(|x, y| x.0.total_cmp(&y.0));
        Ok(UnionEntropy {
            entropy: best[0][m],
            chords,
        })
    }

    fn ordered_pair(a: Interval, b: Interval) -> Result<IntervalSet> {
        IntervalSet::from_unsorted(vec![a, b])
    }

    pub fn mutual_information(&self, a: Interval, b: Interval, eps: f64) -> Result<MeasureResult> {
        self.require_intervals()?;
        let set = Self::ordered_pair(a, b)?;
        let [x, y] = [set.intervals()[0], set.intervals()[1]];
        let disc = self.chord_entropy(x.length(), eps)? + self.chord_entropy(y.length(), eps)?;
        let conn = self.chord_entropy(y.b - x.a, eps)? + self.chord_entropy(y.a - x.b, eps)?;
        let raw = disc - conn;
        let phase = if conn < disc {
            Phase::Connected
        } else {
            Phase::Disconnected
        };
        let value = match phase {
            Phase::Connected => raw.max(0.0),
            Phase::Disconnected => 0.0,
        };
        Ok(self.result(value, raw, phase, eps))
    }

    fn result(&self, value: f64, raw: f64, phase: Phase, eps: f64) -> MeasureResult {
        MeasureResult {
            value,
            raw,
            phase,
            cutoff: eps,
            geometry_id: self.geometry_id.clone(),
        }
    }

    /// Minimal cross section of the connected entanglement wedge of
    /// `A ∪ B`, in units of the AdS radius times length. Zero when the wedge
    /// is disconnected.
    pub fn entanglement_wedge_cross_section(
        &self,
        a: Interval,
        b: Interval,
        eps: f64,
    ) -> Result<f64> {
        Ok(self.ewcs_with_phase(a, b, eps)?.0)
    }

    fn ewcs_with_phase(&self, a: Interval, b: Interval, eps: f64) -> Result<(f64, Phase)> {
        let mi = self.mutual_information(a, b, eps)?;
        if mi.phase == Phase::Disconnected {
            return Ok((0.0, mi.phase));
        }
        let set = Self::ordered_pair(a, b)?;
        let [x, y] = [set.intervals()[0], set.intervals()[1]];
        let outer = RtCurve::of_interval(&self.geom, x.a, y.b, eps, &self.quad)?;
        let inner = RtCurve::of_interval(&self.geom, x.b, y.a, eps, &self.quad)?;
        let d = min_distance_between_curves(&self.geom, &outer, &inner, &self.quad)?;
        Ok((d.distance, mi.phase))
    }

    /// `X = (3/2) E_W / (4 G_N)`, a geometric stand-in for the negativity.
    pub fn negativity_proxy(&self, a: Interval, b: Interval, eps: f64) -> Result<MeasureResult> {
        let (ew, phase) = self.ewcs_with_phase(a, b, eps)?;
        let x = 1.5 * ew / self.units.four_g_n;
        Ok(self.result(x, x, phase, eps))
    }

    /// `I3 = I(A,B) + I(A,C) - I(A,BC)` in terms of union entropies.
    pub fn tripartite_information(
        &self,
        a: Interval,
        b: Interval,
        c: Interval,
        eps: f64,
    ) -> Result<f64> {
        self.require_intervals()?;
        let abc = IntervalSet::from_unsorted(vec![a, b, c])?;
        let s = |ivs: Vec<Interval>| -> Result<f64> {
            Ok(self
                .union_entropy_intervals(&IntervalSet::from_unsorted(ivs)?, eps)?
                .entropy)
        };
        let s_a = s(vec![a])?;
        let s_b = s(vec![b])?;
        let s_c = s(vec![c])?;
        let s_ab = s(vec![a, b])?;
        let s_ac = s(vec![a, c])?;
        let s_bc = s(vec![b, c])?;
        let s_abc = self.union_entropy_intervals(&abc, eps)?.entropy;
        Ok((s_a + s_b + s_c) - (s_ab + s_ac + s_bc) + s_abc)
    }

    /// `M = -I3`, floored at zero.
    pub fn multipartite_correlation(
        &self,
        a: Interval,
        b: Interval,
        c: Interval,
        eps: f64,
    ) -> Result<f64> {
        Ok((-self.tripartite_information(a, b, c, eps)?).max(0.0))
    }
}

fn engine(geom: &BulkGeometry, quad: &QuadratureSpec) -> Result<MeasureEngine> {
    MeasureEngine::new(geom.clone(), UnitsConvention::default(), *quad)
}

pub fn entanglement_entropy_interval(
    geom: &BulkGeometry,
    interval: Interval,
    eps: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    engine(geom, quad)?.entanglement_entropy_interval(interval, eps)
}

pub fn union_entropy_intervals(
    geom: &BulkGeometry,
    set: &IntervalSet,
    eps: f64,
    quad: &QuadratureSpec,
) -> Result<UnionEntropy> {
    engine(geom, quad)?.union_entropy_intervals(set, eps)
}

pub fn mutual_information(
    geom: &BulkGeometry,
    a: Interval,
    b: Interval,
    eps: f64,
    quad: &QuadratureSpec,
) -> Result<MeasureResult> {
    engine(geom, quad)?.mutual_information(a, b, eps)
}

pub fn entanglement_wedge_cross_section(
    geom: &BulkGeometry,
    a: Interval,
    b: Interval,
    eps: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    engine(geom, quad)?.entanglement_wedge_cross_section(a, b, eps)
}

pub fn negativity_proxy(
    geom: &BulkGeometry,
    a: Interval,
    b: Interval,
    eps: f64,
    units: &UnitsConvention,
    quad: &QuadratureSpec,
) -> Result<MeasureResult> {
    MeasureEngine::new(geom.clone(), *units, *quad)?.negativity_proxy(a, b, eps)
}

pub fn tripartite_information(
    geom: &BulkGeometry,
    a: Interval,
    b: Interval,
    c: Interval,
    eps: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    engine(geom, quad)?.tripartite_information(a, b, c, eps)
}

pub fn multipartite_correlation(
    geom: &BulkGeometry,
    a: Interval,
    b: Interval,
    c: Interval,
    eps: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    engine(geom, quad)?.multipartite_correlation(a, b, c, eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    fn vacuum() -> MeasureEngine {
        MeasureEngine::new(
            BulkGeometry::pure_ads(2),
            UnitsConvention::default(),
            QuadratureSpec::default(),
        )
        .unwrap()
    }

    #[test]
    fn interval_entropy_examples() {
        let e = vacuum();
        let s = e.entanglement_entropy_interval(iv(0.0, 1.0), 0.01).unwrap();
        assert!((s - 9.210340).abs() < 1e-6);
        assert_eq!(
            s,
            e.entanglement_entropy_interval(iv(5.0, 6.0), 0.01).unwrap()
        );
        let btz = MeasureEngine::new(
            BulkGeometry::black_brane(2, 1.0),
            UnitsConvention::default(),
            QuadratureSpec::default(),
        )
        .unwrap();
        let s = btz
            .entanglement_entropy_interval(iv(0.0, 1.0), 0.01)
            .unwrap();
        assert!((s - 2.0 * (200.0 * 0.5f64.sinh()).ln()).abs() < 1e-9);
    }

    #[test]
    fn interval_measures_need_two_dimensions() {
        let e = MeasureEngine::new(
            BulkGeometry::pure_ads(3),
            UnitsConvention::default(),
            QuadratureSpec::default(),
        )
        .unwrap();
        assert!(matches!(
            e.entanglement_entropy_interval(iv(0.0, 1.0), 0.01),
            Err(HoloError::Domain(_))
        ));
    }

    #[test]
    fn interval_set_validation() {
        assert!(IntervalSet::new(vec![iv(0.0, 1.0), iv(0.5, 2.0)]).is_err());
        assert!(IntervalSet::new(vec![iv(0.0, 1.0), iv(1.0, 2.0)]).is_err());
        assert!(IntervalSet::new(vec![iv(2.0, 3.0), iv(0.0, 1.0)]).is_err());
        assert!(IntervalSet::from_unsorted(vec![iv(2.0, 3.0), iv(0.0, 1.0)]).is_ok());
        assert!(Interval::new(1.0, 1.0).is_err());
    }

    #[test]
    fn union_examples() {
        let e = vacuum();
        let set = IntervalSet::new(vec![iv(0.0, 1.0), iv(2.0, 3.0)]).unwrap();
        let u = e.union_entropy_intervals(&set, 0.01).unwrap();
        assert!(u.is_disconnected(&set));
        assert!((u.entropy - 4.0 * 100f64.ln()).abs() < 1e-9);

        let set = IntervalSet::new(vec![iv(0.0, 1.0), iv(1.1, 2.1), iv(2.2, 3.2)]).unwrap();
        let u = e.union_entropy_intervals(&set, 0.01).unwrap();
        assert!((u.entropy - 20.746982363564).abs() < 1e-9, "{}", u.entropy);
        assert_eq!(u.chords, vec![(0.0, 3.2), (1.0, 1.1), (2.1, 2.2)]);
    }

    #[test]
    fn mutual_information_examples() {
        let e = vacuum();
        let mi = e
            .mutual_information(iv(0.0, 1.0), iv(1.1, 2.1), 0.01)
            .unwrap();
        assert!((mi.value - 2.0 * (1.0f64 / 0.21).ln()).abs() < 1e-12);
        assert!((mi.value - 3.121288).abs() < 1e-5);
        assert_eq!(mi.phase, Phase::Connected);
        let mi = e
            .mutual_information(iv(0.0, 1.0), iv(2.0, 3.0), 0.01)
            .unwrap();
        assert_eq!((mi.value, mi.phase), (0.0, Phase::Disconnected));
        assert!(mi.raw < 0.0);

        let btz = MeasureEngine::new(
            BulkGeometry::black_brane(2, 1.0),
            UnitsConvention::default(),
            QuadratureSpec::default(),
        )
        .unwrap();
        let mi = btz
            .mutual_information(iv(0.0, 1.0), iv(1.1, 2.1), 0.01)
            .unwrap();
        let exact = 2.0 * (2.0 * 0.5f64.sinh().ln() - 0.05f64.sinh().ln() - 1.05f64.sinh().ln());
        assert!((mi.value - exact).abs() < 1e-9);
        assert!((mi.value - 2.930893681464).abs() < 1e-9);
    }

    #[test]
    fn cross_section_examples() {
        let e = vacuum();
        let ew = e
            .entanglement_wedge_cross_section(iv(-2.2, -0.2), iv(0.2, 2.2), 0.01)
            .unwrap();
        assert!((ew - 11f64.ln()).abs() < 1e-9);
        let x = e
            .negativity_proxy(iv(-2.2, -0.2), iv(0.2, 2.2), 0.01)
            .unwrap();
        assert!((x.value - 3.596843).abs() < 1e-6);
        // apex radii 1 and e: the wedge of [-e, -1] and [1, e] is disconnected
        let r = 1f64.exp();
        let ew = e
            .entanglement_wedge_cross_section(iv(-r, -1.0), iv(1.0, r), 0.01)
            .unwrap();
        assert_eq!(ew, 0.0);
        let ew = e
            .entanglement_wedge_cross_section(iv(0.0, 1.0), iv(2.0, 3.0), 0.01)
            .unwrap();
        assert_eq!(ew, 0.0);

        let heavy = MeasureEngine::new(
            BulkGeometry::pure_ads(2),
            UnitsConvention::new(2.0).unwrap(),
            QuadratureSpec::default(),
        )
        .unwrap();
        let xh = heavy
            .negativity_proxy(iv(-2.2, -0.2), iv(0.2, 2.2), 0.01)
            .unwrap();
        assert!((2.0 * xh.value - x.value).abs() < 1e-12);
    }

    #[test]
    fn tripartite_examples() {
        let e = vacuum();
        let (a, b, c) = (iv(0.0, 1.0), iv(1.1, 2.1), iv(2.2, 3.2));
        let i3 = e.tripartite_information(a, b, c, 0.01).unwrap();
        assert!((i3 + 0.641447759306).abs() < 1e-9, "{i3}");
        let m = e.multipartite_correlation(a, b, c, 0.01).unwrap();
        assert!((m + i3).abs() < 1e-15);
        let far = e
            .tripartite_information(iv(0.0, 1.0), iv(10.0, 11.0), iv(20.0, 21.0), 0.01)
            .unwrap();
        assert_eq!(far, 0.0);
    }

    #[test]
    fn cache_does_not_change_results() {
        let cache = Arc::new(SolutionCache::new());
        let cached = vacuum().with_cache(cache.clone());
        let (a, b, c) = (iv(0.0, 1.0), iv(1.1, 2.1), iv(2.2, 3.2));
        let first = cached.tripartite_information(a, b, c, 0.01).unwrap();
        let n = cache.len();
        assert!(n > 0);
        let second = cached.tripartite_information(a, b, c, 0.01).unwrap();
        assert_eq!(cache.len(), n);
        assert_eq!(first, second);
        assert_eq!(
            first,
            vacuum().tripartite_information(a, b, c, 0.01).unwrap()
        );
    }

    #[test]
    fn hard_wall_interval_saturates() {
        let e = MeasureEngine::new(
            BulkGeometry::hard_wall(2, 0.5),
            UnitsConvention::default(),
            QuadratureSpec::default(),
        )
        .unwrap();
        let s = e.entanglement_entropy_interval(iv(0.0, 0.8), 0.01).unwrap();
        assert!((s - 2.0 * 50f64.ln()).abs() < 1e-12);
        // wide intervals close to each other: outer surface sits on the wall
        let mi = e
            .mutual_information(iv(0.0, 1.0), iv(1.05, 2.05), 0.01)
            .unwrap();
        assert_eq!(mi.phase, Phase::Connected);
        let ew = e
            .entanglement_wedge_cross_section(iv(0.0, 1.0), iv(1.05, 2.05), 0.01)
            .unwrap();
        assert!((ew - (0.5f64 / 0.025).ln()).abs() < 1e-9, "{ew}");
    }
}
