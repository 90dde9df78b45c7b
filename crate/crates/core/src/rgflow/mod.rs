//! Parameter sweeps along the bulk depth direction and their analysis.

pub mod figures;

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::SolutionCache;
use crate::error::{HoloError, Result};
use crate::geometry::{BulkGeometry, GeometryKind, UnitsConvention};
use crate::measures::{Interval, IntervalSet, MeasureEngine, Phase};
use crate::minimal_surface::{strip_solution, width_of_turning_point};
use crate::quadrature::QuadratureSpec;
use crate::roots::bisect_flip;

/// Absolute tolerance of [`locate_transition`] in the sweep parameter.
pub const TRANSITION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Entropy,
    Mi,
    NegativityProxy,
    Multipartite,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 4] = [
        MeasureKind::Entropy,
        MeasureKind::Mi,
        MeasureKind::NegativityProxy,
        MeasureKind::Multipartite,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Entropy => "entropy",
            MeasureKind::Mi => "mi",
            MeasureKind::NegativityProxy => "negativity_proxy",
            MeasureKind::Multipartite => "multipartite",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "entropy" => Ok(MeasureKind::Entropy),
            "mi" => Ok(MeasureKind::Mi),
            "negativity_proxy" | "negativity" => Ok(MeasureKind::NegativityProxy),
            "multipartite" | "i3" => Ok(MeasureKind::Multipartite),
            other => Err(HoloError::Config(format!("unknown measure `{other}`"))),
        }
    }

    /// Which measure decides the phase column when several are requested.
    fn phase_priority(self) -> u8 {
        match self {
            MeasureKind::Mi => 0,
            MeasureKind::NegativityProxy => 1,
            MeasureKind::Multipartite => 2,
            MeasureKind::Entropy => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Every gap of the interval set.
    GapSize,
    /// Every interval length, gaps fixed, first endpoint fixed.
    IntervalLength,
    /// `z_h` of a black brane.
    HorizonDepth,
    /// `z_w` of a hard wall.
    WallDepth,
    /// Turning depth `z*` of the intervals; the energy scale is `1/z*`.
    ProbeDepth,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::GapSize => "gap_size",
            SweepParameter::IntervalLength => "interval_length",
            SweepParameter::HorizonDepth => "horizon_depth",
            SweepParameter::WallDepth => "wall_depth",
            SweepParameter::ProbeDepth => "probe_depth",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gap_size" | "gap" => Ok(SweepParameter::GapSize),
            "interval_length" | "length" => Ok(SweepParameter::IntervalLength),
            "horizon_depth" | "z_h" => Ok(SweepParameter::HorizonDepth),
            "wall_depth" | "z_w" => Ok(SweepParameter::WallDepth),
            "probe_depth" => Ok(SweepParameter::ProbeDepth),
            other => Err(HoloError::Config(format!(
                "unknown sweep parameter `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub intervals: Vec<Interval>,
    pub geometry: BulkGeometry,
    pub cutoff: f64,
    #[serde(default)]
    pub units: UnitsConvention,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(HoloError::Scan(format!(
                "a sweep needs at least 2 steps, got {}",
                self.steps
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(HoloError::Scan(format!(
                "sweep range must satisfy start < stop, got [{}, {}]",
                self.start, self.stop
            )));
        }
        if !(self.cutoff > 0.0 && self.cutoff.is_finite()) {
            return Err(HoloError::NonPositiveParameter {
                name: "cutoff",
                value: self.cutoff,
            });
        }
        IntervalSet::new(self.intervals.clone())?;
        self.units.validate()?;
        self.quadrature.validate()?;
        let fits = match self.parameter {
            SweepParameter::HorizonDepth => {
                matches!(self.geometry.kind, GeometryKind::BlackBrane { .. })
            }
            SweepParameter::WallDepth => {
                matches!(self.geometry.kind, GeometryKind::HardWall { .. })
            }
            SweepParameter::GapSize => self.intervals.len() >= 2,
            _ => true,
        };
        if !fits {
            return Err(HoloError::Config(format!(
                "sweep parameter `{}` does not apply to a {} geometry with {} interval(s)",
                self.parameter.name(),
                self.geometry.label(),
                self.intervals.len()
            )));
        }
        Ok(())
    }

    /// Grid value `i` of `steps`, with both end points hit exactly.
    pub fn grid_value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            return self.stop;
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        self.start + i as f64 * h
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.grid_value(i)).collect()
    }

    /// Geometry and intervals with the sweep parameter set to `value`.
    pub fn instantiate(&self, value: f64) -> Result<(BulkGeometry, Vec<Interval>)> {
        let mut geom = self.geometry.clone();
        let mut intervals = self.intervals.clone();
        match self.parameter {
            SweepParameter::GapSize => {
                let mut left = intervals[0].b;
                for iv in intervals.iter_mut().skip(1) {
                    let len = iv.length();
                    *iv = Interval::new(left + value, left + value + len)?;
                    left = iv.b;
                }
            }
            SweepParameter::IntervalLength => relay(&mut intervals, value)?,
            SweepParameter::HorizonDepth => {
                geom.kind = GeometryKind::BlackBrane { z_h: value };
            }
            SweepParameter::WallDepth => {
                geom.kind = GeometryKind::HardWall { z_w: value };
            }
            SweepParameter::ProbeDepth => {
                let width = width_of_turning_point(&geom, value, &self.quadrature)?;
                relay(&mut intervals, width)?;
            }
        }
        Ok((geom, intervals))
    }
}

/// Resizes every interval to `len`, keeping the first endpoint and the gaps.
fn relay(intervals: &mut [Interval], len: f64) -> Result<()> {
    let gaps: Vec<f64> = intervals.windows(2).map(|w| w[1].a - w[0].b).collect();
    let mut a = intervals[0].a;
    for (i, iv) in intervals.iter_mut().enumerate() {
        *iv = Interval::new(a, a + len)?;
        if let Some(g) = gaps.get(i) {
            a = iv.b + g;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    #[serde(rename = "parameter")]
    pub parameter_value: f64,
    pub entropy: Option<f64>,
    pub mi: Option<f64>,
    pub negativity_proxy: Option<f64>,
    pub multipartite: Option<f64>,
    pub phase: Option<Phase>,
    pub rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ScanRecord {
    fn empty(parameter_value: f64) -> Self {
        Self {
            parameter_value,
            entropy: None,
            mi: None,
            negativity_proxy: None,
            multipartite: None,
            phase: None,
            rate: None,
            error: None,
        }
    }

    pub fn field(&self, kind: MeasureKind) -> Option<f64> {
        match kind {
            MeasureKind::Entropy => self.entropy,
            MeasureKind::Mi => self.mi,
            MeasureKind::NegativityProxy => self.negativity_proxy,
            MeasureKind::Multipartite => self.multipartite,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ScanOptions {
    pub parallel: bool,
    pub cache: Option<Arc<SolutionCache>>,
}

/// A measure value together with the phase it was evaluated in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasedValue {
    pub value: f64,
    pub phase: Phase,
}

fn engine_for(spec: &SweepSpec, geom: BulkGeometry, opts: &ScanOptions) -> Result<MeasureEngine> {
    let engine = MeasureEngine::new(geom, spec.units, spec.quadrature)?;
    Ok(match &opts.cache {
        Some(c) => engine.with_cache(c.clone()),
        None => engine,
    })
}

fn need(intervals: &[Interval], n: usize, kind: MeasureKind) -> Result<()> {
    if intervals.len() < n {
        return Err(HoloError::Config(format!(
            "measure `{}` needs {n} intervals, got {}",
            kind.name(),
            intervals.len()
        )));
    }
    Ok(())
}

/// Evaluates one measure at one instantiated configuration.
pub fn evaluate_measure(
    engine: &MeasureEngine,
    intervals: &[Interval],
    kind: MeasureKind,
    eps: f64,
) -> Result<PhasedValue> {
    match kind {
        MeasureKind::Entropy => {
            if intervals.len() == 1 || engine.geometry().d != 2 {
                if intervals.len() != 1 {
                    return Err(HoloError::domain(
                        "union entropies of several strips are only defined for d = 2",
                    ));
                }
                let sol = match engine.geometry().d {
                    2 => engine.chord(intervals[0].length(), eps)?,
                    _ => strip_solution(
                        engine.geometry(),
                        intervals[0].length(),
                        eps,
                        engine.quadrature(),
                    )?,
                };
                Ok(PhasedValue {
                    value: sol.area_reg / engine.units().four_g_n,
                    phase: sol.branch.into(),
                })
            } else {
                let set = IntervalSet::new(intervals.to_vec())?;
                let u = engine.union_entropy_intervals(&set, eps)?;
                let phase = if u.is_disconnected(&set) {
                    Phase::Disconnected
                } else {
                    Phase::Connected
                };
                Ok(PhasedValue {
                    value: u.entropy,
                    phase,
                })
            }
        }
        MeasureKind::Mi => {
            need(intervals, 2, kind)?;
            let r = engine.mutual_information(intervals[0], intervals[1], eps)?;
            Ok(PhasedValue {
                value: r.value,
                phase: r.phase,
            })
        }
        MeasureKind::NegativityProxy => {
            need(intervals, 2, kind)?;
            let r = engine.negativity_proxy(intervals[0], intervals[1], eps)?;
            Ok(PhasedValue {
                value: r.value,
                phase: r.phase,
            })
        }
        MeasureKind::Multipartite => {
            need(intervals, 3, kind)?;
            let m =
                engine.multipartite_correlation(intervals[0], intervals[1], intervals[2], eps)?;
            let set = IntervalSet::new(intervals[..3].to_vec())?;
            let u = engine.union_entropy_intervals(&set, eps)?;
            let phase = if u.is_disconnected(&set) {
                Phase::Disconnected
            } else {
                Phase::Connected
            };
            Ok(PhasedValue { value: m, phase })
        }
    }
}

fn evaluate_point(
    spec: &SweepSpec,
    value: f64,
    measures: &[MeasureKind],
    opts: &ScanOptions,
) -> ScanRecord {
    let mut record = ScanRecord::empty(value);
    let outcome = (|| -> Result<()> {
        let (geom, intervals) = spec.instantiate(value)?;
        let engine = engine_for(spec, geom, opts)?;
        let mut phase_rank = u8::MAX;
        for &kind in measures {
            let v = evaluate_measure(&engine, &intervals, kind, spec.cutoff)?;
            match kind {
                MeasureKind::Entropy => record.entropy = Some(v.value),
                MeasureKind::Mi => record.mi = Some(v.value),
                MeasureKind::NegativityProxy => record.negativity_proxy = Some(v.value),
                MeasureKind::Multipartite => record.multipartite = Some(v.value),
            }
            if kind.phase_priority() < phase_rank {
                phase_rank = kind.phase_priority();
                record.phase = Some(v.phase);
            }
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        record = ScanRecord::empty(value);
        record.error = Some(e.to_string());
    }
    record
}

fn canonical_measures(measures: &[MeasureKind]) -> Result<Vec<MeasureKind>> {
    let mut m = measures.to_vec();
    m.sort();
    m.dedup();
    if m.is_empty() {
        return Err(HoloError::Config("no measure requested".into()));
    }
    Ok(m)
}

pub fn scan_measure(spec: &SweepSpec, measures: &[MeasureKind]) -> Result<Vec<ScanRecord>> {
    scan_measure_with(spec, measures, &ScanOptions::default())
}

/// Evaluates every requested measure at every grid point. Points that fail
/// carry an error message; the scan fails only if every point fails.
pub fn scan_measure_with(
    spec: &SweepSpec,
    measures: &[MeasureKind],
    opts: &ScanOptions,
) -> Result<Vec<ScanRecord>> {
    spec.validate()?;
    let measures = canonical_measures(measures)?;
    let grid = spec.grid();
    let records: Vec<ScanRecord> = if opts.parallel {
        grid.par_iter()
            .map(|&v| evaluate_point(spec, v, &measures, opts))
            .collect()
    } else {
        grid.iter()
            .map(|&v| evaluate_point(spec, v, &measures, opts))
            .collect()
    };
    if records.iter().all(|r| r.error.is_some()) {
        return Err(HoloError::Scan(
            records[0].error.clone().unwrap_or_default(),
        ));
    }
    Ok(records)
}

/// Parameter value where the phase of `kind` flips inside `bracket`.
pub fn locate_transition(spec: &SweepSpec, kind: MeasureKind, bracket: (f64, f64)) -> Result<f64> {
    locate_transition_with(spec, kind, bracket, &ScanOptions::default())
}

pub fn locate_transition_with(
    spec: &SweepSpec,
    kind: MeasureKind,
    bracket: (f64, f64),
    opts: &ScanOptions,
) -> Result<f64> {
    spec.validate()?;
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(HoloError::Bracket { lo, hi });
    }
    let connected = |value: f64| -> Result<bool> {
        let (geom, intervals) = spec.instantiate(value)?;
        let engine = engine_for(spec, geom, opts)?;
        Ok(evaluate_measure(&engine, &intervals, kind, spec.cutoff)?.phase == Phase::Connected)
    };
    bisect_flip(connected, lo, hi, TRANSITION_TOL)
}

/// Fills `rate` with `d(field)/d(parameter)`: central differences inside,
/// second-order one-sided differences at both ends.
pub fn finite_difference_rate(
    records: &[ScanRecord],
    field: MeasureKind,
) -> Result<Vec<ScanRecord>> {
    let n = records.len();
    if n < 3 {
        return Err(HoloError::domain(format!(
            "finite differences need at least 3 records, got {n}"
        )));
    }
    let h = (records[n - 1].parameter_value - records[0].parameter_value) / (n - 1) as f64;
    if !(h > 0.0) {
        return Err(HoloError::domain(
            "records must be in ascending parameter order",
        ));
    }
    for w in records.windows(2) {
        let step = w[1].parameter_value - w[0].parameter_value;
        if (step - h).abs() > 1e-8 * h {
            return Err(HoloError::domain(format!(
                "non-uniform spacing: step {step} differs from {h}"
            )));
        }
    }
    let y: Vec<Option<f64>> = records.iter().map(|r| r.field(field)).collect();
    let combine = |terms: &[(usize, f64)]| -> Option<f64> {
        let mut acc = 0.0;
        for &(i, c) in terms {
            acc += c * y[i]?;
        }
        Some(acc / h)
    };
    let mut out = records.to_vec();
    for (i, r) in out.iter_mut().enumerate() {
        r.rate = if i == 0 {
            combine(&[(0, -1.5), (1, 2.0), (2, -0.5)])
        } else if i == n - 1 {
            combine(&[(n - 3, 0.5), (n - 2, -2.0), (n - 1, 1.5)])
        } else {
            combine(&[(i - 1, -0.5), (i + 1, 0.5)])
        };
    }
    Ok(out)
}

/// `nu = 1 / sqrt(m^2 + 1/L^2)`, taken literally with `m^2` and `L^-2` in
/// the same units.
pub fn critical_exponent(m_squared: f64, radius: f64) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(HoloError::NonPositiveParameter {
            name: "L",
            value: radius,
        });
    }
    let s = m_squared + 1.0 / (radius * radius);
    if !(s > 0.0) || !s.is_finite() {
        return Err(HoloError::domain(format!(
            "m^2 + 1/L^2 = {s} is not positive; the exponent is undefined"
        )));
    }
    Ok(1.0 / s.sqrt())
}
