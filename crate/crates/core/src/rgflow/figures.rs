//! The five reference sweeps and checks on the shape of their series.
//!
//! Hard-wall sweeps use `z_w = 0.5`; the finite-temperature sweep uses a
//! planar BTZ brane. All runs use `eps = 0.01`.

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{BulkGeometry, UnitsConvention};
use crate::measures::{Interval, Phase};
use crate::quadrature::QuadratureSpec;

use super::{
    finite_difference_rate, scan_measure_with, MeasureKind, ScanOptions, ScanRecord,
    SweepParameter, SweepSpec,
};

pub const FIGURE_NAMES: [&str; 5] = [
    "fig1_mi_vs_size",
    "fig2_negativity_vs_scale",
    "fig3_multipartite_vs_scale",
    "fig4_rate_of_change",
    "fig5_negativity_vs_size",
];

const EPS: f64 = 0.01;
const WALL: f64 = 0.5;

#[derive(Debug, Clone, Serialize)]
pub struct FigureSetup {
    pub name: &'static str,
    pub spec: SweepSpec,
    pub measures: Vec<MeasureKind>,
    /// Measure whose derivative fills the `rate` column.
    pub rate_of: Option<MeasureKind>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureDataset {
    pub setup: FigureSetup,
    pub records: Vec<ScanRecord>,
}

fn iv(a: f64, b: f64) -> Interval {
    Interval::new(a, b).expect("static interval")
}

fn spec(
    parameter: SweepParameter,
    (start, stop, steps): (f64, f64, usize),
    intervals: Vec<Interval>,
    geometry: BulkGeometry,
) -> SweepSpec {
    SweepSpec {
        parameter,
        start,
        stop,
        steps,
        intervals,
        geometry,
        cutoff: EPS,
        units: UnitsConvention::default(),
        quadrature: QuadratureSpec::default(),
    }
}

/// Sweep definitions of all five datasets.
pub fn figure_setups() -> Vec<FigureSetup> {
    let size_pair = vec![iv(0.0, 0.3), iv(0.4, 0.7)];
    let scale_pair = vec![iv(0.0, 0.3), iv(0.48, 0.78)];
    let scale_triple = vec![iv(0.0, 0.3), iv(0.48, 0.78), iv(0.96, 1.26)];
    let wall_sweep = (0.25, 1.0, 60);
    let size_sweep = (0.05, 1.0, 96);
    vec![
        FigureSetup {
            name: FIGURE_NAMES[0],
            spec: spec(
                SweepParameter::IntervalLength,
                size_sweep,
                size_pair.clone(),
                BulkGeometry::hard_wall(2, WALL),
            ),
            measures: vec![MeasureKind::Mi],
            rate_of: Some(MeasureKind::Mi),
        },
        FigureSetup {
            name: FIGURE_NAMES[1],
            spec: spec(
                SweepParameter::WallDepth,
                wall_sweep,
                scale_pair,
                BulkGeometry::hard_wall(2, WALL),
            ),
            measures: vec![MeasureKind::Mi, MeasureKind::NegativityProxy],
            rate_of: None,
        },
        FigureSetup {
            name: FIGURE_NAMES[2],
            spec: spec(
                SweepParameter::WallDepth,
                wall_sweep,
                scale_triple,
                BulkGeometry::hard_wall(2, WALL),
            ),
            measures: vec![MeasureKind::Multipartite],
            rate_of: None,
        },
        FigureSetup {
            name: FIGURE_NAMES[3],
            spec: spec(
                SweepParameter::HorizonDepth,
                (0.3, 1.5, 61),
                vec![iv(0.0, 1.0), iv(1.3, 2.3)],
                BulkGeometry::black_brane(2, 1.0),
            ),
            measures: vec![MeasureKind::Mi],
            rate_of: Some(MeasureKind::Mi),
        },
        FigureSetup {
            name: FIGURE_NAMES[4],
            spec: spec(
                SweepParameter::IntervalLength,
                size_sweep,
                size_pair,
                BulkGeometry::hard_wall(2, WALL),
            ),
            measures: vec![MeasureKind::Mi, MeasureKind::NegativityProxy],
            rate_of: None,
        },
    ]
}

pub fn generate_figure(setup: FigureSetup, opts: &ScanOptions) -> Result<FigureDataset> {
    let mut records = scan_measure_with(&setup.spec, &setup.measures, opts)?;
    if let Some(kind) = setup.rate_of {
        records = finite_difference_rate(&records, kind)?;
    }
    Ok(FigureDataset { setup, records })
}

pub fn generate_figures(opts: &ScanOptions) -> Result<Vec<FigureDataset>> {
    figure_setups()
        .into_iter()
        .map(|s| generate_figure(s, opts))
        .collect()
}

fn series(records: &[ScanRecord], kind: MeasureKind) -> std::result::Result<Vec<f64>, String> {
    records
        .iter()
        .map(|r| {
            r.field(kind).ok_or_else(|| {
                format!(
                    "missing {} at parameter {}: {}",
                    kind.name(),
                    r.parameter_value,
                    r.error.as_deref().unwrap_or("not computed")
                )
            })
        })
        .collect()
}

/// Index of the single phase flip, so that `records[..k]` and
/// `records[k..]` carry different phases.
fn single_flip(records: &[ScanRecord]) -> std::result::Result<(usize, Phase), String> {
    let phases: Vec<Phase> = records
        .iter()
        .map(|r| {
            r.phase
                .ok_or_else(|| format!("no phase at {}", r.parameter_value))
        })
        .collect::<std::result::Result<_, _>>()?;
    let flips: Vec<usize> = (1..phases.len())
        .filter(|&i| phases[i] != phases[i - 1])
        .collect();
    match flips.as_slice() {
        [k] => Ok((*k, phases[0])),
        _ => Err(format!(
            "expected exactly one phase flip, found {}",
            flips.len()
        )),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// MI vanishes below the onset, then grows continuously with a finite
/// jump in slope.
fn check_mi_onset(records: &[ScanRecord]) -> std::result::Result<(), String> {
    let mi = series(records, MeasureKind::Mi)?;
    let (k, first) = single_flip(records)?;
    ensure(first == Phase::Disconnected, || {
        "MI should start disconnected".into()
    })?;
    ensure(mi[..k].iter().all(|&v| v == 0.0), || {
        "MI is not zero before the onset".into()
    })?;
    ensure(mi[k..].iter().all(|&v| v > 0.0), || {
        "MI is not positive after the onset".into()
    })?;
    let top = mi.iter().cloned().fold(0.0, f64::max);
    ensure(mi[k] < 0.1 * top, || {
        format!("MI jumps at the onset ({} of {top})", mi[k])
    })?;
    let rates: Vec<f64> = records.iter().map(|r| r.rate.unwrap_or(f64::NAN)).collect();
    ensure(k >= 2 && k + 2 < rates.len(), || {
        "onset too close to the sweep ends".into()
    })?;
    ensure(rates[k - 2] == 0.0 && rates[k + 1] > 1.0, || {
        format!(
            "no slope change at the onset (rates {} and {})",
            rates[k - 2],
            rates[k + 1]
        )
    })
}

/// Proxy is positive up to the flip and drops to exactly zero in one step
/// while MI goes to zero continuously.
fn check_sharp_drop(records: &[ScanRecord], rising: bool) -> std::result::Result<(), String> {
    let x = series(records, MeasureKind::NegativityProxy)?;
    let mi = series(records, MeasureKind::Mi)?;
    let (k, first) = single_flip(records)?;
    let expected_first = if rising {
        Phase::Disconnected
    } else {
        Phase::Connected
    };
    ensure(first == expected_first, || {
        format!("unexpected initial phase {first:?}")
    })?;
    for (i, (&xv, &mv)) in x.iter().zip(&mi).enumerate() {
        ensure((xv > 0.0) == (mv > 0.0), || {
            format!("proxy and MI disagree on the phase at index {i}")
        })?;
    }
    let top = x.iter().cloned().fold(0.0, f64::max);
    ensure(top > 0.0, || "proxy never positive".into())?;
    let (edge, zero) = if rising {
        (x[k], x[k - 1])
    } else {
        (x[k - 1], x[k])
    };
    ensure(zero == 0.0, || {
        "proxy is not exactly zero past the transition".into()
    })?;
    ensure(edge >= 0.5 * top, || {
        format!("proxy approaches zero smoothly ({edge} of {top})")
    })?;
    let mi_edge = if rising { mi[k] } else { mi[k - 1] };
    let mi_top = mi.iter().cloned().fold(0.0, f64::max);
    ensure(mi_edge < 0.25 * mi_top, || {
        "MI itself jumps at the transition".into()
    })
}

/// Multipartite series rises to an interior maximum near the wall value
/// and falls off on both sides.
fn check_peak(records: &[ScanRecord]) -> std::result::Result<(), String> {
    let m = series(records, MeasureKind::Multipartite)?;
    let (imax, &top) = m
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or("empty series")?;
    ensure(top > 0.0, || {
        "multipartite series is identically zero".into()
    })?;
    ensure(imax > 0 && imax + 1 < m.len(), || {
        "maximum sits on the sweep boundary".into()
    })?;
    let at = records[imax].parameter_value;
    let h = records[1].parameter_value - records[0].parameter_value;
    ensure((at - WALL).abs() <= 2.0 * h, || {
        format!("peak at {at}, away from {WALL}")
    })?;
    ensure(m[0] < 0.5 * top && m[m.len() - 1] < 0.5 * top, || {
        "no pronounced rise and fall around the peak".into()
    })
}

/// MI switches on as the horizon recedes and its rate jumps at the flip.
fn check_rate_jump(records: &[ScanRecord]) -> std::result::Result<(), String> {
    let mi = series(records, MeasureKind::Mi)?;
    let (k, first) = single_flip(records)?;
    ensure(first == Phase::Disconnected, || {
        "MI should vanish for shallow horizons".into()
    })?;
    ensure(mi[k..].iter().all(|&v| v > 0.0), || {
        "MI not positive for deep horizons".into()
    })?;
    let rates: Vec<f64> = records
        .iter()
        .map(|r| r.rate.ok_or_else(|| "missing rate".to_string()))
        .collect::<std::result::Result<_, _>>()?;
    let (jmax, _) = rates
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or("empty rate series")?;
    ensure(jmax + 2 >= k && jmax <= k + 1, || {
        format!("largest rate jump at index {jmax}, transition at {k}")
    })
}

/// Shape assertions for a named dataset.
pub fn check_shape(dataset: &FigureDataset) -> std::result::Result<(), String> {
    let r = &dataset.records;
    match dataset.setup.name {
        "fig1_mi_vs_size" => check_mi_onset(r),
        "fig2_negativity_vs_scale" => check_sharp_drop(r, false),
        "fig3_multipartite_vs_scale" => check_peak(r),
        "fig4_rate_of_change" => check_rate_jump(r),
        "fig5_negativity_vs_size" => check_sharp_drop(r, true),
        other => Err(format!("unknown figure `{other}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_datasets_have_expected_shapes() {
        let opts = ScanOptions {
            parallel: true,
            cache: None,
        };
        for ds in generate_figures(&opts).unwrap() {
            assert!(
                ds.records.iter().all(|r| r.error.is_none()),
                "{}",
                ds.setup.name
            );
            check_shape(&ds).unwrap_or_else(|e| panic!("{}: {e}", ds.setup.name));
        }
    }

    #[test]
    fn shape_checks_reject_flat_series() {
        let setup = figure_setups().remove(2);
        let records = setup
            .spec
            .grid()
            .into_iter()
            .map(|p| ScanRecord {
                parameter_value: p,
                entropy: None,
                mi: None,
                negativity_proxy: None,
                multipartite: Some(0.0),
                phase: Some(Phase::Disconnected),
                rate: None,
                error: None,
            })
            .collect();
        assert!(check_shape(&FigureDataset { setup, records }).is_err());
    }
}
