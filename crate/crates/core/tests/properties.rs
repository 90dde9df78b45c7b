use holoscope::geometry::{
    blackening_factor, energy_scale_of_depth, BulkGeometry, UnitsConvention,
};
use holoscope::measures::{Interval, IntervalSet, MeasureEngine, Phase};
use holoscope::minimal_surface::{
    bulk_geodesic_distance, entropy_of_strip, width_of_turning_point, BulkPoint,
};
use holoscope::quadrature::QuadratureSpec;
use holoscope::rgflow::{
    locate_transition, scan_measure_with, MeasureKind, ScanOptions, SweepParameter, SweepSpec,
};
use proptest::prelude::*;

const EPS: f64 = 0.01;

fn iv(a: f64, b: f64) -> Interval {
    Interval::new(a, b).unwrap()
}

fn engine(geom: BulkGeometry) -> MeasureEngine {
    MeasureEngine::new(geom, UnitsConvention::default(), QuadratureSpec::default()).unwrap()
}

fn geometry(btz: bool) -> BulkGeometry {
    if btz {
        BulkGeometry::black_brane(2, 1.0)
    } else {
        BulkGeometry::pure_ads(2)
    }
}

/// Lengths and gaps, all well above the cutoff.
fn layout(n: usize) -> impl Strategy<Value = Vec<Interval>> {
    (
        -1.0..1.0f64,
        prop::collection::vec((0.05..1.5f64, 0.05..2.0f64), n),
    )
        .prop_map(|(start, parts)| {
            let mut x = start;
            parts
                .into_iter()
                .map(|(gap, len)| {
                    x += gap;
                    let a = x;
                    x += len;
                    iv(a, x)
                })
                .collect()
        })
}

fn matching_oracle(points: &[f64], chord: &dyn Fn(f64) -> f64) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    (1..points.len())
        .step_by(2)
        .map(|k| {
            chord(points[k] - points[0])
                + matching_oracle(&points[1..k], chord)
                + matching_oracle(&points[k + 1..], chord)
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn width_is_strictly_increasing_in_turning_point() {
    let q = QuadratureSpec::default();
    for geom in [
        BulkGeometry::pure_ads(2),
        BulkGeometry::pure_ads(3),
        BulkGeometry::pure_ads(4),
        BulkGeometry::black_brane(2, 1.0),
        BulkGeometry::black_brane(3, 1.0),
        BulkGeometry::black_brane(4, 1.0),
    ] {
        let top = geom.depth_limit().map_or(5.0, |z| 0.999 * z);
        let widths: Vec<f64> = (0..200)
            .map(|i| {
                width_of_turning_point(&geom, 0.01 + (top - 0.01) * i as f64 / 199.0, &q).unwrap()
            })
            .collect();
        assert!(widths.windows(2).all(|w| w[1] > w[0]), "{geom:?}");
    }
}

#[test]
fn blackening_is_bounded_and_decreasing() {
    for d in 2..=4 {
        let geom = BulkGeometry::black_brane(d, 1.0);
        let f: Vec<f64> = (0..1000)
            .map(|i| blackening_factor(&geom, 1e-6 + (0.999 - 1e-6) * i as f64 / 999.0).unwrap())
            .collect();
        assert!(f.iter().all(|&v| v > 0.0 && v <= 1.0));
        assert!(f.windows(2).all(|w| w[1] < w[0]));
    }
}

#[test]
fn quadrature_converges_between_256_and_512_nodes() {
    let coarse = QuadratureSpec::default();
    let fine = QuadratureSpec::new(512, coarse.rel_tol).unwrap();
    let units = UnitsConvention::default();
    let at = |geom: &BulkGeometry, q: &QuadratureSpec| -> Vec<f64> {
        let mut v: Vec<f64> = [0.1, 1.0, 5.0]
            .iter()
            .map(|&l| entropy_of_strip(geom, l, EPS, &units, q).unwrap().entropy)
            .collect();
        if geom.d != 2 {
            return v;
        }
        let e = MeasureEngine::new(geom.clone(), units, *q).unwrap();
        v.push(
            e.mutual_information(iv(0.0, 1.0), iv(1.1, 2.1), EPS)
                .unwrap()
                .value,
        );
        v.push(
            e.negativity_proxy(iv(-2.2, -0.2), iv(0.2, 2.2), EPS)
                .unwrap()
                .value,
        );
        v
    };
    for geom in [
        BulkGeometry::pure_ads(2),
        BulkGeometry::black_brane(2, 1.0),
        BulkGeometry::black_brane(3, 1.0),
        BulkGeometry::hard_wall(2, 0.5),
    ] {
        for (a, b) in at(&geom, &coarse).into_iter().zip(at(&geom, &fine)) {
            assert!(
                (a - b).abs() <= 1e-9 * b.abs().max(1e-300),
                "{geom:?}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn mutual_information_is_non_increasing_in_gap() {
    for btz in [false, true] {
        let e = engine(geometry(btz));
        let mi: Vec<f64> = (0..50)
            .map(|i| {
                let g = 0.05 + 1.5 * i as f64 / 49.0;
                e.mutual_information(iv(0.0, 1.0), iv(1.0 + g, 2.0 + g), EPS)
                    .unwrap()
                    .value
            })
            .collect();
        assert!(mi.windows(2).all(|w| w[1] <= w[0]));
    }
}

fn gap_sweep() -> SweepSpec {
    SweepSpec {
        parameter: SweepParameter::GapSize,
        start: 0.05,
        stop: 1.0,
        steps: 20,
        intervals: vec![iv(0.0, 1.0), iv(1.05, 2.05)],
        geometry: BulkGeometry::pure_ads(2),
        cutoff: EPS,
        units: UnitsConvention::default(),
        quadrature: QuadratureSpec::default(),
    }
}

#[test]
fn serial_and_parallel_scans_agree_bitwise() {
    let kinds = [MeasureKind::Mi, MeasureKind::NegativityProxy];
    let serial = scan_measure_with(
        &gap_sweep(),
        &kinds,
        &ScanOptions {
            parallel: false,
            cache: None,
        },
    )
    .unwrap();
    let parallel = scan_measure_with(
        &gap_sweep(),
        &kinds,
        &ScanOptions {
            parallel: true,
            cache: None,
        },
    )
    .unwrap();
    let bits = |r: &[holoscope::rgflow::ScanRecord]| -> Vec<(u64, u64)> {
        r.iter()
            .map(|x| {
                (
                    x.mi.unwrap().to_bits(),
                    x.negativity_proxy.unwrap().to_bits(),
                )
            })
            .collect()
    };
    assert_eq!(bits(&serial), bits(&parallel));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vacuum_width_scales_linearly(z in 0.01..5.0f64, d in 2u32..=4) {
        let q = QuadratureSpec::default();
        let geom = BulkGeometry::pure_ads(d);
        let base = width_of_turning_point(&geom, z, &q).unwrap();
        for lambda in [0.5, 2.0, 10.0] {
            let scaled = width_of_turning_point(&geom, lambda * z, &q).unwrap();
            prop_assert!(((scaled - lambda * base) / (lambda * base)).abs() < 1e-8);
        }
    }

    #[test]
    fn energy_scale_is_inverse_depth(z1 in 1e-4..10.0f64, z2 in 1e-4..10.0f64) {
        let (m1, m2) = (energy_scale_of_depth(z1).unwrap(), energy_scale_of_depth(z2).unwrap());
        prop_assert!((m1 * z1 - 1.0).abs() < 1e-15 && (m2 * z2 - 1.0).abs() < 1e-15);
        if z1 < z2 {
            prop_assert!(m1 > m2);
        }
    }

    #[test]
    fn geodesic_distance_is_a_metric(
        btz in any::<bool>(),
        p in prop::array::uniform3((-2.0..2.0f64, 0.05..0.9f64)),
    ) {
        let geom = geometry(btz);
        let q = QuadratureSpec::default();
        let [a, b, c] = p.map(|(x, z)| BulkPoint::new(x, z));
        let d = |u: BulkPoint, v: BulkPoint| bulk_geodesic_distance(&geom, u, v, &q).unwrap();
        let (ab, ba, bc, ac) = (d(a, b), d(b, a), d(b, c), d(a, c));
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - ba).abs() <= 1e-9 * ab.max(1.0));
        prop_assert!(ac <= ab + bc + 1e-9);
    }

    #[test]
    fn pair_measures_are_symmetric_and_phase_consistent(btz in any::<bool>(), pair in layout(2)) {
        let e = engine(geometry(btz));
        let (a, b) = (pair[0], pair[1]);
        let i_ab = e.mutual_information(a, b, EPS).unwrap();
        let i_ba = e.mutual_information(b, a, EPS).unwrap();
        let x_ab = e.negativity_proxy(a, b, EPS).unwrap();
        let x_ba = e.negativity_proxy(b, a, EPS).unwrap();
        prop_assert_eq!(i_ab.value.to_bits(), i_ba.value.to_bits());
        prop_assert_eq!(x_ab.value.to_bits(), x_ba.value.to_bits());
        prop_assert!(i_ab.value >= 0.0 && x_ab.value >= 0.0);
        prop_assert_eq!(x_ab.value > 0.0, i_ab.value > 0.0);
        prop_assert_eq!(x_ab.phase == Phase::Connected, i_ab.phase == Phase::Connected);
    }

    #[test]
    fn mutual_information_is_cutoff_independent(btz in any::<bool>(), pair in layout(2)) {
        let e = engine(geometry(btz));
        let coarse = e.mutual_information(pair[0], pair[1], EPS).unwrap().value;
        let fine = e.mutual_information(pair[0], pair[1], EPS / 10.0).unwrap().value;
        prop_assert!((coarse - fine).abs() < 1e-6, "{} vs {}", coarse, fine);
    }

    #[test]
    fn tripartite_is_monogamous_and_cutoff_independent(btz in any::<bool>(), t in layout(3)) {
        let e = engine(geometry(btz));
        let i3 = e.tripartite_information(t[0], t[1], t[2], EPS).unwrap();
        let fine = e.tripartite_information(t[0], t[1], t[2], EPS / 10.0).unwrap();
        let m = e.multipartite_correlation(t[0], t[1], t[2], EPS).unwrap();
        prop_assert!(i3 <= 1e-10);
        prop_assert!(m >= 0.0);
        prop_assert!((i3 - fine).abs() < 1e-6);
    }

    #[test]
    fn union_entropy_matches_matching_oracle(
        btz in any::<bool>(),
        set in (1usize..=4).prop_flat_map(layout),
    ) {
        let e = engine(geometry(btz));
        let chord = |w: f64| e.entanglement_entropy_interval(iv(0.0, w), EPS).unwrap();
        let pts: Vec<f64> = set.iter().flat_map(|v| [v.a, v.b]).collect();
        let dp = e.union_entropy_intervals(&IntervalSet::new(set).unwrap(), EPS).unwrap().entropy;
        prop_assert!((dp - matching_oracle(&pts, &chord)).abs() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn shooting_distance_is_a_metric(p in prop::array::uniform3((-1.0..1.0f64, 0.05..0.8f64))) {
        let geom = BulkGeometry::black_brane(3, 1.0);
        let q = QuadratureSpec::default();
        let [a, b, c] = p.map(|(x, z)| BulkPoint::new(x, z));
        let d = |u: BulkPoint, v: BulkPoint| bulk_geodesic_distance(&geom, u, v, &q).unwrap();
        let (ab, ba, bc, ac) = (d(a, b), d(b, a), d(b, c), d(a, c));
        prop_assert!((ab - ba).abs() <= 1e-9 * ab.max(1.0));
        prop_assert!(ac <= ab + bc + 1e-9);
    }

    #[test]
    fn transition_does_not_depend_on_bracket(lo in 0.05..0.4f64, hi in 0.43..1.0f64) {
        let t = locate_transition(&gap_sweep(), MeasureKind::Mi, (lo, hi)).unwrap();
        let reference = locate_transition(&gap_sweep(), MeasureKind::Mi, (0.1, 1.0)).unwrap();
        prop_assert!((t - reference).abs() < 1e-8);
        prop_assert!((t - (2f64.sqrt() - 1.0)).abs() < 1e-6);
    }
}
