//! Minimal surfaces, geodesics and curve-to-curve distances in the bulk.

mod curves;
mod geodesic;
mod strip;

pub use curves::{
    min_distance_between_curves, BulkCurve, CurveDistance, RtArc, RtCurve, WallContour, CURVE_GRID,
};
pub use geodesic::{bulk_geodesic_distance, geodesic_distance_shooting, BulkPoint};
pub use strip::{
    entropy_of_strip, regularized_strip_area, strip_solution, width_of_turning_point, Branch,
    StripEntropy, TurningPointSolution,
};
