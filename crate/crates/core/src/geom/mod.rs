//! Coordinate-chart tensor calculus: metrics, Christoffel symbols, the
//! Riemann tensor, sectional curvature and sampled curvature scans.

mod chart;
pub mod jet;
mod metric;
pub mod sampling;
mod scan;
mod tensor;

pub use chart::{Axis, Chart, DEFAULT_SINGULAR_MARGIN};
pub use jet::{Jet2, Scalar};
pub use metric::{MetricExpr, MetricField, MetricJet, FD_STEP_FIRST, FD_STEP_SECOND, PD_EIGEN_FLOOR};
pub use scan::{
    curvature_scan, orthonormalize, random_plane, scan_points, ScanReport, ScanVerdict,
    MAX_SKIPPED_FRACTION, SCAN_CSV_HEADER,
};
pub use tensor::{
    christoffel, riemann, sectional_curvature, Christoffel, PointCurvature, Riemann, TwoPlane,
    MAX_CONDITION, MIN_PLANE_GRAM,
};

#[derive(Debug, thiserror::Error)]
pub enum GeomError {
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("point {point:?} outside the interior of chart {chart}")]
    PointOutsideDomain { chart: String, point: Vec<f64> },
    #[error("metric not invertible at {point:?} (condition number {condition:e})")]
    NotInvertible { point: Vec<f64>, condition: f64 },
    #[error("metric not symmetric at {point:?} (defect {defect:e})")]
    NotSymmetric { point: Vec<f64>, defect: f64 },
    #[error("metric not positive definite at {point:?} (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { point: Vec<f64>, min_eigenvalue: f64 },
    #[error("degenerate plane at {point:?} (Gram determinant {gram:e})")]
    DegeneratePlane { point: Vec<f64>, gram: f64 },
    #[error("{skipped} of {total} samples skipped; first failure: {first}")]
    TooManySkipped { skipped: usize, total: usize, first: Box<GeomError> },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
