//! Metric builders: round spheres, warped disks, products, quotients by free
//! isometric involutions, and doubles glued along their boundaries.

mod action;
mod cap;
mod factor;
mod glue;
mod product;
mod profile;
pub mod quad;
mod quotient;
pub mod sphere;

pub use action::{
    displacement, involution_defect, minimize_in_chart, verify_free, verify_isometry, ActionLabel,
    FreenessVerdict, IsometricAction, IsometryVerdict, SmoothMap,
};
pub use cap::CapProfile;
pub use factor::{axis_embed, hopf_coframe, tangent_frame, Factor, FactorMap};
pub use glue::{
    gluing_isometry_check, glued_metric, loop_class, GluedMetric, GluedSpace, GluingMap, GluingVerdict,
    LoopTerm, RotationLoop, JET_TOL,
};
pub use product::{ProductExpr, ProductMap, ProductMetric};
pub use profile::{
    make_profile, smooth_step, ProfileKind, ProfileSpec, RadialFunction, WarpProfile, CONCAVITY_TOL,
    DEFAULT_JET_ORDER, MAX_JET_ORDER,
};
pub use quotient::{
    boundary_form_check, disk_bundle_block, monte_carlo_volume, quotient, sphere_bundle_quotient,
    warp_square_jet, BoundaryMode, BoundaryVerdict, QuotientMetric, FREENESS_TOL, ISOMETRY_TOL,
    LOCAL_ISOMETRY_TAG,
};

use crate::geom::GeomError;

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("blend failed concavity: f''({t}) = {second_derivative:e}")]
    BlendFailedConcavity { t: f64, second_derivative: f64 },
    #[error("map {map} leaves the chart at {point:?}")]
    MapLeavesDomain { map: String, point: Vec<f64> },
    #[error("action {map} is not isometric (defect {defect:e})")]
    ActionNotIsometric { map: String, defect: f64 },
    #[error("action {map} is not free (displacement {distance:e})")]
    ActionNotFree { map: String, distance: f64 },
    #[error("block has no warped disk factor")]
    NoDiskFactor,
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("jet mismatch at order {order} (defect {defect:e})")]
    JetMismatch { order: usize, defect: f64 },
    #[error("no closed form for {0}; use the Monte-Carlo volume")]
    NeedsMonteCarlo(String),
    #[error("epsilon {0} outside (0, 1]")]
    EpsilonOutOfRange(f64),
    #[error(transparent)]
    Geom(#[from] GeomError),
}
