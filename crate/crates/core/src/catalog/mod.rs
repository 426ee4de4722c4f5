//! The manifold catalog and the batch command surface.

mod cli;
mod descriptor;
mod realize;

pub use cli::{run, Cli, Command, Outcome, REPORT_DIR_ENV};
pub use descriptor::{
    catalog_list, BlockSpec, Family, GluingSpec, ManifoldDescriptor, DEFAULT_K_MAX, DEFAULT_K_MIN,
};
pub use realize::{
    block_pair, boundary_collar, realize, realize_with, Realization, RealizationSummary, GLUING_SAMPLES,
    GLUING_SEED, ODD_JET_TOL, PRODUCT_FORM_TOL,
};

use crate::builders::BuildError;
use crate::collapse::CollapseError;
use crate::geom::GeomError;
use crate::pin::PinError;

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown manifold {0:?}")]
    UnknownDescriptor(String),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("{check} check failed: {detail}")]
    CheckFailed { check: String, detail: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Pin(#[from] PinError),
    #[error(transparent)]
    Collapse(#[from] CollapseError),
    #[error("report output: {0}")]
    Io(#[from] std::io::Error),
    #[error("report serialization: {0}")]
    Json(#[from] serde_json::Error),
}
