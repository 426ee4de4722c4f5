//! Circle-action structures on the catalog manifolds and explicit collapsing
//! families: Berger shrinking along Hopf orbits, concave caps along axis
//! rotations.

mod family;
mod structure;

pub use family::{
    collapse_block, collapse_factor, collapse_metric, trace, CollapseTrace, TraceRow, TraceVerdict, COLLAPSE_RATIO,
    TRACE_HEADER, TRACE_PLANES, TRACE_TOL,
};
pub use structure::{
    build_structure, corrupted_polarized, evaluate_structure, validate_structure, CircleAction, FStructureSpec,
    FixedPoints, ItemCheck, OverlapRecord, StructureKind, StructurePiece, StructureVerdict, FIXED_POINT_TOL,
};

use crate::builders::BuildError;
use crate::catalog::CatalogError;
use crate::geom::GeomError;

#[derive(Debug, thiserror::Error)]
pub enum CollapseError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("epsilon {0} outside (0, 1]")]
    EpsilonOutOfRange(f64),
    #[error("structure item {item} violated: {detail}")]
    ItemViolation { item: u8, detail: String },
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Catalog(Box<CatalogError>),
}

impl From<CatalogError> for CollapseError {
    fn from(e: CatalogError) -> Self {
        CollapseError::Catalog(Box::new(e))
    }
}
