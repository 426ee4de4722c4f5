//! Building the glued metric of a catalog entry and running every builder check.

use serde::Serialize;

use super::descriptor::ManifoldDescriptor;
use super::CatalogError;
use crate::builders::{
    boundary_form_check, disk_bundle_block, gluing_isometry_check, glued_metric, make_profile, BoundaryVerdict,
    GluedMetric, GluedSpace, GluingMap, GluingVerdict, ProfileKind, QuotientMetric, WarpProfile,
    DEFAULT_JET_ORDER, ISOMETRY_TOL,
};
use crate::geom::{GeomError, ScanReport};

pub const GLUING_SAMPLES: usize = 1000;
pub const GLUING_SEED: u64 = 0x61_75_65;
pub const PRODUCT_FORM_TOL: f64 = 1e-9;
pub const ODD_JET_TOL: f64 = 1e-6;

/// Collar depth used for boundary checks: the product collar, or a sliver of
/// the disk when the profile has none.
pub fn boundary_collar(p: &WarpProfile) -> f64 {
    let w = p.collar_width();
    if w > 0.0 {
        w
    } else {
        0.05 * p.t_max()
    }
}

pub fn block_pair(d: &ManifoldDescriptor, profile: &WarpProfile) -> Result<[QuotientMetric; 2], CatalogError> {
    let tag = d.tag();
    let mk = |i: usize| {
        let b = &d.blocks[i];
        disk_bundle_block(format!("{tag}.{}", ["A", "B"][i]), profile.clone(), b.sphere_dim, 1.0, b.twisted)
    };
    Ok([mk(0)?, mk(1)?])
}

#[derive(Clone, Debug)]
pub struct Realization {
    pub descriptor: ManifoldDescriptor,
    pub profile: WarpProfile,
    pub space: GluedSpace,
    pub boundary: Vec<BoundaryVerdict>,
    pub gluing: GluingVerdict,
    pub glued: GluedMetric,
}

/// Check summary of a realization, for reports.
#[derive(Clone, Debug, Serialize)]
pub struct RealizationSummary {
    pub manifold: String,
    pub profile: ProfileKind,
    pub volume: f64,
    pub boundary: Vec<BoundaryVerdict>,
    pub gluing: GluingVerdict,
    pub interface_jets: Vec<(usize, f64)>,
}

impl Realization {
    pub fn scan(&self, n_points: usize, n_planes: usize, seed: u64, tol: f64) -> Result<ScanReport, GeomError> {
        let mut r = crate::geom::curvature_scan(self.glued.metric(), n_points, n_planes, seed, tol)?;
        r.metric_id = self.descriptor.tag();
        Ok(r)
    }

    pub fn summary(&self) -> Result<RealizationSummary, CatalogError> {
        Ok(RealizationSummary {
            manifold: self.descriptor.tag(),
            profile: self.profile.kind(),
            volume: self.space.volume()?,
            boundary: self.boundary.clone(),
            gluing: self.gluing.clone(),
            interface_jets: self.glued.jets.clone(),
        })
    }
}

/// Build both blocks with a unit-radius profile of `kind`, glue them along the
/// descriptor's loop and run the boundary, gluing and interface-jet checks.
pub fn realize(d: &ManifoldDescriptor, kind: ProfileKind) -> Result<Realization, CatalogError> {
    realize_with(d, make_profile(kind, 1.0, DEFAULT_JET_ORDER)?)
}

pub fn realize_with(d: &ManifoldDescriptor, profile: WarpProfile) -> Result<Realization, CatalogError> {
    d.validate()?;
    let [a, b] = block_pair(d, &profile)?;
    let collar = boundary_collar(&profile);
    let mut boundary = Vec::with_capacity(2);
    for q in [&a, &b] {
        let v = boundary_form_check(q, collar, PRODUCT_FORM_TOL, ODD_JET_TOL)?;
        if !v.passed {
            return Err(CatalogError::CheckFailed {
                check: "boundary".into(),
                detail: format!("{}: product defect {:e}, odd jets {:?}", v.block, v.product_defect, v.odd_jets),
            });
        }
        boundary.push(v);
    }
    let space = GluedSpace::new(a, b, GluingMap::Loop(d.gluing.rotation_loop()?), profile.collar_width());
    let gluing = gluing_isometry_check(&space, GLUING_SAMPLES, GLUING_SEED, ISOMETRY_TOL)?;
    if !gluing.passed {
        return Err(CatalogError::CheckFailed {
            check: "gluing".into(),
            detail: format!("fiber defect {:e}, deck defect {:e}", gluing.fiber_defect, gluing.deck_defect),
        });
    }
    let glued = glued_metric(&space)?;
    Ok(Realization { descriptor: d.clone(), profile, space, boundary, gluing, glued })
}
