//! Quotients by free isometric involutions, boundary-collar checks, volumes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::action::{
    involution_defect, verify_free, verify_isometry, ActionLabel, FreenessVerdict, IsometricAction,
    IsometryVerdict, SmoothMap,
};
use super::factor::{Factor, FactorMap};
use super::product::{ProductMap, ProductMetric};
use super::profile::{ProfileKind, WarpProfile};
use super::BuildError;
use crate::geom::sampling::unit_halton;
use crate::geom::{curvature_scan, GeomError, MetricField, ScanReport};

pub const ISOMETRY_TOL: f64 = 1e-10;
pub const FREENESS_TOL: f64 = 1e-6;
const CHECK_SAMPLES: usize = 256;

/// Local-isometry justification recorded on every quotient.
pub const LOCAL_ISOMETRY_TAG: &str =
    "free isometric action: the projection is a local isometry, curvature is computed on the cover";

/// A quotient `cover / action`, represented by the cover and the action.
#[derive(Clone, Debug)]
pub struct QuotientMetric {
    cover: ProductMetric,
    action: IsometricAction,
    pub fundamental_domain: String,
    pub justification: &'static str,
    pub isometry: Vec<IsometryVerdict>,
    pub freeness: Vec<FreenessVerdict>,
}

/// Verify every generator (isometry at `1e-10`, involution, freeness at `1e-6`)
/// and wrap the cover.
pub fn quotient(cover: ProductMetric, action: IsometricAction) -> Result<QuotientMetric, BuildError> {
    let mut isometry = Vec::new();
    let mut freeness = Vec::new();
    for (i, g) in action.generators.iter().enumerate() {
        let seed = 0x5eed + i as u64;
        let iso = verify_isometry(cover.metric(), &SmoothMap::from_product(&cover, g), CHECK_SAMPLES, seed, ISOMETRY_TOL)?;
        if !iso.passed {
            return Err(BuildError::ActionNotIsometric { map: g.name.clone(), defect: iso.max_defect });
        }
        let inv = involution_defect(&cover, g, 64, seed)?;
        if inv > 1e-10 {
            return Err(BuildError::InvalidArgument(format!("{} is not an involution (defect {inv:e})", g.name)));
        }
        let free = verify_free(&cover, g, CHECK_SAMPLES, seed, FREENESS_TOL)?;
        if !free.passed {
            return Err(BuildError::ActionNotFree { map: g.name.clone(), distance: free.min_distance });
        }
        isometry.push(iso);
        freeness.push(free);
    }
    let fundamental_domain = if action.is_trivial() {
        "whole chart".to_string()
    } else {
        "half of the last periodic coordinate of the first factor".to_string()
    };
    Ok(QuotientMetric { cover, action, fundamental_domain, justification: LOCAL_ISOMETRY_TAG, isometry, freeness })
}

impl QuotientMetric {
    pub fn cover(&self) -> &ProductMetric {
        &self.cover
    }

    pub fn action(&self) -> &IsometricAction {
        &self.action
    }

    /// Metric used for curvature queries (the cover's).
    pub fn metric(&self) -> &MetricField {
        self.cover.metric()
    }

    pub fn id(&self) -> &str {
        self.cover.id()
    }

    pub fn volume(&self) -> Result<f64, BuildError> {
        Ok(self.cover.volume()? / self.action.group_order as f64)
    }

    pub fn scan(&self, n_points: usize, n_planes: usize, seed: u64, tol: f64) -> Result<ScanReport, GeomError> {
        curvature_scan(self.metric(), n_points, n_planes, seed, tol)
    }

    pub fn disk_profile(&self) -> Option<&WarpProfile> {
        self.cover.disk_factor().map(|i| match &self.cover.factors()[i] {
            Factor::WarpedDisk(p) => p,
            _ => unreachable!(),
        })
    }
}

/// Disk-bundle block `(D² × S^m) / ⟨(half-turn, antipodal)⟩`, or the plain
/// product when `twisted` is false.
pub fn disk_bundle_block(
    id: impl Into<String>,
    profile: WarpProfile,
    sphere_dim: usize,
    radius: f64,
    twisted: bool,
) -> Result<QuotientMetric, BuildError> {
    let cover = ProductMetric::new(id, vec![Factor::WarpedDisk(profile), Factor::round(sphere_dim, radius)])?;
    let action = if twisted {
        IsometricAction::involution(
            ActionLabel::Product,
            ProductMap::new("(r,A)", vec![FactorMap::HalfTurn, FactorMap::Antipodal]),
        )
    } else {
        IsometricAction::trivial()
    };
    quotient(cover, action)
}

/// `(S² × S^m) / ⟨(half-turn, antipodal)⟩`, the closed bundle quotient.
pub fn sphere_bundle_quotient(id: impl Into<String>, sphere_dim: usize) -> Result<QuotientMetric, BuildError> {
    let cover = ProductMetric::new(id, vec![Factor::round(2, 1.0), Factor::round(sphere_dim, 1.0)])?;
    let action = IsometricAction::involution(
        ActionLabel::Product,
        ProductMap::new("(r,A)", vec![FactorMap::HalfTurn, FactorMap::Antipodal]),
    );
    quotient(cover, action)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryMode {
    /// Literal product collar `dt² + r² dθ² + g_sphere`.
    ProductForm,
    /// Odd `t`-derivatives of the metric vanish at the boundary.
    JetLevel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryVerdict {
    pub block: String,
    pub profile: ProfileKind,
    pub mode: BoundaryMode,
    pub collar_depth: f64,
    pub product_defect: f64,
    pub product_passed: bool,
    /// `(order, |∂_t^order g_θθ(t_max)|)` for odd orders up to `jet_order`.
    pub odd_jets: Vec<(usize, f64)>,
    pub jet_passed: bool,
    /// `∂_t² g_θθ(t_max)`; zero exactly when the boundary is a product to second order.
    pub second_jet: f64,
    pub passed: bool,
}

/// `∂_t^k (f²)` at `t` by Leibniz from the profile derivatives.
pub fn warp_square_jet(p: &WarpProfile, k: usize, t: f64) -> f64 {
    let mut binom = 1.0;
    let mut acc = 0.0;
    for i in 0..=k {
        acc += binom * p.derivative(i, t) * p.derivative(k - i, t);
        binom = binom * (k - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Collar check of a disk block. The product form is tested on samples with
/// `t ∈ [t_max − collar_depth, t_max]`; the jet form at `t = t_max`.
/// Collar-torpedo blocks must pass the product form, hemisphere blocks the
/// jet form (they have no product collar).
pub fn boundary_form_check(
    q: &QuotientMetric,
    collar_depth: f64,
    tol: f64,
    jet_tol: f64,
) -> Result<BoundaryVerdict, BuildError> {
    let cover = q.cover();
    let di = cover.disk_factor().ok_or(BuildError::NoDiskFactor)?;
    let profile = q.disk_profile().unwrap().clone();
    if !(collar_depth > 0.0 && collar_depth <= profile.t_max()) {
        return Err(BuildError::InvalidArgument(format!("collar depth {collar_depth} outside (0, t_max]")));
    }
    let n = cover.dim();
    let chart = cover.chart();
    let t_axis = cover.offsets()[di];
    let r = profile.r();
    let samples = unit_halton(512, n, 0xc011a5);
    let product_defect = samples
        .par_iter()
        .map(|u| {
            let p: Vec<f64> = (0..n)
                .map(|a| {
                    if a == t_axis {
                        profile.t_max() - collar_depth * u[a]
                    } else {
                        let (lo, hi) = chart.interior_range(a);
                        lo + u[a] * (hi - lo)
                    }
                })
                .collect();
            let mut g = cover.metric().g(&p);
            // subtract dt² + r² dθ² and the other factors' own blocks
            g[(t_axis, t_axis)] -= 1.0;
            g[(t_axis + 1, t_axis + 1)] -= r * r;
            for (i, f) in cover.factors().iter().enumerate() {
                if i == di {
                    continue;
                }
                let o = cover.offsets()[i];
                let d = f.dim();
                let mut block = vec![0.0; n * n];
                f.eval(cover.slice(i, &p), &mut block, n, o);
                for a in 0..d {
                    for b in 0..d {
                        g[(o + a, o + b)] -= block[(o + a) * n + o + b];
                    }
                }
            }
            g.amax()
        })
        .reduce(|| 0.0, f64::max);
    let t_max = profile.t_max();
    let odd_jets: Vec<(usize, f64)> = (1..=profile.jet_order())
        .step_by(2)
        .map(|k| (k, warp_square_jet(&profile, k, t_max).abs()))
        .collect();
    let jet_passed = odd_jets.iter().all(|(_, d)| *d <= jet_tol);
    let product_passed = product_defect <= tol;
    let mode = match profile.kind() {
        ProfileKind::CollarTorpedo => BoundaryMode::ProductForm,
        ProfileKind::Hemisphere => BoundaryMode::JetLevel,
    };
    let passed = match mode {
        BoundaryMode::ProductForm => product_passed && jet_passed,
        BoundaryMode::JetLevel => jet_passed,
    };
    Ok(BoundaryVerdict {
        block: q.id().to_string(),
        profile: profile.kind(),
        mode,
        collar_depth,
        product_defect,
        product_passed,
        odd_jets,
        jet_passed,
        second_jet: warp_square_jet(&profile, 2, t_max),
        passed,
    })
}

/// `∫ √det g` over the full chart box by quasi-Monte-Carlo.
pub fn monte_carlo_volume(m: &MetricField, n_samples: usize, seed: u64) -> f64 {
    let chart = m.chart();
    let n = chart.dim();
    let box_volume: f64 = chart.axes.iter().map(|a| a.len()).product();
    let pts = unit_halton(n_samples, n, seed);
    let sum: f64 = pts
        .par_iter()
        .map(|u| {
            let p: Vec<f64> = u.iter().zip(&chart.axes).map(|(x, a)| a.lo + x * a.len()).collect();
            m.g(&p).determinant().max(0.0).sqrt()
        })
        .sum();
    box_volume * sum / n_samples as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::profile::make_profile;
    use std::f64::consts::PI;

    #[test]
    fn projective_space_volume_halves() {
        let cover = ProductMetric::new("s3", vec![Factor::round(3, 1.0)]).unwrap();
        let q = quotient(
            cover,
            IsometricAction::involution(ActionLabel::Antipodal, ProductMap::new("A", vec![FactorMap::Antipodal])),
        )
        .unwrap();
        assert!((q.volume().unwrap() - PI * PI).abs() < 1e-12);
    }

    #[test]
    fn non_free_action_is_rejected() {
        let cover = ProductMetric::new("s2", vec![Factor::round(2, 1.0)]).unwrap();
        let err = quotient(
            cover,
            IsometricAction::involution(ActionLabel::Reflection, ProductMap::new("r", vec![FactorMap::Reflection])),
        )
        .unwrap_err();
        assert!(matches!(err, BuildError::ActionNotFree { .. }));
    }

    #[test]
    fn leibniz_jet_matches_direct_square() {
        let p = make_profile(ProfileKind::Hemisphere, 1.0, 5).unwrap();
        // f² = sin² t, (f²)'' = 2 cos 2t
        assert!((warp_square_jet(&p, 2, 0.3) - 2.0 * 0.6f64.cos()).abs() < 1e-14);
        assert!((warp_square_jet(&p, 3, 0.3) + 4.0 * 0.6f64.sin()).abs() < 1e-14);
    }
}
