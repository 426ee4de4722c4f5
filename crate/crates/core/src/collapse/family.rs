//! One-parameter collapsing families and their volume/curvature traces.

use serde::{Deserialize, Serialize};

use super::structure::{build_structure, CircleAction};
use super::CollapseError;
use crate::builders::{make_profile, quotient, CapProfile, Factor, ProductMetric, ProfileKind, QuotientMetric, DEFAULT_JET_ORDER};
use crate::catalog::{block_pair, ManifoldDescriptor};
use crate::geom::{curvature_scan, MetricField, ScanReport};

pub const TRACE_PLANES: usize = 5;
pub const TRACE_TOL: f64 = 1e-7;
/// Volume ratio below which a trace counts as collapsing.
pub const COLLAPSE_RATIO: f64 = 0.05;

fn check_eps(eps: f64) -> Result<(), CollapseError> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(CollapseError::EpsilonOutOfRange(eps))
    }
}

/// The sphere factor with its circle orbits shrunk by `eps`: a Berger sphere
/// for the Hopf action, a concave cap profile for the axis rotation.
pub fn collapse_factor(f: &Factor, action: CircleAction, eps: f64) -> Result<Factor, CollapseError> {
    check_eps(eps)?;
    match (f, action) {
        (Factor::Round { n, r }, CircleAction::HopfOnSphere) if n % 2 == 1 => Ok(Factor::Berger { n: *n, r: *r, eps }),
        (Factor::Round { n, r }, CircleAction::AxisRotationOnSphere) if *n >= 2 => {
            Ok(Factor::AxisCollapsed { n: *n, r: *r, cap: CapProfile::new(eps)? })
        }
        _ => Err(CollapseError::InvalidArgument(format!("cannot collapse {} along {action:?}", f.label()))),
    }
}

/// Replace the sphere factor of a disk-bundle block by its collapsed version
/// and rebuild the quotient; the deck involution is re-verified on the result.
/// `eps = 1` returns the block unchanged.
pub fn collapse_block(q: &QuotientMetric, action: CircleAction, eps: f64) -> Result<QuotientMetric, CollapseError> {
    check_eps(eps)?;
    if eps == 1.0 {
        return Ok(q.clone());
    }
    let factors = q.cover().factors();
    let i = factors
        .iter()
        .position(|f| matches!(f, Factor::Round { .. }))
        .ok_or_else(|| CollapseError::InvalidArgument(format!("block {} has no round sphere factor", q.id())))?;
    let mut replaced = factors.to_vec();
    replaced[i] = collapse_factor(&factors[i], action, eps)?;
    let cover = ProductMetric::new(format!("{}@eps={eps}", q.id()), replaced)?;
    Ok(quotient(cover, q.action().clone())?)
}

pub fn collapse_metric(q: &QuotientMetric, action: CircleAction, eps: f64) -> Result<MetricField, CollapseError> {
    Ok(collapse_block(q, action, eps)?.metric().clone())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub eps: f64,
    pub volume: f64,
    pub min_k: f64,
    pub max_k: f64,
    pub skipped_points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceVerdict {
    BoundedCollapse,
    LowerBoundedCollapse,
    NotCollapsing,
    NoVerdict,
}

impl TraceVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            TraceVerdict::BoundedCollapse => "bounded collapse",
            TraceVerdict::LowerBoundedCollapse => "lower-bounded collapse",
            TraceVerdict::NotCollapsing => "not collapsing",
            TraceVerdict::NoVerdict => "no verdict",
        }
    }
}

pub const TRACE_HEADER: &str = "eps,volume,min_k,max_k,verdict";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollapseTrace {
    pub manifold: String,
    pub polarized: bool,
    pub rows: Vec<TraceRow>,
    pub volume_ratio: f64,
    pub verdict: TraceVerdict,
}

impl CollapseTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(TRACE_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{},{:e},{:e},{:e},{}\n", r.eps, r.volume, r.min_k, r.max_k, self.verdict.as_str()));
        }
        out
    }

    pub fn max_abs_k(&self) -> f64 {
        self.rows.iter().map(|r| r.min_k.abs().max(r.max_k.abs())).fold(0.0, f64::max)
    }

    pub fn min_k(&self) -> f64 {
        self.rows.iter().map(|r| r.min_k).fold(f64::INFINITY, f64::min)
    }

    pub fn passed(&self) -> bool {
        matches!(self.verdict, TraceVerdict::BoundedCollapse | TraceVerdict::LowerBoundedCollapse)
    }
}

fn judge(polarized: bool, rows: &[TraceRow]) -> (f64, TraceVerdict) {
    let first = &rows[0];
    let last = &rows[rows.len() - 1];
    let ratio = last.volume / first.volume;
    if rows.len() < 2 {
        return (ratio, TraceVerdict::NoVerdict);
    }
    let decreasing = rows.windows(2).all(|w| w[1].volume < w[0].volume);
    if !decreasing || ratio >= COLLAPSE_RATIO {
        return (ratio, TraceVerdict::NotCollapsing);
    }
    let bounded = if polarized {
        // max|K| may grow at most by a fixed factor over the starting metric
        let k0 = first.min_k.abs().max(first.max_k.abs());
        rows.iter().all(|r| r.min_k.abs().max(r.max_k.abs()) <= 4.0 * k0 + 1e-3)
    } else {
        let floor = first.min_k.min(0.0) - TRACE_TOL;
        rows.iter().all(|r| r.min_k >= floor)
    };
    match (bounded, polarized) {
        (false, _) => (ratio, TraceVerdict::NotCollapsing),
        (true, true) => (ratio, TraceVerdict::BoundedCollapse),
        (true, false) => (ratio, TraceVerdict::LowerBoundedCollapse),
    }
}

/// Collapse both blocks of a catalog entry along its structure's circle
/// action for each `eps` (strictly decreasing, in `(0, 1]`), with closed-form
/// volumes and sampled curvature of the collapsed blocks.
pub fn trace(d: &ManifoldDescriptor, eps: &[f64], n_points: usize, seed: u64) -> Result<CollapseTrace, CollapseError> {
    if eps.is_empty() {
        return Err(CollapseError::InvalidArgument("empty epsilon list".into()));
    }
    for &e in eps {
        check_eps(e)?;
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CollapseError::InvalidArgument("epsilon values must decrease strictly".into()));
    }
    let s = build_structure(d)?;
    let action = s.pieces[0].action;
    let profile = make_profile(ProfileKind::CollarTorpedo, 1.0, DEFAULT_JET_ORDER)?;
    let blocks = block_pair(d, &profile)?;
    let mut rows = Vec::with_capacity(eps.len());
    for (i, &e) in eps.iter().enumerate() {
        let mut volume = 0.0;
        let mut scans: Vec<ScanReport> = Vec::new();
        for (b, q) in blocks.iter().enumerate() {
            let c = collapse_block(q, action, e)?;
            volume += c.volume()?;
            let block_seed = seed.wrapping_add((i * 2 + b) as u64);
            scans.push(curvature_scan(c.metric(), n_points, TRACE_PLANES, block_seed, TRACE_TOL)?);
        }
        let merged = ScanReport::merge(d.tag(), &scans);
        rows.push(TraceRow { eps: e, volume, min_k: merged.min_k, max_k: merged.max_k, skipped_points: merged.skipped_points });
    }
    let (volume_ratio, verdict) = judge(s.polarized, &rows);
    Ok(CollapseTrace { manifold: d.tag(), polarized: s.polarized, rows, volume_ratio, verdict })
}
