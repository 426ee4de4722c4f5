//! Sampled sectional-curvature certification.
//!
//! At every sample point the scan evaluates all coordinate 2-planes (which
//! contain the mixed planes of block-diagonal product metrics) plus
//! `n_planes` random planes drawn uniformly from the Grassmannian of the
//! metric at that point.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampling::{interior_points, stream};
use super::tensor::{PointCurvature, TwoPlane, MIN_PLANE_GRAM};
use super::{GeomError, MetricField};

/// Largest fraction of sample points that may be skipped before a scan fails.
pub const MAX_SKIPPED_FRACTION: f64 = 0.01;

pub const SCAN_CSV_HEADER: &str = "metric_id,n_points,n_planes,seed,min_k,max_k,verdict";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanVerdict {
    Nonnegative,
    Negative,
}

impl ScanVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScanVerdict::Nonnegative => "nonnegative",
            ScanVerdict::Negative => "negative",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub metric_id: String,
    pub n_points: usize,
    pub n_planes: usize,
    pub seed: u64,
    pub tol: f64,
    pub min_k: f64,
    pub max_k: f64,
    pub argmin: TwoPlane,
    pub argmax: TwoPlane,
    pub planes_evaluated: usize,
    pub skipped_points: usize,
    pub verdict: ScanVerdict,
}

impl ScanReport {
    pub fn max_abs_k(&self) -> f64 {
        self.min_k.abs().max(self.max_k.abs())
    }

    pub fn passed(&self) -> bool {
        self.verdict == ScanVerdict::Nonnegative
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:e},{:e},{}",
            self.metric_id,
            self.n_points,
            self.n_planes,
            self.seed,
            self.min_k,
            self.max_k,
            self.verdict.as_str()
        )
    }

    /// Combine scans of pieces of one space (e.g. the two blocks of a double).
    pub fn merge(id: impl Into<String>, parts: &[ScanReport]) -> ScanReport {
        assert!(!parts.is_empty(), "nothing to merge");
        let lo = parts.iter().min_by(|a, b| a.min_k.total_cmp(&b.min_k)).unwrap();
        let hi = parts.iter().max_by(|a, b| a.max_k.total_cmp(&b.max_k)).unwrap();
        let tol = parts[0].tol;
        ScanReport {
            metric_id: id.into(),
            n_points: parts.iter().map(|r| r.n_points).sum(),
            n_planes: parts[0].n_planes,
            seed: parts[0].seed,
            tol,
            min_k: lo.min_k,
            max_k: hi.max_k,
            argmin: lo.argmin.clone(),
            argmax: hi.argmax.clone(),
            planes_evaluated: parts.iter().map(|r| r.planes_evaluated).sum(),
            skipped_points: parts.iter().map(|r| r.skipped_points).sum(),
            verdict: if lo.min_k >= -tol { ScanVerdict::Nonnegative } else { ScanVerdict::Negative },
        }
    }
}

/// A g-orthonormal pair spanning a uniformly random plane at the point.
pub fn random_plane<R: Rng>(pc: &PointCurvature, rng: &mut R) -> Option<(Vec<f64>, Vec<f64>)> {
    let n = pc.g.nrows();
    let chol = pc.g.clone().cholesky()?;
    // v = L^{-T} z has g(v, v) = |z|^2
    let lt = chol.l().transpose();
    for _ in 0..16 {
        let z1 = nalgebra::DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let z2 = nalgebra::DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let x = lt.clone().solve_upper_triangular(&z1)?;
        let y = lt.clone().solve_upper_triangular(&z2)?;
        if let Some(pair) = orthonormalize(pc, x.as_slice(), y.as_slice()) {
            return Some(pair);
        }
    }
    None
}

/// Gram–Schmidt in the metric; `None` when the pair is (nearly) dependent.
pub fn orthonormalize(pc: &PointCurvature, x: &[f64], y: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    if !(pc.gram(x, y) > MIN_PLANE_GRAM) {
        return None;
    }
    let nx = pc.inner(x, x).sqrt();
    let e1: Vec<f64> = x.iter().map(|v| v / nx).collect();
    let c = pc.inner(&e1, y);
    let w: Vec<f64> = y.iter().zip(&e1).map(|(b, a)| b - c * a).collect();
    let nw = pc.inner(&w, &w).sqrt();
    if !(nw > 0.0) {
        return None;
    }
    Some((e1, w.iter().map(|v| v / nw).collect()))
}

struct PointResult {
    min: (f64, TwoPlane),
    max: (f64, TwoPlane),
    planes: usize,
}

fn scan_point(
    m: &MetricField,
    p: &[f64],
    index: u64,
    n_planes: usize,
    seed: u64,
) -> Result<PointResult, GeomError> {
    let pc = PointCurvature::at(m, p)?;
    let n = m.dim();
    let mut rng = stream(seed, index);
    let mut planes: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(n * (n - 1) / 2 + n_planes);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut x = vec![0.0; n];
            let mut y = vec![0.0; n];
            x[i] = 1.0;
            y[j] = 1.0;
            if let Some(pair) = orthonormalize(&pc, &x, &y) {
                planes.push(pair);
            }
        }
    }
    for _ in 0..n_planes {
        let pair = random_plane(&pc, &mut rng)
            .ok_or(GeomError::DegeneratePlane { point: p.to_vec(), gram: 0.0 })?;
        planes.push(pair);
    }
    let mut best_lo = (f64::INFINITY, None);
    let mut best_hi = (f64::NEG_INFINITY, None);
    for (x, y) in &planes {
        let k = pc.sectional(x, y)?;
        if k < best_lo.0 {
            best_lo = (k, Some((x.clone(), y.clone())));
        }
        if k > best_hi.0 {
            best_hi = (k, Some((x.clone(), y.clone())));
        }
    }
    let wrap = |(k, xy): (f64, Option<(Vec<f64>, Vec<f64>)>)| {
        let (x, y) = xy.expect("at least one plane evaluated");
        (k, TwoPlane::new(p.to_vec(), x, y))
    };
    Ok(PointResult { min: wrap(best_lo), max: wrap(best_hi), planes: planes.len() })
}

/// Scan caller-supplied points (used to compare spaces on shared samples).
pub fn scan_points(
    m: &MetricField,
    points: &[Vec<f64>],
    n_planes: usize,
    seed: u64,
    tol: f64,
) -> Result<ScanReport, GeomError> {
    if points.is_empty() {
        return Err(GeomError::InvalidArgument("scan needs at least one point".into()));
    }
    let results: Vec<Result<PointResult, GeomError>> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| scan_point(m, p, i as u64, n_planes, seed))
        .collect();
    let mut skipped = 0usize;
    let mut first_err = None;
    let mut lo: Option<(f64, TwoPlane)> = None;
    let mut hi: Option<(f64, TwoPlane)> = None;
    let mut evaluated = 0;
    for r in results {
        match r {
            Ok(pr) => {
                evaluated += pr.planes;
                if lo.as_ref().is_none_or(|(k, _)| pr.min.0 < *k) {
                    lo = Some(pr.min);
                }
                if hi.as_ref().is_none_or(|(k, _)| pr.max.0 > *k) {
                    hi = Some(pr.max);
                }
            }
            Err(e) => {
                skipped += 1;
                first_err.get_or_insert(e);
            }
        }
    }
    if skipped as f64 > MAX_SKIPPED_FRACTION * points.len() as f64 || lo.is_none() {
        return Err(GeomError::TooManySkipped {
            skipped,
            total: points.len(),
            first: Box::new(first_err.expect("skips recorded")),
        });
    }
    let (min_k, argmin) = lo.unwrap();
    let (max_k, argmax) = hi.unwrap();
    Ok(ScanReport {
        metric_id: m.id().to_string(),
        n_points: points.len(),
        n_planes,
        seed,
        tol,
        min_k,
        max_k,
        argmin,
        argmax,
        planes_evaluated: evaluated,
        skipped_points: skipped,
        verdict: if min_k >= -tol { ScanVerdict::Nonnegative } else { ScanVerdict::Negative },
    })
}

/// Sample `n_points` low-discrepancy interior points and `n_planes` random
/// planes per point (plus coordinate planes); deterministic in `seed`.
pub fn curvature_scan(
    m: &MetricField,
    n_points: usize,
    n_planes: usize,
    seed: u64,
    tol: f64,
) -> Result<ScanReport, GeomError> {
    if n_points == 0 || n_planes == 0 {
        return Err(GeomError::InvalidArgument("n_points and n_planes must be >= 1".into()));
    }
    let pts = interior_points(m.chart(), n_points, seed);
    scan_points(m, &pts, n_planes, seed, tol)
}

