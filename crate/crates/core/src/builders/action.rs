//! Smooth maps, isometry and freeness verification, isometric actions.

use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::product::{ProductMap, ProductMetric};
use super::BuildError;
use crate::geom::sampling::interior_points;
use crate::geom::{Chart, MetricField};

type PointFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
type DiffFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;

/// A map of a chart into itself, with an optional exact differential.
#[derive(Clone)]
pub struct SmoothMap {
    pub name: String,
    f: Arc<PointFn>,
    df: Option<Arc<DiffFn>>,
}

impl std::fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothMap").field("name", &self.name).field("exact_differential", &self.df.is_some()).finish()
    }
}

impl SmoothMap {
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        Self { name: name.into(), f: Arc::new(f), df: None }
    }

    pub fn with_differential<D>(mut self, df: D) -> Self
    where
        D: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        self.df = Some(Arc::new(df));
        self
    }

    /// The map induced on a product's chart by a factorwise map.
    pub fn from_product(m: &ProductMetric, map: &ProductMap) -> Self {
        let (m1, p1) = (m.clone(), map.clone());
        let (m2, p2) = (m.clone(), map.clone());
        Self::new(map.name.clone(), move |p| p1.apply(&m1, p).unwrap_or_else(|_| vec![f64::NAN; p.len()]))
            .with_differential(move |p| {
                p2.differential(&m2, p).unwrap_or_else(|_| DMatrix::from_element(p.len(), p.len(), f64::NAN))
            })
    }

    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        (self.f)(p)
    }

    /// Exact differential if supplied, else central differences with
    /// periodic coordinates unwrapped.
    pub fn differential(&self, chart: &Chart, p: &[f64]) -> DMatrix<f64> {
        if let Some(df) = &self.df {
            return df(p);
        }
        let n = p.len();
        let mut d = DMatrix::zeros(n, n);
        for b in 0..n {
            let h = 1e-6 * chart.axes[b].len();
            let mut up = p.to_vec();
            let mut dn = p.to_vec();
            up[b] += h;
            dn[b] -= h;
            let delta = chart.delta(&self.apply(&dn), &self.apply(&up));
            for a in 0..n {
                d[(a, b)] = delta[a] / (2.0 * h);
            }
        }
        d
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryVerdict {
    pub map: String,
    pub passed: bool,
    pub max_defect: f64,
    pub worst_point: Vec<f64>,
    pub samples: usize,
    pub tol: f64,
}

/// Largest Frobenius norm of `Dφᵀ g(φ(p)) Dφ − g(p)` over interior samples.
pub fn verify_isometry(
    m: &MetricField,
    phi: &SmoothMap,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<IsometryVerdict, BuildError> {
    let chart = m.chart();
    let pts = interior_points(chart, n_samples, seed);
    let defects: Vec<Result<(f64, Vec<f64>), BuildError>> = pts
        .par_iter()
        .map(|p| {
            let mut q = phi.apply(p);
            chart.wrap(&mut q);
            if !chart.contains_closed(&q, 1e-9) || q.iter().any(|v| !v.is_finite()) {
                return Err(BuildError::MapLeavesDomain { map: phi.name.clone(), point: p.clone() });
            }
            let d = phi.differential(chart, p);
            let pulled = d.transpose() * m.g(&q) * &d;
            Ok(((pulled - m.g(p)).norm(), p.clone()))
        })
        .collect();
    let mut worst = (0.0f64, Vec::new());
    for r in defects {
        let (d, p) = r?;
        if !(d <= worst.0) {
            worst = (d, p);
        }
    }
    Ok(IsometryVerdict {
        map: phi.name.clone(),
        passed: worst.0 <= tol,
        max_defect: worst.0,
        worst_point: worst.1,
        samples: pts.len(),
        tol,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionLabel {
    /// The involution on the disk or `S²` factor alone.
    Reflection,
    Antipodal,
    /// Involution on the disk/`S²` factor paired with the antipodal map.
    Product,
    Trivial,
}

/// A finite group acting isometrically on a product, given by generators.
#[derive(Clone, Debug)]
pub struct IsometricAction {
    pub label: ActionLabel,
    pub group_order: usize,
    pub generators: Vec<ProductMap>,
}

impl IsometricAction {
    pub fn trivial() -> Self {
        Self { label: ActionLabel::Trivial, group_order: 1, generators: Vec::new() }
    }

    pub fn involution(label: ActionLabel, map: ProductMap) -> Self {
        Self { label, group_order: 2, generators: vec![map] }
    }

    pub fn is_trivial(&self) -> bool {
        self.group_order == 1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreenessVerdict {
    pub map: String,
    pub passed: bool,
    /// Smallest embedded displacement `|E(p) − E(T p)|` found.
    pub min_distance: f64,
    pub witness: Vec<f64>,
    pub samples: usize,
    pub tol: f64,
}

/// Embedded displacement of `p` under a factorwise map.
pub fn displacement(m: &ProductMetric, map: &ProductMap, p: &[f64]) -> f64 {
    match map.apply(m, p) {
        Ok(q) => m.embed(p).iter().zip(m.embed(&q)).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt(),
        Err(_) => f64::NAN,
    }
}

/// Pattern search for a local minimum of `f` over the closed chart box.
pub fn minimize_in_chart<F: Fn(&[f64]) -> f64>(chart: &Chart, start: &[f64], f: F) -> (f64, Vec<f64>) {
    let clamp = |p: &mut Vec<f64>| {
        for (x, a) in p.iter_mut().zip(&chart.axes) {
            if !a.periodic {
                *x = x.clamp(a.lo, a.hi);
            }
        }
    };
    let mut p = start.to_vec();
    let mut best = f(&p);
    let mut step: Vec<f64> = chart.axes.iter().map(|a| 0.05 * a.len()).collect();
    for _ in 0..4000 {
        let mut improved = false;
        for i in 0..p.len() {
            for sign in [1.0, -1.0] {
                let mut q = p.clone();
                q[i] += sign * step[i];
                clamp(&mut q);
                let v = f(&q);
                if v < best {
                    best = v;
                    p = q;
                    improved = true;
                }
            }
        }
        if !improved {
            step.iter_mut().for_each(|s| *s *= 0.5);
            if step.iter().zip(&chart.axes).all(|(s, a)| *s < 1e-12 * a.len()) {
                break;
            }
        }
    }
    (best, p)
}

/// Sampled minimum of the displacement, refined by local minimization from
/// the best samples; passes iff the minimum stays `≥ tol`.
pub fn verify_free(
    m: &ProductMetric,
    map: &ProductMap,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<FreenessVerdict, BuildError> {
    map.apply(m, &interior_points(m.chart(), 1, seed)[0])?;
    let pts = interior_points(m.chart(), n_samples, seed);
    let mut scored: Vec<(f64, usize)> = pts.par_iter().enumerate().map(|(i, p)| (displacement(m, map, p), i)).collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let refined: Vec<(f64, Vec<f64>)> = scored
        .iter()
        .take(8)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|(_, i)| minimize_in_chart(m.chart(), &pts[*i], |p| displacement(m, map, p)))
        .collect();
    let (min_distance, witness) = refined
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap_or((f64::INFINITY, Vec::new()));
    Ok(FreenessVerdict {
        map: map.name.clone(),
        passed: min_distance >= tol,
        min_distance,
        witness,
        samples: pts.len(),
        tol,
    })
}

/// `max |E(T(T p)) − E(p)|` over samples.
pub fn involution_defect(m: &ProductMetric, map: &ProductMap, n_samples: usize, seed: u64) -> Result<f64, BuildError> {
    let mut worst = 0.0f64;
    for p in interior_points(m.chart(), n_samples, seed) {
        let q = map.apply(m, &map.apply(m, &p)?)?;
        let d = m.embed(&p).iter().zip(m.embed(&q)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst = worst.max(d);
    }
    Ok(worst)
}
