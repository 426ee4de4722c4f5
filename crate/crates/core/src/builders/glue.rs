//! Doubles of disk-bundle blocks glued along their boundary by
//! `(θ, x) ↦ (θ, α(ψ) x)`.
//!
//! The boundary of a twisted block `(D² × S^m)/T` fibers over the circle
//! `S¹/(θ ~ θ + π)`, whose coordinate is `ψ = 2θ`; loops are evaluated at
//! `ψ = |Γ| θ` so that the gluing map commutes with the deck involution.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::factor::Factor;
use super::product::ProductExpr;
use super::quotient::{warp_square_jet, QuotientMetric};
use super::sphere;
use super::BuildError;
use crate::geom::sampling::unit_halton;
use crate::geom::{Axis, Chart, MetricExpr, MetricField, Scalar, DEFAULT_SINGULAR_MARGIN};

/// Tolerance of the cross-interface jet comparison.
pub const JET_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopTerm {
    /// Coordinate plane `(i, j)` of `R^dim`, `i < j`.
    pub plane: (usize, usize),
    /// Winding multiple.
    pub multiple: i64,
}

/// `ψ ↦ ∏ R_{plane}(m ψ)` in `SO(dim)`, terms applied left to right.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationLoop {
    pub dim: usize,
    pub terms: Vec<LoopTerm>,
}

impl RotationLoop {
    pub fn identity(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    pub fn single(dim: usize, plane: (usize, usize), multiple: i64) -> Result<Self, BuildError> {
        Self::new(dim, vec![LoopTerm { plane, multiple }])
    }

    pub fn new(dim: usize, terms: Vec<LoopTerm>) -> Result<Self, BuildError> {
        for t in &terms {
            let (i, j) = t.plane;
            if !(i < j && j < dim) {
                return Err(BuildError::InvalidArgument(format!("plane ({i}, {j}) invalid in R^{dim}")));
            }
        }
        Ok(Self { dim, terms })
    }

    pub fn matrix(&self, psi: f64) -> DMatrix<f64> {
        let mut m = DMatrix::identity(self.dim, self.dim);
        for t in &self.terms {
            m *= sphere::plane_rotation(self.dim, t.plane.0, t.plane.1, t.multiple as f64 * psi);
        }
        m
    }

    /// `dα/dψ`.
    pub fn derivative(&self, psi: f64) -> DMatrix<f64> {
        let mut total = DMatrix::zeros(self.dim, self.dim);
        for k in 0..self.terms.len() {
            let mut m = DMatrix::identity(self.dim, self.dim);
            for (i, t) in self.terms.iter().enumerate() {
                let a = t.multiple as f64 * psi;
                let r = sphere::plane_rotation(self.dim, t.plane.0, t.plane.1, a);
                if i == k {
                    // d/dψ R(mψ) = m R(mψ + π/2) restricted to the plane
                    let mut d = sphere::plane_rotation(self.dim, t.plane.0, t.plane.1, a + PI / 2.0) * t.multiple as f64;
                    for c in 0..self.dim {
                        if c != t.plane.0 && c != t.plane.1 {
                            d[(c, c)] = 0.0;
                        }
                    }
                    m *= d;
                } else {
                    m *= r;
                }
            }
            total += m;
        }
        total
    }

    /// Pointwise product, homotopic to concatenation in `π₁(SO(dim))`.
    pub fn concat(&self, other: &RotationLoop) -> Result<RotationLoop, BuildError> {
        if self.dim != other.dim {
            return Err(BuildError::InvalidArgument("loops act on different dimensions".into()));
        }
        Ok(RotationLoop { dim: self.dim, terms: self.terms.iter().chain(&other.terms).copied().collect() })
    }

    /// `max ‖α(ψ)ᵀα(ψ) − I‖` and `‖α(2π) − I‖` on `n` angles.
    pub fn orthogonality_defect(&self, n: usize) -> f64 {
        let id = DMatrix::identity(self.dim, self.dim);
        let closure = (self.matrix(2.0 * PI) - &id).amax();
        (0..n)
            .map(|i| {
                let m = self.matrix(2.0 * PI * i as f64 / n as f64);
                (m.transpose() * &m - &id).amax()
            })
            .fold(closure, f64::max)
    }
}

/// Class of the loop in `π₁(SO(dim)) → Z/2`: total winding mod 2. For
/// `dim ≥ 3` this is the full fundamental group; 1 means essential.
pub fn loop_class(l: &RotationLoop) -> u8 {
    l.terms.iter().map(|t| t.multiple).sum::<i64>().rem_euclid(2) as u8
}

type LinearFamily = dyn Fn(f64) -> DMatrix<f64> + Send + Sync;

/// How the boundary of block A is identified with that of block B.
#[derive(Clone)]
pub enum GluingMap {
    Loop(RotationLoop),
    /// Arbitrary family `ψ ↦ L(ψ)` of linear maps of the sphere's ambient
    /// space (test fixtures; need not be orthogonal).
    Linear { name: String, family: Arc<LinearFamily> },
}

impl std::fmt::Debug for GluingMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GluingMap::Loop(l) => f.debug_tuple("Loop").field(l).finish(),
            GluingMap::Linear { name, .. } => f.debug_tuple("Linear").field(name).finish(),
        }
    }
}

impl GluingMap {
    pub fn matrix(&self, psi: f64) -> DMatrix<f64> {
        match self {
            GluingMap::Loop(l) => l.matrix(psi),
            GluingMap::Linear { family, .. } => family(psi),
        }
    }

    fn derivative(&self, psi: f64) -> DMatrix<f64> {
        match self {
            GluingMap::Loop(l) => l.derivative(psi),
            GluingMap::Linear { family, .. } => {
                let h = 1e-6;
                (family(psi + h) - family(psi - h)) / (2.0 * h)
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            GluingMap::Loop(l) if l.terms.is_empty() => "id".into(),
            GluingMap::Loop(l) => format!("alpha(class {})", loop_class(l)),
            GluingMap::Linear { name, .. } => name.clone(),
        }
    }
}

/// Two disk-bundle blocks and a boundary identification.
#[derive(Clone, Debug)]
pub struct GluedSpace {
    pub block_a: QuotientMetric,
    pub block_b: QuotientMetric,
    pub gluing: GluingMap,
    pub collar_depth: f64,
}

impl GluedSpace {
    pub fn new(block_a: QuotientMetric, block_b: QuotientMetric, gluing: GluingMap, collar_depth: f64) -> Self {
        Self { block_a, block_b, gluing, collar_depth }
    }

    fn sphere_factor(q: &QuotientMetric) -> Option<&Factor> {
        q.cover().factors().get(1)
    }

    /// `|Γ|`, the factor between the cover angle `θ` and the loop angle `ψ`.
    pub fn angle_factor(&self) -> f64 {
        self.block_a.action().group_order as f64
    }

    pub fn volume(&self) -> Result<f64, BuildError> {
        Ok(self.block_a.volume()? + self.block_b.volume()?)
    }

    fn check_shape(&self) -> Result<(), BuildError> {
        for q in [&self.block_a, &self.block_b] {
            let f = q.cover().factors();
            if !matches!(f.first(), Some(Factor::WarpedDisk(_))) || f.len() > 2 {
                return Err(BuildError::InvalidArgument(format!(
                    "block {} must be a disk times at most one sphere",
                    q.id()
                )));
            }
            if let Some(s) = f.get(1) {
                if s.sphere_dim().is_none() {
                    return Err(BuildError::InvalidArgument(format!("block {} fiber is not a sphere", q.id())));
                }
            }
        }
        Ok(())
    }

    /// Order-0 boundary data of both blocks must coincide.
    fn boundary_mismatch(&self) -> Option<String> {
        let (a, b) = (&self.block_a, &self.block_b);
        let (pa, pb) = (a.disk_profile()?, b.disk_profile()?);
        if (pa.r() - pb.r()).abs() > 1e-12 {
            return Some(format!("boundary circle radii {} vs {}", pa.r(), pb.r()));
        }
        let (sa, sb) = (Self::sphere_factor(a), Self::sphere_factor(b));
        match (sa, sb) {
            (None, None) => {}
            (Some(x), Some(y)) if x.sphere_dim() == y.sphere_dim() && x.radius() == y.radius() => {}
            _ => return Some(format!("fiber spheres {sa:?} vs {sb:?}")),
        }
        if a.action().group_order != b.action().group_order {
            return Some("blocks are quotients by different groups".into());
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GluingVerdict {
    pub gluing: String,
    pub passed: bool,
    /// `max ‖φ*(g_sphere) − g_sphere‖` on the fibers.
    pub fiber_defect: f64,
    /// `max |E(φ(T p)) − E(T(φ p))|`, compatibility with the deck involution.
    pub deck_defect: f64,
    /// Defect of the full boundary metric `r² dθ² + g_sphere`, including the
    /// `dθ` cross terms created by a non-constant loop. Diagnostic only.
    pub full_defect: f64,
    pub samples: usize,
    pub tol: f64,
}

/// Boundary isometry check of the gluing map: on each fiber `x ↦ α(ψ) x`
/// must preserve the sphere metric and `θ` is preserved.
pub fn gluing_isometry_check(gs: &GluedSpace, n_samples: usize, seed: u64, tol: f64) -> Result<GluingVerdict, BuildError> {
    gs.check_shape()?;
    if let Some(why) = gs.boundary_mismatch() {
        return Err(BuildError::BoundaryMismatch(why));
    }
    let r_disk = gs.block_a.disk_profile().unwrap().r();
    let q = gs.angle_factor();
    let Some(sphere_f) = GluedSpace::sphere_factor(&gs.block_a) else {
        return Ok(GluingVerdict {
            gluing: gs.gluing.name(),
            passed: true,
            fiber_defect: 0.0,
            deck_defect: 0.0,
            full_defect: 0.0,
            samples: 0,
            tol,
        });
    };
    let m = sphere_f.sphere_dim().unwrap();
    let rad = sphere_f.radius().unwrap();
    if gs.gluing.matrix(0.0).nrows() != m + 1 {
        return Err(BuildError::BoundaryMismatch(format!("gluing acts on R^{}, fiber is S^{m}", gs.gluing.matrix(0.0).nrows())));
    }
    let chart = gs.block_a.cover().chart();
    let off = gs.block_a.cover().offsets()[1];
    let samples = unit_halton(n_samples, m + 1, seed);
    let rows: Vec<[f64; 3]> = samples
        .par_iter()
        .map(|u| {
            let theta = 2.0 * PI * u[0];
            let x: Vec<f64> = (0..m)
                .map(|a| {
                    let (lo, hi) = chart.interior_range(off + a);
                    lo + u[a + 1] * (hi - lo)
                })
                .collect();
            let psi = q * theta;
            let l = gs.gluing.matrix(psi);
            let jx = sphere::tangent_frame(&x);
            let id = DMatrix::identity(m + 1, m + 1);
            let fiber = ((jx.transpose() * (l.transpose() * &l - id) * &jx) * (rad * rad)).norm();
            let ex = DVector::from_vec(sphere::embed(&x));
            let deck = if q > 1.0 {
                let a = gs.gluing.matrix(psi + q * PI) * (-&ex);
                let b = -(&l * &ex);
                (a - b).amax()
            } else {
                0.0
            };
            // full pullback on (θ, x) with metric r² dθ² + R² g_round
            let lx = &l * &ex;
            let y = sphere::coords(lx.as_slice());
            let jy = sphere::tangent_frame(&y);
            let gy = jy.transpose() * &jy;
            let gy_inv = gy.clone().try_inverse().unwrap_or_else(|| DMatrix::from_element(m, m, f64::NAN));
            let proj = |v: DVector<f64>| &gy_inv * (jy.transpose() * v) / lx.norm();
            let dth = proj(gs.gluing.derivative(psi) * &ex * q);
            let dx = &gy_inv * (jy.transpose() * (&l * &jx)) / lx.norm();
            let mut d = DMatrix::zeros(m + 1, m + 1);
            d[(0, 0)] = 1.0;
            for a in 0..m {
                d[(a + 1, 0)] = dth[a];
                for b in 0..m {
                    d[(a + 1, b + 1)] = dx[(a, b)];
                }
            }
            let metric = |gs_: &DMatrix<f64>| {
                let mut g = DMatrix::zeros(m + 1, m + 1);
                g[(0, 0)] = r_disk * r_disk;
                g.view_mut((1, 1), (m, m)).copy_from(&(gs_ * (rad * rad)));
                g
            };
            let gx = jx.transpose() * &jx;
            let full = (d.transpose() * metric(&gy) * &d - metric(&gx)).norm();
            [fiber, deck, full]
        })
        .collect();
    let max = |k: usize| rows.iter().map(|r| r[k]).fold(0.0, f64::max);
    let (fiber_defect, deck_defect, full_defect) = (max(0), max(1), max(2));
    Ok(GluingVerdict {
        gluing: gs.gluing.name(),
        passed: fiber_defect <= tol && deck_defect <= tol,
        fiber_defect,
        deck_defect,
        full_defect,
        samples: n_samples,
        tol,
    })
}

/// Metric on `(s, θ, x)` with `s ∈ [0, 2 t_max]`: block A for `s ≤ t_max`,
/// block B in its own coordinates at `t = 2 t_max − s` otherwise.
#[derive(Clone, Debug)]
struct GluedExpr {
    a: ProductExpr,
    b: ProductExpr,
    t_max: f64,
}

impl MetricExpr for GluedExpr {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn eval<S: Scalar>(&self, p: &[S], out: &mut [S]) {
        if p[0].value() <= self.t_max {
            self.a.eval(p, out);
            return;
        }
        let mut q = p.to_vec();
        q[0] = S::cst(2.0 * self.t_max) - p[0];
        self.b.eval(&q, out);
        // ds = −dt flips the mixed components of the first row and column
        let n = self.dim();
        for j in 1..n {
            out[j] = -out[j];
            out[j * n] = -out[j * n];
        }
    }
}

#[derive(Clone, Debug)]
pub struct GluedMetric {
    pub space: GluedSpace,
    field: MetricField,
    t_max: f64,
    /// `(order, |∂^k g_A − (−1)^k ∂^k g_B|)` at the interface.
    pub jets: Vec<(usize, f64)>,
}

impl GluedMetric {
    pub fn metric(&self) -> &MetricField {
        &self.field
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Which block a glued-chart point lies in.
    pub fn side(&self, p: &[f64]) -> char {
        if p[0] <= self.t_max {
            'A'
        } else {
            'B'
        }
    }
}

/// Compare interface jets up to the profiles' `jet_order` and assemble the
/// piecewise metric. Fails with the first order whose jets disagree.
pub fn glued_metric(gs: &GluedSpace) -> Result<GluedMetric, BuildError> {
    gs.check_shape()?;
    let (pa, pb) = (gs.block_a.disk_profile().unwrap(), gs.block_b.disk_profile().unwrap());
    let order = pa.jet_order().min(pb.jet_order());
    let mut jets = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let da = warp_square_jet(pa, k, pa.t_max());
        let db = warp_square_jet(pb, k, pb.t_max());
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let mut defect = (da - sign * db).abs();
        if k == 0 && gs.boundary_mismatch().is_some() {
            defect = defect.max(1.0);
        }
        if defect > JET_TOL {
            return Err(BuildError::JetMismatch { order: k, defect });
        }
        jets.push((k, defect));
    }
    let (Some(ea), Some(eb)) = (gs.block_a.cover().expr(), gs.block_b.cover().expr()) else {
        return Err(BuildError::NeedsMonteCarlo("glued blocks must have closed-form factors".into()));
    };
    let t_max = pa.t_max();
    let mut axes = vec![Axis::polar("s", 0.0, 2.0 * t_max)];
    axes.extend(gs.block_a.cover().chart().axes.iter().skip(1).cloned());
    let id = format!("{}+{}({})", gs.block_a.id(), gs.block_b.id(), gs.gluing.name());
    let chart = Chart::new(id.clone(), axes, DEFAULT_SINGULAR_MARGIN)?;
    let field = MetricField::from_expr(id, chart, GluedExpr { a: ea.clone(), b: eb.clone(), t_max });
    Ok(GluedMetric { space: gs.clone(), field, t_max, jets })
}
