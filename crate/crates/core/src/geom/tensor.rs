//! Levi-Civita connection and curvature in coordinates.
//!
//! Index conventions: `Γ^k_{ij}` is stored at `[k][i][j]`. The Riemann tensor
//! is fully lowered and normalized so that a space of constant curvature `c`
//! has `R_{ijkl} = c (g_ik g_jl − g_il g_jk)`; the sectional curvature of the
//! plane spanned by `X, Y` is then `R_{ijkl} X^i Y^j X^k Y^l / |X ∧ Y|²`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::metric::MetricJet;
use super::{GeomError, MetricField};

/// Condition number above which the metric is treated as not invertible.
pub const MAX_CONDITION: f64 = 1e12;
/// Gram determinant below which a plane is degenerate.
pub const MIN_PLANE_GRAM: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Christoffel {
    n: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn dim(&self) -> usize {
        self.n
    }
    /// `Γ^k_{ij}`
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.n + i) * self.n + j]
    }
}

#[derive(Clone, Debug)]
pub struct Riemann {
    n: usize,
    data: Vec<f64>,
}

impl Riemann {
    pub fn dim(&self) -> usize {
        self.n
    }
    /// `R_{ijkl}`
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.data[((i * n + j) * n + k) * n + l]
    }

    /// Largest violation of the algebraic symmetries and the first Bianchi
    /// identity, relative to the largest component (floored at 1).
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let scale = self.data.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        worst = worst
                            .max((r + self.get(j, i, k, l)).abs())
                            .max((r + self.get(i, j, l, k)).abs())
                            .max((r - self.get(k, l, i, j)).abs())
                            .max((r + self.get(j, k, i, l) + self.get(k, i, j, l)).abs());
                    }
                }
            }
        }
        worst / scale
    }
}

/// A 2-plane at a point, spanned by two coordinate vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPlane {
    pub point: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl TwoPlane {
    pub fn new(point: Vec<f64>, x: Vec<f64>, y: Vec<f64>) -> Self {
        Self { point, x, y }
    }
}

/// Connection and curvature evaluated once at a point, reusable for many planes.
#[derive(Clone, Debug)]
pub struct PointCurvature {
    pub point: Vec<f64>,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub christoffel: Christoffel,
    pub riemann: Riemann,
}

fn inverse_checked(g: &DMatrix<f64>, p: &[f64]) -> Result<DMatrix<f64>, GeomError> {
    let eig = g.clone().symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    let cond = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(cond <= MAX_CONDITION) {
        return Err(GeomError::NotInvertible { point: p.to_vec(), condition: cond });
    }
    g.clone()
        .try_inverse()
        .ok_or(GeomError::NotInvertible { point: p.to_vec(), condition: cond })
}

fn christoffel_from(jet: &MetricJet, g_inv: &DMatrix<f64>) -> (Christoffel, Vec<f64>) {
    let n = jet.g.nrows();
    // first kind: Γ_{l,ij} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
    let mut first = vec![0.0; n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in i..n {
                let v = 0.5 * (jet.dg[i][(j, l)] + jet.dg[j][(i, l)] - jet.dg[l][(i, j)]);
                first[(l * n + i) * n + j] = v;
                first[(l * n + j) * n + i] = v;
            }
        }
    }
    let mut second = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let v: f64 = (0..n).map(|l| g_inv[(k, l)] * first[(l * n + i) * n + j]).sum();
                second[(k * n + i) * n + j] = v;
                second[(k * n + j) * n + i] = v;
            }
        }
    }
    (Christoffel { n, data: second }, first)
}

fn riemann_from(jet: &MetricJet, gamma: &Christoffel, first: &[f64]) -> Riemann {
    let n = jet.g.nrows();
    let d2 = |a: usize, b: usize, i: usize, j: usize| jet.d2g[a * n + b][(i, j)];
    let lower = |m: usize, i: usize, j: usize| first[(m * n + i) * n + j];
    let mut data = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let second =
                        0.5 * (d2(j, k, i, l) + d2(i, l, j, k) - d2(i, k, j, l) - d2(j, l, i, k));
                    let quad: f64 = (0..n)
                        .map(|m| gamma.get(m, j, k) * lower(m, i, l) - gamma.get(m, i, k) * lower(m, j, l))
                        .sum();
                    data[((i * n + j) * n + k) * n + l] = second + quad;
                }
            }
        }
    }
    Riemann { n, data }
}

impl PointCurvature {
    pub fn at(m: &MetricField, p: &[f64]) -> Result<Self, GeomError> {
        m.chart().require_interior(p)?;
        Self::from_jet(p, m.jet(p))
    }

    /// Same computation on the finite-difference route, whatever the metric supplies.
    pub fn at_fd(m: &MetricField, p: &[f64]) -> Result<Self, GeomError> {
        m.chart().require_interior(p)?;
        Self::from_jet(p, m.fd_jet(p))
    }

    pub fn from_jet(p: &[f64], jet: MetricJet) -> Result<Self, GeomError> {
        let g_inv = inverse_checked(&jet.g, p)?;
        let (christoffel, first) = christoffel_from(&jet, &g_inv);
        let riemann = riemann_from(&jet, &christoffel, &first);
        Ok(Self { point: p.to_vec(), g: jet.g, g_inv, christoffel, riemann })
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.g[(i, j)] * x[i] * y[j];
            }
        }
        s
    }

    pub fn gram(&self, x: &[f64], y: &[f64]) -> f64 {
        self.inner(x, x) * self.inner(y, y) - self.inner(x, y).powi(2)
    }

    /// `R(X, Y, X, Y)` in this module's normalization.
    pub fn curvature_form(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                let xy = x[i] * y[j] - x[j] * y[i];
                if xy == 0.0 || j <= i {
                    continue;
                }
                for k in 0..n {
                    for l in (k + 1)..n {
                        let kl = x[k] * y[l] - x[l] * y[k];
                        if kl != 0.0 {
                            s += self.riemann.get(i, j, k, l) * xy * kl;
                        }
                    }
                }
            }
        }
        s
    }

    pub fn sectional(&self, x: &[f64], y: &[f64]) -> Result<f64, GeomError> {
        let gram = self.gram(x, y);
        if !(gram > MIN_PLANE_GRAM) {
            return Err(GeomError::DegeneratePlane { point: self.point.clone(), gram });
        }
        Ok(self.curvature_form(x, y) / gram)
    }
}

pub fn christoffel(m: &MetricField, p: &[f64]) -> Result<Christoffel, GeomError> {
    Ok(PointCurvature::at(m, p)?.christoffel)
}

pub fn riemann(m: &MetricField, p: &[f64]) -> Result<Riemann, GeomError> {
    Ok(PointCurvature::at(m, p)?.riemann)
}

pub fn sectional_curvature(m: &MetricField, plane: &TwoPlane) -> Result<f64, GeomError> {
    PointCurvature::at(m, &plane.point)?.sectional(&plane.x, &plane.y)
}
