use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::jet::{Jet2, Scalar, MAX_DIM};
use super::{Chart, GeomError};

/// Relative central-difference step for first partials (scaled by the axis length).
pub const FD_STEP_FIRST: f64 = 2e-4;
/// Relative step for nested central differences (second partials).
pub const FD_STEP_SECOND: f64 = 5e-4;
/// Smallest admissible eigenvalue of a metric matrix.
pub const PD_EIGEN_FLOOR: f64 = 1e-10;

/// Offsets and weights of the five-point first-derivative stencil.
const STENCIL: [(f64, f64); 4] = [(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)];

/// A metric written once, generically over the scalar type.
///
/// `eval` fills `out` (row-major `dim x dim`, pre-zeroed) with the metric
/// components at `p`. Implementors must write a symmetric matrix.
pub trait MetricExpr: Send + Sync {
    fn dim(&self) -> usize;
    fn eval<S: Scalar>(&self, p: &[S], out: &mut [S]);
}

type MatFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;
type MatsFn = dyn Fn(&[f64]) -> Vec<DMatrix<f64>> + Send + Sync;
type JetFn = dyn Fn(&[f64]) -> MetricJet + Send + Sync;

/// Metric together with its first and second coordinate partials at a point.
///
/// `dg[a]` is `∂_a g`; `d2g[a * n + b]` is `∂_a ∂_b g`.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub g: DMatrix<f64>,
    pub dg: Vec<DMatrix<f64>>,
    pub d2g: Vec<DMatrix<f64>>,
}

#[derive(Clone)]
enum Derivatives {
    FiniteDifference,
    Closures { dg: Arc<MatsFn>, d2g: Option<Arc<MatsFn>> },
    Jet(Arc<JetFn>),
}

/// A coordinate chart plus a point → symmetric-matrix map, with optional
/// derivative access. Missing derivatives fall back to central differences.
#[derive(Clone)]
pub struct MetricField {
    id: String,
    chart: Chart,
    g: Arc<MatFn>,
    derivs: Derivatives,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.derivs {
            Derivatives::FiniteDifference => "finite-difference",
            Derivatives::Closures { .. } => "closures",
            Derivatives::Jet(_) => "jet",
        };
        f.debug_struct("MetricField")
            .field("id", &self.id)
            .field("chart", &self.chart.name)
            .field("dim", &self.chart.dim())
            .field("derivatives", &kind)
            .finish()
    }
}

impl MetricField {
    /// Metric given only by its values; derivatives by finite differences.
    pub fn new<F>(id: impl Into<String>, chart: Chart, g: F) -> Self
    where
        F: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        Self { id: id.into(), chart, g: Arc::new(g), derivs: Derivatives::FiniteDifference }
    }

    /// Supply analytic first partials; second partials come from differencing them.
    pub fn with_dg<F>(mut self, dg: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<DMatrix<f64>> + Send + Sync + 'static,
    {
        let d2g = match &self.derivs {
            Derivatives::Closures { d2g, .. } => d2g.clone(),
            _ => None,
        };
        self.derivs = Derivatives::Closures { dg: Arc::new(dg), d2g };
        self
    }

    /// Supply analytic second partials (requires `with_dg` first).
    pub fn with_d2g<F>(mut self, d2g: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<DMatrix<f64>> + Send + Sync + 'static,
    {
        if let Derivatives::Closures { dg, .. } = &self.derivs {
            self.derivs = Derivatives::Closures { dg: dg.clone(), d2g: Some(Arc::new(d2g)) };
        }
        self
    }

    /// Build from a generic expression; derivatives are exact via jets.
    pub fn from_expr<E: MetricExpr + 'static>(id: impl Into<String>, chart: Chart, expr: E) -> Self {
        let n = expr.dim();
        assert_eq!(n, chart.dim(), "expression and chart dimensions differ");
        assert!(n <= MAX_DIM, "dimension {n} exceeds jet capacity {MAX_DIM}");
        let expr = Arc::new(expr);
        let e1 = expr.clone();
        let g = move |p: &[f64]| {
            let mut out = vec![0.0; n * n];
            e1.eval(p, &mut out);
            DMatrix::from_row_slice(n, n, &out)
        };
        let jet = move |p: &[f64]| {
            let vars: Vec<Jet2> = (0..n).map(|i| Jet2::variable(n, i, p[i])).collect();
            let mut out = vec![Jet2::constant(0.0); n * n];
            expr.eval(&vars, &mut out);
            let g = DMatrix::from_fn(n, n, |i, j| out[i * n + j].value());
            let dg = (0..n).map(|a| DMatrix::from_fn(n, n, |i, j| out[i * n + j].grad(a))).collect();
            let mut d2g = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    d2g.push(DMatrix::from_fn(n, n, |i, j| out[i * n + j].hess(a, b)));
                }
            }
            MetricJet { g, dg, d2g }
        };
        Self { id: id.into(), chart, g: Arc::new(g), derivs: Derivatives::Jet(Arc::new(jet)) }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        !matches!(self.derivs, Derivatives::FiniteDifference)
    }

    /// Same values, derivatives forced onto the finite-difference path.
    pub fn finite_difference_only(&self) -> Self {
        Self { derivs: Derivatives::FiniteDifference, ..self.clone() }
    }

    pub fn g(&self, p: &[f64]) -> DMatrix<f64> {
        (self.g)(p)
    }

    /// Metric and partials through the fastest available route.
    pub fn jet(&self, p: &[f64]) -> MetricJet {
        match &self.derivs {
            Derivatives::Jet(f) => f(p),
            Derivatives::Closures { dg, d2g } => {
                let g = self.g(p);
                let first = dg(p);
                let second = match d2g {
                    Some(f) => f(p),
                    None => self.fd_second_from_first(p, dg.as_ref()),
                };
                MetricJet { g, dg: first, d2g: second }
            }
            Derivatives::FiniteDifference => self.fd_jet(p),
        }
    }

    fn step(&self, axis: usize, rel: f64) -> f64 {
        rel * self.chart.axes[axis].len()
    }

    fn shifted(p: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
        let mut q = p.to_vec();
        for &(a, h) in moves {
            q[a] += h;
        }
        q
    }

    /// Fourth-order central-difference first partials of `g`.
    pub fn fd_dg(&self, p: &[f64]) -> Vec<DMatrix<f64>> {
        let n = self.dim();
        (0..n)
            .map(|a| {
                let h = self.step(a, FD_STEP_FIRST);
                let mut acc = DMatrix::zeros(n, n);
                for (o, w) in STENCIL {
                    acc += self.g(&Self::shifted(p, &[(a, o * h)])) * w;
                }
                acc / h
            })
            .collect()
    }

    /// Nested fourth-order central-difference second partials of `g`.
    pub fn fd_d2g(&self, p: &[f64]) -> Vec<DMatrix<f64>> {
        let n = self.dim();
        let mut out = vec![DMatrix::zeros(n, n); n * n];
        for a in 0..n {
            let ha = self.step(a, FD_STEP_SECOND);
            for b in a..n {
                let hb = self.step(b, FD_STEP_SECOND);
                let mut m = DMatrix::zeros(n, n);
                for (oa, wa) in STENCIL {
                    for (ob, wb) in STENCIL {
                        m += self.g(&Self::shifted(p, &[(a, oa * ha), (b, ob * hb)])) * (wa * wb);
                    }
                }
                m /= ha * hb;
                out[b * n + a] = m.clone();
                out[a * n + b] = m;
            }
        }
        out
    }

    fn fd_second_from_first(&self, p: &[f64], dg: &MatsFn) -> Vec<DMatrix<f64>> {
        let n = self.dim();
        let mut out = vec![DMatrix::zeros(n, n); n * n];
        for b in 0..n {
            let h = self.step(b, FD_STEP_SECOND);
            for (o, w) in STENCIL {
                let d = dg(&Self::shifted(p, &[(b, o * h)]));
                for a in 0..n {
                    out[a * n + b] += &d[a] * (w / h);
                }
            }
        }
        // symmetrize mixed partials
        for a in 0..n {
            for b in (a + 1)..n {
                let m = (&out[a * n + b] + &out[b * n + a]) * 0.5;
                out[a * n + b] = m.clone();
                out[b * n + a] = m;
            }
        }
        out
    }

    /// Metric jet computed purely by finite differences (the oracle route).
    pub fn fd_jet(&self, p: &[f64]) -> MetricJet {
        MetricJet { g: self.g(p), dg: self.fd_dg(p), d2g: self.fd_d2g(p) }
    }

    /// Largest relative disagreement between the supplied partials and
    /// finite differences at `p`; zero when only finite differences exist.
    pub fn derivative_disagreement(&self, p: &[f64]) -> f64 {
        if !self.has_analytic_derivatives() {
            return 0.0;
        }
        let exact = self.jet(p);
        let fd = self.fd_dg(p);
        exact
            .dg
            .iter()
            .zip(&fd)
            .map(|(a, b)| {
                let scale = a.amax().max(b.amax()).max(1.0);
                (a - b).amax() / scale
            })
            .fold(0.0, f64::max)
    }

    /// Symmetry and positive-definiteness at `p`.
    pub fn check_point(&self, p: &[f64]) -> Result<(), GeomError> {
        let g = self.g(p);
        let asym = (&g - g.transpose()).amax();
        if asym > 1e-12 * g.amax().max(1.0) {
            return Err(GeomError::NotSymmetric { point: p.to_vec(), defect: asym });
        }
        let min_eig = g.symmetric_eigenvalues().min();
        if !(min_eig > PD_EIGEN_FLOOR) {
            return Err(GeomError::NotPositiveDefinite { point: p.to_vec(), min_eigenvalue: min_eig });
        }
        Ok(())
    }
}
