//! Riemannian products of [`Factor`]s and maps acting factorwise.

use std::sync::Arc;

use nalgebra::DMatrix;

use super::factor::{Factor, FactorMap};
use super::BuildError;
use crate::geom::{Chart, MetricExpr, MetricField, Scalar, DEFAULT_SINGULAR_MARGIN};

/// Block-diagonal metric expression over a list of factors (no raw factors).
#[derive(Clone, Debug)]
pub struct ProductExpr {
    factors: Arc<Vec<Factor>>,
    offsets: Vec<usize>,
    dim: usize,
}

impl ProductExpr {
    fn new(factors: Arc<Vec<Factor>>) -> Self {
        let mut offsets = Vec::with_capacity(factors.len());
        let mut dim = 0;
        for f in factors.iter() {
            offsets.push(dim);
            dim += f.dim();
        }
        Self { factors, offsets, dim }
    }
}

impl MetricExpr for ProductExpr {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval<S: Scalar>(&self, p: &[S], out: &mut [S]) {
        for (f, &o) in self.factors.iter().zip(&self.offsets) {
            f.eval(&p[o..o + f.dim()], out, self.dim, o);
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProductMetric {
    factors: Arc<Vec<Factor>>,
    offsets: Vec<usize>,
    expr: Option<ProductExpr>,
    realized: MetricField,
}

impl ProductMetric {
    pub fn new(id: impl Into<String>, factors: Vec<Factor>) -> Result<Self, BuildError> {
        if factors.is_empty() {
            return Err(BuildError::InvalidArgument("a product needs at least one factor".into()));
        }
        let id = id.into();
        let axes = factors
            .iter()
            .enumerate()
            .flat_map(|(i, f)| f.axes(&if factors.len() > 1 { format!("f{i}.") } else { String::new() }))
            .collect();
        let chart = Chart::new(id.clone(), axes, DEFAULT_SINGULAR_MARGIN)?;
        let factors = Arc::new(factors);
        let expr = ProductExpr::new(factors.clone());
        let offsets = expr.offsets.clone();
        let has_raw = factors.iter().any(|f| matches!(f, Factor::Raw(_)));
        let (expr, realized) = if has_raw {
            let fs = factors.clone();
            let offs = offsets.clone();
            let n = expr.dim;
            let field = MetricField::new(id, chart, move |p: &[f64]| {
                let mut g = DMatrix::zeros(n, n);
                for (f, &o) in fs.iter().zip(&offs) {
                    let d = f.dim();
                    let block = match f {
                        Factor::Raw(m) => m.g(&p[o..o + d]),
                        _ => {
                            let mut out = vec![0.0; n * n];
                            f.eval(&p[o..o + d], &mut out, n, o);
                            DMatrix::from_fn(d, d, |i, j| out[(o + i) * n + o + j])
                        }
                    };
                    g.view_mut((o, o), (d, d)).copy_from(&block);
                }
                g
            });
            (None, field)
        } else {
            (Some(expr.clone()), MetricField::from_expr(id, chart, expr))
        };
        Ok(Self { factors, offsets, expr, realized })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn metric(&self) -> &MetricField {
        &self.realized
    }

    pub fn chart(&self) -> &Chart {
        self.realized.chart()
    }

    pub fn dim(&self) -> usize {
        self.realized.dim()
    }

    pub fn id(&self) -> &str {
        self.realized.id()
    }

    /// Generic expression, absent when a factor is raw.
    pub fn expr(&self) -> Option<&ProductExpr> {
        self.expr.as_ref()
    }

    /// Coordinates of factor `i` inside a product point.
    pub fn slice<'a>(&self, i: usize, p: &'a [f64]) -> &'a [f64] {
        let o = self.offsets[i];
        &p[o..o + self.factors[i].dim()]
    }

    /// Index of the first warped-disk factor.
    pub fn disk_factor(&self) -> Option<usize> {
        self.factors.iter().position(|f| matches!(f, Factor::WarpedDisk(_)))
    }

    /// Concatenated factor embeddings.
    pub fn embed(&self, p: &[f64]) -> Vec<f64> {
        (0..self.factors.len()).flat_map(|i| self.factors[i].embed(self.slice(i, p))).collect()
    }

    /// Product of closed-form factor volumes.
    pub fn volume(&self) -> Result<f64, BuildError> {
        self.factors
            .iter()
            .map(|f| f.volume().ok_or_else(|| BuildError::NeedsMonteCarlo(f.label())))
            .product()
    }
}

/// A map acting factor by factor on a product.
#[derive(Clone, Debug)]
pub struct ProductMap {
    pub name: String,
    pub maps: Vec<FactorMap>,
}

impl ProductMap {
    pub fn new(name: impl Into<String>, maps: Vec<FactorMap>) -> Self {
        Self { name: name.into(), maps }
    }

    fn check(&self, m: &ProductMetric) -> Result<(), BuildError> {
        if self.maps.len() != m.factors().len() {
            return Err(BuildError::InvalidArgument(format!(
                "map {} has {} components for {} factors",
                self.name,
                self.maps.len(),
                m.factors().len()
            )));
        }
        Ok(())
    }

    /// Image of `p`, with periodic coordinates wrapped into the chart.
    pub fn apply(&self, m: &ProductMetric, p: &[f64]) -> Result<Vec<f64>, BuildError> {
        self.check(m)?;
        let mut out = Vec::with_capacity(p.len());
        for (i, (f, map)) in m.factors().iter().zip(&self.maps).enumerate() {
            out.extend(f.apply(map, m.slice(i, p))?);
        }
        m.chart().wrap(&mut out);
        Ok(out)
    }

    pub fn differential(&self, m: &ProductMetric, p: &[f64]) -> Result<DMatrix<f64>, BuildError> {
        self.check(m)?;
        let n = m.dim();
        let mut d = DMatrix::zeros(n, n);
        for (i, (f, map)) in m.factors().iter().zip(&self.maps).enumerate() {
            let o = m.offsets()[i];
            let block = f.differential(map, m.slice(i, p))?;
            d.view_mut((o, o), (block.nrows(), block.ncols())).copy_from(&block);
        }
        Ok(d)
    }
}
