use serde::{Deserialize, Serialize};

use super::GeomError;

/// One coordinate axis of a chart.
///
/// `singular_lo` / `singular_hi` mark ends where the coordinate system
/// degenerates (a sphere pole, the center of a polar disk). Sampling keeps
/// `singular_margin` away from those ends only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub periodic: bool,
    pub singular_lo: bool,
    pub singular_hi: bool,
}

impl Axis {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64) -> Self {
        Self { name: name.into(), lo, hi, periodic: false, singular_lo: false, singular_hi: false }
    }

    pub fn periodic(name: impl Into<String>, lo: f64, hi: f64) -> Self {
        Self { periodic: true, ..Self::new(name, lo, hi) }
    }

    pub fn polar(name: impl Into<String>, lo: f64, hi: f64) -> Self {
        Self { singular_lo: true, singular_hi: true, ..Self::new(name, lo, hi) }
    }

    pub fn singular_at_lo(mut self) -> Self {
        self.singular_lo = true;
        self
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        !(self.hi > self.lo)
    }
}

/// An axis-aligned coordinate box with periodic axes and singular ends.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub name: String,
    pub axes: Vec<Axis>,
    pub singular_margin: f64,
}

pub const DEFAULT_SINGULAR_MARGIN: f64 = 1e-3;

impl Chart {
    pub fn new(name: impl Into<String>, axes: Vec<Axis>, singular_margin: f64) -> Result<Self, GeomError> {
        let chart = Self { name: name.into(), axes, singular_margin };
        chart.validate()?;
        Ok(chart)
    }

    fn validate(&self) -> Result<(), GeomError> {
        if self.axes.is_empty() {
            return Err(GeomError::InvalidChart(format!("{}: dimension must be >= 1", self.name)));
        }
        if !(self.singular_margin >= 0.0) {
            return Err(GeomError::InvalidChart(format!("{}: negative singular margin", self.name)));
        }
        let shortest = self.axes.iter().map(Axis::len).fold(f64::INFINITY, f64::min);
        if self.axes.iter().any(Axis::is_empty) {
            return Err(GeomError::InvalidChart(format!("{}: empty coordinate interval", self.name)));
        }
        if self.singular_margin >= 0.5 * shortest {
            return Err(GeomError::InvalidChart(format!(
                "{}: singular margin {} not below half the shortest interval {}",
                self.name, self.singular_margin, shortest
            )));
        }
        Ok(())
    }

    /// Flat box `[lo, hi]^dim` without singular ends.
    pub fn boxed(name: impl Into<String>, dim: usize, lo: f64, hi: f64) -> Result<Self, GeomError> {
        let axes = (0..dim).map(|i| Axis::new(format!("x{i}"), lo, hi)).collect();
        Self::new(name, axes, DEFAULT_SINGULAR_MARGIN)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Concatenate charts of the factors of a product.
    pub fn product(name: impl Into<String>, parts: &[&Chart]) -> Result<Self, GeomError> {
        let axes = parts.iter().flat_map(|c| c.axes.iter().cloned()).collect();
        let margin = parts.iter().map(|c| c.singular_margin).fold(0.0, f64::max);
        Self::new(name, axes, margin)
    }

    /// Sampling range of an axis: the full interval minus the margin at singular ends.
    pub fn interior_range(&self, axis: usize) -> (f64, f64) {
        let a = &self.axes[axis];
        let lo = if a.singular_lo { a.lo + self.singular_margin } else { a.lo };
        let hi = if a.singular_hi { a.hi - self.singular_margin } else { a.hi };
        (lo, hi)
    }

    /// Reduce periodic coordinates into their fundamental interval.
    pub fn wrap(&self, p: &mut [f64]) {
        for (x, a) in p.iter_mut().zip(&self.axes) {
            if a.periodic {
                let l = a.len();
                *x = a.lo + (*x - a.lo).rem_euclid(l);
            }
        }
    }

    /// Closed-box membership after periodic reduction, with slack `tol`.
    pub fn contains_closed(&self, p: &[f64], tol: f64) -> bool {
        p.len() == self.dim()
            && p.iter().zip(&self.axes).all(|(&x, a)| {
                a.periodic || (x >= a.lo - tol && x <= a.hi + tol)
            })
    }

    /// Interior membership: inside the box and at least the margin away from singular ends.
    pub fn contains_interior(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && p.iter().enumerate().all(|(i, &x)| {
                if self.axes[i].periodic {
                    return x.is_finite();
                }
                let (lo, hi) = self.interior_range(i);
                x >= lo - 1e-12 && x <= hi + 1e-12
            })
    }

    pub fn require_interior(&self, p: &[f64]) -> Result<(), GeomError> {
        if self.contains_interior(p) {
            Ok(())
        } else {
            Err(GeomError::PointOutsideDomain { chart: self.name.clone(), point: p.to_vec() })
        }
    }

    /// Signed coordinate difference `b - a`, unwrapped on periodic axes.
    pub fn delta(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        a.iter()
            .zip(b)
            .zip(&self.axes)
            .map(|((&x, &y), ax)| {
                let d = y - x;
                if ax.periodic {
                    let l = ax.len();
                    d - l * (d / l).round()
                } else {
                    d
                }
            })
            .collect()
    }

    /// Volume of the coordinate box used for sampling.
    pub fn interior_box_volume(&self) -> f64 {
        (0..self.dim())
            .map(|i| {
                let (lo, hi) = self.interior_range(i);
                hi - lo
            })
            .product()
    }
}
