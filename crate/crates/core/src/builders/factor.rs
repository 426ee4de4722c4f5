//! Factors of product metrics and the maps that act on them.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::cap::CapProfile;
use super::profile::{RadialFunction, WarpProfile};
use super::sphere;
use super::BuildError;
use crate::geom::{Axis, MetricField, Scalar};

/// One factor of a product metric.
#[derive(Clone)]
pub enum Factor {
    /// Euclidean box `[lo, hi]^n`, optionally periodic (a flat torus).
    Flat { n: usize, lo: f64, hi: f64, periodic: bool },
    /// Round `S^n` of radius `r` in hyperspherical coordinates.
    Round { n: usize, r: f64 },
    /// Disk `dt² + f(t)² dθ²`.
    WarpedDisk(WarpProfile),
    /// Surface of revolution `dt² + f(t)² dθ²` with a caller-supplied `f`.
    Surface { name: String, f: Arc<dyn RadialFunction>, t_lo: f64, t_hi: f64, singular_lo: bool },
    /// Odd sphere with the Hopf fibers scaled by `eps`.
    Berger { n: usize, r: f64, eps: f64 },
    /// `S^n` with the orbits of the rotation in the last coordinate plane
    /// shrunk by a concave cap (see [`CapProfile`]).
    AxisCollapsed { n: usize, r: f64, cap: CapProfile },
    Raw(MetricField),
}

impl fmt::Debug for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A map acting on a single factor.
#[derive(Clone, Debug)]
pub enum FactorMap {
    Identity,
    /// `x ↦ −x` on spheres; the half-turn about the center on disks.
    Antipodal,
    /// Rotation by `π` in the last coordinate plane (about the polar axis).
    HalfTurn,
    /// `x_1 ↦ −x_1` on spheres; `θ ↦ −θ` on disks. Fixes a great circle / diameter.
    Reflection,
    /// Rotation by the given angle in the last coordinate plane (disk: `θ + s`).
    AxisRotation(f64),
    /// `z ↦ e^{is} z` on odd spheres viewed in `C^{(n+1)/2}`.
    Hopf(f64),
    /// Linear map of the ambient space followed by radial projection (spheres only).
    Linear(DMatrix<f64>),
    /// `p ↦ c p` on flat factors (not an isometry unless `|c| = 1`).
    Scale(f64),
}

fn unsupported(map: &FactorMap, factor: &Factor) -> BuildError {
    BuildError::InvalidArgument(format!("map {map:?} not defined on factor {}", factor.label()))
}

impl Factor {
    pub fn round(n: usize, r: f64) -> Self {
        Factor::Round { n, r }
    }

    /// Hyperbolic test chart `dt² + sinh²t dθ²`.
    pub fn hyperbolic_plane(t_hi: f64) -> Self {
        Factor::Surface {
            name: "hyperbolic".into(),
            f: Arc::new(|t: f64| [t.sinh(), t.cosh(), t.sinh()]),
            t_lo: 0.0,
            t_hi,
            singular_lo: true,
        }
    }

    /// `dt² + sin²t dθ²` on `(0, π)`, the round sphere as a surface of revolution.
    pub fn sine_surface() -> Self {
        Factor::Surface {
            name: "sine".into(),
            f: Arc::new(|t: f64| [t.sin(), t.cos(), -t.sin()]),
            t_lo: 0.0,
            t_hi: PI,
            singular_lo: true,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Factor::Flat { n, periodic, .. } => {
                if *periodic {
                    format!("T{n}")
                } else {
                    format!("R{n}")
                }
            }
            Factor::Round { n, r } => format!("S{n}(r={r})"),
            Factor::WarpedDisk(p) => format!("D2({},r={})", p.kind().as_str(), p.r()),
            Factor::Surface { name, .. } => format!("surface({name})"),
            Factor::Berger { n, r, eps } => format!("S{n}(r={r},berger={eps})"),
            Factor::AxisCollapsed { n, r, cap } => format!("S{n}(r={r},cap={})", cap.eps()),
            Factor::Raw(m) => format!("raw({})", m.id()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Factor::Flat { n, .. } | Factor::Round { n, .. } | Factor::Berger { n, .. } => *n,
            Factor::AxisCollapsed { n, .. } => *n,
            Factor::WarpedDisk(_) | Factor::Surface { .. } => 2,
            Factor::Raw(m) => m.dim(),
        }
    }

    /// Ambient dimension of the sphere a factor is modeled on, if any.
    pub fn sphere_dim(&self) -> Option<usize> {
        match self {
            Factor::Round { n, .. } | Factor::Berger { n, .. } | Factor::AxisCollapsed { n, .. } => Some(*n),
            _ => None,
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match self {
            Factor::Round { r, .. } | Factor::Berger { r, .. } | Factor::AxisCollapsed { r, .. } => Some(*r),
            Factor::WarpedDisk(p) => Some(p.r()),
            _ => None,
        }
    }

    pub fn axes(&self, prefix: &str) -> Vec<Axis> {
        match self {
            Factor::Flat { n, lo, hi, periodic } => (0..*n)
                .map(|i| {
                    let name = format!("{prefix}x{}", i + 1);
                    if *periodic {
                        Axis::periodic(name, *lo, *hi)
                    } else {
                        Axis::new(name, *lo, *hi)
                    }
                })
                .collect(),
            Factor::Round { n, .. } | Factor::Berger { n, .. } => sphere::axes(prefix, *n),
            Factor::AxisCollapsed { n, .. } if *n == 2 => sphere::axes(prefix, 2),
            Factor::AxisCollapsed { n, .. } => {
                let mut axes = vec![Axis::polar(format!("{prefix}s"), 0.0, FRAC_PI_2)];
                axes.extend(sphere::axes(&format!("{prefix}y"), n - 2));
                axes.push(Axis::periodic(format!("{prefix}phi"), 0.0, 2.0 * PI));
                axes
            }
            Factor::WarpedDisk(p) => vec![
                Axis::new(format!("{prefix}t"), 0.0, p.t_max()).singular_at_lo(),
                Axis::periodic(format!("{prefix}theta"), 0.0, 2.0 * PI),
            ],
            Factor::Surface { t_lo, t_hi, singular_lo, .. } => {
                let t = Axis::new(format!("{prefix}t"), *t_lo, *t_hi);
                vec![
                    if *singular_lo { t.singular_at_lo() } else { t },
                    Axis::periodic(format!("{prefix}theta"), 0.0, 2.0 * PI),
                ]
            }
            Factor::Raw(m) => m.chart().axes.clone(),
        }
    }

    /// Write the factor's metric block at `offset` of a row-major `stride x stride`
    /// matrix. Raw factors are handled by the caller.
    pub fn eval<S: Scalar>(&self, x: &[S], out: &mut [S], stride: usize, offset: usize) {
        let at = |i: usize, j: usize| (offset + i) * stride + offset + j;
        match self {
            Factor::Flat { n, .. } => {
                for i in 0..*n {
                    out[at(i, i)] = S::cst(1.0);
                }
            }
            Factor::Round { r, .. } => sphere::round_metric(x, *r, out, stride, offset),
            Factor::WarpedDisk(p) => warped(p, x, out, at),
            Factor::Surface { f, .. } => warped(f.as_ref(), x, out, at),
            Factor::Berger { n, r, eps } => {
                sphere::round_metric(x, *r, out, stride, offset);
                let w = hopf_coframe(x);
                let c = r * r * (1.0 - eps * eps);
                for a in 0..*n {
                    for b in 0..*n {
                        out[at(a, b)] = out[at(a, b)] - (w[a] * w[b]).scale(c);
                    }
                }
            }
            Factor::AxisCollapsed { n, r, cap } => {
                let r2 = r * r;
                let s = x[0];
                let [h0, h1, h2] = cap.values(s.value());
                let h = s.lift(h0, h1, h2);
                out[at(0, 0)] = S::cst(r2);
                if *n == 2 {
                    out[at(1, 1)] = h.sqr().scale(r2);
                } else {
                    // cos² s times the round metric of S^{n-2}, then h² dφ²
                    sphere::round_metric(&x[1..n - 1], 1.0, out, stride, offset + 1);
                    let c2 = s.cos().sqr().scale(r2);
                    for i in 1..n - 1 {
                        out[at(i, i)] = out[at(i, i)] * c2;
                    }
                    out[at(n - 1, n - 1)] = h.sqr().scale(r2);
                }
            }
            Factor::Raw(_) => unreachable!("raw factors are evaluated by the product"),
        }
    }

    /// Embedding into Euclidean space used for displacement measurements.
    pub fn embed(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Factor::Flat { lo, hi, periodic, .. } => {
                if *periodic {
                    let l = hi - lo;
                    x.iter()
                        .flat_map(|v| {
                            let a = 2.0 * PI * (v - lo) / l;
                            let rad = l / (2.0 * PI);
                            [rad * a.cos(), rad * a.sin()]
                        })
                        .collect()
                } else {
                    x.to_vec()
                }
            }
            Factor::Round { r, .. } | Factor::Berger { r, .. } => {
                sphere::embed(x).into_iter().map(|v| r * v).collect()
            }
            Factor::AxisCollapsed { r, .. } => axis_embed(x).into_iter().map(|v| r * v).collect(),
            Factor::WarpedDisk(_) | Factor::Surface { .. } => {
                vec![x[0] * x[1].cos(), x[0] * x[1].sin()]
            }
            Factor::Raw(m) => Factor::embed_raw(m, x),
        }
    }

    fn embed_raw(m: &MetricField, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&m.chart().axes)
            .flat_map(|(&v, a)| {
                if a.periodic {
                    let ang = 2.0 * PI * (v - a.lo) / a.len();
                    let rad = a.len() / (2.0 * PI);
                    vec![rad * ang.cos(), rad * ang.sin()]
                } else {
                    vec![v]
                }
            })
            .collect()
    }

    /// Image of `x` under `map`, with periodic coordinates left unwrapped.
    pub fn apply(&self, map: &FactorMap, x: &[f64]) -> Result<Vec<f64>, BuildError> {
        let n = x.len();
        let mut y = x.to_vec();
        match (map, self) {
            (FactorMap::Identity, _) => {}
            (FactorMap::Scale(c), Factor::Flat { .. }) => y.iter_mut().for_each(|v| *v *= c),
            (FactorMap::Antipodal, Factor::Round { .. } | Factor::Berger { .. }) => {
                for v in y.iter_mut().take(n - 1) {
                    *v = PI - *v;
                }
                y[n - 1] += PI;
            }
            (FactorMap::Antipodal, Factor::AxisCollapsed { .. }) if n == 2 => {
                y[0] = PI - y[0];
                y[1] += PI;
            }
            (FactorMap::Antipodal, Factor::AxisCollapsed { .. }) => {
                let m = n - 2;
                for v in y.iter_mut().skip(1).take(m - 1) {
                    *v = PI - *v;
                }
                y[m] += PI;
                y[n - 1] += PI;
            }
            (
                FactorMap::Antipodal | FactorMap::HalfTurn,
                Factor::WarpedDisk(_) | Factor::Surface { .. },
            ) => y[1] += PI,
            (FactorMap::HalfTurn, Factor::Round { .. } | Factor::Berger { .. } | Factor::AxisCollapsed { .. }) => {
                y[n - 1] += PI
            }
            (FactorMap::AxisRotation(s), Factor::Round { .. } | Factor::Berger { .. } | Factor::AxisCollapsed { .. }) => {
                y[n - 1] += s
            }
            (FactorMap::AxisRotation(s), Factor::WarpedDisk(_) | Factor::Surface { .. }) => y[1] += s,
            (FactorMap::Reflection, Factor::Round { .. } | Factor::Berger { .. }) => y[0] = PI - y[0],
            (FactorMap::Reflection, Factor::WarpedDisk(_) | Factor::Surface { .. }) => y[1] = -y[1],
            (FactorMap::Hopf(s), Factor::Round { n, .. } | Factor::Berger { n, .. }) if n % 2 == 1 => {
                y = self.linear_image(&sphere::hopf_rotation(n + 1, *s), x);
            }
            (FactorMap::Linear(l), Factor::Round { .. } | Factor::Berger { .. }) => {
                y = self.linear_image(l, x);
            }
            (m, f) => return Err(unsupported(m, f)),
        }
        Ok(y)
    }

    fn linear_image(&self, l: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
        let v = l * DVector::from_vec(sphere::embed(x));
        sphere::coords(v.as_slice())
    }

    /// Exact differential of `map` at `x` in this factor's coordinates.
    pub fn differential(&self, map: &FactorMap, x: &[f64]) -> Result<DMatrix<f64>, BuildError> {
        let n = x.len();
        let diag = |signs: &dyn Fn(usize) -> f64| DMatrix::from_fn(n, n, |i, j| if i == j { signs(i) } else { 0.0 });
        Ok(match (map, self) {
            (FactorMap::Identity, _) => DMatrix::identity(n, n),
            (FactorMap::Scale(c), Factor::Flat { .. }) => DMatrix::identity(n, n) * *c,
            (FactorMap::Antipodal, Factor::Round { .. } | Factor::Berger { .. }) => {
                diag(&|i| if i + 1 < n { -1.0 } else { 1.0 })
            }
            (FactorMap::Antipodal, Factor::AxisCollapsed { .. }) if n == 2 => diag(&|i| if i == 0 { -1.0 } else { 1.0 }),
            (FactorMap::Antipodal, Factor::AxisCollapsed { .. }) => {
                let m = n - 2;
                diag(&|i| if i >= 1 && i < m { -1.0 } else { 1.0 })
            }
            (FactorMap::Reflection, Factor::Round { .. } | Factor::Berger { .. }) => diag(&|i| if i == 0 { -1.0 } else { 1.0 }),
            (FactorMap::Reflection, Factor::WarpedDisk(_) | Factor::Surface { .. }) => diag(&|i| if i == 1 { -1.0 } else { 1.0 }),
            (FactorMap::Hopf(s), Factor::Round { n, .. } | Factor::Berger { n, .. }) if n % 2 == 1 => {
                sphere::linear_map_differential(&sphere::hopf_rotation(n + 1, *s), x).1
            }
            (FactorMap::Linear(l), Factor::Round { .. } | Factor::Berger { .. }) => {
                sphere::linear_map_differential(l, x).1
            }
            // the remaining supported maps translate a periodic coordinate
            (m, _) => {
                self.apply(m, x)?;
                DMatrix::identity(n, n)
            }
        })
    }

    /// Closed-form volume, if the factor has one.
    pub fn volume(&self) -> Option<f64> {
        match self {
            Factor::Flat { n, lo, hi, .. } => Some((hi - lo).powi(*n as i32)),
            Factor::Round { n, r } => Some(sphere::unit_sphere_volume(*n) * r.powi(*n as i32)),
            Factor::Berger { n, r, eps } => Some(eps * sphere::unit_sphere_volume(*n) * r.powi(*n as i32)),
            Factor::WarpedDisk(p) => Some(2.0 * PI * p.integral()),
            Factor::AxisCollapsed { n, r, cap } => {
                let rn = r.powi(*n as i32);
                if *n == 2 {
                    Some(rn * 2.0 * PI * cap.integral())
                } else {
                    let m = (*n - 2) as i32;
                    // s ∈ [0, π/2] covers the sphere once
                    Some(rn * sphere::unit_sphere_volume(n - 2) * 2.0 * PI * cap.weighted_half_integral(m))
                }
            }
            Factor::Surface { .. } | Factor::Raw(_) => None,
        }
    }
}

fn warped<S: Scalar, F: RadialFunction + ?Sized>(f: &F, x: &[S], out: &mut [S], at: impl Fn(usize, usize) -> usize) {
    let [f0, f1, f2] = f.eval(x[0].value());
    out[at(0, 0)] = S::cst(1.0);
    out[at(1, 1)] = x[0].lift(f0, f1, f2).sqr();
}

/// `w_b = ⟨∂_b X, J X⟩` for the unit sphere, with `J(x_1, x_2, …) = (−x_2, x_1, …)`.
pub fn hopf_coframe<S: Scalar>(phi: &[S]) -> Vec<S> {
    let x = sphere::embed(phi);
    let frame = tangent_frame(phi);
    (0..phi.len())
        .map(|b| {
            let mut acc = S::cst(0.0);
            for p in 0..x.len() / 2 {
                acc = acc - frame[2 * p][b] * x[2 * p + 1] + frame[2 * p + 1][b] * x[2 * p];
            }
            acc
        })
        .collect()
}

/// `∂X_i/∂φ_b` as rows `i`, generic over the scalar.
pub fn tangent_frame<S: Scalar>(phi: &[S]) -> Vec<Vec<S>> {
    let n = phi.len();
    let s: Vec<S> = phi.iter().map(|a| a.sin()).collect();
    let c: Vec<S> = phi.iter().map(|a| a.cos()).collect();
    (0..=n)
        .map(|i| {
            (0..n)
                .map(|b| {
                    if b > i {
                        return S::cst(0.0);
                    }
                    let mut v = S::cst(1.0);
                    for j in 0..i.min(n) {
                        v = v * if j == b { c[j] } else { s[j] };
                    }
                    if i < n {
                        v = v * if i == b { -s[i] } else { c[i] };
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// Unit-sphere embedding of the axis-adapted chart `(s, y, φ)`:
/// `(cos s · Y(y), sin s cos φ, sin s sin φ)`; for `S²` the chart is `(s, φ)`.
pub fn axis_embed(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let (ss, cs) = x[0].sin_cos();
    let phi = x[n - 1];
    let mut out: Vec<f64> = if n == 2 { vec![cs] } else { sphere::embed(&x[1..n - 1]).iter().map(|v| cs * v).collect() };
    out.push(ss * phi.cos());
    out.push(ss * phi.sin());
    out
}
