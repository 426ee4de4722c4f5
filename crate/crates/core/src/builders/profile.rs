//! Warp profiles `f` for rotationally symmetric disks `dt² + f(t)² dθ²`.
//!
//! `collar_torpedo` is built from a universal profile `F` on `[0, T]`:
//! `F' = cos τ · (1 − S((τ − a)/(b − a)))` with `S` the `e^{-1/x}` smooth step,
//! `[a, b] = [0.6 T, 0.9 T]`, so `F = sin` up to `a`, concave throughout (as
//! `b < π/2`), and constant `F_∞` past `b`. The disk profile is the rescaling
//! `f(t) = ρ F(t/ρ)` with `ρ = r / F_∞`, which makes the collar a product
//! `dt² + r² dθ²` of width `0.1 · t_max`.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::quad::integrate;
use super::BuildError;

/// Highest boundary derivative order a profile can certify.
pub const MAX_JET_ORDER: usize = 7;
pub const DEFAULT_JET_ORDER: usize = 5;
/// Largest admissible sampled `f''`.
pub const CONCAVITY_TOL: f64 = 1e-10;

const TORPEDO_T: f64 = 1.7;
const BLEND_LO: f64 = 0.6;
const BLEND_HI: f64 = 0.9;
const TABLE_NODES: usize = 64;
const CERTIFY_SAMPLES: usize = 4000;

/// A function of one variable with its first two derivatives.
pub trait RadialFunction: Send + Sync {
    /// `(f, f', f'')` at `t`.
    fn eval(&self, t: f64) -> [f64; 3];
}

impl<F: Fn(f64) -> [f64; 3] + Send + Sync> RadialFunction for F {
    fn eval(&self, t: f64) -> [f64; 3] {
        self(t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Hemisphere,
    CollarTorpedo,
}

impl ProfileKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProfileKind::Hemisphere => "hemisphere",
            ProfileKind::CollarTorpedo => "collar_torpedo",
        }
    }
}

impl std::str::FromStr for ProfileKind {
    type Err = BuildError;
    fn from_str(s: &str) -> Result<Self, BuildError> {
        match s {
            "hemisphere" => Ok(ProfileKind::Hemisphere),
            "collar_torpedo" | "torpedo" => Ok(ProfileKind::CollarTorpedo),
            other => Err(BuildError::InvalidArgument(format!("unknown profile kind {other:?}"))),
        }
    }
}

/// Smooth step: 0 for `x ≤ 0`, 1 for `x ≥ 1`; returns `(S, S', S'')`.
pub fn smooth_step(x: f64) -> [f64; 3] {
    if x <= 0.0 {
        return [0.0, 0.0, 0.0];
    }
    if x >= 1.0 {
        return [1.0, 0.0, 0.0];
    }
    // ψ(x) = e^{-1/x}; ψ' = ψ/x²; ψ'' = ψ (1 − 2x)/x⁴
    let psi = |u: f64| -> [f64; 3] {
        let e = (-1.0 / u).exp();
        [e, e / (u * u), e * (1.0 - 2.0 * u) / u.powi(4)]
    };
    let p = psi(x);
    let q = psi(1.0 - x);
    // q as a function of x: derivatives pick up signs
    let (q0, q1, q2) = (q[0], -q[1], q[2]);
    let d = p[0] + q0;
    let d1 = p[1] + q1;
    let d2 = p[2] + q2;
    let s = p[0] / d;
    let s1 = (p[1] * d - p[0] * d1) / (d * d);
    let s2 = (p[2] - 2.0 * s1 * d1 - s * d2) / d;
    [s, s1, s2]
}

/// Universal torpedo profile on `[0, T]`.
#[derive(Debug)]
struct Torpedo {
    a: f64,
    b: f64,
    /// `F` at equally spaced nodes on `[a, b]`.
    table: Vec<f64>,
}

impl Torpedo {
    fn new() -> Self {
        let a = BLEND_LO * TORPEDO_T;
        let b = BLEND_HI * TORPEDO_T;
        let mut t = Self { a, b, table: Vec::with_capacity(TABLE_NODES + 1) };
        let step = (b - a) / TABLE_NODES as f64;
        let mut acc = a.sin();
        t.table.push(acc);
        for k in 0..TABLE_NODES {
            let lo = a + k as f64 * step;
            acc += integrate(|u| t.derivs(u)[1], lo, lo + step, 2);
            t.table.push(acc);
        }
        t
    }

    /// `(F', F'')` packed as `[_, F', F'']`.
    fn derivs(&self, tau: f64) -> [f64; 3] {
        let w = self.b - self.a;
        let [s, s1, _] = smooth_step((tau - self.a) / w);
        let (sn, cs) = tau.sin_cos();
        [0.0, cs * (1.0 - s), -sn * (1.0 - s) - cs * s1 / w]
    }

    fn plateau(&self) -> f64 {
        *self.table.last().unwrap()
    }

    fn eval(&self, tau: f64) -> [f64; 3] {
        if tau <= self.a {
            let (s, c) = tau.sin_cos();
            return [s, c, -s];
        }
        if tau >= self.b {
            return [self.plateau(), 0.0, 0.0];
        }
        let step = (self.b - self.a) / TABLE_NODES as f64;
        let k = (((tau - self.a) / step) as usize).min(TABLE_NODES - 1);
        let lo = self.a + k as f64 * step;
        let f = self.table[k] + integrate(|u| self.derivs(u)[1], lo, tau, 1);
        let [_, d1, d2] = self.derivs(tau);
        [f, d1, d2]
    }
}

/// Serialized form of a profile; everything else is rederived.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub kind: ProfileKind,
    pub r: f64,
    pub jet_order: usize,
}

/// The function `f` of a warped disk `dt² + f(t)² dθ²`, certified at construction.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "ProfileSpec", try_from = "ProfileSpec")]
pub struct WarpProfile {
    kind: ProfileKind,
    r: f64,
    t_max: f64,
    jet_order: usize,
    /// Length scale of the universal torpedo profile (`r` for the hemisphere).
    rho: f64,
    torpedo: Option<Arc<Torpedo>>,
}

impl From<WarpProfile> for ProfileSpec {
    fn from(p: WarpProfile) -> Self {
        ProfileSpec { kind: p.kind, r: p.r, jet_order: p.jet_order }
    }
}

impl TryFrom<ProfileSpec> for WarpProfile {
    type Error = BuildError;
    fn try_from(s: ProfileSpec) -> Result<Self, BuildError> {
        make_profile(s.kind, s.r, s.jet_order)
    }
}

impl PartialEq for WarpProfile {
    fn eq(&self, o: &Self) -> bool {
        self.kind == o.kind && self.r == o.r && self.jet_order == o.jet_order
    }
}

/// Build and certify a profile: `f(0)=0`, `f'(0)=1`, `f>0` on `(0, t_max]`,
/// sampled `f'' ≤ 1e-10`, odd derivatives up to `jet_order` vanish at `t_max`.
pub fn make_profile(kind: ProfileKind, r: f64, jet_order: usize) -> Result<WarpProfile, BuildError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(BuildError::InvalidArgument(format!("profile radius must be positive, got {r}")));
    }
    if jet_order > MAX_JET_ORDER {
        return Err(BuildError::InvalidArgument(format!(
            "jet_order {jet_order} exceeds {MAX_JET_ORDER}"
        )));
    }
    let profile = match kind {
        ProfileKind::Hemisphere => {
            WarpProfile { kind, r, t_max: r * FRAC_PI_2, jet_order, rho: r, torpedo: None }
        }
        ProfileKind::CollarTorpedo => {
            let torpedo = Torpedo::new();
            let rho = r / torpedo.plateau();
            WarpProfile { kind, r, t_max: rho * TORPEDO_T, jet_order, rho, torpedo: Some(Arc::new(torpedo)) }
        }
    };
    profile.certify()?;
    Ok(profile)
}

impl WarpProfile {
    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    /// Radius of the boundary circle.
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn jet_order(&self) -> usize {
        self.jet_order
    }

    /// `t` where `f` stops following `ρ sin(t/ρ)`.
    pub fn blend_start(&self) -> f64 {
        match &self.torpedo {
            Some(tp) => self.rho * tp.a,
            None => self.t_max,
        }
    }

    /// Start of the product collar (`t_max` for the hemisphere, which has none).
    pub fn collar_start(&self) -> f64 {
        match &self.torpedo {
            Some(tp) => self.rho * tp.b,
            None => self.t_max,
        }
    }

    pub fn collar_width(&self) -> f64 {
        self.t_max - self.collar_start()
    }

    pub fn f(&self, t: f64) -> f64 {
        self.values(t)[0]
    }

    /// `(f, f', f'')` at `t`.
    pub fn values(&self, t: f64) -> [f64; 3] {
        let rho = self.rho;
        let [f, f1, f2] = match &self.torpedo {
            Some(tp) => tp.eval(t / rho),
            None => {
                let (s, c) = (t / rho).sin_cos();
                [s, c, -s]
            }
        };
        [rho * f, f1, f2 / rho]
    }

    /// `d^k f / dt^k`. Exact for the hemisphere and for `k ≤ 2`; higher
    /// torpedo derivatives inside the blend use central differences.
    pub fn derivative(&self, order: usize, t: f64) -> f64 {
        if order <= 2 {
            return self.values(t)[order];
        }
        let scaled_sin = |u: f64| {
            let v = match order % 4 {
                0 => u.sin(),
                1 => u.cos(),
                2 => -u.sin(),
                _ => -u.cos(),
            };
            v * self.rho.powi(1 - order as i32)
        };
        if self.torpedo.is_none() || t <= self.blend_start() {
            return scaled_sin(t / self.rho);
        }
        if t >= self.collar_start() {
            return 0.0;
        }
        let h = 1e-3 * self.rho;
        (self.derivative(order - 1, t + h) - self.derivative(order - 1, t - h)) / (2.0 * h)
    }

    /// Gauss curvature `−f''/f` of the disk.
    pub fn gauss_curvature(&self, t: f64) -> f64 {
        let [f, _, f2] = self.values(t);
        -f2 / f
    }

    /// `∫_0^{t_max} f`.
    pub fn integral(&self) -> f64 {
        integrate(|t| self.f(t), 0.0, self.t_max, 64)
    }

    fn certify(&self) -> Result<(), BuildError> {
        let [f0, f1, _] = self.values(0.0);
        if f0.abs() > 1e-12 || (f1 - 1.0).abs() > 1e-12 {
            return Err(BuildError::InvalidArgument(format!("profile start (f, f') = ({f0}, {f1})")));
        }
        for i in 1..=CERTIFY_SAMPLES {
            let t = self.t_max * i as f64 / CERTIFY_SAMPLES as f64;
            let [f, _, f2] = self.values(t);
            if !(f > 0.0) {
                return Err(BuildError::InvalidArgument(format!("profile not positive at t = {t}")));
            }
            if f2 > CONCAVITY_TOL {
                return Err(BuildError::BlendFailedConcavity { t, second_derivative: f2 });
            }
        }
        for k in (1..=self.jet_order).step_by(2) {
            let d = self.derivative(k, self.t_max);
            if d.abs() > 1e-6 {
                return Err(BuildError::JetMismatch { order: k, defect: d.abs() });
            }
        }
        Ok(())
    }

    /// `(t, f, f', f'')` table with `n + 1` equally spaced rows.
    pub fn csv_table(&self, n: usize) -> String {
        let mut out = String::from("t,f,df,d2f\n");
        for i in 0..=n {
            let t = self.t_max * i as f64 / n as f64;
            let [f, f1, f2] = self.values(t);
            out.push_str(&format!("{t:.12e},{f:.12e},{f1:.12e},{f2:.12e}\n"));
        }
        out
    }
}

impl RadialFunction for WarpProfile {
    fn eval(&self, t: f64) -> [f64; 3] {
        self.values(t)
    }
}
