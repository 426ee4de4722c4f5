//! Concave caps for shrinking the rotation orbits of a sphere around an axis.
//!
//! The collapsed profile `h_ε` on `[0, π]` replaces `sin s` in
//! `ds² + h(s)² dφ²`. On `[0, π/2]`
//! `h' = cos s · (ε + (1 − ε)(1 − S(2s/δ − 1)))`, `δ = ε/2`,
//! so `h = sin s` on `[0, δ/2]` (smooth poles), `h = ε sin s + const` past `δ`,
//! and `h'' ≤ 0` throughout. The second half is the mirror image.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::profile::{smooth_step, RadialFunction};
use super::quad::integrate;
use super::BuildError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapProfile {
    eps: f64,
    delta: f64,
    /// `∫_0^δ cos u (1 − S(2u/δ − 1)) du`
    tail: f64,
}

impl CapProfile {
    pub fn new(eps: f64) -> Result<Self, BuildError> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(BuildError::EpsilonOutOfRange(eps));
        }
        let delta = 0.5 * eps;
        let mut cap = Self { eps, delta, tail: 0.0 };
        cap.tail = (0.5 * delta).sin() + integrate(|u| cap.weight(u)[0] * u.cos(), 0.5 * delta, delta, 4);
        Ok(cap)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `1 − S(2u/δ − 1)` and its derivative in `u`.
    fn weight(&self, u: f64) -> [f64; 2] {
        let [s, s1, _] = smooth_step(2.0 * u / self.delta - 1.0);
        [1.0 - s, -2.0 * s1 / self.delta]
    }

    fn half(&self, s: f64) -> [f64; 3] {
        let (sn, cs) = s.sin_cos();
        let [w, w1] = self.weight(s);
        let c = if s <= 0.5 * self.delta {
            sn
        } else if s >= self.delta {
            self.tail
        } else {
            (0.5 * self.delta).sin() + integrate(|u| self.weight(u)[0] * u.cos(), 0.5 * self.delta, s, 2)
        };
        let e = self.eps;
        let h = e * sn + (1.0 - e) * c;
        let h1 = cs * (e + (1.0 - e) * w);
        let h2 = -sn * (e + (1.0 - e) * w) + cs * (1.0 - e) * w1;
        [h, h1, h2]
    }

    /// `(h, h', h'')` on `[0, π]`, symmetric about `π/2`.
    pub fn values(&self, s: f64) -> [f64; 3] {
        if s <= FRAC_PI_2 {
            self.half(s)
        } else {
            let [h, h1, h2] = self.half(PI - s);
            [h, -h1, h2]
        }
    }

    /// `∫_0^π h`.
    pub fn integral(&self) -> f64 {
        2.0 * self.weighted_half_integral(0)
    }

    /// `∫_0^{π/2} cos^p(s) h(s) ds`, panels refined near the pole.
    pub fn weighted_half_integral(&self, p: i32) -> f64 {
        let f = |s: f64| s.cos().powi(p) * self.half(s)[0];
        integrate(f, 0.0, self.delta, 8) + integrate(f, self.delta, FRAC_PI_2, 32)
    }
}

impl RadialFunction for CapProfile {
    fn eval(&self, t: f64) -> [f64; 3] {
        self.values(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_epsilon_is_the_sine() {
        let c = CapProfile::new(1.0).unwrap();
        for &s in &[0.1, 1.0, 2.5] {
            let [h, h1, h2] = c.values(s);
            assert!((h - s.sin()).abs() < 1e-14);
            assert!((h1 - s.cos()).abs() < 1e-14);
            assert!((h2 + s.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn cap_is_concave_positive_and_smooth_at_poles() {
        for &eps in &[0.5, 0.1, 0.02] {
            let c = CapProfile::new(eps).unwrap();
            assert_eq!(c.values(0.0)[1], 1.0);
            for i in 1..2000 {
                let s = PI * i as f64 / 2000.0;
                let [h, _, h2] = c.values(s);
                assert!(h > 0.0);
                assert!(h2 <= 1e-12, "eps {eps} s {s} h'' {h2}");
            }
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let c = CapProfile::new(0.1).unwrap();
        let h = 1e-7;
        for &s in &[0.01, 0.03, 0.04, 0.2, 1.5, 3.1] {
            let fd1 = (c.values(s + h)[0] - c.values(s - h)[0]) / (2.0 * h);
            let fd2 = (c.values(s + h)[1] - c.values(s - h)[1]) / (2.0 * h);
            assert!((c.values(s)[1] - fd1).abs() < 1e-6, "s={s}");
            assert!((c.values(s)[2] - fd2).abs() < 1e-5, "s={s}");
        }
    }

    #[test]
    fn area_shrinks_roughly_linearly() {
        let c = CapProfile::new(0.1).unwrap();
        // area of the capped sphere relative to the round one
        let ratio = c.integral() / 2.0;
        assert!(ratio < 0.2 && ratio > 0.1, "{ratio}");
        assert!(CapProfile::new(0.0).is_err());
    }
}
