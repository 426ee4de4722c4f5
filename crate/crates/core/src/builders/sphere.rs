//! Hyperspherical coordinates on `S^n`.
//!
//! Angles `φ_1 … φ_{n-1} ∈ [0, π]` and `φ_n ∈ [0, 2π)`, with
//! `x_1 = cos φ_1`, `x_k = sin φ_1 ⋯ sin φ_{k-1} cos φ_k`,
//! `x_{n+1} = sin φ_1 ⋯ sin φ_n`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::geom::{Axis, Scalar};

/// Unit-sphere embedding of hyperspherical angles.
pub fn embed<S: Scalar>(phi: &[S]) -> Vec<S> {
    let n = phi.len();
    let mut out = Vec::with_capacity(n + 1);
    let mut prod = S::cst(1.0);
    for &a in phi {
        out.push(prod * a.cos());
        prod = prod * a.sin();
    }
    out.push(prod);
    out
}

/// Coordinate tangent vectors `∂X/∂φ_b` as columns of an `(n+1) x n` matrix.
pub fn tangent_frame(phi: &[f64]) -> DMatrix<f64> {
    let n = phi.len();
    let (s, c): (Vec<f64>, Vec<f64>) = phi.iter().map(|a| a.sin_cos()).unzip();
    DMatrix::from_fn(n + 1, n, |i, b| {
        // x_i = (∏_{j<i} s_j) * (c_i or 1 if i == n)
        if b > i {
            return 0.0;
        }
        let mut v = 1.0;
        for j in 0..i.min(n) {
            v *= if j == b { c[j] } else { s[j] };
        }
        if i < n {
            v *= if i == b { -s[i] } else { c[i] };
        }
        v
    })
}

/// Inverse of [`embed`] for a nonzero vector (normalized first).
pub fn coords(x: &[f64]) -> Vec<f64> {
    let n = x.len() - 1;
    let mut phi = Vec::with_capacity(n);
    for k in 0..n {
        let tail: f64 = x[k + 1..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if k + 1 < n {
            phi.push(tail.atan2(x[k]));
        } else {
            phi.push(x[n].atan2(x[n - 1]).rem_euclid(2.0 * PI));
        }
    }
    phi
}

/// Round metric `r² (dφ_1² + sin²φ_1 dφ_2² + …)` written into the diagonal
/// of a dense block.
pub fn round_metric<S: Scalar>(phi: &[S], r: f64, out: &mut [S], stride: usize, offset: usize) {
    let mut w = S::cst(r * r);
    for (k, &a) in phi.iter().enumerate() {
        out[(offset + k) * stride + offset + k] = w;
        w = w * a.sin().sqr();
    }
}

pub fn axes(prefix: &str, n: usize) -> Vec<Axis> {
    (0..n)
        .map(|k| {
            let name = format!("{prefix}phi{}", k + 1);
            if k + 1 < n {
                Axis::polar(name, 0.0, PI)
            } else {
                Axis::periodic(name, 0.0, 2.0 * PI)
            }
        })
        .collect()
}

/// Differential in coordinates of the sphere map induced by the linear map
/// `l` on the ambient space: `G(y)^{-1} J(y)^T l J(x)` with `y = coords(l x)`.
pub fn linear_map_differential(l: &DMatrix<f64>, phi: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let x = DVector::from_vec(embed(phi));
    let lx = l * &x;
    let y = coords(lx.as_slice());
    let jx = tangent_frame(phi);
    let jy = tangent_frame(&y);
    let gy = jy.transpose() * &jy;
    let rhs = jy.transpose() * (l * jx) / lx.norm();
    let d = gy.lu().solve(&rhs).unwrap_or_else(|| DMatrix::from_element(phi.len(), phi.len(), f64::NAN));
    (y, d)
}

/// Volume of the unit `n`-sphere.
pub fn unit_sphere_volume(n: usize) -> f64 {
    match n {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (n as f64 - 1.0) * unit_sphere_volume(n - 2),
    }
}

/// Rotation by `angle` in the coordinate plane `(i, j)` of `R^dim`.
pub fn plane_rotation(dim: usize, i: usize, j: usize, angle: f64) -> DMatrix<f64> {
    let mut m = DMatrix::identity(dim, dim);
    let (s, c) = angle.sin_cos();
    m[(i, i)] = c;
    m[(j, j)] = c;
    m[(i, j)] = -s;
    m[(j, i)] = s;
    m
}

/// Hopf rotation `z ↦ e^{is} z` on `C^{dim/2}`, pairing `(x_1, x_2), (x_3, x_4), …`.
pub fn hopf_rotation(dim: usize, s: f64) -> DMatrix<f64> {
    assert!(dim % 2 == 0, "Hopf action needs an even ambient dimension");
    let mut m = DMatrix::identity(dim, dim);
    for p in 0..dim / 2 {
        let r = plane_rotation(2, 0, 1, s);
        m.view_mut((2 * p, 2 * p), (2, 2)).copy_from(&r);
    }
    m
}
