//! Independent closed-form curvature oracles shared by the integration tests.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// A random point strictly inside `[lo + margin, hi - margin]` per axis.
pub fn random_point(rng: &mut ChaCha8Rng, bounds: &[(f64, f64)], margin: f64) -> Vec<f64> {
    bounds.iter().map(|&(lo, hi)| rng.gen_range(lo + margin..hi - margin)).collect()
}

/// Hyperspherical embedding, written out independently of the library.
pub fn sphere_point(phi: &[f64]) -> Vec<f64> {
    let mut x = Vec::new();
    let mut s = 1.0;
    for a in phi {
        x.push(s * a.cos());
        s *= a.sin();
    }
    x.push(s);
    x
}

/// `∂X/∂φ_b` by central differences of [`sphere_point`].
pub fn sphere_frame(phi: &[f64]) -> DMatrix<f64> {
    let n = phi.len();
    let h = 1e-6;
    let mut m = DMatrix::zeros(n + 1, n);
    for b in 0..n {
        let mut p = phi.to_vec();
        let mut q = phi.to_vec();
        p[b] += h;
        q[b] -= h;
        let (xp, xq) = (sphere_point(&p), sphere_point(&q));
        for i in 0..=n {
            m[(i, b)] = (xp[i] - xq[i]) / (2.0 * h);
        }
    }
    m
}

/// Sectional curvature of the unit Berger 3-sphere (Hopf fibers scaled by
/// `eps`) on the plane spanned by the coordinate vectors `u, w` at `phi`.
///
/// In an orthonormal frame `{V/ε, e₂, e₃}` the curvature operator is diagonal
/// with eigenvalues `ε², ε², 4 − 3ε²` on `X₁∧X₂, X₁∧X₃, X₂∧X₃`.
pub fn berger_sectional(phi: &[f64], u: &[f64], w: &[f64], eps: f64) -> f64 {
    let x = DVector::from_vec(sphere_point(phi));
    let v = DVector::from_vec(vec![-x[1], x[0], -x[3], x[2]]);
    let frame = sphere_frame(phi);
    // horizontal orthonormal pair by Gram–Schmidt against x and V
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for c in 0..3 {
        let mut t = frame.column(c).into_owned();
        t -= &v * v.dot(&t);
        t -= &x * x.dot(&t);
        for b in &basis {
            t -= b * b.dot(&t);
        }
        if t.norm() > 1e-6 && basis.len() < 2 {
            basis.push(t.normalize());
        }
    }
    let comps = |c: &[f64]| {
        let t = &frame * DVector::from_column_slice(c);
        [eps * v.dot(&t), basis[0].dot(&t), basis[1].dot(&t)]
    };
    let (a, b) = (comps(u), comps(w));
    let p12 = a[0] * b[1] - a[1] * b[0];
    let p13 = a[0] * b[2] - a[2] * b[0];
    let p23 = a[1] * b[2] - a[2] * b[1];
    let area2 = p12 * p12 + p13 * p13 + p23 * p23;
    (eps * eps * (p12 * p12 + p13 * p13) + (4.0 - 3.0 * eps * eps) * p23 * p23) / area2
}

/// Enhancement value by the extension rule, written independently.
pub fn q_oracle(form: &[Vec<u8>], qb: &[u8], x: u64) -> u8 {
    let r = qb.len();
    let mut acc = 0u32;
    for i in 0..r {
        if x >> i & 1 == 1 {
            acc += qb[i] as u32;
            for j in (i + 1)..r {
                if x >> j & 1 == 1 {
                    acc += 2 * form[i][j] as u32;
                }
            }
        }
    }
    (acc % 4) as u8
}

/// `(|Σ i^q|/2^{r/2}, β)` with β read off the argument of the Gauss sum.
pub fn brown_oracle(form: &[Vec<u8>], qb: &[u8]) -> (f64, u8) {
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for x in 0..(1u64 << qb.len()) {
        match q_oracle(form, qb, x) {
            0 => re += 1.0,
            1 => im += 1.0,
            2 => re -= 1.0,
            _ => im -= 1.0,
        }
    }
    let modulus = (re * re + im * im).sqrt() / 2f64.powf(qb.len() as f64 / 2.0);
    let beta = (im.atan2(re) / (std::f64::consts::PI / 4.0)).round().rem_euclid(8.0) as u8;
    (modulus, beta)
}

/// Orthogonal direct sum of two `(form, q on basis)` pairs.
pub fn block_sum(a: &(Vec<Vec<u8>>, Vec<u8>), b: &(Vec<Vec<u8>>, Vec<u8>)) -> (Vec<Vec<u8>>, Vec<u8>) {
    let (ra, rb) = (a.1.len(), b.1.len());
    let mut form = vec![vec![0u8; ra + rb]; ra + rb];
    for i in 0..ra {
        form[i][..ra].copy_from_slice(&a.0[i]);
    }
    for i in 0..rb {
        form[ra + i][ra..].copy_from_slice(&b.0[i]);
    }
    (form, a.1.iter().chain(&b.1).copied().collect())
}

/// Random nondegenerate symmetric form of rank `1..=4` with a
/// parity-compatible enhancement, by rejection.
pub fn random_enhancement(rng: &mut ChaCha8Rng) -> (Vec<Vec<u8>>, Vec<u8>) {
    loop {
        let r = rng.gen_range(1..=4usize);
        let mut form = vec![vec![0u8; r]; r];
        for i in 0..r {
            for j in i..r {
                let b = rng.gen_range(0..2u8);
                form[i][j] = b;
                form[j][i] = b;
            }
        }
        let qb: Vec<u8> = (0..r).map(|i| form[i][i] + 2 * rng.gen_range(0..2u8)).collect();
        if nnq::pin::QuadraticEnhancement::new(form.clone(), qb.clone()).is_ok() {
            return (form, qb);
        }
    }
}
