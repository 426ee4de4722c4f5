//! Deterministic sampling: shifted Halton points in chart interiors and
//! per-point random streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Chart;

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Radical inverse of `index` in base `base`.
pub fn radical_inverse(mut index: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while index > 0 {
        r += f * (index % b) as f64;
        index /= b;
        f *= inv;
    }
    r
}

/// Random stream dedicated to sample `index` of a run seeded by `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Low-discrepancy points in `[0,1)^dim` with a seed-dependent
/// Cranley–Patterson rotation.
pub fn unit_halton(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    assert!(dim <= PRIMES.len(), "halton dimension {dim} unsupported");
    let mut rng = stream(seed, u64::MAX);
    let shift: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
    (0..n)
        .map(|i| {
            (0..dim)
                .map(|d| (radical_inverse(i as u64 + 1, PRIMES[d]) + shift[d]).fract())
                .collect()
        })
        .collect()
}

/// `n` interior points of `chart`, kept `singular_margin` away from singular ends.
pub fn interior_points(chart: &Chart, n: usize, seed: u64) -> Vec<Vec<f64>> {
    unit_halton(n, chart.dim(), seed)
        .into_iter()
        .map(|u| {
            u.iter()
                .enumerate()
                .map(|(d, &x)| {
                    let (lo, hi) = chart.interior_range(d);
                    lo + x * (hi - lo)
                })
                .collect()
        })
        .collect()
}
