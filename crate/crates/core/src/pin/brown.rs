//! Z/4-valued quadratic enhancements of mod-2 forms and their Brown invariant.

use serde::{Deserialize, Serialize};

use super::PinError;

/// Largest rank for which the Gauss sum is enumerated.
pub const MAX_RANK: usize = 20;

/// A nondegenerate symmetric form on `(Z/2)^rank` with an enhancement
/// `q: (Z/2)^rank → Z/4` given on the basis and extended by
/// `q(x + y) = q(x) + q(y) + 2 x·y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticEnhancement {
    rank: usize,
    form: Vec<Vec<u8>>,
    q_basis: Vec<u8>,
}

/// Rank of a square matrix over GF(2).
fn gf2_rank(rows: &[Vec<u8>]) -> usize {
    let mut m: Vec<Vec<u8>> = rows.to_vec();
    let n = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..n).find(|&r| m[r][c] == 1) else { continue };
        m.swap(rank, piv);
        for r in 0..n {
            if r != rank && m[r][c] == 1 {
                let pivot = m[rank].clone();
                for (x, p) in m[r].iter_mut().zip(pivot) {
                    *x ^= p;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl QuadraticEnhancement {
    pub fn new(form: Vec<Vec<u8>>, q_basis: Vec<u8>) -> Result<Self, PinError> {
        let rank = q_basis.len();
        let bad = |msg: String| Err(PinError::InvalidEnhancement(msg));
        if rank > MAX_RANK {
            return bad(format!("rank {rank} exceeds {MAX_RANK}"));
        }
        if form.len() != rank || form.iter().any(|r| r.len() != rank) {
            return bad("form must be square of the enhancement's rank".into());
        }
        for i in 0..rank {
            if q_basis[i] > 3 {
                return bad(format!("q(b_{i}) = {} is not in Z/4", q_basis[i]));
            }
            for j in 0..rank {
                if form[i][j] > 1 || form[i][j] != form[j][i] {
                    return bad("form must be a symmetric 0/1 matrix".into());
                }
            }
            // q(2x) = 0 = 2 q(x) + 2 x·x forces q(x) ≡ x·x mod 2
            if q_basis[i] % 2 != form[i][i] {
                return bad(format!("q(b_{i}) = {} has the wrong parity for b_{i}·b_{i} = {}", q_basis[i], form[i][i]));
            }
        }
        if gf2_rank(&form) != rank {
            return bad("intersection form is degenerate".into());
        }
        Ok(Self { rank, form, q_basis })
    }

    /// Diagonal form with the given values (the disjoint union of projective planes).
    pub fn diagonal(q: &[u8]) -> Result<Self, PinError> {
        let n = q.len();
        let form = (0..n).map(|i| (0..n).map(|j| (i == j) as u8).collect()).collect();
        Self::new(form, q.to_vec())
    }

    /// Hyperbolic plane `[[0,1],[1,0]]` (a torus) with `q` on the two basis vectors.
    pub fn hyperbolic(q0: u8, q1: u8) -> Result<Self, PinError> {
        Self::new(vec![vec![0, 1], vec![1, 0]], vec![q0, q1])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn form(&self) -> &[Vec<u8>] {
        &self.form
    }

    pub fn q_basis(&self) -> &[u8] {
        &self.q_basis
    }

    pub fn dot(&self, x: u64, y: u64) -> u8 {
        let mut s = 0;
        for i in 0..self.rank {
            if x >> i & 1 == 1 {
                for j in 0..self.rank {
                    if y >> j & 1 == 1 {
                        s ^= self.form[i][j];
                    }
                }
            }
        }
        s
    }

    /// `q(x) = Σ x_i q(b_i) + 2 Σ_{i<j} x_i x_j (b_i·b_j) mod 4`; `x` is a bit mask.
    pub fn q(&self, x: u64) -> u8 {
        let mut s = 0u32;
        for i in 0..self.rank {
            if x >> i & 1 == 1 {
                s += self.q_basis[i] as u32;
                for j in (i + 1)..self.rank {
                    if x >> j & 1 == 1 {
                        s += 2 * self.form[i][j] as u32;
                    }
                }
            }
        }
        (s % 4) as u8
    }

    /// Largest violation of `q(x+y) = q(x) + q(y) + 2 x·y` over all pairs (rank ≤ 8).
    pub fn extension_consistent(&self) -> bool {
        let size = 1u64 << self.rank.min(8);
        (0..size).all(|x| (0..size).all(|y| self.q(x ^ y) == (self.q(x) + self.q(y) + 2 * self.dot(x, y)) % 4))
    }

    /// Orthogonal direct sum (disjoint union of surfaces).
    pub fn direct_sum(&self, o: &Self) -> Self {
        let n = self.rank + o.rank;
        let form = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i < self.rank, j < self.rank) {
                        (true, true) => self.form[i][j],
                        (false, false) => o.form[i - self.rank][j - self.rank],
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let q = self.q_basis.iter().chain(&o.q_basis).copied().collect();
        Self { rank: n, form, q_basis: q }
    }

    /// `Σ_x i^{q(x)}` as an exact Gaussian integer `(re, im)`.
    pub fn gauss_sum(&self) -> (i64, i64) {
        let mut counts = [0i64; 4];
        for x in 0..(1u64 << self.rank) {
            counts[self.q(x) as usize] += 1;
        }
        (counts[0] - counts[2], counts[1] - counts[3])
    }
}

/// `β ∈ Z/8` with `Σ_x i^{q(x)} = √(2^rank) · e^{2πiβ/8}`, matched exactly.
pub fn brown_invariant(e: &QuadraticEnhancement) -> Result<u8, PinError> {
    let (re, im) = e.gauss_sum();
    let expected = 1i64 << e.rank;
    let modulus2 = re * re + im * im;
    if modulus2 != expected {
        return Err(PinError::GaussSumModulusMismatch {
            modulus: (modulus2 as f64).sqrt(),
            expected: (expected as f64).sqrt(),
        });
    }
    // e^{iπβ/4} scaled: even β → 2^{r/2} i^{β/2}; odd β → 2^{(r-1)/2} (1+i) i^{(β-1)/2}
    let rot = |(a, b): (i64, i64)| (-b, a);
    for beta in 0..8u8 {
        let mut z = if beta % 2 == 0 {
            if e.rank % 2 == 1 {
                continue;
            }
            (1i64 << (e.rank / 2), 0)
        } else {
            if e.rank % 2 == 0 {
                continue;
            }
            let s = 1i64 << (e.rank / 2);
            (s, s)
        };
        for _ in 0..beta / 2 {
            z = rot(z);
        }
        if z == (re, im) {
            return Ok(beta);
        }
    }
    Err(PinError::GaussSumModulusMismatch { modulus: (modulus2 as f64).sqrt(), expected: (expected as f64).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_plane_values() {
        assert_eq!(brown_invariant(&QuadraticEnhancement::diagonal(&[1]).unwrap()).unwrap(), 1);
        assert_eq!(brown_invariant(&QuadraticEnhancement::diagonal(&[3]).unwrap()).unwrap(), 7);
        assert_eq!(brown_invariant(&QuadraticEnhancement::hyperbolic(0, 0).unwrap()).unwrap(), 0);
        assert_eq!(brown_invariant(&QuadraticEnhancement::hyperbolic(2, 2).unwrap()).unwrap(), 4);
    }

    #[test]
    fn rejects_malformed_enhancements() {
        assert!(QuadraticEnhancement::diagonal(&[2]).is_err());
        assert!(QuadraticEnhancement::new(vec![vec![0]], vec![0]).is_err());
        assert!(QuadraticEnhancement::new(vec![vec![1, 1], vec![0, 1]], vec![1, 1]).is_err());
    }

    #[test]
    fn extension_rule_holds() {
        let e = QuadraticEnhancement::diagonal(&[1, 3, 1]).unwrap().direct_sum(&QuadraticEnhancement::hyperbolic(0, 2).unwrap());
        assert!(e.extension_consistent());
    }
}
