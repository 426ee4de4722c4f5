//! Stiefel–Whitney classes of real projective spaces and pin obstructions.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::PinError;

/// Truncated polynomial in `H*(RP^n; Z/2) = Z/2[a]/(a^{n+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mod2Poly {
    degree: usize,
    coeffs: Vec<bool>,
}

impl Mod2Poly {
    pub fn zero(degree: usize) -> Self {
        Self { degree, coeffs: vec![false; degree + 1] }
    }

    pub fn one(degree: usize) -> Self {
        let mut p = Self::zero(degree);
        p.coeffs[0] = true;
        p
    }

    /// The generator `a` (zero when truncating at degree 0).
    pub fn generator(degree: usize) -> Self {
        let mut p = Self::zero(degree);
        if degree >= 1 {
            p.coeffs[1] = true;
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of `a^k` (0 above the truncation degree).
    pub fn coeff(&self, k: usize) -> u8 {
        self.coeffs.get(k).copied().unwrap_or(false) as u8
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree, "truncation degrees differ");
        Self { degree: self.degree, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a ^ b).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.degree, o.degree, "truncation degrees differ");
        let mut out = Self::zero(self.degree);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if !a {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate().take(self.degree + 1 - i) {
                out.coeffs[i + j] ^= b;
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(self.degree), |acc, _| acc.mul(self))
    }

    /// Homogeneous part of degree `k`, as a polynomial.
    pub fn part(&self, k: usize) -> Self {
        let mut p = Self::zero(self.degree);
        if k <= self.degree {
            p.coeffs[k] = self.coeffs[k];
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| !c)
    }
}

impl fmt::Display for Mod2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(|(k, _)| match k {
                0 => "1".to_string(),
                1 => "a".to_string(),
                _ => format!("a^{k}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// `w(RP^n) = (1 + a)^{n+1}`, truncated at degree `n`.
pub fn total_sw_rp(n: usize) -> Result<Mod2Poly, PinError> {
    if n == 0 {
        return Err(PinError::InvalidArgument("projective space dimension must be >= 1".into()));
    }
    let one_plus_a = Mod2Poly::one(n).add(&Mod2Poly::generator(n));
    Ok(one_plus_a.pow(n + 1))
}

/// Top Stiefel–Whitney number `⟨w_n, [RP^n]⟩`; 1 means `RP^n` does not bound.
pub fn sw_number_top(n: usize) -> Result<u8, PinError> {
    Ok(total_sw_rp(n)?.coeff(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SWReport {
    pub n: usize,
    /// `w_1 … w_n`.
    pub w: Vec<u8>,
    pub spin: bool,
    pub pin_plus: bool,
    pub pin_minus: bool,
    /// Number of structures of each admissible kind: `|H¹(RP^n; Z/2)| = 2`.
    pub structure_count: Option<u32>,
}

pub const PIN_TABLE_HEADER: &str = "n,w1,w2,w3,w4,spin,pin_plus,pin_minus,count";

impl SWReport {
    pub fn w_k(&self, k: usize) -> u8 {
        if k == 0 {
            1
        } else {
            self.w.get(k - 1).copied().unwrap_or(0)
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.w_k(1),
            self.w_k(2),
            self.w_k(3),
            self.w_k(4),
            self.spin,
            self.pin_plus,
            self.pin_minus,
            self.structure_count.unwrap_or(0)
        )
    }
}

/// Obstructions: pin⁺ iff `w₂ = 0`, pin⁻ iff `w₂ + w₁² = 0`, spin iff `w₁ = w₂ = 0`.
pub fn pin_verdicts(n: usize) -> Result<SWReport, PinError> {
    let w = total_sw_rp(n)?;
    let w1 = w.part(1);
    let w2 = w.part(2);
    let pin_plus = w2.is_zero();
    let pin_minus = w2.add(&w1.mul(&w1)).is_zero();
    let spin = w1.is_zero() && w2.is_zero();
    let exists = pin_plus || pin_minus;
    Ok(SWReport {
        n,
        w: (1..=n).map(|k| w.coeff(k)).collect(),
        spin,
        pin_plus,
        pin_minus,
        structure_count: exists.then_some(2),
    })
}

/// Rows `n = 2 ..= n_max` of the obstruction table as CSV.
pub fn pin_table_csv(n_max: usize) -> Result<String, PinError> {
    let mut out = String::from(PIN_TABLE_HEADER);
    out.push('\n');
    for n in 2..=n_max {
        out.push_str(&pin_verdicts(n)?.csv_row());
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_total_classes() {
        assert_eq!(total_sw_rp(2).unwrap().to_string(), "1 + a + a^2");
        assert_eq!(total_sw_rp(3).unwrap().to_string(), "1");
        assert_eq!(total_sw_rp(1).unwrap().to_string(), "1");
        assert!(total_sw_rp(0).is_err());
    }

    #[test]
    fn verdicts_for_four_five_seven() {
        let r4 = pin_verdicts(4).unwrap();
        assert!(r4.pin_plus && !r4.pin_minus && !r4.spin && r4.structure_count == Some(2));
        let r5 = pin_verdicts(5).unwrap();
        assert!(!r5.pin_plus && !r5.pin_minus && r5.structure_count.is_none());
        let r7 = pin_verdicts(7).unwrap();
        assert!(r7.pin_plus && r7.pin_minus && r7.spin);
    }

    #[test]
    fn top_numbers() {
        assert_eq!(sw_number_top(2).unwrap(), 1);
        assert_eq!(sw_number_top(4).unwrap(), 1);
        assert_eq!(sw_number_top(3).unwrap(), 0);
    }

    #[test]
    fn csv_shape() {
        let t = pin_table_csv(8).unwrap();
        assert_eq!(t.lines().count(), 8);
        assert_eq!(t.lines().nth(3).unwrap(), "4,1,0,0,1,false,true,false,2");
    }
}
