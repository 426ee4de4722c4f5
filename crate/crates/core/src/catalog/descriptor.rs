//! Descriptors of the catalog manifolds `X^{2k+1}(j)` and `P^{2k}(j)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CatalogError;
use crate::builders::{loop_class, LoopTerm, RotationLoop};
use crate::pin::{CharacteristicTag, Symbolic};

pub const DEFAULT_K_MIN: usize = 2;
pub const DEFAULT_K_MAX: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Orientable, `dim = 2k + 1`, blocks `D² ×̃ RP^{2k-1}`.
    X,
    /// Nonorientable, `dim = 2k`, blocks `D² ×̃ RP^{2k-2}`.
    P,
}

/// One disk-bundle block: `(D² × S^m) / (half-turn, antipodal)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub name: String,
    pub cover: String,
    pub boundary: String,
    pub sphere_dim: usize,
    pub twisted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingSpec {
    /// Mod-2 class of the loop in `π₁ SO(ambient_dim)`.
    pub class: u8,
    pub ambient_dim: usize,
    pub terms: Vec<LoopTerm>,
}

impl GluingSpec {
    pub fn rotation_loop(&self) -> Result<RotationLoop, CatalogError> {
        Ok(RotationLoop::new(self.ambient_dim, self.terms.clone())?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldDescriptor {
    pub family: Family,
    pub k: usize,
    pub j: u8,
    pub dim: usize,
    pub orientable: bool,
    pub blocks: [BlockSpec; 2],
    pub gluing: GluingSpec,
    /// Class carrier for the bordism comparison. For `X` this is the
    /// characteristic submanifold `P^{2k}(j)`; for `P` it is the
    /// two-dimensional model of the manifold's own class.
    pub characteristic: Symbolic,
    /// The Hopf line bundle `γ` over `RP^{2k-2}` inside `S(2γ ⊕ R)`.
    pub gamma_tag: String,
    /// The nontrivial line bundle `L` inducing pin structures; bookkeeping only.
    pub line_bundle_tag: String,
}

impl ManifoldDescriptor {
    pub fn new(family: Family, k: usize, j: u8) -> Result<Self, CatalogError> {
        if k < 2 {
            return Err(CatalogError::InvalidDescriptor(format!("k = {k} < 2 is excluded")));
        }
        if j != 0 && j != 2 {
            return Err(CatalogError::InvalidDescriptor(format!("j = {j} not in {{0, 2}}")));
        }
        let (dim, m) = match family {
            Family::X => (2 * k + 1, 2 * k - 1),
            Family::P => (2 * k, 2 * k - 2),
        };
        let block = |name: &str| BlockSpec {
            name: format!("{name}: D²×̃RP^{m}"),
            cover: format!("D²×S^{m}"),
            boundary: match family {
                Family::X => format!("S¹×S^{m}"),
                Family::P => format!("S^{m}×̃S¹"),
            },
            sphere_dim: m,
            twisted: true,
        };
        // X loops turn a complex line of C^k (commuting with the Hopf action);
        // P loops turn the last plane (commuting with the axis rotation).
        let plane = match family {
            Family::X => (0, 1),
            Family::P => (m - 1, m),
        };
        let terms = if j == 2 { vec![LoopTerm { plane, multiple: 1 }] } else { Vec::new() };
        let gluing = GluingSpec { class: j / 2, ambient_dim: m + 1, terms };
        let characteristic = match (family, j) {
            (Family::X, 0) => Symbolic::SphereBundle { base: 2 * k - 2 },
            (Family::X, _) => Symbolic::circle_sum(Symbolic::projective(2 * k), Symbolic::projective(2 * k)),
            (Family::P, 0) => Symbolic::SphereBundle { base: 0 },
            (Family::P, _) => Symbolic::circle_sum(Symbolic::projective(2), Symbolic::projective(2)),
        };
        let d = Self {
            family,
            k,
            j,
            dim,
            orientable: family == Family::X,
            blocks: [block("A"), block("B")],
            gluing,
            characteristic,
            gamma_tag: format!("γ → RP^{}", 2 * k - 2),
            line_bundle_tag: "L".into(),
        };
        d.validate()?;
        Ok(d)
    }

    /// Check the descriptor invariants (also applied after deserialization by callers).
    pub fn validate(&self) -> Result<(), CatalogError> {
        let bad = |why: String| Err(CatalogError::InvalidDescriptor(format!("{}: {why}", self.tag())));
        let l = self.gluing.rotation_loop()?;
        if loop_class(&l) != self.j / 2 || self.gluing.class != self.j / 2 {
            return bad(format!("j = {} but the gluing loop has class {}", self.j, loop_class(&l)));
        }
        let m = self.sphere_dim();
        if self.gluing.ambient_dim != m + 1 || self.blocks.iter().any(|b| b.sphere_dim != m) {
            return bad("block fibers and gluing ambient dimension disagree".into());
        }
        if self.orientable != (self.family == Family::X) {
            return bad("only the X family is orientable".into());
        }
        Ok(())
    }

    pub fn tag(&self) -> String {
        format!("{:?}{}.{}", self.family, self.dim, self.j)
    }

    pub fn sphere_dim(&self) -> usize {
        match self.family {
            Family::X => 2 * self.k - 1,
            Family::P => 2 * self.k - 2,
        }
    }

    pub fn characteristic_tag(&self) -> CharacteristicTag {
        CharacteristicTag { name: self.tag(), characteristic: Some(self.characteristic.clone()) }
    }
}

impl fmt::Display for ManifoldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for ManifoldDescriptor {
    type Err = CatalogError;

    /// Parses tags such as `X5.2` or `P4.0`.
    fn from_str(s: &str) -> Result<Self, CatalogError> {
        let bad = || CatalogError::UnknownDescriptor(s.to_string());
        let family = match s.chars().next() {
            Some('X') => Family::X,
            Some('P') => Family::P,
            _ => return Err(bad()),
        };
        let (dim, j) = s[1..].split_once('.').ok_or_else(bad)?;
        let dim: usize = dim.parse().map_err(|_| bad())?;
        let j: u8 = j.parse().map_err(|_| bad())?;
        let k = match family {
            Family::X if dim % 2 == 1 => (dim - 1) / 2,
            Family::P if dim % 2 == 0 => dim / 2,
            _ => return Err(bad()),
        };
        Self::new(family, k, j)
    }
}

/// Descriptors for `k_min ..= k_max`, ordered by `k`, family, then `j`.
pub fn catalog_list(k_min: usize, k_max: usize) -> Result<Vec<ManifoldDescriptor>, CatalogError> {
    if k_min < 2 {
        return Err(CatalogError::InvalidDescriptor(format!("k = {k_min} < 2 is excluded")));
    }
    if k_max < k_min {
        return Err(CatalogError::InvalidDescriptor(format!("empty k range {k_min}..{k_max}")));
    }
    let mut out = Vec::new();
    for k in k_min..=k_max {
        for family in [Family::X, Family::P] {
            for j in [0, 2] {
                out.push(ManifoldDescriptor::new(family, k, j)?);
            }
        }
    }
    Ok(out)
}
