//! Pin bordism bookkeeping: classes, circle-sum addition, bounding witnesses
//! and the characteristic-submanifold comparison of a catalog pair.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::brown::{brown_invariant, QuadraticEnhancement};
use super::sw::pin_verdicts;
use super::PinError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PinKind {
    #[serde(rename = "pin+")]
    Plus,
    #[serde(rename = "pin-")]
    Minus,
}

impl fmt::Display for PinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PinKind::Plus => "pin+",
            PinKind::Minus => "pin-",
        })
    }
}

/// Where a group order or a nonvanishing statement comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Computed here by the exact Gauss-sum evaluation of the Brown invariant.
    BrownOracle,
    /// Imported from the published computation of low-dimensional pin bordism.
    LiteratureTable,
    /// Nothing is known; the element is a formal sum.
    Formal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BordismGroup {
    Cyclic { order: u32, provenance: Provenance },
    Unknown,
}

impl BordismGroup {
    pub fn provenance(&self) -> Provenance {
        match self {
            BordismGroup::Cyclic { provenance, .. } => *provenance,
            BordismGroup::Unknown => Provenance::Formal,
        }
    }
}

impl fmt::Display for BordismGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BordismGroup::Cyclic { order, .. } => write!(f, "Z/{order}"),
            BordismGroup::Unknown => f.write_str("unknown"),
        }
    }
}

/// `Ω^{Pin±}_dim` as far as it is tabulated.
///
/// `Ω^{Pin-}_2 ≅ Z/8` is certified by the Brown invariant (complete on it);
/// `Ω^{Pin+}_4 ≅ Z/16` is a literature constant. Everything else is unknown.
pub fn bordism_group(dim: usize, kind: PinKind) -> BordismGroup {
    match (dim, kind) {
        (2, PinKind::Minus) => BordismGroup::Cyclic { order: 8, provenance: Provenance::BrownOracle },
        (4, PinKind::Plus) => BordismGroup::Cyclic { order: 16, provenance: Provenance::LiteratureTable },
        _ => BordismGroup::Unknown,
    }
}

/// The structure that even-dimensional projective spaces carry: pin⁺ in
/// dimensions `0 mod 4`, pin⁻ in dimensions `2 mod 4`.
pub fn projective_pin_kind(n: usize) -> Result<PinKind, PinError> {
    let v = pin_verdicts(n)?;
    match (n % 2, v.pin_plus, v.pin_minus) {
        (0, true, false) => Ok(PinKind::Plus),
        (0, false, true) => Ok(PinKind::Minus),
        _ => Err(PinError::InvalidArgument(format!("RP^{n} is not an even-dimensional pin manifold"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Element {
    Residue(u32),
    /// Integer combination of named generators.
    Formal(BTreeMap<String, i64>),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Residue(r) => write!(f, "{r}"),
            Element::Formal(m) if m.is_empty() => f.write_str("0"),
            Element::Formal(m) => {
                let terms: Vec<String> = m
                    .iter()
                    .map(|(g, c)| if *c == 1 { g.clone() } else { format!("{c}*{g}") })
                    .collect();
                f.write_str(&terms.join(" + "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BordismClass {
    pub dim: usize,
    pub structure: PinKind,
    pub group: BordismGroup,
    pub element: Element,
    /// Name of a nullbordism, present whenever the class is asserted zero.
    pub witness: Option<String>,
}

impl BordismClass {
    /// The zero class; a witness is mandatory.
    pub fn zero(dim: usize, structure: PinKind, witness: impl Into<String>) -> Self {
        let group = bordism_group(dim, structure);
        let element = match group {
            BordismGroup::Cyclic { .. } => Element::Residue(0),
            BordismGroup::Unknown => Element::Formal(BTreeMap::new()),
        };
        Self { dim, structure, group, element, witness: Some(witness.into()) }
    }

    /// `Some(true)` for zero, `Some(false)` for a provably nonzero element,
    /// `None` when the group is unknown and the element is a nonempty formal sum.
    pub fn is_zero(&self) -> Option<bool> {
        match &self.element {
            Element::Residue(r) => Some(*r == 0),
            Element::Formal(m) if m.is_empty() => Some(true),
            Element::Formal(_) => None,
        }
    }

    pub fn asserted_zero(&self) -> bool {
        self.is_zero() == Some(true) && self.witness.is_some()
    }
}

/// Group addition (circle sum and disjoint union). Witnesses are dropped.
pub fn ledger_add(a: &BordismClass, b: &BordismClass) -> Result<BordismClass, PinError> {
    if a.dim != b.dim || a.structure != b.structure {
        return Err(PinError::StructureMismatch {
            left: format!("dim {} {}", a.dim, a.structure),
            right: format!("dim {} {}", b.dim, b.structure),
        });
    }
    let element = match (&a.element, &b.element, a.group) {
        (Element::Residue(x), Element::Residue(y), BordismGroup::Cyclic { order, .. }) => Element::Residue((x + y) % order),
        (Element::Formal(x), Element::Formal(y), BordismGroup::Unknown) => {
            let mut m = x.clone();
            for (g, c) in y {
                *m.entry(g.clone()).or_insert(0) += c;
            }
            m.retain(|_, c| *c != 0);
            Element::Formal(m)
        }
        _ => {
            return Err(PinError::StructureMismatch {
                left: format!("{} in {}", a.element, a.group),
                right: format!("{} in {}", b.element, b.group),
            })
        }
    };
    Ok(BordismClass { dim: a.dim, structure: a.structure, group: a.group, element, witness: None })
}

/// Manifolds as they enter the ledger: names with enough structure to look up a class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Symbolic {
    /// `RP^n` with one of its two structures; `conjugate` selects `-φ`.
    ProjectiveSpace { n: usize, conjugate: bool },
    /// Circle sum along loops generating π₁; equals the bordism sum.
    CircleSum { left: Box<Symbolic>, right: Box<Symbolic> },
    /// `S(2γ ⊕ R)` over `RP^base`, the double of a disk bundle.
    SphereBundle { base: usize },
    /// Torus with the enhancement values on a symplectic basis.
    Torus { q: [u8; 2] },
}

impl Symbolic {
    pub fn projective(n: usize) -> Self {
        Symbolic::ProjectiveSpace { n, conjugate: false }
    }

    pub fn circle_sum(a: Symbolic, b: Symbolic) -> Self {
        Symbolic::CircleSum { left: Box::new(a), right: Box::new(b) }
    }

    pub fn dim(&self) -> usize {
        match self {
            Symbolic::ProjectiveSpace { n, .. } => *n,
            Symbolic::CircleSum { left, .. } => left.dim(),
            Symbolic::SphereBundle { base } => base + 2,
            Symbolic::Torus { .. } => 2,
        }
    }
}

impl fmt::Display for Symbolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbolic::ProjectiveSpace { n, conjugate: false } => write!(f, "RP^{n}"),
            Symbolic::ProjectiveSpace { n, conjugate: true } => write!(f, "-RP^{n}"),
            Symbolic::CircleSum { left, right } => write!(f, "{left} #_S1 {right}"),
            Symbolic::SphereBundle { base } => write!(f, "S(2γ⊕R) over RP^{base}"),
            Symbolic::Torus { q } => write!(f, "T^2 q=({},{})", q[0], q[1]),
        }
    }
}

/// Nullbordism of a recognized double.
///
/// `S(2γ⊕R)` over `RP^m` is the boundary of `[0,1] × (D²-bundle over RP^m)`;
/// the torus with `q ≡ 0` bounds the solid torus.
pub fn bounding_witness(s: &Symbolic) -> Result<BordismClass, PinError> {
    match s {
        Symbolic::SphereBundle { base } => {
            if base % 2 != 0 {
                return Err(PinError::NotARecognizedDouble(s.to_string()));
            }
            let dim = base + 2;
            Ok(BordismClass::zero(dim, projective_pin_kind(dim)?, format!("[0,1]×D²×̃RP^{base}")))
        }
        Symbolic::Torus { q: [0, 0] } => Ok(BordismClass::zero(2, PinKind::Minus, "solid torus")),
        _ => Err(PinError::NotARecognizedDouble(s.to_string())),
    }
}

fn certified_zero_witness(c: BordismClass) -> BordismClass {
    if c.group.provenance() == Provenance::BrownOracle && c.is_zero() == Some(true) {
        BordismClass { witness: Some("Brown invariant 0 (complete on Z/8)".into()), ..c }
    } else {
        c
    }
}

/// Class of a symbolic manifold in its pin bordism group.
pub fn class_of(s: &Symbolic) -> Result<BordismClass, PinError> {
    match s {
        Symbolic::ProjectiveSpace { n, conjugate } => {
            let kind = projective_pin_kind(*n)?;
            let group = bordism_group(*n, kind);
            let element = match group {
                BordismGroup::Cyclic { order, provenance: Provenance::BrownOracle } => {
                    let q = if *conjugate { 3 } else { 1 };
                    Element::Residue(brown_invariant(&QuadraticEnhancement::diagonal(&[q])?)? as u32 % order)
                }
                // the projective space generates the tabulated group
                BordismGroup::Cyclic { order, .. } => Element::Residue(if *conjugate { order - 1 } else { 1 }),
                BordismGroup::Unknown => {
                    Element::Formal(BTreeMap::from([(format!("[RP^{n}]"), if *conjugate { -1 } else { 1 })]))
                }
            };
            Ok(BordismClass { dim: *n, structure: kind, group, element, witness: None })
        }
        Symbolic::CircleSum { left, right } => {
            Ok(certified_zero_witness(ledger_add(&class_of(left)?, &class_of(right)?)?))
        }
        Symbolic::SphereBundle { .. } => bounding_witness(s),
        Symbolic::Torus { q: [0, 0] } => bounding_witness(s),
        Symbolic::Torus { q } => {
            let beta = brown_invariant(&QuadraticEnhancement::hyperbolic(q[0], q[1])?)?;
            let mut c = BordismClass::zero(2, PinKind::Minus, "");
            c.element = Element::Residue(beta as u32);
            c.witness = None;
            Ok(certified_zero_witness(c))
        }
    }
}

/// A manifold named in a comparison, with the characteristic submanifold used
/// by the bordism argument.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicTag {
    pub name: String,
    pub characteristic: Option<Symbolic>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistinguishVerdict {
    /// Characteristic submanifolds lie in different bordism classes.
    Distinct,
    /// Identical classes; the invariant says nothing.
    NoConclusion,
    /// One class is nonzero only formally; the group is not tabulated.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub manifold: String,
    pub characteristic: String,
    pub class: BordismClass,
    pub rendered: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiteratureConstant {
    pub statement: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistinguishReport {
    pub pair: [ClassSummary; 2],
    pub verdict: DistinguishVerdict,
    pub basis: Provenance,
    pub conclusion: String,
    pub literature_constants: Vec<LiteratureConstant>,
}

fn summarize(t: &CharacteristicTag) -> Result<ClassSummary, PinError> {
    let ch = t.characteristic.as_ref().ok_or_else(|| PinError::MissingCharacteristicTag(t.name.clone()))?;
    let class = class_of(ch)?;
    let rendered = match class.group {
        _ if class.is_zero() == Some(true) => "0".to_string(),
        BordismGroup::Cyclic { order, .. } => format!("{} mod {order}", class.element),
        BordismGroup::Unknown => class.element.to_string(),
    };
    Ok(ClassSummary { manifold: t.name.clone(), characteristic: ch.to_string(), class, rendered })
}

/// Compare the characteristic submanifolds of two manifolds in pin bordism.
pub fn distinguish(a: &CharacteristicTag, b: &CharacteristicTag) -> Result<DistinguishReport, PinError> {
    let sa = summarize(a)?;
    let sb = summarize(b)?;
    let (ca, cb) = (&sa.class, &sb.class);
    if ca.dim != cb.dim || ca.structure != cb.structure {
        return Err(PinError::StructureMismatch {
            left: format!("dim {} {}", ca.dim, ca.structure),
            right: format!("dim {} {}", cb.dim, cb.structure),
        });
    }
    let basis = ca.group.provenance();
    let mut literature = Vec::new();
    if basis == Provenance::LiteratureTable {
        literature.push(LiteratureConstant {
            statement: format!("Omega^{}_{} = {} generated by RP^{}", ca.structure, ca.dim, ca.group, ca.dim),
            provenance: Provenance::LiteratureTable,
        });
    }
    let (verdict, conclusion) = if ca.element == cb.element {
        (DistinguishVerdict::NoConclusion, "identical classes; no conclusion".to_string())
    } else {
        match (ca.is_zero(), cb.is_zero()) {
            (Some(x), Some(y)) if x != y || (!x && !y) => {
                (DistinguishVerdict::Distinct, "distinct bordism classes => not homeomorphic".to_string())
            }
            _ => {
                literature.push(LiteratureConstant {
                    statement: format!("[RP^{}, phi] != 0 in Omega^{}_{}", ca.dim, ca.structure, ca.dim),
                    provenance: Provenance::LiteratureTable,
                });
                (
                    DistinguishVerdict::Undetermined,
                    format!("group Omega^{}_{} not tabulated; nonvanishing of the formal class is not certified", ca.structure, ca.dim),
                )
            }
        }
    };
    Ok(DistinguishReport { pair: [sa, sb], verdict, basis, conclusion, literature_constants: literature })
}
