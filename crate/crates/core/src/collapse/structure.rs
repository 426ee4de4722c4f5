//! Torus-action structures on the catalog manifolds and their sampled validation.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::CollapseError;
use crate::builders::{
    displacement, sphere, verify_free, verify_isometry, FactorMap, GluedSpace, ProductMap, SmoothMap, ISOMETRY_TOL,
};
use crate::geom::sampling::interior_points;
use crate::catalog::{Family, ManifoldDescriptor};

/// Displacement below which a point counts as fixed.
pub const FIXED_POINT_TOL: f64 = 1e-6;
const SAMPLES: usize = 256;
const ANGLES: [f64; 4] = [PI / 3.0, PI / 2.0, PI, 4.0 * PI / 3.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleAction {
    /// Hopf rotation of the odd sphere factor.
    HopfOnSphere,
    /// Rotation of the last coordinate plane of the sphere factor.
    AxisRotationOnSphere,
}

impl CircleAction {
    pub fn factor_map(&self, s: f64) -> FactorMap {
        match self {
            CircleAction::HopfOnSphere => FactorMap::Hopf(s),
            CircleAction::AxisRotationOnSphere => FactorMap::AxisRotation(s),
        }
    }

    /// The action on the sphere's ambient space `R^{m+1}`.
    pub fn matrix(&self, ambient: usize, s: f64) -> DMatrix<f64> {
        match self {
            CircleAction::HopfOnSphere => sphere::hopf_rotation(ambient, s),
            CircleAction::AxisRotationOnSphere => sphere::plane_rotation(ambient, ambient - 2, ambient - 1, s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPoints {
    Empty,
    Poles,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StructureKind {
    /// Every piece carries its action without passing to a cover.
    T,
    F,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructurePiece {
    pub open_set: String,
    pub cover: String,
    pub deck_order: u32,
    pub torus_rank: usize,
    pub action: CircleAction,
    pub fixed_points: FixedPoints,
    /// How the deck group normalizes the torus action; `Φ = id` here.
    pub equivariance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapRecord {
    pub pieces: (usize, usize),
    pub region: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FStructureSpec {
    pub manifold: String,
    pub kind: StructureKind,
    pub pieces: Vec<StructurePiece>,
    pub overlaps: Vec<OverlapRecord>,
    pub polarized: bool,
    /// Present when the whole manifold carries one free circle action.
    pub global_free_circle: Option<String>,
}

pub fn build_structure(d: &ManifoldDescriptor) -> Result<FStructureSpec, CollapseError> {
    d.validate()?;
    let (action, fixed, deck, open_set, cover) = match d.family {
        Family::X => (
            CircleAction::HopfOnSphere,
            FixedPoints::Empty,
            1,
            d.blocks[0].name.clone(),
            d.blocks[0].name.clone(),
        ),
        Family::P => (
            CircleAction::AxisRotationOnSphere,
            FixedPoints::Poles,
            2,
            d.blocks[0].name.clone(),
            d.blocks[0].cover.clone(),
        ),
    };
    let pieces = (0..2)
        .map(|i| StructurePiece {
            open_set: open_set.replacen("A:", ["A:", "B:"][i], 1),
            cover: cover.replacen("A:", ["A:", "B:"][i], 1),
            deck_order: deck,
            torus_rank: 1,
            action,
            fixed_points: fixed,
            equivariance: "γ(λ·x) = λ·γ(x), Φ = id".into(),
        })
        .collect();
    let polarized = fixed == FixedPoints::Empty;
    let global = (d.family == Family::X && d.j == 0)
        .then(|| format!("Hopf circle on S^{} descends to the whole quotient", d.sphere_dim()));
    Ok(FStructureSpec {
        manifold: d.tag(),
        kind: if deck == 1 { StructureKind::T } else { StructureKind::F },
        pieces,
        overlaps: vec![OverlapRecord { pieces: (0, 1), region: "boundary collar".into() }],
        polarized,
        global_free_circle: global,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemCheck {
    pub item: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureVerdict {
    pub manifold: String,
    pub kind: StructureKind,
    pub polarized: bool,
    pub fixed_points_detected: bool,
    pub items: Vec<ItemCheck>,
}

impl StructureVerdict {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|c| c.passed)
    }

    pub fn first_violation(&self) -> Option<&ItemCheck> {
        self.items.iter().find(|c| !c.passed)
    }
}

fn circle_map(action: CircleAction, s: f64) -> ProductMap {
    ProductMap::new(format!("{action:?}({s:.4})"), vec![FactorMap::Identity, action.factor_map(s)])
}

/// Sampled checks of the seven structure items against the realized blocks
/// and gluing of a double.
/// Every item is evaluated; the first failure is returned as an error.
pub fn validate_structure(s: &FStructureSpec, space: &GluedSpace) -> Result<StructureVerdict, CollapseError> {
    let v = evaluate_structure(s, space)?;
    match v.first_violation() {
        Some(c) => Err(CollapseError::ItemViolation { item: c.item, detail: c.detail.clone() }),
        None => Ok(v),
    }
}

/// Like [`validate_structure`] but returns the full verdict even on failure.
pub fn evaluate_structure(s: &FStructureSpec, space: &GluedSpace) -> Result<StructureVerdict, CollapseError> {
    let blocks = [&space.block_a, &space.block_b];
    let mut items = Vec::new();
    let mut push = |item: u8, name: &str, passed: bool, detail: String| {
        items.push(ItemCheck { item, name: name.into(), passed, detail })
    };

    // 1: the pieces are the realized blocks and overlap along the collar
    let covers = s.pieces.len() == blocks.len() && !blocks.is_empty() && !s.overlaps.is_empty();
    push(1, "finite open cover", covers, format!("{} pieces over {} blocks", s.pieces.len(), blocks.len()));

    // 2: each nontrivial Γ_i is the block's free deck group
    let mut ok2 = true;
    let mut d2 = Vec::new();
    for (p, q) in s.pieces.iter().zip(blocks) {
        if p.deck_order > 1 {
            let free = q.freeness.iter().all(|f| f.passed);
            ok2 &= q.action().group_order == p.deck_order as usize && free;
            d2.push(format!("|Γ| = {} vs deck group of order {}", p.deck_order, q.action().group_order));
        } else {
            d2.push("trivial cover".into());
        }
    }
    push(2, "finite normal covers", ok2, d2.join("; "));

    // 3: effective isometric circle action preserving the chart
    let mut ok3 = true;
    let mut worst_iso = 0.0f64;
    let mut least_move = f64::INFINITY;
    let mut fixed_detected = false;
    let mut min_disp = f64::INFINITY;
    for (i, (p, q)) in s.pieces.iter().zip(blocks).enumerate() {
        let cover = q.cover();
        if cover.factors().len() != 2 || cover.factors()[1].sphere_dim().is_none() {
            return Err(CollapseError::InvalidArgument(format!("block {} has no sphere factor", q.id())));
        }
        let probes = interior_points(cover.chart(), 32, 0x3e00 + i as u64);
        for (a, &angle) in ANGLES.iter().enumerate() {
            let map = circle_map(p.action, angle);
            let seed = 0x7_0000 + (i * 16 + a) as u64;
            match verify_isometry(cover.metric(), &SmoothMap::from_product(cover, &map), SAMPLES / 4, seed, ISOMETRY_TOL) {
                Ok(v) => {
                    worst_iso = worst_iso.max(v.max_defect);
                    ok3 &= v.passed;
                }
                Err(_) => ok3 = false,
            }
            // finite kernel: no sampled nontrivial element acts trivially
            let moved = probes.iter().map(|x| displacement(cover, &map, x)).fold(0.0, f64::max);
            least_move = least_move.min(moved);
        }
        let f = verify_free(cover, &circle_map(p.action, PI / 2.0), SAMPLES, 0x7_1000 + i as u64, FIXED_POINT_TOL)?;
        min_disp = min_disp.min(f.min_distance);
        fixed_detected |= !f.passed;
    }
    ok3 &= least_move > FIXED_POINT_TOL;
    push(3, "effective isometric action", ok3, format!("isometry defect {worst_iso:.3e}, least maximal displacement {least_move:.3e}"));

    // 4: Γ-equivariance with Φ = id: the action commutes with the deck generator
    let mut comm4 = 0.0f64;
    for (p, q) in s.pieces.iter().zip(blocks) {
        let cover = q.cover();
        for g in &q.action().generators {
            for (a, &angle) in ANGLES.iter().enumerate() {
                let map = circle_map(p.action, angle);
                for pt in interior_points(cover.chart(), 32, 0x4e00 + a as u64) {
                    let x = cover.embed(&g.apply(cover, &map.apply(cover, &pt)?)?);
                    let y = cover.embed(&map.apply(cover, &g.apply(cover, &pt)?)?);
                    comm4 = comm4.max(x.iter().zip(&y).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max));
                }
            }
        }
    }
    push(4, "deck-group equivariance", comm4 <= 1e-10, format!("commutator defect {comm4:.3e}"));

    // 5: on the collar the two pieces' actions commute through the gluing map
    let mut comm5 = 0.0f64;
    if let (Some(pa), Some(pb)) = (s.pieces.first(), s.pieces.get(1)) {
        let ambient = space.gluing.matrix(0.0).nrows();
        for i in 0..16 {
            let l = space.gluing.matrix(2.0 * PI * i as f64 / 16.0);
            let linv = l.clone().try_inverse().ok_or_else(|| CollapseError::InvalidArgument("gluing map is singular".into()))?;
            for &s1 in &ANGLES {
                for &s2 in &ANGLES {
                    let ra = pa.action.matrix(ambient, s1);
                    let rb = &linv * pb.action.matrix(ambient, s2) * &l;
                    comm5 = comm5.max((&ra * &rb - &rb * &ra).amax());
                }
            }
        }
    }
    push(5, "commuting on overlaps", comm5 <= 1e-10, format!("overlap commutator {comm5:.3e}"));

    // 6: T-structure iff no piece needs a cover
    let all_trivial = s.pieces.iter().all(|p| p.deck_order == 1);
    let ok6 = (s.kind == StructureKind::T) == all_trivial;
    push(6, "T- versus F-structure", ok6, format!("declared {:?}, trivial covers: {all_trivial}", s.kind));

    // 7: polarized iff no fixed points (declared and detected)
    let declared_fixed = s.pieces.iter().any(|p| p.fixed_points != FixedPoints::Empty);
    let ok7 = s.polarized == !fixed_detected && declared_fixed == fixed_detected;
    push(
        7,
        "polarization",
        ok7,
        format!(
            "declared polarized {}, declared fixed points {declared_fixed}, detected {fixed_detected} (min displacement {min_disp:.3e})",
            s.polarized
        ),
    );

    Ok(StructureVerdict {
        manifold: s.manifold.clone(),
        kind: s.kind,
        polarized: s.polarized,
        fixed_points_detected: fixed_detected,
        items,
    })
}

/// A copy of `s` that claims to be polarized regardless of its fixed points.
pub fn corrupted_polarized(s: &FStructureSpec) -> FStructureSpec {
    FStructureSpec { polarized: true, ..s.clone() }
}
