mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use approx::assert_relative_eq;
use nalgebra::DMatrix;
use nnq::builders::{
    boundary_form_check, disk_bundle_block, glued_metric, gluing_isometry_check, loop_class, make_profile,
    monte_carlo_volume, quotient, verify_free, verify_isometry, ActionLabel, BuildError, BoundaryMode, Factor,
    FactorMap, GluedSpace, GluingMap, IsometricAction, LoopTerm, ProductMap, ProductMetric, ProfileKind,
    RotationLoop, SmoothMap,
};
use nnq::geom::{curvature_scan, PointCurvature};
use proptest::prelude::*;

use common::{random_point, rng};

fn product(id: &str, factors: Vec<Factor>) -> ProductMetric {
    ProductMetric::new(id, factors).unwrap()
}

fn map(name: &str, maps: Vec<FactorMap>) -> ProductMap {
    ProductMap::new(name, maps)
}

// ---- profiles ----

#[test]
fn hemisphere_profile_values() {
    let p = make_profile(ProfileKind::Hemisphere, 1.0, 5).unwrap();
    assert_relative_eq!(p.t_max(), FRAC_PI_2, epsilon = 1e-15);
    assert_relative_eq!(p.f(PI / 4.0), 2f64.sqrt() / 2.0, epsilon = 1e-14);
    assert!(p.derivative(1, FRAC_PI_2).abs() < 1e-14);
    assert!(p.derivative(3, FRAC_PI_2).abs() < 1e-14);
    let p2 = make_profile(ProfileKind::Hemisphere, 2.0, 5).unwrap();
    for t in [0.1, 0.8, 1.7, 3.0] {
        let [f, _, f2] = p2.values(t);
        assert_relative_eq!(-f2 / f, 0.25, epsilon = 1e-12);
        assert_relative_eq!(p2.gauss_curvature(t), 0.25, epsilon = 1e-12);
    }
}

#[test]
fn torpedo_is_constant_on_its_collar() {
    let p = make_profile(ProfileKind::CollarTorpedo, 1.0, 5).unwrap();
    let (c0, c1) = (p.collar_start(), p.t_max());
    assert!(c0 < c1 && p.blend_start() < c0);
    for i in 0..=50 {
        let t = c0 + (c1 - c0) * i as f64 / 50.0;
        assert!((p.f(t) - 1.0).abs() <= 1e-9, "f({t}) = {}", p.f(t));
        for k in 1..=5 {
            assert!(p.derivative(k, t).abs() <= 1e-9, "f^({k})({t}) = {}", p.derivative(k, t));
        }
    }
    // below the blend it is a round profile ρ sin(t/ρ), with ρ fixed by the plateau
    let rho = 1.0 / p.gauss_curvature(0.1).sqrt();
    assert!(rho > 1.0);
    for t in [0.05, 0.3, 0.5 * p.blend_start(), p.blend_start()] {
        assert_relative_eq!(p.f(t), rho * (t / rho).sin(), epsilon = 1e-12);
        assert_relative_eq!(p.derivative(1, t), (t / rho).cos(), epsilon = 1e-12);
    }
    for r in [0.5, 2.0, 3.0] {
        let q = make_profile(ProfileKind::CollarTorpedo, r, 5).unwrap();
        assert_relative_eq!(q.f(q.t_max()), r, epsilon = 1e-12);
    }
}

#[test]
fn profile_rejects_bad_arguments() {
    assert!(matches!(make_profile(ProfileKind::Hemisphere, 0.0, 5), Err(BuildError::InvalidArgument(_))));
    assert!(matches!(make_profile(ProfileKind::CollarTorpedo, 1.0, 8), Err(BuildError::InvalidArgument(_))));
}

#[test]
fn profile_table_has_header_and_rows() {
    let p = make_profile(ProfileKind::CollarTorpedo, 1.0, 5).unwrap();
    let csv = p.csv_table(11);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 13);
    assert_eq!(lines[0], "t,f,df,d2f");
    assert_eq!(lines[1].split(',').count(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profiles_are_concave_and_start_like_the_plane(
        r in 0.2f64..5.0,
        u in 0.0f64..1.0,
        torpedo in any::<bool>(),
    ) {
        let kind = if torpedo { ProfileKind::CollarTorpedo } else { ProfileKind::Hemisphere };
        let p = make_profile(kind, r, 5).unwrap();
        prop_assert!(p.f(0.0).abs() < 1e-12);
        prop_assert!((p.derivative(1, 0.0) - 1.0).abs() < 1e-12);
        let t = (0.001 + 0.999 * u) * p.t_max();
        let [f, _, f2] = p.values(t);
        prop_assert!(f > 0.0);
        prop_assert!(-f2 / f >= -1e-9);
        for k in (1..=5).step_by(2) {
            prop_assert!(p.derivative(k, p.t_max()).abs() <= 1e-6);
        }
    }
}

// ---- isometries and freeness ----

#[test]
fn antipodal_map_is_a_free_isometry() {
    for n in [2, 3, 4] {
        let s = product("Sn", vec![Factor::round(n, 1.0)]);
        let a = map("A", vec![FactorMap::Antipodal]);
        let iso = verify_isometry(s.metric(), &SmoothMap::from_product(&s, &a), 200, 1, 1e-10).unwrap();
        assert!(iso.passed, "S^{n}: {}", iso.max_defect);
        let free = verify_free(&s, &a, 200, 1, 1e-6).unwrap();
        assert!(free.passed);
        assert_relative_eq!(free.min_distance, 2.0, epsilon = 1e-9);
    }
}

#[test]
fn product_involution_is_a_free_isometry() {
    let s = product("S2xS3", vec![Factor::round(2, 1.0), Factor::round(3, 1.0)]);
    let t = map("(r,A)", vec![FactorMap::HalfTurn, FactorMap::Antipodal]);
    assert!(verify_isometry(s.metric(), &SmoothMap::from_product(&s, &t), 200, 2, 1e-10).unwrap().passed);
    let free = verify_free(&s, &t, 200, 2, 1e-6).unwrap();
    assert!(free.passed && free.min_distance >= 2.0 - 1e-9);
}

#[test]
fn reflection_alone_has_fixed_points() {
    let s = product("S2", vec![Factor::round(2, 1.0)]);
    let r = map("r", vec![FactorMap::Reflection]);
    assert!(verify_isometry(s.metric(), &SmoothMap::from_product(&s, &r), 200, 3, 1e-10).unwrap().passed);
    let free = verify_free(&s, &r, 200, 3, 1e-6).unwrap();
    assert!(!free.passed && free.min_distance < 1e-6);
}

#[test]
fn scaling_is_not_an_isometry() {
    let flat = product("T2", vec![Factor::Flat { n: 2, lo: 0.0, hi: 1.0, periodic: true }]);
    let v = verify_isometry(flat.metric(), &SmoothMap::from_product(&flat, &map("2p", vec![FactorMap::Scale(2.0)])), 50, 4, 1e-10)
        .unwrap();
    assert!(!v.passed);
    // Dφᵀ g Dφ − g = 3 I, whose Frobenius norm is 3 ‖g‖
    assert_relative_eq!(v.max_defect, 3.0 * 2f64.sqrt(), epsilon = 1e-9);
}

#[test]
fn map_leaving_the_chart_is_reported() {
    let flat = product("box", vec![Factor::Flat { n: 2, lo: 0.0, hi: 1.0, periodic: false }]);
    let out = SmoothMap::new("shift", |p: &[f64]| p.iter().map(|x| x + 5.0).collect());
    assert!(matches!(verify_isometry(flat.metric(), &out, 10, 1, 1e-10), Err(BuildError::MapLeavesDomain { .. })));
}

// ---- quotients ----

#[test]
fn projective_space_has_curvature_one_and_half_volume() {
    let cover = product("S3", vec![Factor::round(3, 1.0)]);
    let q = quotient(cover, IsometricAction::involution(ActionLabel::Antipodal, map("A", vec![FactorMap::Antipodal])))
        .unwrap();
    assert_relative_eq!(q.cover().volume().unwrap(), 2.0 * PI * PI, epsilon = 1e-12);
    assert_relative_eq!(q.volume().unwrap(), PI * PI, epsilon = 1e-12);
    let rep = q.scan(400, 4, 5, 1e-7).unwrap();
    assert!((rep.min_k - 1.0).abs() < 1e-8 && (rep.max_k - 1.0).abs() < 1e-8);
}

#[test]
fn quotient_rejects_non_free_or_non_isometric_actions() {
    let s2 = product("S2", vec![Factor::round(2, 1.0)]);
    let r = IsometricAction::involution(ActionLabel::Reflection, map("r", vec![FactorMap::Reflection]));
    assert!(matches!(quotient(s2, r), Err(BuildError::ActionNotFree { .. })));
    let flat = product("T2", vec![Factor::Flat { n: 2, lo: 0.0, hi: 1.0, periodic: true }]);
    let sc = IsometricAction::involution(ActionLabel::Reflection, map("-p", vec![FactorMap::Scale(-2.0)]));
    assert!(matches!(quotient(flat, sc), Err(BuildError::ActionNotIsometric { .. })));
}

#[test]
fn quotient_scans_are_cover_scans() {
    let p = make_profile(ProfileKind::CollarTorpedo, 1.0, 5).unwrap();
    let q = disk_bundle_block("B", p, 3, 1.0, true).unwrap();
    let a = q.scan(300, 3, 11, 1e-7).unwrap();
    let b = curvature_scan(q.cover().metric(), 300, 3, 11, 1e-7).unwrap();
    assert!((a.min_k - b.min_k).abs() < 1e-10 && (a.max_k - b.max_k).abs() < 1e-10);
    assert!(a.min_k >= -1e-7);
}

#[test]
fn mixed_planes_in_disk_times_sphere_are_flat() {
    let p = make_profile(ProfileKind::CollarTorpedo, 1.0, 5).unwrap();
    let m = product("DxS3", vec![Factor::WarpedDisk(p.clone()), Factor::round(3, 1.0)]);
    let mut r = rng(12);
    let bounds = [(0.0, p.t_max()), (0.0, 2.0 * PI), (0.0, PI), (0.0, PI), (0.0, 2.0 * PI)];
    for _ in 0..50 {
        let x = random_point(&mut r, &bounds, 0.05);
        let pc = PointCurvature::at(m.metric(), &x).unwrap();
        for (i, j) in [(0, 2), (1, 3), (0, 4), (1, 2)] {
            let mut u = vec![0.0; 5];
            let mut w = vec![0.0; 5];
            u[i] = 1.0;
            w[j] = 1.0;
            assert!(pc.sectional(&u, &w).unwrap().abs() <= 1e-8);
        }
    }
}

// ---- boundary form ----

#[test]
fn torpedo_block_has_a_product_collar() {
    let p = make_profile(ProfileKind::CollarTorpedo, 1.0, 5).unwrap();
    let q = disk_bundle_block("B", p.clone(), 3, 1.0, true).unwrap();
    let v = boundary_form_check(&q, p.collar_width(), 1e-9, 1e-6).unwrap();
    assert_eq!(v.mode, BoundaryMode::ProductForm);
    assert!(v.passed && v.product_defect <= 1e-9, "{v:?}");
    let deep = boundary_form_check(&q, p.t_max() - 0.5 * p.blend_start(), 1e-9, 1e-6).unwrap();
    assert!(!deep.product_passed && !deep.passed);
}

#[test]
fn hemisphere_block_is_smooth_only_at_jet_level() {
    let p = make_profile(ProfileKind::Hemisphere, 1.0, 5).unwrap();
    let q = disk_bundle_block("H", p.clone(), 2, 1.0, true).unwrap();
    let v = boundary_form_check(&q, 0.05 * p.t_max(), 1e-9, 1e-6).unwrap();
    assert_eq!(v.mode, BoundaryMode::JetLevel);
    assert!(!v.product_passed);
    assert!(v.jet_passed && v.passed);
    assert!(v.odd_jets.iter().all(|(k, d)| k % 2 == 1 && *d <= 1e-6));
    assert_eq!(v.odd_jets.len(), 3);
    assert!(v.second_jet.abs() > 0.1);
}

#[test]
fn boundary_check_needs_a_disk() {
    let q = quotient(product("S3", vec![Factor::round(3, 1.0)]), IsometricAction::trivial()).unwrap();
    assert!(matches!(boundary_form_check(&q, 0.1, 1e-9, 1e-6), Err(BuildError::NoDiskFactor)));
}

// ---- rotation loops ----

/// Class of a loop in SO(3) by following a continuous unit-quaternion lift
/// around the circle: closed lift means null-homotopic.
fn lifted_class(l: &RotationLoop) -> u8 {
    let quat = |m: &DMatrix<f64>| -> [f64; 4] {
        // Shepperd's method on the largest diagonal combination
        let t = [
            1.0 + m[(0, 0)] + m[(1, 1)] + m[(2, 2)],
            1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)],
            1.0 - m[(0, 0)] + m[(1, 1)] - m[(2, 2)],
            1.0 - m[(0, 0)] - m[(1, 1)] + m[(2, 2)],
        ];
        let i = (0..4).max_by(|a, b| t[*a].total_cmp(&t[*b])).unwrap();
        let s = 0.5 / t[i].sqrt();
        match i {
            0 => [0.25 / s, (m[(2, 1)] - m[(1, 2)]) * s, (m[(0, 2)] - m[(2, 0)]) * s, (m[(1, 0)] - m[(0, 1)]) * s],
            1 => [(m[(2, 1)] - m[(1, 2)]) * s, 0.25 / s, (m[(0, 1)] + m[(1, 0)]) * s, (m[(0, 2)] + m[(2, 0)]) * s],
            2 => [(m[(0, 2)] - m[(2, 0)]) * s, (m[(0, 1)] + m[(1, 0)]) * s, 0.25 / s, (m[(1, 2)] + m[(2, 1)]) * s],
            _ => [(m[(1, 0)] - m[(0, 1)]) * s, (m[(0, 2)] + m[(2, 0)]) * s, (m[(1, 2)] + m[(2, 1)]) * s, 0.25 / s],
        }
    };
    let dot = |a: &[f64; 4], b: &[f64; 4]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let steps = 4000;
    let start = quat(&l.matrix(0.0));
    let mut prev = start;
    for i in 1..=steps {
        let mut q = quat(&l.matrix(2.0 * PI * i as f64 / steps as f64));
        if dot(&q, &prev) < 0.0 {
            q.iter_mut().for_each(|x| *x = -*x);
        }
        prev = q;
    }
    if dot(&prev, &start) > 0.0 {
        0
    } else {
        1
    }
}

#[test]
fn loop_class_examples() {
    assert_eq!(loop_class(&RotationLoop::identity(3)), 0);
    let one = RotationLoop::single(3, (0, 1), 1).unwrap();
    let two = RotationLoop::single(3, (0, 1), 2).unwrap();
    assert_eq!((loop_class(&one), lifted_class(&one)), (1, 1));
    assert_eq!((loop_class(&two), lifted_class(&two)), (0, 0));
    assert!(RotationLoop::single(3, (1, 3), 1).is_err());
}

fn arb_loop() -> impl Strategy<Value = RotationLoop> {
    let term = (prop::sample::select(vec![(0usize, 1usize), (0, 2), (1, 2)]), -3i64..=3)
        .prop_map(|(plane, multiple)| LoopTerm { plane, multiple });
    prop::collection::vec(term, 0..4).prop_map(|t| RotationLoop::new(3, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn loop_class_is_additive_and_matches_the_lift(a in arb_loop(), b in arb_loop()) {
        let ab = a.concat(&b).unwrap();
        prop_assert_eq!(loop_class(&ab), (loop_class(&a) + loop_class(&b)) % 2);
        prop_assert_eq!(loop_class(&ab), lifted_class(&ab));
        prop_assert!(ab.orthogonality_defect(64) < 1e-12);
    }
}

// ---- gluing ----

fn torpedo_blocks(sphere_dim: usize, twisted: bool) -> (nnq::builders::QuotientMetric, nnq::builders::QuotientMetric, f64) {
    let p = make_profile(ProfileKind::CollarTorpedo, 1.0, 5).unwrap();
    let a = disk_bundle_block("A", p.clone(), sphere_dim, 1.0, twisted).unwrap();
    let b = disk_bundle_block("B", p.clone(), sphere_dim, 1.0, twisted).unwrap();
    (a, b, p.collar_width())
}

#[test]
fn orthogonal_gluings_are_boundary_isometries() {
    let (a, b, c) = torpedo_blocks(3, true);
    for l in [RotationLoop::identity(4), RotationLoop::single(4, (0, 1), 1).unwrap(), RotationLoop::single(4, (0, 1), 2).unwrap()] {
        let gs = GluedSpace::new(a.clone(), b.clone(), GluingMap::Loop(l), c);
        let v = gluing_isometry_check(&gs, 300, 1, 1e-10).unwrap();
        assert!(v.passed, "{v:?}");
        assert!(v.fiber_defect < 1e-10 && v.deck_defect < 1e-10);
    }
}

#[test]
fn non_orthogonal_gluing_fails() {
    let (a, b, c) = torpedo_blocks(3, true);
    let family = Arc::new(|psi: f64| DMatrix::identity(4, 4) * (1.0 + psi / 10.0));
    let gs = GluedSpace::new(a, b, GluingMap::Linear { name: "scale".into(), family }, c);
    let v = gluing_isometry_check(&gs, 300, 1, 1e-10).unwrap();
    assert!(!v.passed && v.fiber_defect > 1e-2, "{v:?}");
}

#[test]
fn gluing_requires_matching_boundaries() {
    let p1 = make_profile(ProfileKind::CollarTorpedo, 1.0, 5).unwrap();
    let p2 = make_profile(ProfileKind::CollarTorpedo, 2.0, 5).unwrap();
    let a = disk_bundle_block("A", p1, 2, 1.0, false).unwrap();
    let b = disk_bundle_block("B", p2, 2, 1.0, false).unwrap();
    let gs = GluedSpace::new(a, b, GluingMap::Loop(RotationLoop::identity(3)), 0.1);
    assert!(matches!(gluing_isometry_check(&gs, 10, 1, 1e-10), Err(BuildError::BoundaryMismatch(_))));
    assert!(matches!(glued_metric(&gs), Err(BuildError::JetMismatch { order: 0, .. })));
}

#[test]
fn twisted_sphere_bundle_over_s2_is_nonnegatively_curved() {
    let (a, b, c) = torpedo_blocks(2, false);
    let gs = GluedSpace::new(a, b, GluingMap::Loop(RotationLoop::single(3, (0, 1), 1).unwrap()), c);
    assert!(gluing_isometry_check(&gs, 300, 1, 1e-10).unwrap().passed);
    let g = glued_metric(&gs).unwrap();
    assert!(g.jets.iter().all(|(_, d)| *d <= 1e-6));
    let rep = curvature_scan(g.metric(), 2000, 5, 3, 1e-7).unwrap();
    assert!(rep.min_k >= -1e-7, "{rep:?}");
}

#[test]
fn doubled_hemisphere_is_the_round_sphere() {
    let p = make_profile(ProfileKind::Hemisphere, 1.0, 5).unwrap();
    let disk = |id: &str| quotient(product(id, vec![Factor::WarpedDisk(p.clone())]), IsometricAction::trivial()).unwrap();
    let gs = GluedSpace::new(disk("A"), disk("B"), GluingMap::Loop(RotationLoop::identity(1)), 0.1);
    let g = glued_metric(&gs).unwrap();
    let rep = curvature_scan(g.metric(), 500, 2, 4, 1e-7).unwrap();
    assert!((rep.min_k - 1.0).abs() < 1e-8 && (rep.max_k - 1.0).abs() < 1e-8, "{rep:?}");
    assert_relative_eq!(gs.volume().unwrap(), 4.0 * PI, epsilon = 1e-9);
}

// ---- volumes ----

#[test]
fn closed_form_volumes() {
    assert_relative_eq!(Factor::round(3, 1.0).volume().unwrap(), 2.0 * PI * PI, epsilon = 1e-12);
    let h = make_profile(ProfileKind::Hemisphere, 1.0, 5).unwrap();
    assert_relative_eq!(Factor::WarpedDisk(h).volume().unwrap(), 2.0 * PI, epsilon = 1e-9);
    assert_relative_eq!(Factor::round(2, 2.0).volume().unwrap(), 16.0 * PI, epsilon = 1e-12);
}

#[test]
fn closed_form_volumes_agree_with_monte_carlo() {
    let p = make_profile(ProfileKind::CollarTorpedo, 1.0, 5).unwrap();
    let cases = vec![
        product("S3", vec![Factor::round(3, 1.0)]),
        product("DxS2", vec![Factor::WarpedDisk(p), Factor::round(2, 1.0)]),
        product("S2xS2", vec![Factor::round(2, 1.5), Factor::round(2, 1.0)]),
        product("berger", vec![Factor::Berger { n: 3, r: 1.0, eps: 0.3 }]),
    ];
    for m in cases {
        let exact = m.volume().unwrap();
        let mc = monte_carlo_volume(m.metric(), 200_000, 7);
        assert!((mc - exact).abs() <= 0.01 * exact, "{}: {mc} vs {exact}", m.id());
    }
}
