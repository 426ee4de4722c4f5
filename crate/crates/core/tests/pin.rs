mod common;

use std::collections::BTreeMap;
use nnq::pin::{
    bordism_group, bounding_witness, brown_invariant, class_of, distinguish, ledger_add, pin_table_csv, pin_verdicts,
    sw_number_top, total_sw_rp, BordismClass, BordismGroup, CharacteristicTag, DistinguishVerdict, Element, PinError,
    PinKind, Provenance, QuadraticEnhancement, Symbolic, PIN_TABLE_HEADER,
};
use proptest::prelude::*;

use common::{block_sum, brown_oracle, q_oracle};

/// `C(n, k) mod 2` by Lucas: odd iff the bits of `k` are a subset of those of `n`.
fn binom_mod2(n: usize, k: usize) -> u8 {
    (k & n == k) as u8
}

#[test]
fn total_class_examples() {
    assert_eq!(total_sw_rp(2).unwrap().to_string(), "1 + a + a^2");
    assert_eq!(total_sw_rp(3).unwrap().to_string(), "1");
    assert_eq!(total_sw_rp(1).unwrap().to_string(), "1");
    assert!(total_sw_rp(0).is_err());
}

#[test]
fn total_class_matches_binomials() {
    for n in 1..=40 {
        let w = total_sw_rp(n).unwrap();
        for k in 0..=n {
            assert_eq!(w.coeff(k), binom_mod2(n + 1, k), "w_{k}(RP^{n})");
        }
    }
}

#[test]
fn top_numbers() {
    assert_eq!(sw_number_top(2).unwrap(), 1);
    assert_eq!(sw_number_top(4).unwrap(), 1);
    assert_eq!(sw_number_top(3).unwrap(), 0);
    for k in 1..=16 {
        assert_eq!(sw_number_top(2 * k).unwrap(), 1, "RP^{} bounds?", 2 * k);
    }
}

#[test]
fn pin_pattern_has_period_four() {
    for n in 2..=32 {
        let v = pin_verdicts(n).unwrap();
        let expected = match n % 4 {
            0 => (false, true, false),
            1 => (false, false, false),
            2 => (false, false, true),
            _ => (true, true, true),
        };
        assert_eq!((v.spin, v.pin_plus, v.pin_minus), expected, "RP^{n}");
        // obstruction formulas from the raw coefficients
        let (w1, w2) = (binom_mod2(n + 1, 1), binom_mod2(n + 1, 2));
        assert_eq!(v.pin_plus, w2 == 0);
        assert_eq!(v.pin_minus, (w2 + w1) % 2 == 0);
        assert_eq!(v.spin, w1 == 0 && w2 == 0);
        let any = v.pin_plus || v.pin_minus;
        assert_eq!(v.structure_count, if any { Some(2) } else { None });
    }
}

#[test]
fn named_pin_examples() {
    let v4 = pin_verdicts(4).unwrap();
    assert!(v4.pin_plus && !v4.pin_minus && !v4.spin && v4.structure_count == Some(2));
    let v5 = pin_verdicts(5).unwrap();
    assert!(!v5.pin_plus && !v5.pin_minus);
    let v7 = pin_verdicts(7).unwrap();
    assert!(v7.pin_plus && v7.pin_minus && v7.spin);
}

#[test]
fn pin_table_layout() {
    let csv = pin_table_csv(32).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], PIN_TABLE_HEADER);
    assert_eq!(lines.len(), 32);
    assert!(lines[1].starts_with("2,"));
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 9));
}

// ---- Brown invariant ----

/// Random symmetric form of rank 1..=4 with parity-compatible enhancement;
/// degenerate forms are filtered by the constructor.
fn arb_enhancement() -> impl Strategy<Value = (Vec<Vec<u8>>, Vec<u8>)> {
    (1usize..=4)
        .prop_flat_map(|r| (Just(r), prop::collection::vec(0u8..2, r * r), prop::collection::vec(0u8..2, r)))
        .prop_map(|(r, bits, lift)| {
            let mut form = vec![vec![0u8; r]; r];
            for i in 0..r {
                for j in i..r {
                    form[i][j] = bits[i * r + j];
                    form[j][i] = bits[i * r + j];
                }
            }
            let qb: Vec<u8> = (0..r).map(|i| form[i][i] + 2 * lift[i]).collect();
            (form, qb)
        })
        .prop_filter("nondegenerate", |(f, q)| QuadraticEnhancement::new(f.clone(), q.clone()).is_ok())
}

#[test]
fn brown_examples() {
    assert_eq!(brown_invariant(&QuadraticEnhancement::diagonal(&[1]).unwrap()).unwrap(), 1);
    assert_eq!(brown_invariant(&QuadraticEnhancement::diagonal(&[3]).unwrap()).unwrap(), 7);
    assert_eq!(brown_invariant(&QuadraticEnhancement::hyperbolic(0, 0).unwrap()).unwrap(), 0);
    // the Arf-invariant-one torus
    assert_eq!(brown_invariant(&QuadraticEnhancement::hyperbolic(2, 2).unwrap()).unwrap(), 4);
    let two = QuadraticEnhancement::diagonal(&[1, 1]).unwrap();
    assert_eq!(brown_invariant(&two).unwrap(), 2);
}

#[test]
fn malformed_enhancements_are_rejected() {
    // q(b) must reduce to b·b mod 2
    assert!(matches!(QuadraticEnhancement::diagonal(&[2]), Err(PinError::InvalidEnhancement(_))));
    assert!(matches!(QuadraticEnhancement::hyperbolic(1, 0), Err(PinError::InvalidEnhancement(_))));
    // degenerate form
    let degenerate = vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
    assert!(QuadraticEnhancement::new(degenerate, vec![0, 0, 0]).is_err());
    assert!(QuadraticEnhancement::new(vec![vec![1, 1], vec![0, 1]], vec![1, 1]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn brown_invariant_agrees_with_the_gauss_sum_oracle(e in arb_enhancement()) {
        let qe = QuadraticEnhancement::new(e.0.clone(), e.1.clone()).unwrap();
        prop_assert!(qe.extension_consistent());
        for x in 0..(1u64 << qe.rank()) {
            prop_assert_eq!(qe.q(x), q_oracle(&e.0, &e.1, x));
        }
        let (modulus, beta) = brown_oracle(&e.0, &e.1);
        prop_assert!((modulus - 1.0).abs() < 1e-9);
        prop_assert_eq!(brown_invariant(&qe).unwrap(), beta);
    }

    #[test]
    fn brown_invariant_is_additive(a in arb_enhancement(), b in arb_enhancement()) {
        let ea = QuadraticEnhancement::new(a.0.clone(), a.1.clone()).unwrap();
        let eb = QuadraticEnhancement::new(b.0.clone(), b.1.clone()).unwrap();
        let sum = block_sum(&a, &b);
        let (modulus, beta_sum) = brown_oracle(&sum.0, &sum.1);
        prop_assert!((modulus - 1.0).abs() < 1e-9);
        let lhs = brown_invariant(&ea.direct_sum(&eb)).unwrap();
        prop_assert_eq!(lhs, beta_sum);
        prop_assert_eq!(lhs, (brown_invariant(&ea).unwrap() + brown_invariant(&eb).unwrap()) % 8);
    }
}

// ---- ledger ----

fn z8(x: u32) -> BordismClass {
    BordismClass {
        dim: 2,
        structure: PinKind::Minus,
        group: bordism_group(2, PinKind::Minus),
        element: Element::Residue(x % 8),
        witness: None,
    }
}

fn formal(coeffs: &[(usize, i64)]) -> BordismClass {
    let m: BTreeMap<String, i64> =
        coeffs.iter().filter(|(_, c)| *c != 0).map(|(g, c)| (format!("[M{g}]"), *c)).collect();
    BordismClass {
        dim: 6,
        structure: PinKind::Minus,
        group: BordismGroup::Unknown,
        element: Element::Formal(m),
        witness: None,
    }
}

fn arb_formal() -> impl Strategy<Value = BordismClass> {
    prop::collection::vec((0usize..3, -3i64..=3), 0..4).prop_map(|v| {
        let mut acc = formal(&[]);
        for (g, c) in v {
            acc = ledger_add(&acc, &formal(&[(g, c)])).unwrap();
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cyclic_ledger_is_an_abelian_group(x in 0u32..8, y in 0u32..8, z in 0u32..8) {
        let (a, b, c) = (z8(x), z8(y), z8(z));
        let ab_c = ledger_add(&ledger_add(&a, &b).unwrap(), &c).unwrap();
        let a_bc = ledger_add(&a, &ledger_add(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(&ab_c, &a_bc);
        prop_assert_eq!(ledger_add(&a, &b).unwrap(), ledger_add(&b, &a).unwrap());
        let zero = bounding_witness(&Symbolic::Torus { q: [0, 0] }).unwrap();
        prop_assert!(zero.asserted_zero());
        prop_assert_eq!(ledger_add(&zero, &a).unwrap().element, a.element.clone());
        prop_assert_eq!(ab_c.element, Element::Residue((x + y + z) % 8));
    }

    #[test]
    fn formal_ledger_is_an_abelian_group(a in arb_formal(), b in arb_formal(), c in arb_formal()) {
        let ab_c = ledger_add(&ledger_add(&a, &b).unwrap(), &c).unwrap();
        let a_bc = ledger_add(&a, &ledger_add(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(ledger_add(&a, &b).unwrap(), ledger_add(&b, &a).unwrap());
        let zero = BordismClass::zero(6, PinKind::Minus, "test nullbordism");
        prop_assert_eq!(ledger_add(&zero, &a).unwrap().element, a.element);
    }
}

#[test]
fn ledger_rejects_mismatched_structures() {
    let plus = bounding_witness(&Symbolic::SphereBundle { base: 2 }).unwrap();
    assert!(matches!(ledger_add(&plus, &z8(1)), Err(PinError::StructureMismatch { .. })));
}

#[test]
fn circle_sum_of_projective_planes() {
    let rp2 = Symbolic::projective(2);
    let two = class_of(&Symbolic::circle_sum(rp2.clone(), rp2.clone())).unwrap();
    // the disjoint union is the rank-2 diagonal form with q = (1, 1)
    let (_, beta) = brown_oracle(&[vec![1, 0], vec![0, 1]], &[1, 1]);
    assert_eq!(two.element, Element::Residue(beta as u32));
    assert_eq!(two.is_zero(), Some(false));
    assert_eq!(two.group.provenance(), Provenance::BrownOracle);
}

#[test]
fn bounding_witnesses() {
    for base in [0, 2, 4, 6] {
        let c = bounding_witness(&Symbolic::SphereBundle { base }).unwrap();
        assert!(c.asserted_zero());
        assert_eq!(c.dim, base + 2);
        assert_eq!(c.witness.unwrap(), format!("[0,1]×D²×̃RP^{base}"));
    }
    assert_eq!(bounding_witness(&Symbolic::Torus { q: [0, 0] }).unwrap().witness.as_deref(), Some("solid torus"));
    assert!(matches!(bounding_witness(&Symbolic::projective(2)), Err(PinError::NotARecognizedDouble(_))));
    assert!(matches!(bounding_witness(&Symbolic::Torus { q: [2, 2] }), Err(PinError::NotARecognizedDouble(_))));
}

fn tag(name: &str, s: Symbolic) -> CharacteristicTag {
    CharacteristicTag { name: name.into(), characteristic: Some(s) }
}

#[test]
fn distinguish_in_dimension_two_is_certified() {
    let rp2 = Symbolic::projective(2);
    let a = tag("P4.0", Symbolic::SphereBundle { base: 0 });
    let b = tag("P4.2", Symbolic::circle_sum(rp2.clone(), rp2));
    let r = distinguish(&a, &b).unwrap();
    assert_eq!(r.verdict, DistinguishVerdict::Distinct);
    assert_eq!(r.basis, Provenance::BrownOracle);
    assert_eq!((r.pair[0].rendered.as_str(), r.pair[1].rendered.as_str()), ("0", "2 mod 8"));
    assert!(r.literature_constants.is_empty());
    assert_eq!(distinguish(&a, &a).unwrap().verdict, DistinguishVerdict::NoConclusion);
}

#[test]
fn distinguish_in_dimension_four_is_flagged() {
    let rp4 = Symbolic::projective(4);
    let r = distinguish(
        &tag("X5.0", Symbolic::SphereBundle { base: 2 }),
        &tag("X5.2", Symbolic::circle_sum(rp4.clone(), rp4)),
    )
    .unwrap();
    assert_eq!(r.basis, Provenance::LiteratureTable);
    assert!(!r.literature_constants.is_empty());
    assert!(r.literature_constants.iter().all(|c| c.provenance == Provenance::LiteratureTable));
}

#[test]
fn distinguish_without_a_table_is_undetermined() {
    let rp6 = Symbolic::projective(6);
    let r = distinguish(
        &tag("X7.0", Symbolic::SphereBundle { base: 4 }),
        &tag("X7.2", Symbolic::circle_sum(rp6.clone(), rp6)),
    )
    .unwrap();
    assert_eq!(r.verdict, DistinguishVerdict::Undetermined);
    assert_eq!(r.pair[1].rendered, "2*[RP^6]");
}

#[test]
fn distinguish_needs_characteristic_tags() {
    let bare = CharacteristicTag { name: "M".into(), characteristic: None };
    let other = tag("P4.0", Symbolic::SphereBundle { base: 0 });
    assert!(matches!(distinguish(&bare, &other), Err(PinError::MissingCharacteristicTag(_))));
}
