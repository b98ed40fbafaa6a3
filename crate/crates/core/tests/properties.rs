use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use chevalley_core::chevalley::ChevalleyBasis;
use chevalley_core::cli::{CommandRequest, OutputFormat, Payload, Subcommand};
use chevalley_core::decomposition::{decompose, local_decompose, tavgen_decompose, Algorithm, Bounds};
use chevalley_core::group::{ElementaryWord, GroupElement, LetterJson, RepKind, Representation};
use chevalley_core::ring::{Code, IdealHandle, RingSpec};
use chevalley_core::roots::RootSystem;

const RINGS: [&str; 9] = ["Z/4", "Z/6", "Z/9", "Z/12", "GF(2)", "GF(4)", "GF(9)", "GF(2)[x]/(x^2)", "Z/2 x Z/3"];
const LOCAL_RINGS: [&str; 5] = ["Z/4", "Z/8", "Z/9", "GF(3)", "GF(4)"];
const TYPES: [&str; 8] = ["A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"];

fn ring(label: &str) -> RingSpec {
    RingSpec::parse(label).unwrap()
}

fn rep_for(label: &str) -> Arc<Representation> {
    let kind = if label == "G2" { RepKind::Adjoint } else { RepKind::Defining };
    Representation::for_type(label, kind).unwrap()
}

fn word_of(rs: &RootSystem, ring: &RingSpec, raw: &[(usize, u32)]) -> ElementaryWord {
    let mut w = ElementaryWord::new();
    for &(r, t) in raw {
        w.push(r % rs.len(), t % ring.size());
    }
    w
}

fn raw_word(len: usize) -> impl Strategy<Value = Vec<(usize, u32)>> {
    prop::collection::vec((0usize..1000, 0u32..1000), 0..len)
}

/// Proper principal ideals not contained in a larger proper principal ideal.
fn maximal_principal_ideals(r: &RingSpec) -> usize {
    let ideals: BTreeSet<Vec<Code>> = r
        .elements()
        .map(|a| IdealHandle::from_generators(r, &[a]).elements().to_vec())
        .filter(|e| e.len() < r.size() as usize)
        .collect();
    let contains = |big: &Vec<Code>, small: &Vec<Code>| small.iter().all(|x| big.binary_search(x).is_ok());
    ideals
        .iter()
        .filter(|i| !ideals.iter().any(|j| j.len() > i.len() && contains(j, i)))
        .count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(idx in 0..RINGS.len(), a in 0u32..10_000, b in 0u32..10_000, c in 0u32..10_000) {
        let r = ring(RINGS[idx]);
        let (a, b, c) = (a % r.size(), b % r.size(), c % r.size());
        prop_assert_eq!(r.add(a, r.add(b, c)), r.add(r.add(a, b), c));
        prop_assert_eq!(r.mul(a, r.mul(b, c)), r.mul(r.mul(a, b), c));
        prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
        prop_assert_eq!(r.mul(a, b), r.mul(b, a));
        prop_assert_eq!(r.add(a, r.neg(a)), r.zero());
        prop_assert_eq!(r.mul(a, r.one()), a);
    }

    #[test]
    fn inverse_iff_unit_ideal(idx in 0..RINGS.len(), a in 0u32..10_000) {
        let r = ring(RINGS[idx]);
        let a = a % r.size();
        let unit_ideal = IdealHandle::from_generators(&r, &[a]).len() == r.size() as usize;
        prop_assert_eq!(r.inv(a).is_some(), unit_ideal);
        if let Some(b) = r.inv(a) {
            prop_assert_eq!(r.mul(a, b), r.one());
        }
    }

    #[test]
    fn quotient_is_surjective_homomorphism(idx in 0..RINGS.len(), g in 0u32..10_000, a in 0u32..10_000, b in 0u32..10_000) {
        let r = ring(RINGS[idx]);
        let (g, a, b) = (g % r.size(), a % r.size(), b % r.size());
        let p = IdealHandle::from_generators(&r, &[g]).quotient();
        prop_assert!(p.is_surjective());
        prop_assert_eq!(p.apply(r.add(a, b)), p.target.add(p.apply(a), p.apply(b)));
        prop_assert_eq!(p.apply(r.mul(a, b)), p.target.mul(p.apply(a), p.apply(b)));
        prop_assert_eq!(p.apply(r.one()), p.target.one());
    }

    #[test]
    fn exp_additivity(t in 0..TYPES.len() - 1, ri in 0..LOCAL_RINGS.len(), root in 0usize..100, s in 0u32..100, u in 0u32..100) {
        let rep = rep_for(TYPES[t]);
        let r = ring(LOCAL_RINGS[ri]);
        let a = root % rep.root_system().len();
        let (s, u) = (s % r.size(), u % r.size());
        let lhs = GroupElement::elementary(&rep, &r, a, s).mul(&GroupElement::elementary(&rep, &r, a, u)).unwrap();
        prop_assert_eq!(lhs, GroupElement::elementary(&rep, &r, a, r.add(s, u)));
    }

    #[test]
    fn words_preserve_invariant_and_invert(t in 0..TYPES.len() - 1, ri in 0..LOCAL_RINGS.len(), raw in raw_word(12)) {
        let rep = rep_for(TYPES[t]);
        let r = ring(LOCAL_RINGS[ri]);
        let w = word_of(rep.root_system(), &r, &raw);
        let g = GroupElement::evaluate(&rep, &r, &w);
        prop_assert!(g.preserves_invariant());
        let h = GroupElement::evaluate(&rep, &r, &w.inverse(&r));
        prop_assert!(g.mul(&h).unwrap().is_identity());
        prop_assert_eq!(g.inv().unwrap(), h);
    }

    #[test]
    fn local_decomposition_is_sound_and_bounded(t in 0..4usize, ri in 0..LOCAL_RINGS.len(), raw in raw_word(30)) {
        let label = ["A2", "B2", "C2", "G2"][t];
        let rep = rep_for(label);
        let r = ring(LOCAL_RINGS[ri]);
        let g = GroupElement::evaluate(&rep, &r, &word_of(rep.root_system(), &r, &raw));
        let report = local_decompose(&g).unwrap();
        prop_assert!(report.verified);
        prop_assert!(report.len() <= Bounds::of(rep.root_system()).n);
        prop_assert_eq!(GroupElement::evaluate(&rep, &r, &report.word), g);
    }

    #[test]
    fn defining_equalities_hold_in_adjoint(t in 0..3usize, ri in 0..LOCAL_RINGS.len(), raw in raw_word(20)) {
        let label = ["A2", "C2", "A3"][t];
        let def = Representation::for_type(label, RepKind::Defining).unwrap();
        let ad = Representation::for_type(label, RepKind::Adjoint).unwrap();
        let r = ring(LOCAL_RINGS[ri]);
        let w = word_of(def.root_system(), &r, &raw);
        let report = local_decompose(&GroupElement::evaluate(&def, &r, &w)).unwrap();
        prop_assert_eq!(GroupElement::evaluate(&ad, &r, &report.word), GroupElement::evaluate(&ad, &r, &w));
    }

    #[test]
    fn product_decomposition_is_bounded(raw in raw_word(20)) {
        let rep = rep_for("A2");
        let r = ring("Z/4 x GF(3)");
        let g = GroupElement::evaluate(&rep, &r, &word_of(rep.root_system(), &r, &raw));
        let report = decompose(&g).unwrap();
        prop_assert!(report.len() <= Bounds::of(rep.root_system()).product);
        prop_assert_eq!(GroupElement::evaluate(&rep, &r, &report.word), g);
    }

    #[test]
    fn tavgen_agrees_with_local_decomposition(t in 0..3usize, ri in 0..LOCAL_RINGS.len(), raw in raw_word(16)) {
        let label = ["A2", "B2", "A3"][t];
        let rep = rep_for(label);
        let r = ring(LOCAL_RINGS[ri]);
        let w = word_of(rep.root_system(), &r, &raw);
        let g = GroupElement::evaluate(&rep, &r, &w);
        let blocks = tavgen_decompose(&rep, &r, &w).unwrap();
        prop_assert_eq!(blocks.blocks.len(), 8);
        prop_assert!(blocks.word().len() <= 4 * rep.root_system().len());
        let from_tavgen = GroupElement::evaluate(&rep, &r, &blocks.word());
        let from_local = GroupElement::evaluate(&rep, &r, &local_decompose(&g).unwrap().word);
        prop_assert_eq!(&from_tavgen, &g);
        prop_assert_eq!(from_local, g);
    }

    #[test]
    fn word_json_round_trip(t in 0..TYPES.len(), ri in 0..RINGS.len(), raw in raw_word(10)) {
        let rs = RootSystem::parse(TYPES[t]).unwrap();
        let r = ring(RINGS[ri]);
        let w = word_of(&rs, &r, &raw);
        let json = serde_json::to_string(&w.to_json(&rs, &r)).unwrap();
        let back: Vec<LetterJson> = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(ElementaryWord::from_json(&back, &rs, &r).unwrap(), w);
    }

    #[test]
    fn command_request_round_trip(sub in 0..9usize, t in 0..TYPES.len(), ri in 0..RINGS.len(), seed in any::<u64>(), json in any::<bool>(), tav in any::<bool>()) {
        let subs = [
            Subcommand::RingDecomposeArtinian, Subcommand::RootsShow, Subcommand::ChevalleyConstants,
            Subcommand::GroupVerifyRelations, Subcommand::GroupDecompose, Subcommand::GroupClosure,
            Subcommand::CongruenceCertify, Subcommand::CongruenceLevels, Subcommand::EbgCheck,
        ];
        let mut req = CommandRequest::new(subs[sub]);
        req.type_label = Some(TYPES[t].to_string());
        req.ring = Some(RINGS[ri].to_string());
        req.seed = seed;
        req.format = if json { OutputFormat::Json } else { OutputFormat::Text };
        req.algorithm = Some(if tav { Algorithm::Tavgen } else { Algorithm::Prop2 });
        req.input = Some(if tav {
            Payload::Word(vec![LetterJson { root: vec![1, -1, 0], t: "1".into() }])
        } else {
            Payload::Matrix(vec![vec!["1".into(), "0".into()], vec!["0".into(), "1".into()]])
        });
        req.subgroup = Some("kernel:(2)".into());
        let text = serde_json::to_string(&req).unwrap();
        prop_assert_eq!(serde_json::from_str::<CommandRequest>(&text).unwrap(), req);
    }
}

#[test]
fn artinian_round_trip_and_local_factors() {
    for label in ["Z/360", "Z/12", "Z/4 x GF(3)", "GF(2)[x]/(x^2+x)", "Z/30", "GF(8)"] {
        let r = ring(label);
        let ad = r.artinian_decompose();
        for a in r.elements() {
            assert_eq!(ad.backward(&ad.forward(a)), a, "{label}");
        }
        assert!(ad.factors.iter().all(|f| f.is_local().0), "{label}");
        assert_eq!(ad.factors.len(), maximal_principal_ideals(&r), "{label}");
    }
}

#[test]
fn reflections_permute_roots() {
    for t in TYPES {
        let rs = RootSystem::parse(t).unwrap();
        for a in rs.roots() {
            let image: BTreeSet<_> = rs.roots().map(|b| rs.reflect(a, b)).collect();
            assert_eq!(image.len(), rs.len(), "{t}");
        }
    }
}

#[test]
fn commutator_roots_need_a_sum() {
    for t in TYPES {
        let rs = RootSystem::parse(t).unwrap();
        for a in rs.roots() {
            for b in rs.roots().filter(|&b| b != rs.neg(a)) {
                let terms = rs.commutator_root_list(a, b).unwrap();
                assert_eq!(terms.is_empty(), rs.sum(a, b).is_none(), "{t}");
            }
        }
    }
}

#[test]
fn weyl_group_is_transitive_on_lengths() {
    for t in TYPES {
        let rs = RootSystem::parse(t).unwrap();
        for a in rs.roots() {
            for b in rs.roots().filter(|&b| rs.norm(b) == rs.norm(a)) {
                assert_eq!(rs.same_length_conjugator(a, b).unwrap().act(&rs, a), b, "{t}");
            }
        }
    }
}

#[test]
fn tavgen_split_partitions_roots() {
    for t in TYPES {
        let rs = RootSystem::parse(t).unwrap();
        for i in 0..rs.rank() {
            let Ok(split) = rs.tavgen_split(i) else { continue };
            let mut all: Vec<_> = [&split.phi0_pos, &split.phi0_neg, &split.phi1_pos, &split.phi1_neg]
                .into_iter()
                .flatten()
                .copied()
                .collect();
            all.sort();
            assert_eq!(all, rs.roots().collect::<Vec<_>>(), "{t}");
            assert_eq!(split.remaining.len(), rs.rank() - 1);
            assert!(rs.is_connected(&split.remaining));
        }
    }
}

#[test]
fn structure_constants_antisymmetric_with_string_length() {
    for t in TYPES {
        let basis = ChevalleyBasis::new(Arc::new(RootSystem::parse(t).unwrap()));
        let rs = basis.root_system();
        for a in rs.roots() {
            for b in rs.roots() {
                if rs.sum(a, b).is_some() {
                    assert_eq!(basis.n(a, b), -basis.n(b, a), "{t}");
                    assert_eq!(basis.n(a, b).abs(), rs.string_below(a, b) + 1, "{t}");
                }
            }
        }
    }
}
