use std::collections::BTreeMap;

use super::endring::end_ring_commutativity_check;
use super::flat::{flatness_witness_search, verify_witness, FlatOutcome};
use super::matlis::{first_matlis_symbolic, second_matlis_naturality, second_matlis_roundtrip, MatlisOrder};
use super::projinj::proj_inj_special_check;
use super::*;
use crate::exact::{Poly, QMat, Rat};
use crate::functor::value::jordan_block;
use crate::functor::ModValue;
use crate::quiver::rep::hom_basis;
use crate::quiver::{are_isomorphic, standard_reps, Morphism, RepMap, StdRep};

fn std(k: StdRep) -> KronRep {
    standard_reps(&k).unwrap()
}

fn reg(p: Point, n: usize) -> KronRep {
    std(StdRep::Regular(p, n))
}

fn flags_of(inst: &EpiInstance, m: &KronRep) -> (ClassFlags, ClassFlags) {
    let r = m.to_rep();
    (classify(inst, &r, Path::Definitional).unwrap(), classify(inst, &r, Path::Structural).unwrap())
}

fn loop_mod(divs: &[Poly]) -> Rep {
    Rep::loop_module(FPModPID::from_parts(0, divs).action_matrix().unwrap())
}

/// A fixed invertible base change per vertex.
fn scramble(m: &KronRep) -> KronRep {
    let p = |d: usize| QMat::from_fn(d, d, |i, j| Rat::int(if i == j { 1 } else if j > i { (i + 2 * j) as i64 % 3 } else { 0 }));
    let q = |d: usize| QMat::from_fn(d, d, |i, j| Rat::int(if i == j { 2 } else if i > j { 1 } else { 0 }));
    m.conjugate(&RepMap::new(p(m.d1), q(m.d2))).unwrap()
}

#[test]
fn regular_at_infinity_is_a_comodule_and_contramodule() {
    let inst = EpiInstance::kron(&[]);
    for n in 1..=3 {
        let (d, s) = flags_of(&inst, &reg(Point::Infinity, n));
        assert!(d.comodule && d.contramodule && d.torsion && d.reduced && d.special && d.cospecial, "{d}");
        assert!(!d.divisible && !d.torsionfree);
        assert!(d.disagreements(&s).is_empty(), "{d} vs {s}");
    }
}

#[test]
fn simple_projective_is_torsionfree_reduced_cospecial() {
    let inst = EpiInstance::kron(&[]);
    let (d, s) = flags_of(&inst, &std(StdRep::SimpleProjective));
    assert!(d.torsionfree && d.reduced && d.cospecial && !d.torsion, "{d}");
    assert!(d.disagreements(&s).is_empty());
}

#[test]
fn regular_off_the_points_is_a_u_module() {
    let inst = EpiInstance::kron(&[]);
    let (d, s) = flags_of(&inst, &reg(Point::int(0), 1));
    assert!(!d.torsion && d.torsionfree && d.divisible && !d.reduced, "{d}");
    assert!(d.disagreements(&s).is_empty());
}

#[test]
fn cpid_square_zero_module_is_comodule_and_contramodule() {
    let inst = EpiInstance::cpid(&[0]);
    let m = loop_mod(&[Poly::x().pow(2)]);
    let d = classify(&inst, &m, Path::Definitional).unwrap();
    let s = classify(&inst, &m, Path::Structural).unwrap();
    assert!(d.comodule && d.contramodule && d.special && d.cospecial, "{d}");
    assert!(d.disagreements(&s).is_empty());
    // a summand off the point is a U-module
    let mixed = loop_mod(&[Poly::x().pow(2), Poly::linear(&Rat::int(3))]);
    let d = classify(&inst, &mixed, Path::Definitional).unwrap();
    let s = classify(&inst, &mixed, Path::Structural).unwrap();
    assert!(!d.torsion && !d.torsionfree && !d.comodule && d.special && d.cospecial, "{d}");
    assert!(d.disagreements(&s).is_empty());
}

#[test]
fn paths_agree_on_named_indecomposables_and_sums() {
    let inst = EpiInstance::kron(&[2]);
    let mut cases: Vec<KronRep> = Vec::new();
    for n in 0..=2 {
        cases.push(std(StdRep::Preprojective(n)));
        cases.push(std(StdRep::Preinjective(n)));
    }
    for p in [Point::Infinity, Point::int(2), Point::int(0), Point::int(5)] {
        cases.push(reg(p.clone(), 1));
        cases.push(reg(p, 2));
    }
    cases.push(reg(Point::int(2), 1).direct_sum(&std(StdRep::Preinjective(1))));
    cases.push(scramble(&reg(Point::Infinity, 2).direct_sum(&reg(Point::int(3), 1))));
    // an irrational regular block: x² = 2
    cases.push(KronRep::new(QMat::identity(2), QMat::from_ints(2, 2, &[0, 2, 1, 0])).unwrap());
    for m in &cases {
        let (d, s) = flags_of(&inst, m);
        assert!(d.disagreements(&s).is_empty(), "{m:?}: {d} vs {s}");
    }
}

#[test]
fn g_is_invertible_on_comodules_away_from_zero() {
    let inst = EpiInstance::kron(&[2, 3]);
    let m = scramble(&reg(Point::Infinity, 2).direct_sum(&reg(Point::int(2), 1)).direct_sum(&reg(Point::int(3), 2)));
    assert!(classify(&inst, &m.to_rep(), Path::Structural).unwrap().comodule);
    assert!(m.g.is_invertible());
}

#[test]
fn decomposition_groups_blocks_by_point() {
    let inst = EpiInstance::kron(&[2]);
    let m = scramble(&reg(Point::Infinity, 1).direct_sum(&reg(Point::int(2), 1)));
    let b = lambda_decompose(&inst, &m, BlockSide::Comodule).unwrap();
    assert!(b.reassembles);
    assert_eq!(b.dims(), BTreeMap::from([(Point::int(2), (1, 1)), (Point::Infinity, (1, 1))]));
    assert!(b.components.values().all(|c| c.local));
    assert_eq!(b.components.keys().last(), Some(&Point::Infinity));
    let json = serde_json::to_value(&b).unwrap();
    assert!(json["components"].get("inf").is_some() && json["components"].get("2").is_some());

    let single = lambda_decompose(&inst, &reg(Point::Infinity, 2), BlockSide::Contramodule).unwrap();
    assert_eq!(single.dims()[&Point::Infinity], (2, 2));
    assert_eq!(single.dims()[&Point::int(2)], (0, 0));

    let zero = lambda_decompose(&inst, &KronRep::zero(), BlockSide::Comodule).unwrap();
    assert!(zero.reassembles && zero.components.values().all(|c| c.module.is_zero()));

    let not = lambda_decompose(&inst, &std(StdRep::SimpleProjective), BlockSide::Comodule);
    assert!(matches!(not, Err(FunctorError::Precondition(_))));
}

#[test]
fn decomposition_with_zero_in_the_points_uses_a_chart() {
    let inst = EpiInstance::kron(&[0, 1]);
    let m = scramble(&reg(Point::int(0), 2).direct_sum(&reg(Point::int(1), 1)).direct_sum(&reg(Point::Infinity, 1)));
    let b = lambda_decompose(&inst, &m, BlockSide::Comodule).unwrap();
    assert!(b.reassembles);
    assert!(are_isomorphic(&b.components[&Point::int(0)].module, &reg(Point::int(0), 2)));
    assert!(are_isomorphic(&b.components[&Point::int(1)].module, &reg(Point::int(1), 1)));
}

#[test]
fn second_equivalence_round_trips() {
    let inst = EpiInstance::cpid(&[0]);
    let m = loop_mod(&[Poly::x().pow(3)]);
    for order in [MatlisOrder::DeltaFirst, MatlisOrder::GammaFirst] {
        let rt = second_matlis_roundtrip(&inst, &m, order).unwrap();
        assert!(rt.ok && rt.natural, "{order:?}");
        assert_eq!(rt.first.to_string(), ModValue::fin(&m).to_string());
    }
    let kinst = EpiInstance::kron(&[]);
    let r = reg(Point::Infinity, 2).to_rep();
    let rt = second_matlis_roundtrip(&kinst, &r, MatlisOrder::DeltaFirst).unwrap();
    assert!(rt.ok);
    let z = Rep::zero(crate::quiver::Quiver::Kronecker);
    let rt = second_matlis_roundtrip(&kinst, &z, MatlisOrder::DeltaFirst).unwrap();
    assert!(rt.ok && rt.second.is_zero());
    let bad = second_matlis_roundtrip(&kinst, &std(StdRep::SimpleInjective).to_rep(), MatlisOrder::DeltaFirst);
    assert!(matches!(bad, Err(FunctorError::Precondition(_))));
}

#[test]
fn round_trip_isomorphisms_are_natural() {
    let inst = EpiInstance::kron(&[2]);
    let m = reg(Point::Infinity, 2).direct_sum(&reg(Point::int(2), 1)).to_rep();
    let m2 = scramble(&reg(Point::Infinity, 1).direct_sum(&reg(Point::int(2), 2))).to_rep();
    let basis = hom_basis(&m, &m2);
    assert!(!basis.is_empty());
    let phi = basis.iter().enumerate().fold(Morphism::zero(&m, &m2), |acc, (k, b)| acc.add(&b.scale(&Rat::int(k as i64 + 1))));
    for order in [MatlisOrder::DeltaFirst, MatlisOrder::GammaFirst] {
        let n = second_matlis_naturality(&inst, &m, &m2, &phi, order).unwrap();
        assert!(n.holds(), "{order:?}: {n:?}");
    }
    // a map that is not a morphism is refused
    let wrong = Morphism { comps: vec![QMat::identity(3), QMat::zeros(3, 3)] };
    assert!(second_matlis_naturality(&inst, &m, &m2, &wrong, MatlisOrder::DeltaFirst).is_err());
}

#[test]
fn first_equivalence_on_symbolic_shapes() {
    let inst = EpiInstance::cpid(&[0]);
    let p = ModValue::prufer(BTreeMap::from([(Rat::zero(), 1)]));
    let r = first_matlis_symbolic(&inst, &p, 6).unwrap();
    assert!(r.ok, "{r:?}");
    assert_eq!(r.image, ModValue::adic(BTreeMap::from([(Rat::zero(), 1)]), None));
    let a = ModValue::adic(BTreeMap::from([(Rat::zero(), 2)]), None);
    let r = first_matlis_symbolic(&inst, &a, 6).unwrap();
    assert!(r.ok, "{r:?}");
    assert_eq!(r.image, ModValue::prufer(BTreeMap::from([(Rat::zero(), 2)])));
    let empty = first_matlis_symbolic(&inst, &ModValue::prufer(BTreeMap::new()), 6).unwrap();
    assert!(empty.ok && empty.image.is_zero());
    let off = ModValue::prufer(BTreeMap::from([(Rat::int(4), 1)]));
    assert!(first_matlis_symbolic(&inst, &off, 4).is_err());
}

#[test]
fn flatness_dichotomy() {
    let kinst = EpiInstance::kron(&[]);
    let m = KronRep::new(jordan_block(&Rat::zero(), 2), QMat::identity(2)).unwrap().to_rep();
    let w = std(StdRep::SimpleProjective).to_rep();
    let emb = Morphism { comps: vec![QMat::zeros(2, 0), QMat::from_ints(2, 1, &[1, 0])] };
    assert!(verify_witness(&kinst, &m, &w, &emb).unwrap().is_some());
    match flatness_witness_search(&kinst, 3, &[]).unwrap() {
        FlatOutcome::Witness { witness, .. } => assert!(!witness.tensor.is_zero()),
        other => panic!("{other:?}"),
    }
    assert!(matches!(flatness_witness_search(&kinst, 0, &[]).unwrap(), FlatOutcome::NotFound { .. }));
    let cinst = EpiInstance::cpid(&[0]);
    let corpus = vec![
        FPModPID::from_parts(0, &[Poly::x().pow(2)]),
        FPModPID::from_parts(1, &[Poly::linear(&Rat::int(1))]),
    ];
    assert!(matches!(
        flatness_witness_search(&cinst, 3, &corpus).unwrap(),
        FlatOutcome::FlatCertified { corpus_size: 2, .. }
    ));
}

#[test]
fn endomorphism_towers_commute() {
    for ys in [vec![0], vec![0, 1]] {
        let v = end_ring_commutativity_check(&EpiInstance::cpid(&ys), 5, 6, 7).unwrap();
        assert!(v.ok(), "{v:?}");
        assert!(v.pairs_checked > 0);
    }
}

#[test]
fn projectives_and_injectives_are_special_and_cospecial() {
    let kinst = EpiInstance::kron(&[]);
    let samples = vec![
        std(StdRep::SimpleProjective).to_rep(),
        std(StdRep::Preinjective(1)).to_rep(),
        reg(Point::int(1), 1).direct_sum(&reg(Point::Infinity, 1)).to_rep(),
    ];
    let v = proj_inj_special_check(&kinst, &samples).unwrap();
    assert!(v.ok, "{v:?}");
    assert_eq!(v.entries.len(), 4);
    let v = proj_inj_special_check(&EpiInstance::cpid(&[0]), &[loop_mod(&[Poly::x(), Poly::linear(&Rat::int(2))])]).unwrap();
    assert!(v.ok, "{v:?}");
}
