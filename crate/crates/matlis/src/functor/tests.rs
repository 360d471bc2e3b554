use std::collections::BTreeMap;

use super::five::{five_term_check, FiveSide};
use super::*;
use crate::exact::{Poly, Rat};
use crate::instances::EpiInstance;
use crate::quiver::{are_isomorphic, standard_reps, Point, StdRep};

fn xm(a: i64, e: usize) -> Poly {
    Poly::linear(&Rat::int(a)).pow(e)
}

fn pid(free: usize, divs: &[Poly]) -> FPModPID {
    FPModPID::from_parts(free, divs)
}

fn pid_rep(divs: &[Poly]) -> Rep {
    Rep::loop_module(pid(0, divs).action_matrix().unwrap())
}

fn val_pid(p: FPModPID) -> ModValue {
    ModValue::FiniteDim { module: FinMod::Pid(p) }
}

fn kron(k: &StdRep) -> KronRep {
    standard_reps(k).unwrap()
}

fn val_kron(k: &KronRep) -> ModValue {
    ModValue::FiniteDim { module: FinMod::Kron(k.clone()) }
}

fn reg(p: Point, n: usize) -> KronRep {
    kron(&StdRep::Regular(p, n))
}

fn same_pid(v: &ModValue, expect: &FPModPID) -> bool {
    match v {
        ModValue::FiniteDim { module: FinMod::Pid(p) } => p.normalized() == expect.normalized(),
        _ => false,
    }
}

/// Over `Cpid(Y)` with `s = ∏_{y∈Y}(x − y)`, `K_n ≅ ℚ[x]/(sⁿ)` and `U_n ≅ ℚ[x]`, so at level
/// `n`: `Tor₁(K_n, M) = Hom(K_n, M) = ker sⁿ`, `Tor₀ = Ext¹ = M/sⁿM`, and `U_n ⊗ M ≅ M`.
fn s_lattice_dims(ys: &[i64], x: &QMat, n: usize) -> (usize, usize) {
    let d = x.rows();
    let s = ys.iter().fold(QMat::identity(d), |acc, &y| acc.mul(&x.sub(&QMat::scalar(d, &Rat::int(y)))));
    let sn = s.pow(n);
    let r = sn.rank();
    (d - r, d - r)
}

#[test]
fn cpid_level_dimensions_match_the_s_lattice() {
    for ys in [vec![0], vec![0, 1]] {
        let inst = EpiInstance::cpid(&ys);
        let m = pid_rep(&[xm(0, 3), xm(1, 2), xm(2, 1), xm(0, 1)]);
        let t = Tower::new(&inst, &m, 6);
        for n in 1..=5 {
            let (ker, coker) = s_lattice_dims(&ys, &m.maps[0], n);
            let d = |o: Obj| t.obj(o, n).rep.total_dim();
            assert_eq!(d(Obj::Tor1K), ker, "Tor1K level {n}");
            assert_eq!(d(Obj::HomK), ker, "HomK level {n}");
            assert_eq!(d(Obj::Tor0K), coker, "Tor0K level {n}");
            assert_eq!(d(Obj::Ext1K), coker, "Ext1K level {n}");
            assert_eq!(d(Obj::Tor0U), m.total_dim(), "Tor0U level {n}");
            assert_eq!(d(Obj::HomU), m.total_dim(), "HomU level {n}");
            assert_eq!(d(Obj::Tor1U), 0);
            assert_eq!(d(Obj::Ext1U), 0);
        }
    }
}

#[test]
fn cpid_level_actions_are_x() {
    // At each level the x-action of Tor1(K_n, M) is x restricted to ker sⁿ.
    let inst = EpiInstance::cpid(&[0]);
    let m = pid_rep(&[xm(0, 3)]);
    let t = Tower::new(&inst, &m, 4);
    for n in 1..=3 {
        let r = &t.obj(Obj::Tor1K, n).rep;
        let got = FPModPID::from_action(&r.maps[0]).normalized();
        assert_eq!(got, pid(0, &[xm(0, n)]).normalized());
        let e = &t.obj(Obj::Ext1K, n).rep;
        assert_eq!(FPModPID::from_action(&e.maps[0]).normalized(), pid(0, &[xm(0, n)]).normalized());
    }
}

#[test]
fn cpid_examples() {
    let inst = EpiInstance::cpid(&[0]);
    let m3 = pid(0, &[xm(0, 3)]);
    let tor1 = tor_ext_k(&inst, &val_pid(m3.clone()), Functor::Tor1).unwrap();
    assert!(same_pid(&tor1.value, &m3));
    assert_eq!(tor1.cert.mode, Mode::Colim);
    let ext1 = tor_ext_k(&inst, &val_pid(m3.clone()), Functor::Ext1).unwrap();
    assert!(same_pid(&ext1.value, &m3));
    assert_eq!(ext1.cert.mode, Mode::Lim);

    let m2 = val_pid(pid(0, &[xm(0, 2)]));
    let t0 = tor_ext_u(&inst, &m2, Functor::Tor0).unwrap();
    assert!(t0.value.is_zero());
    assert_eq!(t0.cert.kind, CertKind::Vanishing);

    let m1 = pid(0, &[xm(1, 1)]);
    let t0 = tor_ext_u(&inst, &val_pid(m1.clone()), Functor::Tor0).unwrap();
    assert!(same_pid(&t0.value, &m1));

    let free = val_pid(FPModPID::free(1));
    let adic = tor_ext_k(&inst, &free, Functor::Ext1).unwrap();
    assert_eq!(adic.value, ModValue::adic(BTreeMap::from([(Rat::zero(), 1)]), None));
    let loc = tor_ext_u(&inst, &free, Functor::Tor0).unwrap();
    assert!(matches!(loc.value, ModValue::Localized { .. }));
}

#[test]
fn zero_module_gives_zero_everywhere() {
    for inst in [EpiInstance::cpid(&[0]), EpiInstance::kron(&[])] {
        let z = ModValue::zero(inst.quiver());
        for f in [Functor::Tor0, Functor::Tor1, Functor::Ext0, Functor::Ext1] {
            assert!(tor_ext_u(&inst, &z, f).unwrap().value.is_zero());
            assert!(tor_ext_k(&inst, &z, f).unwrap().value.is_zero());
        }
        let (g, d) = gamma_delta(&inst, &Rep::zero(inst.quiver())).unwrap();
        assert!(g.value.is_zero() && d.value.is_zero());
    }
}

#[test]
fn kron_examples() {
    let inst = EpiInstance::kron(&[]);
    let r1 = reg(Point::Infinity, 1);
    assert!(tor_ext_k(&inst, &val_kron(&r1), Functor::Tor0).unwrap().value.is_zero());
    let p = kron(&StdRep::SimpleProjective);
    let t0 = tor_ext_u(&inst, &val_kron(&p), Functor::Tor0).unwrap();
    assert!(matches!(t0.value, ModValue::Localized { .. }), "{}", t0.value);

    let r2 = reg(Point::Infinity, 2);
    let g = gamma(&inst, &r2.to_rep()).unwrap();
    assert!(g.complete && g.map.is_iso());
    let d = delta(&inst, &r2.to_rep()).unwrap();
    assert!(d.map.is_iso());
}

#[test]
fn regular_at_uninverted_point_is_a_u_module() {
    let inst = EpiInstance::kron(&[]);
    let m = reg(Point::int(0), 2);
    let v = tor_ext_u(&inst, &val_kron(&m), Functor::Tor0).unwrap();
    match v.value {
        ModValue::FiniteDim { module: FinMod::Kron(k) } => assert!(are_isomorphic(&k, &m)),
        other => panic!("unexpected {other}"),
    }
    for f in [Functor::Tor0, Functor::Tor1, Functor::Ext0, Functor::Ext1] {
        assert!(tor_ext_k(&inst, &val_kron(&m), f).unwrap().value.is_zero(), "{f}");
    }
}

#[test]
fn kron_tensor_agrees_with_the_pencil_cokernel() {
    // Level colimit against coker(G − xF) for torsion-type inputs.
    let inst = EpiInstance::kron(&[2]);
    let cases = [
        reg(Point::int(0), 2),
        reg(Point::int(2), 1).direct_sum(&reg(Point::int(5), 1)),
        reg(Point::Infinity, 1).direct_sum(&reg(Point::int(-1), 2)),
        kron(&StdRep::SimpleInjective),
        kron(&StdRep::Preinjective(1)).direct_sum(&reg(Point::int(3), 1)),
    ];
    for m in &cases {
        let (coker, _) = closed::morita(&inst, m);
        let expect = closed::u_module_value(&inst, &coker);
        let st = Engine::new(&inst, &m.to_rep()).stabilize(Obj::Tor0U).unwrap();
        let got = KronRep::from_rep(&st.rep);
        match expect {
            ModValue::FiniteDim { module: FinMod::Kron(k) } => assert!(are_isomorphic(&k, &got), "{m:?}"),
            other => panic!("unexpected {other}"),
        }
    }
}

#[test]
fn gamma_of_mixed_torsion() {
    let inst = EpiInstance::cpid(&[0]);
    let m = pid_rep(&[xm(0, 1), xm(1, 1)]);
    let g = gamma(&inst, &m).unwrap();
    assert!(same_pid(&g.value, &pid(0, &[xm(0, 1)])));
    assert!(g.map.is_injective());
    let img = g.map.comps[0].column_space();
    // the image is the kernel of x
    assert!(m.maps[0].mul(&img).is_zero());
}

#[test]
fn five_term_examples() {
    let inst = EpiInstance::cpid(&[0]);
    let m = val_pid(pid(1, &[xm(0, 1)]));
    let ft = five_term_check(&inst, &m, FiveSide::Tor).unwrap();
    assert!(ft.exact && ft.symbolic_part);
    assert!(ft.terms[0].as_ref().unwrap().is_zero());
    assert!(same_pid(ft.terms[1].as_ref().unwrap(), &pid(0, &[xm(0, 1)])));
    assert!(matches!(ft.terms[3], Some(ModValue::Localized { .. })));
    assert_eq!(ft.terms[4], Some(ModValue::prufer(BTreeMap::from([(Rat::zero(), 1)]))));

    let kinst = EpiInstance::kron(&[]);
    let r1 = reg(Point::Infinity, 1);
    let ft = five_term_check(&kinst, &val_kron(&r1), FiveSide::Ext).unwrap();
    assert!(ft.exact);
    assert_eq!(ft.stable_exact.as_ref().map(|v| v.len()), Some(5));
    assert!(ft.terms[1].as_ref().unwrap().is_zero() && ft.terms[4].as_ref().unwrap().is_zero());
    let delta_map = &ft.maps[2].as_ref().unwrap();
    assert!(delta_map.iter().all(|c| c.is_invertible()));
}

#[test]
fn five_term_numeric_cpid() {
    for ys in [vec![0], vec![0, 1]] {
        let inst = EpiInstance::cpid(&ys);
        let m = val_pid(pid(0, &[xm(0, 2), xm(1, 3), xm(3, 1)]));
        for side in [FiveSide::Tor, FiveSide::Ext] {
            let ft = five_term_check(&inst, &m, side).unwrap();
            assert!(ft.levels_exact, "{ys:?} {side:?}");
            assert_eq!(ft.stable_exact, Some(vec![true; 5]), "{ys:?} {side:?}");
        }
    }
}

#[test]
fn adjunction_examples() {
    let inst = EpiInstance::cpid(&[0]);
    let m = pid_rep(&[xm(0, 1)]);
    let a = pid_rep(&[xm(0, 2), xm(1, 1)]);
    let v = adjoint::adjunction_check_comodule(&inst, &m, &a).unwrap();
    assert_eq!((v.dim_adjoint, v.dim_direct), (1, 1));
    assert!(v.iso);

    let kinst = EpiInstance::kron(&[]);
    let r1 = reg(Point::Infinity, 1);
    let a = kron(&StdRep::SimpleInjective).direct_sum(&r1);
    let v = adjoint::adjunction_check_comodule(&kinst, &r1.to_rep(), &a.to_rep()).unwrap();
    assert!(v.iso, "{v:?}");
    let v = adjoint::adjunction_check_contramodule(&kinst, &r1.to_rep(), &a.to_rep()).unwrap();
    assert!(v.iso, "{v:?}");
}

#[test]
fn symbolic_rules_first_matlis() {
    let inst = EpiInstance::cpid(&[0, 1]);
    let pr = ModValue::prufer(BTreeMap::from([(Rat::zero(), 2), (Rat::one(), 1)]));
    let hom = tor_ext_k(&inst, &pr, Functor::Ext0).unwrap().value;
    assert_eq!(hom, ModValue::adic(BTreeMap::from([(Rat::zero(), 2), (Rat::one(), 1)]), None));
    let back = tor_ext_k(&inst, &hom, Functor::Tor0).unwrap().value;
    assert_eq!(back, pr);
    // off the instance's points a Prüfer module is a U-module
    let off = ModValue::prufer(BTreeMap::from([(Rat::int(5), 1)]));
    assert!(tor_ext_k(&inst, &off, Functor::Ext0).unwrap().value.is_zero());
    assert_eq!(tor_ext_u(&inst, &off, Functor::Tor0).unwrap().value, off);
}

#[test]
fn symbolic_input_over_kron_is_unsupported() {
    let inst = EpiInstance::kron(&[]);
    let pr = ModValue::prufer(BTreeMap::from([(Rat::zero(), 1)]));
    assert!(matches!(tor_ext_k(&inst, &pr, Functor::Tor0), Err(FunctorError::SymbolicUnsupported(_))));
}

#[test]
fn values_serialize_with_a_shape_tag() {
    let v = ModValue::prufer(BTreeMap::from([(Rat::zero(), 1)]));
    let s = serde_json::to_string(&v).unwrap();
    assert!(s.contains(r#""shape":"PruferSum""#), "{s}");
    let back: ModValue = serde_json::from_str(&s).unwrap();
    assert_eq!(back, v);
}
