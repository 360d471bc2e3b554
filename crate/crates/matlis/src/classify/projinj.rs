//! `Hom(K, F) = 0` for projectives and `K ⊗ J = 0` for injectives, and the characterization
//! of special (cospecial) modules by their maximal torsionfree quotient (divisible submodule).

use serde::{Deserialize, Serialize};

use super::{classify, Path};
use crate::exact::FPModPID;
use crate::functor::{tor_ext_k, CertKind, Engine, FinMod, Functor, FunctorError, ModValue, Obj, StabCert};
use crate::instances::EpiInstance;
use crate::quiver::{standard_reps, KronRep, Point, Rep, StdRep};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjInjEntry {
    pub module: String,
    pub functor: String,
    pub vanishes: bool,
    pub cert: StabCert,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialSample {
    pub special: bool,
    pub quotient_is_u_module: bool,
    pub cospecial: bool,
    pub divisible_part_is_u_module: bool,
}

impl SpecialSample {
    pub fn agrees(&self) -> bool {
        self.special == self.quotient_is_u_module && self.cospecial == self.divisible_part_is_u_module
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjInjVerdict {
    pub entries: Vec<ProjInjEntry>,
    pub samples: Vec<SpecialSample>,
    pub ok: bool,
}

fn finite_entry(inst: &EpiInstance, name: &str, m: &Rep, o: Obj) -> Result<ProjInjEntry, FunctorError> {
    let st = Engine::new(inst, m).stabilize(o)?;
    let functor = if o == Obj::HomK { "hom(K,-)" } else { "K tensor -" };
    Ok(ProjInjEntry { module: name.into(), functor: functor.into(), vanishes: st.rep.is_zero(), cert: st.cert })
}

fn symbolic_entry(inst: &EpiInstance, name: &str, v: &ModValue, f: Functor) -> Result<ProjInjEntry, FunctorError> {
    let r = tor_ext_k(inst, v, f)?;
    let functor = if f == Functor::Ext0 { "hom(K,-)" } else { "K tensor -" };
    Ok(ProjInjEntry { module: name.into(), functor: functor.into(), vanishes: r.value.is_zero(), cert: r.cert })
}

fn is_u_module(inst: &EpiInstance, m: &Rep) -> bool {
    if inst.is_kron() {
        inst.is_u_module(&KronRep::from_rep(m))
    } else {
        inst.is_u_module_loop(&m.maps[0])
    }
}

/// Both characterizations on one finite module.
pub fn special_sample(inst: &EpiInstance, m: &Rep) -> Result<SpecialSample, FunctorError> {
    let flags = classify(inst, m, Path::Definitional)?;
    let e = Engine::new(inst, m);
    // the maximal torsionfree quotient is the image of M → U ⊗ M, i.e. M / im γ
    let (q, _) = m.quotient(&e.gamma_image()?.0);
    let (d, _) = m.subrep(&e.eval_image()?.0);
    Ok(SpecialSample {
        special: flags.special,
        quotient_is_u_module: is_u_module(inst, &q),
        cospecial: flags.cospecial,
        divisible_part_is_u_module: is_u_module(inst, &d),
    })
}

pub fn proj_inj_special_check(inst: &EpiInstance, samples: &[Rep]) -> Result<ProjInjVerdict, FunctorError> {
    let mut entries = Vec::new();
    if inst.is_kron() {
        for (i, o) in [(1, Obj::HomK), (2, Obj::HomK)] {
            let p = standard_reps(&StdRep::Projective(i))?;
            entries.push(finite_entry(inst, &StdRep::Projective(i).to_string(), &p.to_rep(), o)?);
        }
        for i in [1, 2] {
            let j = standard_reps(&StdRep::Injective(i))?;
            entries.push(finite_entry(inst, &StdRep::Injective(i).to_string(), &j.to_rep(), Obj::Tor0K)?);
        }
    } else {
        let free = ModValue::FiniteDim { module: FinMod::Pid(FPModPID::free(1)) };
        entries.push(symbolic_entry(inst, "Q[x]", &free, Functor::Ext0)?);
        // an injective cogenerator: the fraction field, seen through S_Y, and Prüfer modules
        // at the points and at one point off them
        let frac = ModValue::localized(&FPModPID::free(1), inst.points());
        entries.push(symbolic_entry(inst, "fraction field", &frac, Functor::Tor0)?);
        let mut mus = inst.poles();
        let off = (0..).map(crate::exact::Rat::int).find(|c| !mus.contains(c)).expect("finitely many points");
        mus.push(off);
        for mu in mus {
            let p = ModValue::prufer([(mu.clone(), 1)].into_iter().collect());
            entries.push(symbolic_entry(inst, &format!("P({})", Point::Finite(mu)), &p, Functor::Tor0)?);
        }
    }
    let samples: Vec<SpecialSample> = samples.iter().map(|m| special_sample(inst, m)).collect::<Result<_, _>>()?;
    let certified = |e: &ProjInjEntry| e.vanishes && matches!(e.cert.kind, CertKind::Vanishing | CertKind::ClosedForm);
    let ok = entries.iter().all(certified) && samples.iter().all(SpecialSample::agrees);
    Ok(ProjInjVerdict { entries, samples, ok })
}
