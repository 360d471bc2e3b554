//! The five-term sequences
//! `0 → Tor₁(U,M) → Tor₁(K,M) → M → U⊗M → K⊗M → 0` and
//! `0 → Hom(K,M) → Hom(U,M) → M → Ext¹(K,M) → Ext¹(U,M) → 0`,
//! checked level-wise on the towers and, when every term is finite, on the stabilized values.

use serde::{Deserialize, Serialize};

use super::cert::{certified_at, value_at, Stabilized};
use super::{closed, Conn, Engine, FinMod, Functor, FunctorError, ModValue, Obj, Side};
use crate::exact::{FPModPID, QMat};
use crate::instances::EpiInstance;
use crate::quiver::{KronRep, Morphism, Rep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiveSide {
    Tor,
    Ext,
}

impl std::str::FromStr for FiveSide {
    type Err = FunctorError;

    fn from_str(s: &str) -> Result<FiveSide, FunctorError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tor" => Ok(FiveSide::Tor),
            "ext" => Ok(FiveSide::Ext),
            other => Err(FunctorError::Precondition(format!("unknown side {other}"))),
        }
    }
}

impl FiveSide {
    fn objs(self) -> [Obj; 4] {
        match self {
            FiveSide::Tor => [Obj::Tor1U, Obj::Tor1K, Obj::Tor0U, Obj::Tor0K],
            FiveSide::Ext => [Obj::HomK, Obj::HomU, Obj::Ext1K, Obj::Ext1U],
        }
    }

    fn conns(self) -> [Conn; 4] {
        match self {
            FiveSide::Tor => [Conn::Tor1UToTor1K, Conn::Gamma, Conn::Eta, Conn::Tor0UToTor0K],
            FiveSide::Ext => [Conn::HomKToHomU, Conn::Eval, Conn::Delta, Conn::Ext1KToExt1U],
        }
    }

    fn functors(self) -> [(Side, Functor); 4] {
        match self {
            FiveSide::Tor => [(Side::U, Functor::Tor1), (Side::K, Functor::Tor1), (Side::U, Functor::Tor0), (Side::K, Functor::Tor0)],
            FiveSide::Ext => [(Side::K, Functor::Ext0), (Side::U, Functor::Ext0), (Side::K, Functor::Ext1), (Side::U, Functor::Ext1)],
        }
    }
}

/// The five nonzero terms with the four maps between them. `None` marks a term that has no
/// finite normalization or a map on such a term.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiveTerm {
    pub side: FiveSide,
    pub terms: Vec<Option<ModValue>>,
    /// Per-vertex matrices of the stabilized maps.
    pub maps: Vec<Option<Vec<QMat>>>,
    /// Exactness of the stabilized sequence at each term, when all terms are finite.
    pub stable_exact: Option<Vec<bool>>,
    /// Levels at which the level-wise sequence was checked and found exact.
    pub levels_checked: usize,
    pub levels_exact: bool,
    /// The free part of a module over the localization family enters through closed forms.
    pub symbolic_part: bool,
    pub exact: bool,
}

/// Rank-exactness at the five terms of `a → b → c → d → e` with the outer zeros.
fn exact_positions(dims: [&[usize]; 5], maps: [&Morphism; 4]) -> Vec<bool> {
    let v = dims[0].len();
    let rank = |k: usize, i: usize| maps[k].comps[i].rank();
    let composes = (0..3).all(|k| maps[k + 1].compose(maps[k]).is_zero());
    (0..5)
        .map(|p| {
            (0..v).all(|i| {
                let incoming = if p == 0 { 0 } else { rank(p - 1, i) };
                let outgoing = if p == 4 { 0 } else { rank(p, i) };
                incoming + outgoing == dims[p][i]
            }) && composes
        })
        .collect()
}

fn level_exact(e: &Engine, side: FiveSide, n: usize) -> bool {
    let t = e.tower();
    let objs = side.objs().map(|o| t.obj(o, n));
    let maps = side.conns().map(|c| t.connecting(c, n));
    let m = &e.module().dims;
    let d = [&objs[0].rep.dims[..], &objs[1].rep.dims[..], &m[..], &objs[2].rep.dims[..], &objs[3].rep.dims[..]];
    exact_positions(d, [&maps[0], &maps[1], &maps[2], &maps[3]]).into_iter().all(|b| b)
}

/// Stabilized maps at the common level `l`.
fn stable_maps(e: &Engine, side: FiveSide, st: &[Stabilized; 4], l: usize) -> [Morphism; 4] {
    let t = e.tower();
    let c = side.conns().map(|c| t.connecting(c, l));
    match side {
        FiveSide::Tor => [
            st[1].canon.compose(&c[0]).compose(&st[0].lift),
            c[1].compose(&st[1].lift),
            st[2].canon.compose(&c[2]),
            st[3].canon.compose(&c[3]).compose(&st[2].lift),
        ],
        FiveSide::Ext => [
            st[1].lift.compose(&c[0]).compose(&st[0].canon),
            c[1].compose(&st[1].canon),
            st[2].lift.compose(&c[2]),
            st[3].lift.compose(&c[3]).compose(&st[2].canon),
        ],
    }
}

fn numeric(inst: &EpiInstance, m: &Rep, side: FiveSide) -> Result<FiveTerm, FunctorError> {
    let e = Engine::new(inst, m);
    let top = e.tower().max_level() - 1;
    let levels_exact = (1..=top).all(|n| level_exact(&e, side, n));
    let objs = side.objs();
    let firsts: Vec<Result<Stabilized, FunctorError>> = objs.iter().map(|&o| e.stabilize(o)).collect();
    let mut terms: Vec<Option<ModValue>> = vec![None; 5];
    let slot = [0, 1, 3, 4];
    terms[2] = Some(ModValue::fin(m));
    for (k, f) in firsts.iter().enumerate() {
        terms[slot[k]] = f.as_ref().ok().map(|s| ModValue::fin(&s.rep));
    }
    // Over the Kronecker family the `U`-Tor terms may be infinite but have closed forms.
    if side == FiveSide::Tor && inst.is_kron() {
        let (coker, ker_rank) = closed::morita(inst, &KronRep::from_rep(m));
        if terms[0].is_none() && ker_rank > 0 {
            terms[0] = Some(closed::u_module_value(inst, &FPModPID::free(ker_rank)));
        }
        if terms[3].is_none() {
            terms[3] = Some(closed::u_module_value(inst, &coker));
        }
    }
    let mut maps: Vec<Option<Vec<QMat>>> = vec![None; 4];
    let mut stable_exact = None;
    if firsts.iter().all(Result::is_ok) {
        let l = firsts.iter().map(|f| f.as_ref().unwrap().level).max().unwrap();
        let ok = objs.iter().all(|&o| certified_at(e.tower(), o, l, e.window(o)));
        if ok && l <= e.budget {
            let st = objs.map(|o| value_at(e.tower(), o, l, e.window(o)));
            let mm = stable_maps(&e, side, &st, l);
            let d = [&st[0].rep.dims[..], &st[1].rep.dims[..], &m.dims[..], &st[2].rep.dims[..], &st[3].rep.dims[..]];
            stable_exact = Some(exact_positions(d, [&mm[0], &mm[1], &mm[2], &mm[3]]));
            for (k, x) in mm.into_iter().enumerate() {
                maps[k] = Some(x.comps);
            }
        }
    }
    let exact = levels_exact && stable_exact.as_ref().is_none_or(|v| v.iter().all(|&b| b));
    Ok(FiveTerm { side, terms, maps, stable_exact, levels_checked: top, levels_exact, symbolic_part: false, exact })
}

/// Assembles the sequence and reports exactness.
pub fn five_term_check(inst: &EpiInstance, m: &ModValue, side: FiveSide) -> Result<FiveTerm, FunctorError> {
    let Some(module) = m.finite() else {
        return Err(FunctorError::SymbolicUnsupported(format!("five-term sequence of a {}", m.shape_name())));
    };
    let (rep, free) = match module {
        FinMod::Kron(k) => (k.to_rep(), 0),
        FinMod::Pid(p) => {
            let nf = p.normalized();
            let t = FPModPID::from_parts(0, &nf.divisors);
            (Rep::loop_module(t.action_matrix().expect("finite length")), nf.free_rank)
        }
    };
    inst.check_module(&rep)?;
    let mut out = numeric(inst, &rep, side)?;
    if free == 0 {
        return Ok(out);
    }
    // the free part contributes 0 → 0 → 0 → R^r → S^r → P^r → 0 resp. its Ext-dual, by closed forms
    let f = FPModPID::free(free);
    for (k, (s, func)) in side.functors().into_iter().enumerate() {
        let slot = [0, 1, 3, 4][k];
        let sym = closed::cpid_localized(inst, &f, &[], s, func);
        out.terms[slot] = match (out.terms[slot].take(), sym) {
            (Some(a), Ok(b)) => Some(b.plus(&a)?),
            _ => None,
        };
    }
    out.terms[2] = Some(m.clone());
    out.maps = vec![None; 4];
    out.symbolic_part = true;
    Ok(out)
}
