//! Closed forms: the symbolic rules over the localization family and the Morita description
//! of `Tor(U, M)` over the Kronecker family.
//!
//! Over `Cpid(Y)` write a finitely generated module as `ℚ[x]^r ⊕ T` and split the torsion
//! `T = T_Y ⊕ T_off` into the part supported in `Y` and the rest. `T_off` is a `U`-module,
//! `T_Y` is a comodule and a contramodule, `P(μ)` for `μ ∈ Y` is a divisible comodule and
//! `ℚ[[x−μ]]` a torsionfree contramodule; off `Y` both are `U`-modules.

use std::collections::BTreeMap;

use super::value::{drop_factors, primary_factors, FinMod, ModValue};
use super::{FunctorError, Functor, Side};
use crate::exact::{FPModPID, Poly, PolyMat, QMat, Rat};
use crate::instances::EpiInstance;
use crate::quiver::{KronRep, Point, Quiver};

/// A `U`-module given by its `S`-module: finite ones as representations, the rest localized.
pub fn u_module_value(inst: &EpiInstance, n: &FPModPID) -> ModValue {
    let nf = n.normalized();
    let m = FPModPID::from_parts(nf.free_rank, &drop_factors(&nf.divisors, &inst.poles()));
    if m.normalized().free_rank > 0 {
        return ModValue::Localized { module: m, points: inst.points().to_vec() };
    }
    let x = m.action_matrix().expect("finite length");
    match inst.quiver() {
        Quiver::Loop => ModValue::FiniteDim { module: FinMod::Pid(m) },
        Quiver::Kronecker => {
            let k = KronRep::new(QMat::identity(x.rows()), x).expect("square action");
            ModValue::FiniteDim { module: FinMod::Kron(k) }
        }
    }
}

/// `(coker, rank of ker)` of `G − x·F: S^{d₁} → S^{d₂}`; these are the `S`-modules of
/// `U ⊗ M` and `Tor₁(U, M)`.
pub fn morita(inst: &EpiInstance, m: &KronRep) -> (FPModPID, usize) {
    let pencil = PolyMat::linear(&m.g, &m.f.neg());
    let coker = FPModPID::new(pencil);
    let nf = coker.normalized();
    let rank = m.d2 - nf.free_rank;
    let local = FPModPID::from_parts(nf.free_rank, &drop_factors(&nf.divisors, &inst.poles()));
    (local, m.d1 - rank)
}

fn at_points(points: &[Rat], r: usize) -> BTreeMap<Rat, usize> {
    points.iter().map(|p| (p.clone(), r)).collect()
}

fn pid(m: FPModPID) -> FinMod {
    FinMod::Pid(m)
}

fn zero() -> ModValue {
    ModValue::zero(Quiver::Loop)
}

fn unsupported(what: &str) -> FunctorError {
    FunctorError::SymbolicUnsupported(what.to_string())
}

/// Torsion summands off `ys` and supported in `ys`.
fn split_torsion(divisors: &[Poly], ys: &[Rat]) -> (Vec<Poly>, Vec<Poly>) {
    let off = drop_factors(divisors, ys);
    let on: Vec<Poly> = ys.iter().flat_map(|y| primary_factors(divisors, y)).collect();
    (off, on)
}

/// `S_P ⊗ N` over `Cpid(Y)`, with the plain module `N` for `P = ∅`.
pub fn cpid_localized(
    inst: &EpiInstance,
    n: &FPModPID,
    p: &[Point],
    side: Side,
    f: Functor,
) -> Result<ModValue, FunctorError> {
    let ys = inst.poles();
    let ps: Vec<Rat> = p.iter().filter_map(|q| q.finite().cloned()).collect();
    let nf = n.normalized();
    let r = nf.free_rank;
    let (off, on) = split_torsion(&drop_factors(&nf.divisors, &ps), &ys);
    let y_minus_p: Vec<Rat> = ys.iter().filter(|y| !ps.contains(y)).cloned().collect();
    let y_in_p = y_minus_p.is_empty();
    let t_y = pid(FPModPID::from_parts(0, &on));
    let union: Vec<Point> = {
        let mut v: Vec<Point> = inst.points().iter().chain(p).cloned().collect();
        v.sort();
        v.dedup();
        v
    };
    Ok(match (side, f) {
        (Side::U, Functor::Tor0) => ModValue::localized(&FPModPID::from_parts(r, &off), &union),
        (Side::U, Functor::Tor1) => zero(),
        (Side::U, Functor::Ext0) => {
            let free = if y_in_p { r } else { 0 };
            ModValue::localized(&FPModPID::from_parts(free, &off), &union)
        }
        (Side::U, Functor::Ext1) if y_in_p => zero(),
        (Side::U, Functor::Ext1) => return Err(unsupported("Ext1(U, -) of a module with a free part")),
        (Side::K, Functor::Tor0) => ModValue::prufer(at_points(&y_minus_p, r)),
        (Side::K, Functor::Tor1) => ModValue::FiniteDim { module: t_y },
        (Side::K, Functor::Ext0) => zero(),
        (Side::K, Functor::Ext1) => ModValue::adic(at_points(&y_minus_p, r), Some(t_y)),
    })
}

/// `F(P(μ))` for one Prüfer module.
fn prufer_one(ys: &[Rat], mu: &Rat, side: Side, f: Functor) -> Result<ModValue, FunctorError> {
    let one = |m: &Rat| BTreeMap::from([(m.clone(), 1)]);
    if !ys.contains(mu) {
        // x − y is invertible on P(μ) for every y ∈ Y
        return Ok(match (side, f) {
            (Side::U, Functor::Tor0) | (Side::U, Functor::Ext0) => ModValue::prufer(one(mu)),
            _ => zero(),
        });
    }
    Ok(match (side, f) {
        (Side::K, Functor::Tor1) => ModValue::prufer(one(mu)),
        (Side::K, Functor::Ext0) => ModValue::adic(one(mu), None),
        (Side::U, Functor::Ext0) => return Err(unsupported("Hom(U, P(mu)) for mu in Y")),
        _ => zero(),
    })
}

/// `F(ℚ[[x−μ]])` for one adic module.
fn adic_one(ys: &[Rat], mu: &Rat, side: Side, f: Functor) -> Result<ModValue, FunctorError> {
    let one = |m: &Rat| BTreeMap::from([(m.clone(), 1)]);
    if !ys.contains(mu) {
        return Ok(match (side, f) {
            (Side::U, Functor::Tor0) | (Side::U, Functor::Ext0) => ModValue::adic(one(mu), None),
            _ => zero(),
        });
    }
    Ok(match (side, f) {
        (Side::K, Functor::Tor0) => ModValue::prufer(one(mu)),
        (Side::K, Functor::Ext1) => ModValue::adic(one(mu), None),
        (Side::U, Functor::Tor0) => return Err(unsupported("U tensor an adic module at a point of Y")),
        _ => zero(),
    })
}

fn times(v: ModValue, k: usize) -> Result<ModValue, FunctorError> {
    (0..k).try_fold(zero(), |acc, _| acc.plus(&v))
}

/// Symbolic rules for the infinite shapes over `Cpid`. Finite torsion parts of `AdicProd`
/// are left to the caller.
pub fn cpid_symbolic(inst: &EpiInstance, m: &ModValue, side: Side, f: Functor) -> Result<ModValue, FunctorError> {
    let ys = inst.poles();
    match m {
        ModValue::Localized { module, points } => cpid_localized(inst, module, points, side, f),
        ModValue::PruferSum { mult } => mult
            .iter()
            .try_fold(zero(), |acc, (mu, &k)| acc.plus(&times(prufer_one(&ys, mu, side, f)?, k)?)),
        ModValue::AdicProd { rank, .. } => rank
            .iter()
            .try_fold(zero(), |acc, (mu, &k)| acc.plus(&times(adic_one(&ys, mu, side, f)?, k)?)),
        ModValue::MixedExt { .. } => Err(unsupported("functors of an unsplit extension")),
        ModValue::FiniteDim { .. } => Err(unsupported("finite input on the symbolic path")),
    }
}
