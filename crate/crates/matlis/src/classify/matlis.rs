//! Both Matlis equivalences as executable round trips.
//!
//! Cospecial comodules and special contramodules: `M ↦ Δ(M)` and `C ↦ Γ(C)` with explicit
//! isomorphisms `ΓΔ(M) → M` and `ΔΓ(C) → C` built from the natural maps, and naturality
//! squares for morphisms. Divisible comodules and torsionfree contramodules over `Cpid`: the
//! symbolic rules `Hom(K, P(μ)) = ℚ[[x−μ]]`, `K ⊗ ℚ[[x−μ]] = P(μ)`, checked at levels.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{classify, pole_operator, ClassFlags, Path};
use crate::exact::{subspace, QMat, Rat};
use crate::functor::value::{jordan_block, level_dim};
use crate::functor::{delta, functorial, gamma, tor_ext_k, Functor, FunctorError, ModValue, Natural, Obj, Tower};
use crate::instances::EpiInstance;
use crate::quiver::{find_iso, KronRep, Morphism, Rep, RepMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatlisOrder {
    /// A cospecial comodule through `Δ` and back through `Γ`.
    DeltaFirst,
    /// A special contramodule through `Γ` and back through `Δ`.
    GammaFirst,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RoundTrip {
    pub order: MatlisOrder,
    pub first: ModValue,
    pub second: ModValue,
    /// `ΓΔ(M) → M`, resp. `ΔΓ(C) → C`, per vertex.
    pub witness: Option<Vec<QMat>>,
    /// The witness is the composite of the natural maps rather than a searched isomorphism.
    pub natural: bool,
    pub intermediate: ClassFlags,
    pub intermediate_ok: bool,
    pub ok: bool,
}

fn rep_of(core: &Rep) -> ModValue {
    ModValue::fin(core)
}

/// The natural maps `x`, `y` with `y⁻¹∘x` (or `x∘y⁻¹`) the witness, when both are invertible.
fn compose_witness(order: MatlisOrder, outer: &Morphism, inner: &Morphism) -> Option<Morphism> {
    match order {
        MatlisOrder::DeltaFirst => Some(outer.inverse()?.compose(inner)),
        MatlisOrder::GammaFirst => Some(outer.compose(&inner.inverse()?)),
    }
}

pub fn second_matlis_roundtrip(inst: &EpiInstance, m: &Rep, order: MatlisOrder) -> Result<RoundTrip, FunctorError> {
    let flags = classify(inst, m, Path::Definitional)?;
    let admitted = match order {
        MatlisOrder::DeltaFirst => flags.cospecial && flags.comodule,
        MatlisOrder::GammaFirst => flags.special && flags.contramodule,
    };
    if !admitted {
        return Err(FunctorError::Precondition(format!("input not admitted to the {order:?} round trip")));
    }
    // first: M → Δ(M) (resp. Γ(C) → C); second: ΓΔ(M) → Δ(M) (resp. ΓC → ΔΓC)
    let (n1, n2) = match order {
        MatlisOrder::DeltaFirst => {
            let d = delta(inst, m)?;
            let g = gamma(inst, &d.core)?;
            (d, g)
        }
        MatlisOrder::GammaFirst => {
            let g = gamma(inst, m)?;
            let d = delta(inst, &g.core)?;
            (g, d)
        }
    };
    let mid = &n1.core;
    let intermediate = classify(inst, mid, Path::Definitional)?;
    let intermediate_ok = match order {
        MatlisOrder::DeltaFirst => intermediate.special && intermediate.contramodule,
        MatlisOrder::GammaFirst => intermediate.cospecial && intermediate.comodule,
    };
    let end = &n2.core;
    let mut natural = true;
    let mut witness = if n1.complete && n2.complete { compose_witness(order, &n1.map, &n2.map) } else { None };
    if witness.is_none() && inst.is_kron() {
        natural = false;
        witness = find_iso(&KronRep::from_rep(end), &KronRep::from_rep(m)).map(|r| r.to_morphism());
    }
    let ok_witness = witness.as_ref().is_some_and(|w| w.is_iso() && end.is_morphism(m, w));
    Ok(RoundTrip {
        order,
        first: rep_of(mid),
        second: rep_of(end),
        witness: witness.map(|w| w.comps),
        natural,
        intermediate,
        intermediate_ok,
        ok: ok_witness && intermediate_ok,
    })
}

/// The three squares for `φ: M → M'`: the first natural map, the second natural map,
/// and the round-trip isomorphism against `φ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Naturality {
    pub first_square: bool,
    pub second_square: bool,
    pub roundtrip_square: bool,
}

impl Naturality {
    pub fn holds(&self) -> bool {
        self.first_square && self.second_square && self.roundtrip_square
    }
}

pub fn second_matlis_naturality(
    inst: &EpiInstance,
    m: &Rep,
    m2: &Rep,
    phi: &Morphism,
    order: MatlisOrder,
) -> Result<Naturality, FunctorError> {
    let (o1, o2) = match order {
        MatlisOrder::DeltaFirst => (Obj::Ext1K, Obj::Tor1K),
        MatlisOrder::GammaFirst => (Obj::Tor1K, Obj::Ext1K),
    };
    let (a1, a2, f1) = functorial(inst, m, m2, phi, o1)?;
    let (b1, b2, f2) = functorial(inst, &a1.core, &a2.core, &f1, o2)?;
    let witness = |a: &Natural, b: &Natural| {
        compose_witness(order, &a.map, &b.map)
            .ok_or_else(|| FunctorError::Inconsistent("a natural map of the round trip is not invertible".into()))
    };
    let (w1, w2) = (witness(&a1, &b1)?, witness(&a2, &b2)?);
    // δ: M → Δ(M) commutes as Δφ∘δ = δ'∘φ, γ: Γ(M) → M as φ∘γ = γ'∘Γφ
    let first_square = match order {
        MatlisOrder::DeltaFirst => f1.compose(&a1.map) == a2.map.compose(phi),
        MatlisOrder::GammaFirst => phi.compose(&a1.map) == a2.map.compose(&f1),
    };
    let second_square = match order {
        MatlisOrder::DeltaFirst => f1.compose(&b1.map) == b2.map.compose(&f2),
        MatlisOrder::GammaFirst => f2.compose(&b1.map) == b2.map.compose(&f1),
    };
    let roundtrip_square = w2.compose(&f2) == phi.compose(&w1);
    Ok(Naturality { first_square, second_square, roundtrip_square })
}

/// Multiplicity data of a symbolic value; `None` for other shapes.
pub fn multiplicities(v: &ModValue) -> Option<BTreeMap<Rat, usize>> {
    match v {
        ModValue::PruferSum { mult } => Some(mult.clone()),
        ModValue::AdicProd { rank, torsion: None } => Some(rank.clone()),
        _ if v.is_zero() => Some(BTreeMap::new()),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstDirection {
    /// `C ↦ K ⊗ C` on adic products.
    Tensor,
    /// `M ↦ Hom(K, M)` on Prüfer sums.
    Hom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCheck {
    pub level: usize,
    pub expected_dim: usize,
    pub computed_dim: usize,
    /// The level truncation of the image is in the target class.
    pub class_ok: bool,
    /// The truncation-level shadow of divisibility, resp. torsionfreeness.
    pub shadow_ok: bool,
}

impl LevelCheck {
    pub fn ok(&self) -> bool {
        self.expected_dim == self.computed_dim && self.class_ok && self.shadow_ok
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FirstMatlis {
    pub direction: FirstDirection,
    pub image: ModValue,
    pub back: ModValue,
    pub roundtrip_identity: bool,
    pub levels: Vec<LevelCheck>,
    pub ok: bool,
}

/// `⊕_μ (ℚ[x]/(x−μ)ⁿ)^{a_μ}`: the `n`-th layer of a Prüfer sum and the `n`-th quotient of an
/// adic product alike.
fn layer(mult: &BTreeMap<Rat, usize>, n: usize) -> QMat {
    let blocks: Vec<QMat> =
        mult.iter().flat_map(|(mu, &a)| std::iter::repeat(jordan_block(mu, n)).take(a)).collect();
    QMat::block_diag(&blocks.iter().collect::<Vec<_>>())
}

pub fn first_matlis_symbolic(inst: &EpiInstance, input: &ModValue, max_level: usize) -> Result<FirstMatlis, FunctorError> {
    if inst.is_kron() {
        return Err(FunctorError::SymbolicUnsupported("first equivalence over the Kronecker family".into()));
    }
    let direction = match input {
        ModValue::PruferSum { .. } => FirstDirection::Hom,
        ModValue::AdicProd { torsion: None, .. } => FirstDirection::Tensor,
        _ if input.is_zero() => FirstDirection::Hom,
        other => return Err(FunctorError::SymbolicUnsupported(format!("first equivalence of a {}", other.shape_name()))),
    };
    let mult = multiplicities(input).expect("checked shape");
    let ys = inst.poles();
    if let Some(mu) = mult.keys().find(|mu| !ys.contains(mu)) {
        return Err(FunctorError::Precondition(format!("point {mu} outside the localization points")));
    }
    let (there, back_f) = match direction {
        FirstDirection::Hom => (Functor::Ext0, Functor::Tor0),
        FirstDirection::Tensor => (Functor::Tor0, Functor::Ext0),
    };
    let image = if input.is_zero() { input.clone() } else { tor_ext_k(inst, input, there)?.value };
    let back = if image.is_zero() { image.clone() } else { tor_ext_k(inst, &image, back_f)?.value };
    let roundtrip_identity = multiplicities(&back).as_ref() == Some(&mult)
        && multiplicities(&image).as_ref() == Some(&mult)
        && match direction {
            FirstDirection::Hom => matches!(image, ModValue::AdicProd { .. }) || mult.is_empty(),
            FirstDirection::Tensor => matches!(image, ModValue::PruferSum { .. }) || mult.is_empty(),
        };
    let levels = if mult.is_empty() { Vec::new() } else { level_checks(inst, &mult, &image, direction, max_level) };
    let ok = roundtrip_identity && levels.iter().all(LevelCheck::ok);
    Ok(FirstMatlis { direction, image, back, roundtrip_identity, levels, ok })
}

/// `Hom(K_n, P) = Hom(K_n, P[sᴺ])` and `K_n ⊗ Â = K_n ⊗ Â/sᴺ` for `n ≤ N`, so one tower
/// over the `N`-th layer computes every level `n ≤ N`.
fn level_checks(
    inst: &EpiInstance,
    mult: &BTreeMap<Rat, usize>,
    image: &ModValue,
    direction: FirstDirection,
    top: usize,
) -> Vec<LevelCheck> {
    let m = Rep::loop_module(layer(mult, top));
    let tower = Tower::new(inst, &m, top);
    let obj = match direction {
        FirstDirection::Hom => Obj::HomK,
        FirstDirection::Tensor => Obj::Tor0K,
    };
    (1..=top)
        .map(|n| {
            let computed_dim = tower.obj(obj, n).rep.total_dim();
            let expected_dim = level_dim(image, n).expect("symbolic shapes have level dimensions");
            let here = Rep::loop_module(layer(mult, n));
            let flags = classify(inst, &here, Path::Structural);
            let class_ok = flags.is_ok_and(|f| f.comodule && f.contramodule);
            let next = layer(mult, n + 1);
            let s = pole_operator(inst, &next);
            let shadow_ok = match direction {
                // ker s on the (n+1)-st quotient dies in the n-th: ker s ⊆ sⁿ·A
                FirstDirection::Hom => subspace::is_subspace(&s.kernel(), &s.pow(n).column_space()),
                // the n-th layer, ker sⁿ, lies in s·P
                FirstDirection::Tensor => subspace::is_subspace(&s.pow(n).kernel(), &s.column_space()),
            };
            LevelCheck { level: n, expected_dim, computed_dim, class_ok, shadow_ok }
        })
        .collect()
}

/// `RepMap` view of a per-vertex witness over the Kronecker quiver.
pub fn witness_repmap(w: &[QMat]) -> RepMap {
    RepMap::new(w[0].clone(), w[1].clone())
}
