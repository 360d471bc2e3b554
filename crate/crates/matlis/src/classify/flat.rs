//! Search for a submodule of a comodule that is not torsion. Such a submodule exists iff the
//! torsion class is not hereditary, which happens iff `U` is not flat over `R`.

use serde::{Deserialize, Serialize};

use super::{classify, Path};
use crate::exact::{FPModPID, Poly, QMat};
use crate::functor::value::jordan_block;
use crate::functor::{tor_ext_u, FinMod, Functor, FunctorError, ModValue};
use crate::instances::EpiInstance;
use crate::quiver::{standard_reps, KronRep, Morphism, Point, Rep, StdRep};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlatWitness {
    pub comodule: FinMod,
    pub submodule: FinMod,
    /// Per-vertex inclusion `W → M`.
    pub embedding: Vec<QMat>,
    /// `U ⊗ W`, certified nonzero.
    pub tensor: ModValue,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FlatOutcome {
    Witness { witness: FlatWitness, searched: usize },
    NotFound { searched: usize },
    FlatCertified { searched: usize, corpus_size: usize },
}

/// Checks a claimed witness: `M` is a comodule, the inclusion intertwines, `U ⊗ W ≠ 0`.
pub fn verify_witness(inst: &EpiInstance, m: &Rep, w: &Rep, emb: &Morphism) -> Result<Option<FlatWitness>, FunctorError> {
    if !classify(inst, m, Path::Definitional)?.comodule || !emb.is_injective() || !w.is_morphism(m, emb) {
        return Ok(None);
    }
    let tensor = tor_ext_u(inst, &ModValue::fin(w), Functor::Tor0)?.value;
    if tensor.is_zero() {
        return Ok(None);
    }
    Ok(Some(FlatWitness {
        comodule: FinMod::from_rep(m),
        submodule: FinMod::from_rep(w),
        embedding: emb.comps.clone(),
        tensor,
    }))
}

/// Partitions of `n` into positive parts, non-increasing.
fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (1..=n.min(max))
        .rev()
        .flat_map(|k| partitions(n - k, k).into_iter().map(move |mut p| {
            p.insert(0, k);
            p
        }))
        .collect()
}

/// All ways to write a total of `n` as Jordan types at the points.
fn local_types(points: &[Point], n: usize) -> Vec<Vec<(Point, usize)>> {
    let Some((p, rest)) = points.split_first() else {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    };
    (0..=n)
        .flat_map(|k| {
            let tails = local_types(rest, n - k);
            partitions(k, k).into_iter().flat_map(move |part| {
                let tails = tails.clone();
                tails.into_iter().map(move |mut t| {
                    t.extend(part.iter().map(|&s| (p.clone(), s)));
                    t
                })
            })
        })
        .collect()
}

/// The comodules of total local dimension `n`: sums of Jordan blocks at the points.
fn comodules(inst: &EpiInstance, n: usize) -> Vec<Rep> {
    let types = local_types(inst.points(), n);
    if inst.is_kron() {
        types
            .iter()
            .map(|t| {
                let blocks: Vec<KronRep> =
                    t.iter().map(|(p, s)| standard_reps(&StdRep::Regular(p.clone(), *s)).expect("valid block")).collect();
                KronRep::sum_all(&blocks).to_rep()
            })
            .collect()
    } else {
        types
            .iter()
            .map(|t| {
                let blocks: Vec<QMat> =
                    t.iter().map(|(p, s)| jordan_block(p.finite().expect("finite points"), *s)).collect();
                Rep::loop_module(QMat::block_diag(&blocks.iter().collect::<Vec<_>>()))
            })
            .collect()
    }
}

/// The subrepresentation generated by one vector at one vertex.
fn generated(m: &Rep, v: usize, vec: &[crate::exact::Rat]) -> Vec<QMat> {
    let mut sub: Vec<QMat> = m.dims.iter().map(|&d| QMat::zeros(d, 0)).collect();
    sub[v] = QMat::column(vec.to_vec());
    loop {
        let mut grown = false;
        for (a, &(s, t)) in m.quiver.arrows().iter().enumerate() {
            let next = sub[t].hstack(&m.maps[a].mul(&sub[s])).column_space();
            if next.cols() > sub[t].cols() {
                sub[t] = next;
                grown = true;
            }
        }
        if !grown {
            return sub;
        }
    }
}

/// Searches comodules of local dimension `1..=budget` and their cyclic submodules on basis
/// vectors. Over the localization family a search without witness is followed by the
/// certification `Tor₁(U, M) = 0` on `corpus`.
pub fn flatness_witness_search(inst: &EpiInstance, budget: usize, corpus: &[FPModPID]) -> Result<FlatOutcome, FunctorError> {
    let mut searched = 0;
    for n in 1..=budget {
        for m in comodules(inst, n) {
            for v in 0..m.dims.len() {
                for i in 0..m.dims[v] {
                    let e: Vec<_> = (0..m.dims[v])
                        .map(|j| if j == i { crate::exact::Rat::one() } else { crate::exact::Rat::zero() })
                        .collect();
                    let (w, emb) = m.subrep(&generated(&m, v, &e));
                    searched += 1;
                    if let Some(witness) = verify_witness(inst, &m, &w, &emb)? {
                        return Ok(FlatOutcome::Witness { witness, searched });
                    }
                }
            }
        }
    }
    if budget == 0 || inst.is_kron() {
        return Ok(FlatOutcome::NotFound { searched });
    }
    for p in corpus {
        let v = ModValue::FiniteDim { module: FinMod::Pid(p.clone()) };
        if !tor_ext_u(inst, &v, Functor::Tor1)?.value.is_zero() {
            return Ok(FlatOutcome::NotFound { searched });
        }
    }
    Ok(FlatOutcome::FlatCertified { searched, corpus_size: corpus.len() })
}

/// `ℚ[x]/(x − μ)ᵉ` for one point, used by corpus builders.
pub fn local_cyclic(mu: &crate::exact::Rat, e: usize) -> FPModPID {
    FPModPID::cyclic(&Poly::linear(mu).pow(e))
}
