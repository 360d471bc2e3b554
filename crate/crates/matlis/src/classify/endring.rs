//! Sampled commutativity of `End(K)` over the localization family.
//!
//! A tower of endomorphisms `φ_n` of the levels `K_n`, compatible with the inclusions
//! `K_n ⊂ K_{n+1}`, is drawn at the top level and restricted; `K_n` is `ker sⁿ` inside every
//! higher level, so it is stable under any endomorphism there.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exact::{subspace, QMat, Rat};
use crate::functor::FunctorError;
use crate::instances::{EpiInstance, Target};
use crate::quiver::rep::hom_basis;
use crate::quiver::Rep;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndRingVerdict {
    pub levels: usize,
    pub samples: usize,
    pub pairs_checked: usize,
    /// Every sample restricts to every level and commutes with the inclusions.
    pub compatible: bool,
    pub all_commute: bool,
    /// Every sample preserves the component of each point.
    pub block_diagonal: bool,
    /// `(level, i, j)` of the first non-commuting pair.
    pub first_failure: Option<(usize, usize, usize)>,
}

impl EndRingVerdict {
    pub fn ok(&self) -> bool {
        self.compatible && self.all_commute && self.block_diagonal
    }
}

/// `K_n` as a `ℚ[x]`-module and the inclusion from level `n − 1`.
fn level(inst: &EpiInstance, n: usize) -> (QMat, QMat) {
    let t = inst.truncate(Target::KAsLeftRModule, n);
    let m = t.left_module().expect("K levels are closed under x");
    (m.maps[0].clone(), t.include[0][0].clone())
}

/// `x` on `K_n`, multiplication by `1 + x`, and `samples` random endomorphisms of the top level.
fn sample_tops(x: &QMat, samples: usize, seed: u64) -> Vec<QMat> {
    let d = x.rows();
    let mut out = vec![x.clone(), QMat::identity(d).add(x)];
    let m = Rep::loop_module(x.clone());
    let basis = hom_basis(&m, &m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut acc = QMat::zeros(d, d);
        for b in &basis {
            acc = acc.add(&b.comps[0].scale(&Rat::int(rng.gen_range(-3..=3))));
        }
        out.push(acc);
    }
    out
}

pub fn end_ring_commutativity_check(
    inst: &EpiInstance,
    n_levels: usize,
    n_samples: usize,
    seed: u64,
) -> Result<EndRingVerdict, FunctorError> {
    if inst.is_kron() {
        return Err(FunctorError::Precondition("endomorphism towers are sampled over the localization family".into()));
    }
    let top = n_levels.max(1);
    let (x_top, _) = level(inst, top);
    let tops = sample_tops(&x_top, n_samples, seed);
    // ι_n: K_n → K_top
    let mut incl = vec![QMat::identity(x_top.rows()); top + 1];
    for n in (1..top).rev() {
        incl[n] = incl[n + 1].mul(&level(inst, n + 1).1);
    }
    let mut compatible = true;
    let mut first_failure = None;
    let mut pairs_checked = 0;
    let mut below: Vec<Option<QMat>> = vec![None; tops.len()];
    for n in 1..=top {
        let i = &incl[n];
        let restricted: Vec<Option<QMat>> = tops.iter().map(|phi| i.solve_mat(&phi.mul(i))).collect();
        for (k, r) in restricted.iter().enumerate() {
            match (r, &below[k]) {
                (None, _) => compatible = false,
                (Some(r), Some(lo)) => {
                    let step = level(inst, n).1;
                    compatible &= r.mul(&step) == step.mul(lo);
                }
                _ => {}
            }
        }
        let rs: Vec<&QMat> = restricted.iter().flatten().collect();
        for a in 0..rs.len() {
            for b in a + 1..rs.len() {
                pairs_checked += 1;
                if first_failure.is_none() && rs[a].mul(rs[b]) != rs[b].mul(rs[a]) {
                    first_failure = Some((n, a, b));
                }
            }
        }
        below = restricted;
    }
    let d = x_top.rows();
    let components: Vec<QMat> = inst
        .poles()
        .iter()
        .map(|y| x_top.sub(&QMat::scalar(d, y)).pow(d).kernel())
        .collect();
    let block_diagonal =
        tops.iter().all(|phi| components.iter().all(|c| subspace::is_subspace(&phi.mul(c), c)));
    Ok(EndRingVerdict {
        levels: top,
        samples: tops.len(),
        pairs_checked,
        compatible,
        all_commute: first_failure.is_none(),
        block_diagonal,
        first_failure,
    })
}
