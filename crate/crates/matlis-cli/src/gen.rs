//! Seeded random modules. Every case draws from its own stream `(seed, index)`, so a case can be
//! regenerated without the ones before it.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use matlis::exact::{FPModPID, Poly, QMat, Rat};
use matlis::functor::value::jordan_block;
use matlis::functor::FunctorError;
use matlis::instances::EpiInstance;
use matlis::quiver::rep::hom_basis;
use matlis::quiver::{standard_reps, KronRep, Morphism, Point, Quiver, Rep, RepMap, StdRep};

pub fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index as u64);
    r
}

/// A serialized finite module: a Kronecker representation, a loop operator, or a presentation
/// over ℚ[x].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Module {
    Kron(KronRep),
    Loop(QMat),
    Pid(FPModPID),
}

impl Module {
    pub fn from_rep(r: &Rep) -> Module {
        match r.quiver {
            Quiver::Kronecker => Module::Kron(KronRep::from_rep(r)),
            Quiver::Loop => Module::Loop(r.maps[0].clone()),
        }
    }

    pub fn to_rep(&self) -> Result<Rep, FunctorError> {
        match self {
            Module::Kron(k) => Ok(k.to_rep()),
            Module::Loop(x) if x.is_square() => Ok(Rep::loop_module(x.clone())),
            Module::Loop(_) => Err(FunctorError::Precondition("loop operator must be square".into())),
            Module::Pid(p) => p
                .action_matrix()
                .map(Rep::loop_module)
                .ok_or_else(|| FunctorError::Precondition("module is not of finite length".into())),
        }
    }
}

/// Entries drawn from `{−2, …, 2} ∪ {±1/2}`, zero with probability about one half.
pub fn small_rat(rng: &mut impl Rng) -> Rat {
    if rng.gen_bool(0.5) {
        return Rat::zero();
    }
    match rng.gen_range(0..6) {
        0 => Rat::new(1, 2),
        1 => Rat::new(-1, 2),
        k => Rat::int([-2, -1, 1, 2][k - 2]),
    }
}

pub fn random_matrix(rng: &mut impl Rng, r: usize, c: usize) -> QMat {
    QMat::from_fn(r, c, |_, _| small_rat(rng))
}

/// `P·L·D·U` with unitriangular `L`, `U`, a nonzero diagonal `D` and a permutation `P`.
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> QMat {
    let l = QMat::from_fn(n, n, |i, j| if i == j { Rat::one() } else if i > j { small_rat(rng) } else { Rat::zero() });
    let u = QMat::from_fn(n, n, |i, j| if i == j { Rat::one() } else if i < j { small_rat(rng) } else { Rat::zero() });
    let d = QMat::from_fn(n, n, |i, j| if i == j { Rat::int([1, -1, 2][rng.gen_range(0..3)]) } else { Rat::zero() });
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let p = QMat::from_fn(n, n, |i, j| if perm[i] == j { Rat::one() } else { Rat::zero() });
    p.mul(&l).mul(&d).mul(&u)
}

pub fn scramble(rng: &mut impl Rng, m: &KronRep) -> KronRep {
    let c = RepMap::new(random_invertible(rng, m.d1), random_invertible(rng, m.d2));
    m.conjugate(&c).expect("random base change is invertible")
}

/// Points off the instance's own, used for blocks that are `U`-modules.
fn off_points(inst: &EpiInstance) -> Vec<Point> {
    [0, 1, -1, 2, 3, 5].into_iter().map(Point::int).filter(|p| !inst.points().contains(p)).collect()
}

/// A block `x² = 2`: regular with no rational eigenvalue.
fn irrational_block() -> KronRep {
    KronRep::new(QMat::identity(2), QMat::from_ints(2, 2, &[0, 2, 1, 0])).expect("2x2 pencil")
}

/// A direct sum of indecomposables with `d1, d2 ≤ bound`, conjugated by a random base change.
/// Regular blocks sit at the instance's points or off them; non-regular blocks of both kinds
/// appear, so every class predicate is hit in both truth values.
pub fn structured_kron(rng: &mut impl Rng, inst: &EpiInstance, bound: usize) -> KronRep {
    let off = off_points(inst);
    let mut m = KronRep::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let block = match rng.gen_range(0..10) {
            0 | 1 => standard_reps(&StdRep::Preprojective(rng.gen_range(0..=2))).expect("block"),
            2 | 3 => standard_reps(&StdRep::Preinjective(rng.gen_range(0..=2))).expect("block"),
            4..=6 => {
                let p = inst.points().choose(rng).expect("nonempty points").clone();
                standard_reps(&StdRep::Regular(p, rng.gen_range(1..=2))).expect("block")
            }
            7 | 8 => standard_reps(&StdRep::Regular(off.choose(rng).expect("off points").clone(), rng.gen_range(1..=2)))
                .expect("block"),
            _ => irrational_block(),
        };
        if m.d1 + block.d1 <= bound && m.d2 + block.d2 <= bound {
            m = m.direct_sum(&block);
        }
    }
    scramble(rng, &m)
}

/// Arbitrary `F`, `G` with `d1, d2 ≤ bound`.
pub fn unstructured_kron(rng: &mut impl Rng, bound: usize) -> KronRep {
    let (d1, d2) = (rng.gen_range(0..=bound), rng.gen_range(0..=bound));
    KronRep::new(random_matrix(rng, d2, d1), random_matrix(rng, d2, d1)).expect("shapes match")
}

/// Even draws are structured, odd draws unstructured.
pub fn mixed_kron(rng: &mut impl Rng, inst: &EpiInstance, bound: usize) -> KronRep {
    if rng.gen_bool(0.5) {
        structured_kron(rng, inst, bound)
    } else {
        unstructured_kron(rng, bound)
    }
}

/// A comodule over a Kronecker instance: regular blocks at its points, total dimension
/// `d1 + d2 ≤ bound`.
pub fn kron_comodule(rng: &mut impl Rng, inst: &EpiInstance, bound: usize) -> KronRep {
    let mut m = KronRep::zero();
    let half = bound / 2;
    for _ in 0..rng.gen_range(1..=3) {
        let s = rng.gen_range(1..=half.max(1));
        if m.d1 + s > half {
            continue;
        }
        let p = inst.points().choose(rng).expect("nonempty points").clone();
        m = m.direct_sum(&standard_reps(&StdRep::Regular(p, s)).expect("block"));
    }
    scramble(rng, &m)
}

fn primary(rng: &mut impl Rng, mus: &[Rat], with_irreducible: bool, room: usize) -> Option<(QMat, usize)> {
    if with_irreducible && room >= 2 && rng.gen_bool(0.2) {
        let p = if rng.gen_bool(0.5) { Poly::from_ints(&[1, 0, 1]) } else { Poly::from_ints(&[-2, 0, 1]) };
        return Some((matlis::exact::fpmod::companion(&p), 2));
    }
    let e = rng.gen_range(1..=room.min(3));
    let mu = mus.choose(rng)?;
    Some((jordan_block(mu, e), e))
}

/// A finite-length ℚ[x]-module of dimension `≤ bound`, in a random basis. With `local` all
/// eigenvalues lie at the instance's points; otherwise off-point and irreducible factors mix in.
pub fn pid_module(rng: &mut impl Rng, inst: &EpiInstance, bound: usize, local: bool) -> Rep {
    let mut mus = inst.poles();
    if !local {
        mus.extend([1, -1, 2, 3].into_iter().map(Rat::int).filter(|m| !inst.poles().contains(m)));
    }
    let mut blocks = Vec::new();
    let mut dim = 0;
    for _ in 0..rng.gen_range(0..=4) {
        if dim >= bound {
            break;
        }
        if let Some((b, d)) = primary(rng, &mus, !local, bound - dim) {
            blocks.push(b);
            dim += d;
        }
    }
    let x = QMat::block_diag(&blocks.iter().collect::<Vec<_>>());
    let p = random_invertible(rng, dim);
    let pi = p.inverse().expect("invertible");
    Rep::loop_module(p.mul(&x).mul(&pi))
}

/// A finitely generated ℚ[x]-module with free rank `≤ 2` and torsion of dimension `≤ bound`.
pub fn pid_presentation(rng: &mut impl Rng, inst: &EpiInstance, bound: usize) -> FPModPID {
    let torsion = FPModPID::from_action(&pid_module(rng, inst, bound, false).maps[0]);
    FPModPID::free(rng.gen_range(0..=2)).direct_sum(&torsion)
}

/// Any module over the instance's ring.
pub fn any_module(rng: &mut impl Rng, inst: &EpiInstance, bound: usize) -> Rep {
    if inst.is_kron() {
        mixed_kron(rng, inst, bound).to_rep()
    } else {
        pid_module(rng, inst, bound, false)
    }
}

/// A finite-dimensional comodule, which is also a contramodule.
pub fn comodule(rng: &mut impl Rng, inst: &EpiInstance, bound: usize) -> Rep {
    if inst.is_kron() {
        kron_comodule(rng, inst, bound).to_rep()
    } else {
        pid_module(rng, inst, bound, true)
    }
}

/// A random integer combination of a Hom basis.
pub fn random_morphism(rng: &mut impl Rng, m: &Rep, n: &Rep) -> Morphism {
    hom_basis(m, n)
        .iter()
        .fold(Morphism::zero(m, n), |acc, b| acc.add(&b.scale(&Rat::int(rng.gen_range(-2..=2)))))
}

/// A random vector of the given length.
pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<Rat> {
    (0..n).map(|_| small_rat(rng)).collect()
}

/// A random invertible base change per vertex.
pub fn random_base_change(rng: &mut impl Rng, m: &Rep) -> Vec<QMat> {
    m.dims.iter().map(|&d| random_invertible(rng, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use matlis::classify::{classify, Path};

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let inst = EpiInstance::kron(&[2]);
        let a = mixed_kron(&mut case_rng(9, 3), &inst, 4);
        let b = mixed_kron(&mut case_rng(9, 3), &inst, 4);
        assert_eq!(a, b);
        let draws: Vec<KronRep> = (0..8).map(|i| mixed_kron(&mut case_rng(9, i), &inst, 4)).collect();
        assert!(draws.iter().any(|d| d != &a));
    }

    #[test]
    fn invertible_draws_are_invertible() {
        let mut rng = case_rng(1, 0);
        for n in 0..6 {
            assert!(random_invertible(&mut rng, n).is_invertible());
        }
    }

    #[test]
    fn comodule_generators_produce_comodules() {
        for inst in [EpiInstance::kron(&[2]), EpiInstance::cpid(&[0, 1])] {
            for i in 0..10 {
                let m = comodule(&mut case_rng(4, i), &inst, 6);
                assert!(m.total_dim() <= 6);
                assert!(classify(&inst, &m, Path::Structural).unwrap().comodule);
            }
        }
    }

    #[test]
    fn structured_draws_hit_both_truth_values() {
        let inst = EpiInstance::kron(&[]);
        let flags: Vec<bool> = (0..40)
            .map(|i| classify(&inst, &structured_kron(&mut case_rng(5, i), &inst, 5).to_rep(), Path::Structural).unwrap().torsion)
            .collect();
        assert!(flags.contains(&true) && flags.contains(&false));
    }

    #[test]
    fn modules_round_trip_through_json() {
        let inst = EpiInstance::cpid(&[0]);
        let m = Module::from_rep(&pid_module(&mut case_rng(2, 0), &inst, 4, false));
        let back: Module = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
