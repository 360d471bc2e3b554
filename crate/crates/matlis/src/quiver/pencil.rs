//! Kronecker canonical form of the pencil `(F, G)`.
//!
//! Minimal-index blocks are sized by Wong sequences; regular blocks at finite points come
//! from the elementary divisors of `G − tF`, those at `∞` from the `t`-adic valuations of
//! the invariant factors of `F − tG`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::kron::{hom_ext_rep, standard_reps, KronRep, Point, RepMap, StdRep};
use super::QuiverError;
use crate::exact::{smith_normal_form, subspace, Poly, PolyMat, QMat, Rat};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PencilBlock {
    Preprojective { n: usize },
    Regular { lambda: Point, size: usize },
    Preinjective { n: usize },
}

impl PencilBlock {
    pub fn std_rep(&self) -> StdRep {
        match self {
            PencilBlock::Preprojective { n } => StdRep::Preprojective(*n),
            PencilBlock::Regular { lambda, size } => StdRep::Regular(lambda.clone(), *size),
            PencilBlock::Preinjective { n } => StdRep::Preinjective(*n),
        }
    }

    pub fn rep(&self) -> KronRep {
        standard_reps(&self.std_rep()).expect("block labels are valid kinds")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PencilBlocks {
    /// Sorted by label; multiplicities positive.
    pub blocks: Vec<(PencilBlock, usize)>,
    /// Isomorphism from the standard sum onto the input.
    pub change_of_basis: RepMap,
}

impl PencilBlocks {
    /// The direct sum of the labeled blocks, in order.
    pub fn standard_sum(&self) -> KronRep {
        let reps: Vec<KronRep> =
            self.blocks.iter().flat_map(|(b, m)| std::iter::repeat(b.rep()).take(*m)).collect();
        KronRep::sum_all(&reps)
    }

    pub fn reassemble(&self) -> KronRep {
        self.standard_sum().conjugate(&self.change_of_basis).expect("change of basis is invertible")
    }
}

/// Block counts without an explicit base change. Regular blocks at non-rational points are
/// only counted by dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PencilProfile {
    pub preprojective: BTreeMap<usize, usize>,
    pub preinjective: BTreeMap<usize, usize>,
    pub regular: BTreeMap<Point, BTreeMap<usize, usize>>,
    pub irrational_dim: usize,
}

impl PencilProfile {
    pub fn preprojective_count(&self) -> usize {
        self.preprojective.values().sum()
    }

    pub fn preinjective_count(&self) -> usize {
        self.preinjective.values().sum()
    }

    pub fn regular_dim_at(&self, p: &Point) -> usize {
        self.regular.get(p).map_or(0, |m| m.iter().map(|(s, c)| s * c).sum())
    }

    pub fn regular_dim(&self) -> usize {
        self.regular.keys().map(|p| self.regular_dim_at(p)).sum::<usize>() + self.irrational_dim
    }

    pub fn blocks(&self) -> Vec<(PencilBlock, usize)> {
        let mut v: Vec<(PencilBlock, usize)> = Vec::new();
        v.extend(self.preprojective.iter().map(|(&n, &c)| (PencilBlock::Preprojective { n }, c)));
        for (p, sizes) in &self.regular {
            v.extend(sizes.iter().map(|(&size, &c)| (PencilBlock::Regular { lambda: p.clone(), size }, c)));
        }
        v.extend(self.preinjective.iter().map(|(&n, &c)| (PencilBlock::Preinjective { n }, c)));
        v
    }
}

/// `dim(Xᵢ ∩ Z_∞)` for `i = 0, 1, …` where `X₀ = 0`, `Xᵢ₊₁ = F⁻¹(G·Xᵢ)` and `Z` is the
/// same sequence with `F`, `G` swapped; on a preinjective block of dimension `(ε+1, ε)`
/// this is `min(i, ε+1)` and it vanishes on every other indecomposable.
fn preinjective_sizes(m: &KronRep) -> BTreeMap<usize, usize> {
    let wong = |f: &QMat, g: &QMat| -> Vec<QMat> {
        let mut seq = vec![QMat::zeros(m.d1, 0)];
        loop {
            let last = seq.last().unwrap();
            let next = subspace::preimage(f, &subspace::image(g, last));
            let grown = next.cols() > last.cols();
            seq.push(next);
            if !grown {
                return seq;
            }
        }
    };
    let xs = wong(&m.f, &m.g);
    let z_inf = wong(&m.g, &m.f).pop().unwrap();
    let c: Vec<usize> = xs.iter().map(|x| subspace::intersect(x, &z_inf).cols()).collect();
    // at_least[i] = number of blocks with ε + 1 ≥ i, for i ≥ 1
    let at_least = |i: usize| -> usize {
        let get = |k: usize| c.get(k).copied().unwrap_or(*c.last().unwrap());
        get(i) - get(i - 1)
    };
    let mut out = BTreeMap::new();
    for e in 0..c.len() {
        let mult = at_least(e + 1) - at_least(e + 2);
        if mult > 0 {
            out.insert(e, mult);
        }
    }
    out
}

fn insert_block(map: &mut BTreeMap<Point, BTreeMap<usize, usize>>, p: Point, size: usize) {
    *map.entry(p).or_default().entry(size).or_default() += 1;
}

pub fn pencil_profile(m: &KronRep) -> Result<PencilProfile, QuiverError> {
    let preinjective = preinjective_sizes(m);
    let preprojective = preinjective_sizes(&m.dual());
    let mut regular = BTreeMap::new();
    let mut irrational_dim = 0;

    let finite = smith_normal_form(&PolyMat::linear(&m.g, &m.f.neg()));
    for d in finite.diag.iter().filter(|d| !d.is_constant()) {
        let roots = d.rational_roots().ok_or(QuiverError::RootSearch)?;
        let mut rest = d.clone();
        for (lambda, k) in roots {
            rest = rest.div_exact(&Poly::linear(&lambda).pow(k));
            insert_block(&mut regular, Point::Finite(lambda), k);
        }
        irrational_dim += rest.degree().unwrap_or(0);
    }
    let infinite = smith_normal_form(&PolyMat::linear(&m.f, &m.g.neg()));
    for d in &valuations_at_zero(&infinite.diag) {
        insert_block(&mut regular, Point::Infinity, *d);
    }

    let prof = PencilProfile { preprojective, preinjective, regular, irrational_dim };
    let d1: usize = prof.preprojective.iter().map(|(n, c)| n * c).sum::<usize>()
        + prof.preinjective.iter().map(|(n, c)| (n + 1) * c).sum::<usize>()
        + prof.regular_dim();
    let d2: usize = prof.preprojective.iter().map(|(n, c)| (n + 1) * c).sum::<usize>()
        + prof.preinjective.iter().map(|(n, c)| n * c).sum::<usize>()
        + prof.regular_dim();
    if (d1, d2) != m.dims() {
        return Err(QuiverError::Internal(format!("block dimensions ({d1},{d2}) do not match {:?}", m.dims())));
    }
    Ok(prof)
}

fn valuations_at_zero(diag: &[Poly]) -> Vec<usize> {
    diag.iter().map(Poly::x_valuation).filter(|&v| v > 0).collect()
}

/// The block decomposition of `m` with an explicit isomorphism from the standard sum.
pub fn pencil_decompose(m: &KronRep) -> Result<PencilBlocks, QuiverError> {
    let prof = pencil_profile(m)?;
    if prof.irrational_dim > 0 {
        return Err(QuiverError::IrrationalEigenvalue);
    }
    let blocks = prof.blocks();
    let proto = PencilBlocks { blocks, change_of_basis: RepMap::identity(m) };
    let s = proto.standard_sum();
    let change_of_basis = find_iso(&s, m).ok_or_else(|| QuiverError::Internal("no isomorphism found".into()))?;
    Ok(PencilBlocks { change_of_basis, ..proto })
}

/// An isomorphism `s → m` from a seeded random combination of a Hom basis, when one exists.
/// Isomorphisms form a dense open subset of `Hom(s, m)` whenever `s ≅ m`.
pub fn find_iso(s: &KronRep, m: &KronRep) -> Option<RepMap> {
    if s.dims() != m.dims() {
        return None;
    }
    if m.is_zero() {
        return Some(RepMap::identity(m));
    }
    let basis = hom_ext_rep(s, m).hom_basis;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for attempt in 0..24 {
        let bound = if attempt < 4 { 3 } else { 1000 };
        let mut acc = RepMap::zero(s, m);
        for b in &basis {
            let c = Rat::int(rng.gen_range(-bound..=bound));
            acc = RepMap { a1: acc.a1.add(&b.a1.scale(&c)), a2: acc.a2.add(&b.a2.scale(&c)) };
        }
        if acc.is_iso() {
            return Some(acc);
        }
    }
    None
}

pub fn are_isomorphic(a: &KronRep, b: &KronRep) -> bool {
    find_iso(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std(s: &str) -> KronRep {
        standard_reps(&s.parse().unwrap()).unwrap()
    }

    fn labels(m: &KronRep) -> Vec<(PencilBlock, usize)> {
        let pb = pencil_decompose(m).unwrap();
        assert_eq!(&pb.reassemble(), m);
        pb.blocks
    }

    fn reg(l: Point, size: usize) -> PencilBlock {
        PencilBlock::Regular { lambda: l, size }
    }

    #[test]
    fn split_regular() {
        let m = std("regular(2,1)").direct_sum(&std("regular(inf,1)"));
        assert_eq!(labels(&m), vec![(reg(Point::int(2), 1), 1), (reg(Point::Infinity, 1), 1)]);
    }

    #[test]
    fn nilpotent_f_is_a_block_at_infinity() {
        let m = KronRep::from_ints(2, 2, &[0, 1, 0, 0], &[1, 0, 0, 1]);
        assert_eq!(labels(&m), vec![(reg(Point::Infinity, 2), 1)]);
    }

    #[test]
    fn minimal_index_blocks() {
        assert_eq!(labels(&std("simple_injective")), vec![(PencilBlock::Preinjective { n: 0 }, 1)]);
        assert_eq!(labels(&std("simple_projective")), vec![(PencilBlock::Preprojective { n: 0 }, 1)]);
        let m = KronRep::sum_all(&[std("preinjective(2)"), std("preprojective(1)"), std("preinjective(0)")]);
        assert_eq!(
            labels(&m),
            vec![
                (PencilBlock::Preprojective { n: 1 }, 1),
                (PencilBlock::Preinjective { n: 0 }, 1),
                (PencilBlock::Preinjective { n: 2 }, 1)
            ]
        );
    }

    #[test]
    fn conjugated_mixture() {
        let m = KronRep::sum_all(&[std("regular(0,2)"), std("regular(0,1)"), std("preprojective(2)"), std("regular(inf,1)")]);
        let c = RepMap::new(
            QMat::from_fn(6, 6, |i, j| Rat::int(((i * 7 + j * 3) % 5) as i64 + if i == j { 9 } else { 0 })),
            QMat::from_fn(7, 7, |i, j| Rat::int(((i * 2 + j * 5) % 3) as i64 - if i == j { 8 } else { 0 })),
        );
        let mc = m.conjugate(&c).unwrap();
        let got = labels(&mc);
        assert_eq!(
            got,
            vec![
                (PencilBlock::Preprojective { n: 2 }, 1),
                (reg(Point::int(0), 1), 1),
                (reg(Point::int(0), 2), 1),
                (reg(Point::Infinity, 1), 1)
            ]
        );
    }

    #[test]
    fn irrational_points_are_reported() {
        // x² = 2 on the regular part
        let m = KronRep::from_ints(2, 2, &[1, 0, 0, 1], &[0, 2, 1, 0]);
        assert!(matches!(pencil_decompose(&m), Err(QuiverError::IrrationalEigenvalue)));
        assert_eq!(pencil_profile(&m).unwrap().irrational_dim, 2);
    }
}
