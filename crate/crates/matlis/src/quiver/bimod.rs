//! Bimodules over a path algebra, modelled as representations of the product quiver.
//!
//! `B[i][j]` is `e_i·B·e_j`. A left arrow `a: s → t` maps `B[s][j] → B[t][j]`; a right
//! arrow `b: s → t` maps `B[i][t] → B[i][s]`.

use super::rep::{add_block, offsets, Quiver, Rep};
use crate::exact::QMat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimod {
    pub quiver: Quiver,
    pub dims: Vec<Vec<usize>>,
    /// `left[a][j]`.
    pub left: Vec<Vec<QMat>>,
    /// `right[i][b]`.
    pub right: Vec<Vec<QMat>>,
}

/// A right representation: `maps[b]` is `dims[t(b)] → dims[s(b)]`, stored `dims[s] × dims[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightRep {
    pub quiver: Quiver,
    pub dims: Vec<usize>,
    pub maps: Vec<QMat>,
}

impl Bimod {
    pub fn zero(quiver: Quiver) -> Bimod {
        let v = quiver.vertices();
        let arrows = quiver.arrows();
        Bimod {
            quiver,
            dims: vec![vec![0; v]; v],
            left: arrows.iter().map(|_| (0..v).map(|_| QMat::zeros(0, 0)).collect()).collect(),
            right: (0..v).map(|_| arrows.iter().map(|_| QMat::zeros(0, 0)).collect()).collect(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().flatten().sum()
    }

    pub fn row(&self, i: usize) -> RightRep {
        RightRep { quiver: self.quiver, dims: self.dims[i].clone(), maps: self.right[i].clone() }
    }

    pub fn col(&self, j: usize) -> Rep {
        let dims = self.dims.iter().map(|r| r[j]).collect();
        let maps = self.left.iter().map(|per_j| per_j[j].clone()).collect();
        Rep::new(self.quiver, dims, maps)
    }

    pub fn direct_sum(&self, other: &Bimod) -> Bimod {
        let v = self.quiver.vertices();
        let na = self.quiver.arrows().len();
        Bimod {
            quiver: self.quiver,
            dims: (0..v).map(|i| (0..v).map(|j| self.dims[i][j] + other.dims[i][j]).collect()).collect(),
            left: (0..na)
                .map(|a| (0..v).map(|j| QMat::block_diag(&[&self.left[a][j], &other.left[a][j]])).collect())
                .collect(),
            right: (0..v)
                .map(|i| (0..na).map(|b| QMat::block_diag(&[&self.right[i][b], &other.right[i][b]])).collect())
                .collect(),
        }
    }

    /// Left and right actions commute: `right[t(a)][b]·left[a][t(b)] = left[a][s(b)]·right[s(a)][b]`.
    pub fn actions_commute(&self) -> bool {
        let arrows = self.quiver.arrows();
        arrows.iter().enumerate().all(|(a, &(sa, ta))| {
            arrows.iter().enumerate().all(|(b, &(sb, tb))| {
                self.right[ta][b].mul(&self.left[a][tb]) == self.left[a][sb].mul(&self.right[sa][b])
            })
        })
    }
}

/// The complex `⊕_b W_{t(b)} ⊗ M_{s(b)} → ⊕_v W_v ⊗ M_v`,
/// `w ⊗ m ↦ (w·b) ⊗ m − w ⊗ (b·m)`, row-major in each tensor block.
/// Its homology is `Tor₁(W, M)` and `W ⊗ M`.
pub fn tensor_differential(w: &RightRep, m: &Rep) -> QMat {
    let q = m.quiver;
    let arrows = q.arrows();
    let voff = offsets(w.dims.iter().zip(&m.dims).map(|(a, b)| a * b));
    let aoff = offsets(arrows.iter().map(|&(s, t)| w.dims[t] * m.dims[s]));
    let mut d = QMat::zeros(*voff.last().unwrap(), *aoff.last().unwrap());
    for (b, &(s, t)) in arrows.iter().enumerate() {
        add_block(&mut d, voff[s], aoff[b], &w.maps[b].kron(&QMat::identity(m.dims[s])));
        add_block(&mut d, voff[t], aoff[b], &QMat::identity(w.dims[t]).kron(&m.maps[b]).neg());
    }
    d
}

/// Block sizes of the degree-1 and degree-0 terms of `tensor_differential`.
pub fn tensor_blocks(w: &RightRep, m: &Rep) -> (Vec<usize>, Vec<usize>) {
    let c1 = m.quiver.arrows().iter().map(|&(s, t)| w.dims[t] * m.dims[s]).collect();
    let c0 = w.dims.iter().zip(&m.dims).map(|(a, b)| a * b).collect();
    (c1, c0)
}

/// Block sizes of the degree-0 and degree-1 terms of the Hom complex `Hom(b, m)`.
pub fn hom_blocks(b: &Rep, m: &Rep) -> (Vec<usize>, Vec<usize>) {
    let c0 = b.dims.iter().zip(&m.dims).map(|(x, y)| x * y).collect();
    let c1 = m.quiver.arrows().iter().map(|&(s, t)| b.dims[s] * m.dims[t]).collect();
    (c0, c1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Rat, Subquotient};

    /// `ℚ[x]/(x^n)` as a bimodule over ℚ[x].
    fn truncated(n: usize) -> Bimod {
        let x = QMat::from_fn(n, n, |i, j| if i == j + 1 { Rat::one() } else { Rat::zero() });
        Bimod { quiver: Quiver::Loop, dims: vec![vec![n]], left: vec![vec![x.clone()]], right: vec![vec![x]] }
    }

    #[test]
    fn tensor_over_a_loop() {
        // Tor over ℚ[x] of ℚ[x]/x³ and ℚ[x]/x² is ℚ[x]/x² in both degrees.
        let b = truncated(3);
        assert!(b.actions_commute());
        let m = truncated(2).col(0);
        let d = tensor_differential(&b.row(0), &m);
        let h1 = Subquotient::kernel(&d);
        let h0 = Subquotient::cokernel(&d);
        assert_eq!((h1.dim(), h0.dim()), (2, 2));
    }

    #[test]
    fn tensor_with_the_kronecker_regular_module() {
        // Rows of R: e₂₂R is k at vertex 0; e₁₁R is k⊕kx at vertex 0 and k at vertex 1.
        let w0 = RightRep { quiver: Quiver::Kronecker, dims: vec![1, 0], maps: vec![QMat::zeros(1, 0), QMat::zeros(1, 0)] };
        let w1 = RightRep {
            quiver: Quiver::Kronecker,
            dims: vec![2, 1],
            maps: vec![QMat::from_ints(2, 1, &[1, 0]), QMat::from_ints(2, 1, &[0, 1])],
        };
        let m = Rep::new(
            Quiver::Kronecker,
            vec![2, 1],
            vec![QMat::from_ints(1, 2, &[1, 0]), QMat::from_ints(1, 2, &[0, 1])],
        );
        // e_i R ⊗ M ≅ M_i and Tor₁ vanishes.
        for (w, expect) in [(w0, 2), (w1, 1)] {
            let d = tensor_differential(&w, &m);
            assert_eq!(Subquotient::kernel(&d).dim(), 0);
            assert_eq!(Subquotient::cokernel(&d).dim(), expect);
        }
    }
}
