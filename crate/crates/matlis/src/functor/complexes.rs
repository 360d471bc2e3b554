//! Chain complexes of one component `K^λ_n` against a finite-dimensional module `M`.
//!
//! Tor side, row `i`: `C₁ = ⊕_b K[i][t(b)] ⊗ M_{s(b)} → C₀ = ⊕_v K[i][v] ⊗ M_v`, together
//! with `∂: C₁ → M_i`, the `R`-part of the differential of the same complex for `U`.
//! Hom side, column `j`: `C⁰ = ⊕_i Hom(K[i][j], M_i) → C¹ = ⊕_a Hom(K[s(a)][j], M_{t(a)})`,
//! together with `δ: M_j → C¹`, the differential of `m ↦ (r ↦ r·m)` on the lifted basis.
//!
//! Replacing the `R`-part of the `U`-complex by `M` itself (quasi-isomorphic, as `R` is free)
//! gives the cones `[∂; d]` and `[d | δ]` whose homology is `Tor(U_n, M)` and `Ext(U_n, M)`.

use crate::exact::QMat;
use crate::instances::{EpiInstance, KPiece, Leak};
use crate::quiver::bimod::{hom_blocks, tensor_blocks, tensor_differential};
use crate::quiver::rep::{add_block, hom_differential, offsets};
use crate::quiver::Rep;

pub(crate) struct TorComplex {
    pub d: QMat,
    pub conn: QMat,
}

pub(crate) struct HomComplex {
    pub d: QMat,
    pub delta: QMat,
}

pub(crate) fn leak_row(l: &Leak) -> QMat {
    QMat::from_rows(vec![l.coef.clone()], l.coef.len())
}

pub(crate) fn tor_complex(inst: &EpiInstance, p: &KPiece, i: usize, m: &Rep) -> TorComplex {
    let w = p.bimod.row(i);
    let d = tensor_differential(&w, m);
    let (c1, _) = tensor_blocks(&w, m);
    let off = offsets(c1.into_iter());
    let mut conn = QMat::zeros(m.dims[i], *off.last().unwrap());
    for (b, leaks) in p.leak_right[i].iter().enumerate() {
        for l in leaks {
            add_block(&mut conn, 0, off[b], &leak_row(l).kron(&inst.r_action(&l.r, m)));
        }
    }
    TorComplex { d, conn }
}

pub(crate) fn hom_complex(inst: &EpiInstance, p: &KPiece, j: usize, m: &Rep) -> HomComplex {
    let b = p.bimod.col(j);
    let d = hom_differential(&b, m);
    let (_, c1) = hom_blocks(&b, m);
    let off = offsets(c1.into_iter());
    let mut delta = QMat::zeros(*off.last().unwrap(), m.dims[j]);
    for (a, per_j) in p.leak_left.iter().enumerate() {
        for l in &per_j[j] {
            let col = QMat::column(l.coef.clone());
            add_block(&mut delta, off[a], 0, &inst.r_action(&l.r, m).kron(&col));
        }
    }
    HomComplex { d, delta }
}

/// `⊕ blocks[k] ⊗ I_{mdims[k]}`.
fn kron_diag(blocks: &[(QMat, usize)]) -> QMat {
    let parts: Vec<QMat> = blocks.iter().map(|(b, n)| b.kron(&QMat::identity(*n))).collect();
    QMat::block_diag(&parts.iter().collect::<Vec<_>>())
}

/// `⊕ I_{mdims[k]} ⊗ blocks[k]ᵀ`: precomposition on row-major `Hom` blocks.
fn precompose_diag(blocks: &[(QMat, usize)]) -> QMat {
    let parts: Vec<QMat> = blocks.iter().map(|(b, n)| QMat::identity(*n).kron(&b.transpose())).collect();
    QMat::block_diag(&parts.iter().collect::<Vec<_>>())
}

/// Chain maps of the Tor complexes of row `i`, given entry-wise maps `e[v]: K[i][v] → K'[i'][v]`.
pub(crate) fn tor_chain_map(e: &[QMat], m: &Rep) -> (QMat, QMat) {
    let q = m.quiver;
    let c1: Vec<(QMat, usize)> = q.arrows().iter().map(|&(s, t)| (e[t].clone(), m.dims[s])).collect();
    let c0: Vec<(QMat, usize)> = e.iter().cloned().zip(m.dims.iter().copied()).collect();
    (kron_diag(&c1), kron_diag(&c0))
}

/// Chain maps of the Hom complexes of column `j` induced by precomposition with entry-wise
/// maps `e[i]: K'[i][j'] → K[i][j]`.
pub(crate) fn hom_chain_map(e: &[QMat], m: &Rep) -> (QMat, QMat) {
    let q = m.quiver;
    let c0: Vec<(QMat, usize)> = e.iter().cloned().zip(m.dims.iter().copied()).collect();
    let c1: Vec<(QMat, usize)> = q.arrows().iter().map(|&(s, t)| (e[s].clone(), m.dims[t])).collect();
    (precompose_diag(&c0), precompose_diag(&c1))
}

/// Entry maps of row `i` of the inclusion `lower → upper`.
pub(crate) fn row_inclusion(lower: &KPiece, upper: &KPiece, i: usize) -> Vec<QMat> {
    upper.include_from(lower).swap_remove(i)
}

/// Entry maps of column `j` of the inclusion `lower → upper`.
pub(crate) fn col_inclusion(lower: &KPiece, upper: &KPiece, j: usize) -> Vec<QMat> {
    upper.include_from(lower).into_iter().map(|mut r| r.swap_remove(j)).collect()
}

/// Left arrow `a: s → t` from row `s` to row `t`, per column.
pub(crate) fn row_action(p: &KPiece, a: usize) -> Vec<QMat> {
    p.bimod.left[a].clone()
}

/// Right arrow `b: s → t` from column `t` to column `s`, per row (`K[i][t] → K[i][s]`).
pub(crate) fn col_action(p: &KPiece, b: usize) -> Vec<QMat> {
    p.bimod.right.iter().map(|r| r[b].clone()).collect()
}
