//! Brute-force oracles. Kronecker `Hom`/`Ext¹` come from one scalar equation per matrix entry;
//! ℚ[x]-modules are pinned down by the kernel dimensions of `q(A)^k` over a fixed prime list.

use matlis::exact::{Poly, QMat, Rat};
use matlis::quiver::{KronRep, RepMap};

/// Every representation with `d1 + d2 ≤ max_total` and entries of `F`, `G` in `{−1, 0, 1}`.
pub fn kron_corpus(max_total: usize) -> Vec<KronRep> {
    let mut out = Vec::new();
    for d1 in 0..=max_total {
        for d2 in 0..=max_total - d1 {
            let n = d1 * d2;
            for code in 0..3usize.pow(2 * n as u32) {
                let digits: Vec<i64> = (0..2 * n).map(|i| (code / 3usize.pow(i as u32) % 3) as i64 - 1).collect();
                out.push(KronRep::from_ints(d1, d2, &digits[..n], &digits[n..]));
            }
        }
    }
    out
}

/// `(φ1, φ2) ↦ (φ2·A − B·φ1)` for both arrows, as a matrix on the coordinates of
/// `Hom_k(M1, N1) ⊕ Hom_k(M2, N2)`; its kernel is `Hom(M, N)` and its cokernel `Ext¹(M, N)`.
fn kron_differential(m: &KronRep, n: &KronRep) -> QMat {
    let unknowns = n.d1 * m.d1 + n.d2 * m.d2;
    let phi1 = |i: usize, j: usize| i * m.d1 + j;
    let phi2 = |i: usize, j: usize| n.d1 * m.d1 + i * m.d2 + j;
    let mut rows = Vec::new();
    for (a, b) in [(&m.f, &n.f), (&m.g, &n.g)] {
        for i in 0..n.d2 {
            for j in 0..m.d1 {
                let mut row = vec![Rat::zero(); unknowns];
                for k in 0..m.d2 {
                    row[phi2(i, k)] = &row[phi2(i, k)] + &a[(k, j)];
                }
                for k in 0..n.d1 {
                    row[phi1(k, j)] = &row[phi1(k, j)] - &b[(i, k)];
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        QMat::zeros(0, unknowns)
    } else {
        QMat::from_rows(rows, unknowns)
    }
}

/// `(dim Hom(M, N), dim Ext¹(M, N))`.
pub fn kron_hom_ext_dims(m: &KronRep, n: &KronRep) -> (usize, usize) {
    let d = kron_differential(m, n);
    let r = d.rank();
    (d.cols() - r, d.rows() - r)
}

/// Both squares commute, checked by multiplying out.
pub fn intertwines(phi: &RepMap, m: &KronRep, n: &KronRep) -> bool {
    phi.a1.shape() == (n.d1, m.d1)
        && phi.a2.shape() == (n.d2, m.d2)
        && phi.a2.mul(&m.f) == n.f.mul(&phi.a1)
        && phi.a2.mul(&m.g) == n.g.mul(&phi.a1)
}

/// `0 → N → E → M → 0` splits iff `id_M` lifts to `Hom(M, E)`, iff
/// `dim Hom(M, E) = dim Hom(M, N) + dim Hom(M, M)`. Finite length lets an abstract
/// isomorphism `E ≅ M ⊕ N` force a splitting, so this is also the non-isomorphism test.
pub fn is_nonsplit_middle(e: &KronRep, m: &KronRep, n: &KronRep) -> bool {
    e.dims() == (m.d1 + n.d1, m.d2 + n.d2)
        && kron_hom_ext_dims(m, e).0 < kron_hom_ext_dims(m, n).0 + kron_hom_ext_dims(m, m).0
}

/// The primes every corpus module is built from.
pub fn primes() -> Vec<Poly> {
    vec![Poly::x(), Poly::from_ints(&[-1, 1]), Poly::from_ints(&[1, 0, 1])]
}

fn companion(p: &Poly) -> QMat {
    let d = p.degree().expect("nonzero");
    QMat::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -p.coeff(i)
        } else if i == j + 1 {
            Rat::one()
        } else {
            Rat::zero()
        }
    })
}

/// Every torsion ℚ[x]-module of dimension `≤ max_dim` whose primary parts lie over `primes()`,
/// as an action matrix in a fixed non-adapted basis.
pub fn pid_corpus(max_dim: usize) -> Vec<QMat> {
    let mut blocks = Vec::new();
    for q in primes() {
        let d = q.degree().expect("prime");
        for e in 1..=max_dim / d {
            blocks.push(companion(&q.pow(e)));
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    collect(&blocks, 0, max_dim, &mut chosen, &mut out);
    out
}

fn collect(blocks: &[QMat], from: usize, room: usize, chosen: &mut Vec<usize>, out: &mut Vec<QMat>) {
    let x = QMat::block_diag(&chosen.iter().map(|&i| &blocks[i]).collect::<Vec<_>>());
    let n = x.rows();
    // P = I + (strict upper ones), P⁻¹ exists over ℤ
    let p = QMat::from_fn(n, n, |i, j| if i <= j { Rat::one() } else { Rat::zero() });
    out.push(p.mul(&x).mul(&p.inverse().expect("unitriangular")));
    for i in from..blocks.len() {
        if blocks[i].rows() <= room {
            chosen.push(i);
            collect(blocks, i, room - blocks[i].rows(), chosen, out);
            chosen.pop();
        }
    }
}

fn eval_at(q: &Poly, a: &QMat) -> QMat {
    let n = a.rows();
    q.coeffs().iter().rev().fold(QMat::zeros(n, n), |acc, c| acc.mul(a).add(&QMat::scalar(n, c)))
}

/// Kernel dimensions of `q(A)^k` for each prime and `k = 1..=dim`, preceded by the dimension.
/// Over the corpus primes this determines a torsion module up to isomorphism.
pub type Signature = Vec<usize>;

/// The signature of the operator `a` on the invariant subquotient `span(sub) / span(quot)`
/// of its ambient space, with `quot ⊆ span(sub)` when `sub` is given.
fn signature(a: &QMat, sub: Option<&QMat>, quot: Option<&QMat>) -> Signature {
    let n = a.rows();
    let empty = QMat::zeros(n, 0);
    let quot = quot.unwrap_or(&empty);
    let ambient = QMat::identity(n);
    let sub = sub.unwrap_or(&ambient);
    // kernel of B on span(S)/span(W) has dim = rank(S) − rank([W | B·S])
    let (rs, rw) = (sub.rank(), quot.rank());
    let dim = rs - rw;
    let mut sig = vec![dim];
    for q in primes() {
        let qa = eval_at(&q, a);
        let mut b = QMat::identity(n);
        for _ in 1..=dim.max(1) {
            b = b.mul(&qa);
            sig.push(rs - quot.hstack(&b.mul(sub)).rank());
        }
    }
    sig
}

/// The signature of a whole module given by its action.
pub fn module_signature(x: &QMat) -> Signature {
    signature(x, None, None)
}

/// `φ ↦ φ·X_M − X_N·φ` on `Hom_k(M, N)`, with `φ[i][j]` at `i·dim M + j`, and the action
/// `φ ↦ X_N·φ`. Kernel `Hom_{ℚ[x]}(M, N)`, cokernel `Ext¹(M, N)`.
fn hom_complex(xm: &QMat, xn: &QMat) -> (QMat, QMat) {
    let (m, n) = (xm.rows(), xn.rows());
    let idx = |i: usize, j: usize| i * m + j;
    let mut d = QMat::zeros(n * m, n * m);
    let mut act = QMat::zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..m {
            for k in 0..m {
                d[(idx(i, j), idx(i, k))] = &d[(idx(i, j), idx(i, k))] + &xm[(k, j)];
            }
            for k in 0..n {
                d[(idx(i, j), idx(k, j))] = &d[(idx(i, j), idx(k, j))] - &xn[(i, k)];
                act[(idx(i, j), idx(k, j))] = xn[(i, k)].clone();
            }
        }
    }
    (d, act)
}

/// `a ⊗ b ↦ xa ⊗ b − a ⊗ xb` on `M ⊗_ℚ N`, with `a ⊗ b` at `a·dim N + b`, and the action
/// `x ⊗ 1`. Kernel `Tor₁(M, N)`, cokernel `M ⊗_{ℚ[x]} N`.
fn tensor_complex(xm: &QMat, xn: &QMat) -> (QMat, QMat) {
    let (m, n) = (xm.rows(), xn.rows());
    let idx = |a: usize, b: usize| a * n + b;
    let mut t = QMat::zeros(m * n, m * n);
    let mut act = QMat::zeros(m * n, m * n);
    for a in 0..m {
        for b in 0..n {
            for c in 0..m {
                t[(idx(a, b), idx(c, b))] = &t[(idx(a, b), idx(c, b))] + &xm[(a, c)];
                act[(idx(a, b), idx(c, b))] = xm[(a, c)].clone();
            }
            for e in 0..n {
                t[(idx(a, b), idx(a, e))] = &t[(idx(a, b), idx(a, e))] - &xn[(b, e)];
            }
        }
    }
    (t, act)
}

/// Signatures of `(Hom, Ext¹, Tor₁, Tor₀)` by linear algebra on the underlying spaces.
pub fn pid_brute(xm: &QMat, xn: &QMat) -> [Signature; 4] {
    let (d, act) = hom_complex(xm, xn);
    let hom = signature(&act, Some(&d.kernel()), None);
    let ext = signature(&act, None, Some(&d));
    let (t, act) = tensor_complex(xm, xn);
    let tor1 = signature(&act, Some(&t.kernel()), None);
    let tor0 = signature(&act, None, Some(&t));
    [hom, ext, tor1, tor0]
}
