//! Finite-dimensional representations of the two quivers in play: the one-loop
//! quiver (modules over ℚ[x]) and the Kronecker quiver.
//!
//! A left representation assigns a matrix `dims[t] × dims[s]` to each arrow `s → t`.
//! A right representation assigns `dims[s] × dims[t]` (arrows act backwards).

use serde::{Deserialize, Serialize};

use crate::exact::{QMat, Rat, Subquotient};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quiver {
    /// One vertex, one loop `x`.
    Loop,
    /// Vertices 0 → 1 with arrows `f` (index 0) and `g` (index 1).
    Kronecker,
}

impl Quiver {
    pub fn vertices(self) -> usize {
        match self {
            Quiver::Loop => 1,
            Quiver::Kronecker => 2,
        }
    }

    /// `(source, target)` per arrow.
    pub fn arrows(self) -> &'static [(usize, usize)] {
        match self {
            Quiver::Loop => &[(0, 0)],
            Quiver::Kronecker => &[(0, 1), (0, 1)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    pub quiver: Quiver,
    pub dims: Vec<usize>,
    pub maps: Vec<QMat>,
}

/// Components per vertex, `target.dims[v] × source.dims[v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub comps: Vec<QMat>,
}

impl Rep {
    pub fn new(quiver: Quiver, dims: Vec<usize>, maps: Vec<QMat>) -> Rep {
        let r = Rep { quiver, dims, maps };
        r.check_shapes();
        r
    }

    fn check_shapes(&self) {
        assert_eq!(self.dims.len(), self.quiver.vertices(), "vertex count");
        assert_eq!(self.maps.len(), self.quiver.arrows().len(), "arrow count");
        for (m, &(s, t)) in self.maps.iter().zip(self.quiver.arrows()) {
            assert_eq!(m.shape(), (self.dims[t], self.dims[s]), "arrow matrix shape");
        }
    }

    pub fn zero(quiver: Quiver) -> Rep {
        let dims = vec![0; quiver.vertices()];
        let maps = quiver.arrows().iter().map(|_| QMat::zeros(0, 0)).collect();
        Rep { quiver, dims, maps }
    }

    /// A finite-dimensional ℚ[x]-module.
    pub fn loop_module(x: QMat) -> Rep {
        assert!(x.is_square(), "loop action must be square");
        Rep { quiver: Quiver::Loop, dims: vec![x.rows()], maps: vec![x] }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn direct_sum(&self, other: &Rep) -> Rep {
        assert_eq!(self.quiver, other.quiver, "direct sum across quivers");
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| QMat::block_diag(&[a, b])).collect();
        Rep { quiver: self.quiver, dims, maps }
    }

    /// `P·M·P⁻¹` per vertex, i.e. the representation transported along `p`.
    pub fn conjugate(&self, p: &[QMat]) -> Rep {
        let inv: Vec<QMat> = p.iter().map(|q| q.inverse().expect("conjugation by a singular matrix")).collect();
        let maps = self
            .maps
            .iter()
            .zip(self.quiver.arrows())
            .map(|(m, &(s, t))| p[t].mul(m).mul(&inv[s]))
            .collect();
        Rep { quiver: self.quiver, dims: self.dims.clone(), maps }
    }

    pub fn is_morphism(&self, target: &Rep, f: &Morphism) -> bool {
        self.quiver.arrows().iter().enumerate().all(|(a, &(s, t))| {
            f.comps[t].mul(&self.maps[a]) == target.maps[a].mul(&f.comps[s])
        })
    }

    /// The subrepresentation on column bases `sub[v]` (which must be stable);
    /// returns it with its inclusion.
    pub fn subrep(&self, sub: &[QMat]) -> (Rep, Morphism) {
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let img = self.maps[a].mul(&sub[s]);
                sub[t].solve_mat(&img).expect("subspace is not stable under the arrows")
            })
            .collect();
        let dims = sub.iter().map(QMat::cols).collect();
        (Rep { quiver: self.quiver, dims, maps }, Morphism { comps: sub.to_vec() })
    }

    /// The quotient by stable subspaces `sub[v]`; returns it with the projection.
    pub fn quotient(&self, sub: &[QMat]) -> (Rep, Morphism) {
        let qs: Vec<Subquotient> = sub.iter().map(Subquotient::cokernel).collect();
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| qs[t].project_mat(&self.maps[a].mul(&qs[s].reps())))
            .collect();
        let dims = qs.iter().map(Subquotient::dim).collect();
        let comps = qs.iter().map(|q| q.project_mat(&QMat::identity(q.ambient()))).collect();
        (Rep { quiver: self.quiver, dims, maps }, Morphism { comps })
    }
}

impl Morphism {
    pub fn zero(source: &Rep, target: &Rep) -> Morphism {
        Morphism { comps: source.dims.iter().zip(&target.dims).map(|(&s, &t)| QMat::zeros(t, s)).collect() }
    }

    pub fn identity(m: &Rep) -> Morphism {
        Morphism { comps: m.dims.iter().map(|&d| QMat::identity(d)).collect() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Morphism) -> Morphism {
        Morphism { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        Morphism { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, c: &Rat) -> Morphism {
        Morphism { comps: self.comps.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(QMat::is_zero)
    }

    pub fn is_iso(&self) -> bool {
        self.comps.iter().all(QMat::is_invertible)
    }

    pub fn is_injective(&self) -> bool {
        self.comps.iter().all(|c| c.rank() == c.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.comps.iter().all(|c| c.rank() == c.rows())
    }

    pub fn inverse(&self) -> Option<Morphism> {
        let comps: Option<Vec<QMat>> = self.comps.iter().map(QMat::inverse).collect();
        Some(Morphism { comps: comps? })
    }

    pub fn kernel_dims(&self) -> Vec<usize> {
        self.comps.iter().map(|c| c.cols() - c.rank()).collect()
    }

    pub fn rank_dims(&self) -> Vec<usize> {
        self.comps.iter().map(QMat::rank).collect()
    }

    pub fn kernel(&self, source: &Rep) -> (Rep, Morphism) {
        let sub: Vec<QMat> = self.comps.iter().map(QMat::kernel).collect();
        source.subrep(&sub)
    }

    pub fn image(&self, target: &Rep) -> (Rep, Morphism) {
        let sub: Vec<QMat> = self.comps.iter().map(QMat::column_space).collect();
        target.subrep(&sub)
    }

    pub fn cokernel(&self, target: &Rep) -> (Rep, Morphism) {
        let sub: Vec<QMat> = self.comps.iter().map(QMat::column_space).collect();
        target.quotient(&sub)
    }

    /// Flattened components, vertex by vertex, each row-major.
    pub fn to_vec(&self) -> Vec<Rat> {
        self.comps.iter().flat_map(|c| (0..c.rows()).flat_map(move |i| c.row(i).to_vec())).collect()
    }

    pub fn from_vec(source: &Rep, target: &Rep, v: &[Rat]) -> Morphism {
        let mut off = 0;
        let comps = source
            .dims
            .iter()
            .zip(&target.dims)
            .map(|(&s, &t)| {
                let m = QMat::from_vec(t, s, v[off..off + s * t].to_vec());
                off += s * t;
                m
            })
            .collect();
        Morphism { comps }
    }
}

/// The Hom complex `⊕_v Hom(M_v, N_v) → ⊕_a Hom(M_{s(a)}, N_{t(a)})`,
/// `φ ↦ (φ_t·M_a − N_a·φ_s)_a`, with row-major vectorization.
pub fn hom_differential(m: &Rep, n: &Rep) -> QMat {
    let q = m.quiver;
    let voff = offsets(m.dims.iter().zip(&n.dims).map(|(a, b)| a * b));
    let aoff = offsets(q.arrows().iter().map(|&(s, t)| m.dims[s] * n.dims[t]));
    let mut d = QMat::zeros(*aoff.last().unwrap(), *voff.last().unwrap());
    for (a, &(s, t)) in q.arrows().iter().enumerate() {
        // φ_t·M_a: (I ⊗ M_aᵀ) on vec(φ_t)
        let left = QMat::identity(n.dims[t]).kron(&m.maps[a].transpose());
        // N_a·φ_s: (N_a ⊗ I) on vec(φ_s)
        let right = n.maps[a].kron(&QMat::identity(m.dims[s]));
        add_block(&mut d, aoff[a], voff[t], &left);
        add_block(&mut d, aoff[a], voff[s], &right.neg());
    }
    d
}

/// `Hom(M, N)` and `Ext¹(M, N)` as subquotients of the Hom complex.
pub struct HomExt {
    pub d: QMat,
    pub hom: Subquotient,
    pub ext: Subquotient,
}

pub fn hom_ext(m: &Rep, n: &Rep) -> HomExt {
    let d = hom_differential(m, n);
    let hom = Subquotient::kernel(&d);
    let ext = Subquotient::cokernel(&d);
    HomExt { d, hom, ext }
}

pub fn hom_basis(m: &Rep, n: &Rep) -> Vec<Morphism> {
    let h = Subquotient::kernel(&hom_differential(m, n));
    let reps = h.reps();
    (0..reps.cols()).map(|j| Morphism::from_vec(m, n, &reps.col(j))).collect()
}

/// Middle term of the extension `0 → N → E → M → 0` with cocycle `c`
/// (one `dims_N[t] × dims_M[s]` block per arrow, flattened as in `hom_differential`).
pub fn extension(m: &Rep, n: &Rep, c: &[Rat]) -> Rep {
    let q = m.quiver;
    let dims: Vec<usize> = n.dims.iter().zip(&m.dims).map(|(a, b)| a + b).collect();
    let mut off = 0;
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, &(s, t))| {
            let len = m.dims[s] * n.dims[t];
            let block = QMat::from_vec(n.dims[t], m.dims[s], c[off..off + len].to_vec());
            off += len;
            let mut e = QMat::zeros(dims[t], dims[s]);
            e.set_block(0, 0, &n.maps[a]);
            e.set_block(0, n.dims[s], &block);
            e.set_block(n.dims[t], n.dims[s], &m.maps[a]);
            e
        })
        .collect();
    Rep { quiver: q, dims, maps }
}

pub(crate) fn offsets(sizes: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut v = vec![0];
    for s in sizes {
        v.push(v.last().unwrap() + s);
    }
    v
}

pub(crate) fn add_block(d: &mut QMat, r0: usize, c0: usize, b: &QMat) {
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            let e = &b[(i, j)];
            if !e.is_zero() {
                let v = &d[(r0 + i, c0 + j)] + e;
                d[(r0 + i, c0 + j)] = v;
            }
        }
    }
}
