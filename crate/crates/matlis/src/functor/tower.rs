//! Level-wise functor values `F(K_n, M)` and `F(U_n, M)` as representations, with transition
//! maps and the connecting maps of the level-wise long exact sequences.
//!
//! Every object is a family of per-vertex subquotients over a chain-level ambient space.
//! The `U`-objects are cones: `Tor(U_n, M)` lives on `M_i ⊕ C₀` and `C₁`, `Hom(U_n, M)` on
//! `M_j ⊕ C⁰`. `Tor₁(U_n, M)` and `Ext¹(U_n, M)` are computed inside the coordinates of
//! `Tor₁(K_n, M)` and `Ext¹(K_n, M)`.

use std::cell::{OnceCell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use super::complexes::{
    col_action, col_inclusion, hom_chain_map, hom_complex, leak_row, row_action, row_inclusion, tor_chain_map, tor_complex,
    HomComplex, TorComplex,
};
use crate::exact::{QMat, Subquotient};
use crate::instances::{EpiInstance, KPiece};
use crate::quiver::rep::add_block;
use crate::quiver::{Morphism, Rep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Obj {
    Tor1K,
    Tor0K,
    Tor1U,
    Tor0U,
    HomK,
    Ext1K,
    HomU,
    Ext1U,
}

impl Obj {
    /// Contravariant in the level: the value is an inverse limit.
    pub fn is_lim(self) -> bool {
        matches!(self, Obj::HomK | Obj::Ext1K | Obj::HomU | Obj::Ext1U)
    }
}

/// The connecting maps of the level-wise sequences
/// `0 → Tor₁(U) → Tor₁(K) → M → U⊗M → K⊗M → 0` and
/// `0 → Hom(K, M) → Hom(U, M) → M → Ext¹(K, M) → Ext¹(U, M) → 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Conn {
    Tor1UToTor1K,
    Gamma,
    Eta,
    Tor0UToTor0K,
    HomKToHomU,
    Eval,
    Delta,
    Ext1KToExt1U,
}

struct TorPiece {
    cx: TorComplex,
    z1: Subquotient,
    h0: OnceCell<Subquotient>,
}

struct HomPiece {
    cx: HomComplex,
    ext: Subquotient,
    hom: OnceCell<Subquotient>,
}

/// A level value in ambient coordinates, and the same value as a representation.
pub struct LevelObj {
    pub sq: Vec<Subquotient>,
    pub rep: Rep,
}

struct Level {
    pieces: Vec<Arc<KPiece>>,
    /// `[vertex][piece]`.
    tor: OnceCell<Vec<Vec<TorPiece>>>,
    hom: OnceCell<Vec<Vec<HomPiece>>>,
    objs: RefCell<HashMap<Obj, Rc<LevelObj>>>,
}

pub struct Tower<'a> {
    inst: &'a EpiInstance,
    m: Rep,
    levels: Vec<OnceCell<Level>>,
    trans: RefCell<HashMap<(Obj, usize), Rc<Morphism>>>,
}

fn hstack_all(rows: usize, parts: &[QMat]) -> QMat {
    parts.iter().fold(QMat::zeros(rows, 0), |acc, p| acc.hstack(p))
}

fn vstack_all(cols: usize, parts: &[QMat]) -> QMat {
    parts.iter().fold(QMat::zeros(0, cols), |acc, p| acc.vstack(p))
}

fn diag(parts: &[QMat]) -> QMat {
    QMat::block_diag(&parts.iter().collect::<Vec<_>>())
}

impl<'a> Tower<'a> {
    /// Levels `1..=max_level` are available and computed on demand.
    pub fn new(inst: &'a EpiInstance, m: &Rep, max_level: usize) -> Tower<'a> {
        assert_eq!(m.quiver, inst.quiver(), "module over the wrong quiver");
        Tower {
            inst,
            m: m.clone(),
            levels: (0..=max_level).map(|_| OnceCell::new()).collect(),
            trans: RefCell::default(),
        }
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn module(&self) -> &Rep {
        &self.m
    }

    pub fn instance(&self) -> &EpiInstance {
        self.inst
    }

    fn vertices(&self) -> usize {
        self.m.quiver.vertices()
    }

    fn level(&self, n: usize) -> &Level {
        assert!(n >= 1 && n <= self.max_level(), "level {n} outside 1..={}", self.max_level());
        self.levels[n].get_or_init(|| Level {
            pieces: self.inst.k_level(n),
            tor: OnceCell::new(),
            hom: OnceCell::new(),
            objs: RefCell::default(),
        })
    }

    fn tor(&self, n: usize) -> &Vec<Vec<TorPiece>> {
        let lv = self.level(n);
        lv.tor.get_or_init(|| {
            (0..self.vertices())
                .map(|i| {
                    lv.pieces
                        .iter()
                        .map(|p| {
                            let cx = tor_complex(self.inst, p, i, &self.m);
                            let z1 = Subquotient::kernel(&cx.d);
                            TorPiece { cx, z1, h0: OnceCell::new() }
                        })
                        .collect()
                })
                .collect()
        })
    }

    fn hom(&self, n: usize) -> &Vec<Vec<HomPiece>> {
        let lv = self.level(n);
        lv.hom.get_or_init(|| {
            (0..self.vertices())
                .map(|j| {
                    lv.pieces
                        .iter()
                        .map(|p| {
                            let cx = hom_complex(self.inst, p, j, &self.m);
                            let ext = Subquotient::cokernel(&cx.d);
                            HomPiece { cx, ext, hom: OnceCell::new() }
                        })
                        .collect()
                })
                .collect()
        })
    }

    // ---- chain-level maps -------------------------------------------------------------

    fn tor_action(&self, n: usize, a: usize) -> (QMat, QMat) {
        let (c1, c0): (Vec<QMat>, Vec<QMat>) =
            self.level(n).pieces.iter().map(|p| tor_chain_map(&row_action(p, a), &self.m)).unzip();
        (diag(&c1), diag(&c0))
    }

    fn tor_inclusion(&self, n: usize, i: usize) -> (QMat, QMat) {
        let (lo, hi) = (&self.level(n).pieces, &self.level(n + 1).pieces);
        let (c1, c0): (Vec<QMat>, Vec<QMat>) =
            lo.iter().zip(hi).map(|(l, h)| tor_chain_map(&row_inclusion(l, h, i), &self.m)).unzip();
        (diag(&c1), diag(&c0))
    }

    /// Arrow `b: s → t`, from column `s` to column `t`.
    fn hom_action(&self, n: usize, b: usize) -> (QMat, QMat) {
        let (c0, c1): (Vec<QMat>, Vec<QMat>) =
            self.level(n).pieces.iter().map(|p| hom_chain_map(&col_action(p, b), &self.m)).unzip();
        (diag(&c0), diag(&c1))
    }

    /// Restriction from level `n + 1` to level `n`.
    fn hom_restriction(&self, n: usize, j: usize) -> (QMat, QMat) {
        let (lo, hi) = (&self.level(n).pieces, &self.level(n + 1).pieces);
        let (c0, c1): (Vec<QMat>, Vec<QMat>) =
            lo.iter().zip(hi).map(|(l, h)| hom_chain_map(&col_inclusion(l, h, j), &self.m)).unzip();
        (diag(&c0), diag(&c1))
    }

    /// `∂` on `C₁` of row `i` over all pieces.
    fn conn(&self, n: usize, i: usize) -> QMat {
        let parts: Vec<QMat> = self.tor(n)[i].iter().map(|t| t.cx.conn.clone()).collect();
        hstack_all(self.m.dims[i], &parts)
    }

    fn tor_d(&self, n: usize, i: usize) -> QMat {
        diag(&self.tor(n)[i].iter().map(|t| t.cx.d.clone()).collect::<Vec<_>>())
    }

    fn hom_d(&self, n: usize, j: usize) -> QMat {
        diag(&self.hom(n)[j].iter().map(|h| h.cx.d.clone()).collect::<Vec<_>>())
    }

    fn delta_chain(&self, n: usize, j: usize) -> QMat {
        let parts: Vec<QMat> = self.hom(n)[j].iter().map(|h| h.cx.delta.clone()).collect();
        vstack_all(self.m.dims[j], &parts)
    }

    /// The `R`-component of a left arrow on `C₀` of row `s`, landing in `M_t`.
    fn left_leak_on_c0(&self, n: usize, a: usize) -> QMat {
        let (s, t) = self.m.quiver.arrows()[a];
        let blocks: Vec<QMat> = self
            .level(n)
            .pieces
            .iter()
            .flat_map(|p| {
                (0..self.vertices()).map(move |v| {
                    let k = p.bimod.dims[s][v];
                    let mut blk = QMat::zeros(self.m.dims[t], k * self.m.dims[v]);
                    for l in &p.leak_left[a][v] {
                        add_block(&mut blk, 0, 0, &leak_row(l).kron(&self.inst.r_action(&l.r, &self.m)));
                    }
                    blk
                })
            })
            .collect();
        hstack_all(self.m.dims[t], &blocks)
    }

    /// The `R`-component of a right arrow `b: s → t` on lifted tokens of column `t`,
    /// as a map `M_s → C⁰` of column `t`.
    fn right_leak_into_c0(&self, n: usize, b: usize) -> QMat {
        let (s, t) = self.m.quiver.arrows()[b];
        let blocks: Vec<QMat> = self
            .level(n)
            .pieces
            .iter()
            .flat_map(|p| {
                (0..self.vertices()).map(move |i| {
                    let k = p.bimod.dims[i][t];
                    let mut blk = QMat::zeros(self.m.dims[i] * k, self.m.dims[s]);
                    for l in &p.leak_right[i][b] {
                        let col = QMat::column(l.coef.clone());
                        add_block(&mut blk, 0, 0, &self.inst.r_action(&l.r, &self.m).kron(&col));
                    }
                    blk
                })
            })
            .collect();
        vstack_all(self.m.dims[s], &blocks)
    }

    // ---- level objects ----------------------------------------------------------------

    pub fn obj(&self, o: Obj, n: usize) -> Rc<LevelObj> {
        if let Some(x) = self.level(n).objs.borrow().get(&o) {
            return x.clone();
        }
        let built = Rc::new(self.build(o, n));
        self.level(n).objs.borrow_mut().insert(o, built.clone());
        built
    }

    fn build(&self, o: Obj, n: usize) -> LevelObj {
        let q = self.m.quiver;
        let v = self.vertices();
        let sq: Vec<Subquotient> = match o {
            Obj::Tor1K => (0..v)
                .map(|i| Subquotient::direct_sum(&self.tor(n)[i].iter().map(|t| t.z1.clone()).collect::<Vec<_>>()))
                .collect(),
            Obj::Tor0K => (0..v)
                .map(|i| {
                    let parts: Vec<Subquotient> = self.tor(n)[i]
                        .iter()
                        .map(|t| t.h0.get_or_init(|| Subquotient::cokernel(&t.cx.d)).clone())
                        .collect();
                    Subquotient::direct_sum(&parts)
                })
                .collect(),
            Obj::Tor1U => (0..v).map(|i| Subquotient::kernel(&self.gamma(n, i))).collect(),
            Obj::Tor0U => (0..v).map(|i| Subquotient::cokernel(&self.conn(n, i).vstack(&self.tor_d(n, i)))).collect(),
            Obj::HomK => (0..v)
                .map(|j| {
                    let parts: Vec<Subquotient> = self.hom(n)[j]
                        .iter()
                        .map(|h| h.hom.get_or_init(|| Subquotient::kernel(&h.cx.d)).clone())
                        .collect();
                    Subquotient::direct_sum(&parts)
                })
                .collect(),
            Obj::Ext1K => (0..v)
                .map(|j| Subquotient::direct_sum(&self.hom(n)[j].iter().map(|h| h.ext.clone()).collect::<Vec<_>>()))
                .collect(),
            Obj::HomU => (0..v).map(|j| Subquotient::kernel(&self.delta_chain(n, j).hstack(&self.hom_d(n, j)))).collect(),
            Obj::Ext1U => (0..v).map(|j| Subquotient::cokernel(&self.delta(n, j))).collect(),
        };
        let maps = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let chain = self.action_chain(o, n, a);
                sq[s].induced(&chain, &sq[t])
            })
            .collect();
        let rep = Rep::new(q, sq.iter().map(Subquotient::dim).collect(), maps);
        LevelObj { sq, rep }
    }

    /// Arrow action of object `o` at level `n` in ambient coordinates.
    fn action_chain(&self, o: Obj, n: usize, a: usize) -> QMat {
        let (s, t) = self.m.quiver.arrows()[a];
        match o {
            Obj::Tor1K => self.tor_action(n, a).0,
            Obj::Tor0K => self.tor_action(n, a).1,
            Obj::Tor1U => self.obj(Obj::Tor1K, n).rep.maps[a].clone(),
            Obj::Tor0U => {
                let c0 = self.tor_action(n, a).1;
                let mut m = QMat::zeros(self.m.dims[t] + c0.rows(), self.m.dims[s] + c0.cols());
                m.set_block(0, 0, &self.m.maps[a]);
                m.set_block(0, self.m.dims[s], &self.left_leak_on_c0(n, a));
                m.set_block(self.m.dims[t], self.m.dims[s], &c0);
                m
            }
            Obj::HomK => self.hom_action(n, a).0,
            Obj::Ext1K => self.hom_action(n, a).1,
            Obj::HomU => {
                let c0 = self.hom_action(n, a).0;
                let mut m = QMat::zeros(self.m.dims[t] + c0.rows(), self.m.dims[s] + c0.cols());
                m.set_block(0, 0, &self.m.maps[a]);
                m.set_block(self.m.dims[t], 0, &self.right_leak_into_c0(n, a));
                m.set_block(self.m.dims[t], self.m.dims[s], &c0);
                m
            }
            Obj::Ext1U => self.obj(Obj::Ext1K, n).rep.maps[a].clone(),
        }
    }

    /// `γ_n` at vertex `i`: `Tor₁(K_n, M)_i → M_i`.
    fn gamma(&self, n: usize, i: usize) -> QMat {
        let parts: Vec<QMat> = self.tor(n)[i].iter().map(|t| t.cx.conn.mul(&t.z1.reps())).collect();
        hstack_all(self.m.dims[i], &parts)
    }

    /// `δ_n` at vertex `j`: `M_j → Ext¹(K_n, M)_j`.
    fn delta(&self, n: usize, j: usize) -> QMat {
        let e = self.obj(Obj::Ext1K, n);
        e.sq[j].project_mat(&self.delta_chain(n, j))
    }

    // ---- transitions ------------------------------------------------------------------

    /// Colimit objects: level `n → n+1`. Limit objects: level `n+1 → n`.
    pub fn transition(&self, o: Obj, n: usize) -> Rc<Morphism> {
        if let Some(x) = self.trans.borrow().get(&(o, n)) {
            return x.clone();
        }
        let (lo, hi) = (self.obj(o, n), self.obj(o, n + 1));
        let comps = (0..self.vertices())
            .map(|v| {
                let chain = self.transition_chain(o, n, v);
                if o.is_lim() {
                    hi.sq[v].induced(&chain, &lo.sq[v])
                } else {
                    lo.sq[v].induced(&chain, &hi.sq[v])
                }
            })
            .collect();
        let m = Rc::new(Morphism { comps });
        self.trans.borrow_mut().insert((o, n), m.clone());
        m
    }

    fn transition_chain(&self, o: Obj, n: usize, v: usize) -> QMat {
        let with_m = |c: QMat| diag(&[QMat::identity(self.m.dims[v]), c]);
        match o {
            Obj::Tor1K => self.tor_inclusion(n, v).0,
            Obj::Tor0K => self.tor_inclusion(n, v).1,
            Obj::Tor1U => self.transition(Obj::Tor1K, n).comps[v].clone(),
            Obj::Tor0U => with_m(self.tor_inclusion(n, v).1),
            Obj::HomK => self.hom_restriction(n, v).0,
            Obj::Ext1K => self.hom_restriction(n, v).1,
            Obj::HomU => with_m(self.hom_restriction(n, v).0),
            Obj::Ext1U => self.transition(Obj::Ext1K, n).comps[v].clone(),
        }
    }

    /// `n → m` (colimit) or `m → n` (limit) for `n ≤ m`.
    pub fn composite(&self, o: Obj, n: usize, m: usize) -> Morphism {
        let base = self.obj(o, n).rep.clone();
        let mut acc = Morphism::identity(&base);
        for k in n..m {
            let t = self.transition(o, k);
            acc = if o.is_lim() { acc.compose(&t) } else { t.compose(&acc) };
        }
        acc
    }

    // ---- functoriality in the module ------------------------------------------------

    /// `F(K_n, φ)` for `φ: M → M'` with `target` the tower of `M'` over the same instance.
    /// Only the `K`-objects are covariant in this way without a choice of cone lift.
    pub fn induced(&self, target: &Tower, phi: &Morphism, o: Obj, n: usize) -> Morphism {
        let q = self.m.quiver;
        let pieces = &self.level(n).pieces;
        let kd = |p: &KPiece, i: usize, j: usize| p.bimod.dims[i][j];
        let (src, tgt) = (self.obj(o, n), target.obj(o, n));
        let comps = (0..self.vertices())
            .map(|v| {
                let blocks: Vec<QMat> = match o {
                    Obj::Tor1K => pieces
                        .iter()
                        .flat_map(|p| q.arrows().iter().map(move |&(s, t)| QMat::identity(kd(p, v, t)).kron(&phi.comps[s])))
                        .collect(),
                    Obj::Tor0K => pieces
                        .iter()
                        .flat_map(|p| (0..self.vertices()).map(move |u| QMat::identity(kd(p, v, u)).kron(&phi.comps[u])))
                        .collect(),
                    Obj::HomK => pieces
                        .iter()
                        .flat_map(|p| (0..self.vertices()).map(move |i| phi.comps[i].kron(&QMat::identity(kd(p, i, v)))))
                        .collect(),
                    Obj::Ext1K => pieces
                        .iter()
                        .flat_map(|p| q.arrows().iter().map(move |&(s, t)| phi.comps[t].kron(&QMat::identity(kd(p, s, v)))))
                        .collect(),
                    _ => panic!("{o:?} is not induced level-wise"),
                };
                src.sq[v].induced(&diag(&blocks), &tgt.sq[v])
            })
            .collect();
        Morphism { comps }
    }

    // ---- connecting maps --------------------------------------------------------------

    pub fn connecting(&self, c: Conn, n: usize) -> Morphism {
        let v = self.vertices();
        let dims = &self.m.dims;
        let comps = (0..v)
            .map(|i| match c {
                Conn::Tor1UToTor1K => self.obj(Obj::Tor1U, n).sq[i].reps(),
                Conn::Gamma => self.gamma(n, i),
                Conn::Eta => {
                    let t = self.obj(Obj::Tor0U, n);
                    let emb = QMat::identity(dims[i]).vstack(&QMat::zeros(t.sq[i].ambient() - dims[i], dims[i]));
                    t.sq[i].project_mat(&emb)
                }
                Conn::Tor0UToTor0K => {
                    let (u, k) = (self.obj(Obj::Tor0U, n), self.obj(Obj::Tor0K, n));
                    let c0 = k.sq[i].ambient();
                    let proj = QMat::zeros(c0, dims[i]).hstack(&QMat::identity(c0));
                    u.sq[i].induced(&proj, &k.sq[i])
                }
                Conn::HomKToHomU => {
                    let (k, u) = (self.obj(Obj::HomK, n), self.obj(Obj::HomU, n));
                    let c0 = k.sq[i].ambient();
                    let emb = QMat::zeros(dims[i], c0).vstack(&QMat::identity(c0));
                    k.sq[i].induced(&emb, &u.sq[i])
                }
                Conn::Eval => {
                    let u = self.obj(Obj::HomU, n);
                    let c0 = u.sq[i].ambient() - dims[i];
                    QMat::identity(dims[i]).hstack(&QMat::zeros(dims[i], c0)).mul(&u.sq[i].reps())
                }
                Conn::Delta => self.delta(n, i),
                Conn::Ext1KToExt1U => {
                    let u = self.obj(Obj::Ext1U, n);
                    u.sq[i].project_mat(&QMat::identity(u.sq[i].ambient()))
                }
            })
            .collect();
        Morphism { comps }
    }

    /// `dim ∂_n(Tor₁(K_n, M))`, `dim ker ∂_n` and whether `δ_n = 0`, per level, cheaply.
    pub fn gamma_image_dim(&self, n: usize) -> usize {
        (0..self.vertices()).map(|i| self.gamma(n, i).rank()).sum()
    }

    pub fn tor1k_dim(&self, n: usize) -> usize {
        self.tor(n).iter().flatten().map(|t| t.z1.dim()).sum()
    }

    pub fn ext1k_dim(&self, n: usize) -> usize {
        self.hom(n).iter().flatten().map(|h| h.ext.dim()).sum()
    }

    /// `⋂`-side data: `ker δ_n` as per-vertex column bases.
    pub fn delta_kernel(&self, n: usize) -> Vec<QMat> {
        (0..self.vertices()).map(|j| self.delta(n, j).kernel()).collect()
    }

    pub fn delta_rank(&self, n: usize) -> usize {
        (0..self.vertices()).map(|j| self.delta(n, j).rank()).sum()
    }
}
