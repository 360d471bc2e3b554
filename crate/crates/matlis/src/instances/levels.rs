//! Finite-dimensional truncation levels of `U` and `K = U/R`.
//!
//! `K` splits as a bimodule into components `K^λ`, one per point. At level `n`:
//! * finite `λ`: `Pole(λ, 1..=n)` in every entry;
//! * `λ = ∞` (Kronecker only): `n` consecutive powers starting above the `R`-part of the
//!   entry, i.e. `Pow(0..n)` in `(2,1)`, `Pow(1..=n)` in `(1,1)` and `(2,2)`, `Pow(2..=n+1)`
//!   in `(1,2)`.
//!
//! Every level of `K^λ` is a sub-bimodule, and level `n` is a prefix of level `n+1` in every
//! entry. Products that fall into `R` are recorded as leaks; they carry the connecting maps
//! of `0 → R → U → K → 0`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::tokens::{push, x_times, Combo, SXToken};
use super::{EpiInstance, Family};
use crate::exact::{QMat, Rat};
use crate::quiver::{Bimod, Point, Quiver, Rep};

/// A basis element of `R[i][j]`, acting `M_j → M_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RBasis {
    Idem(usize),
    /// The Kronecker arrow `f` (0) or `g` (1).
    Arrow(usize),
    XPow(usize),
}

/// The `R`-component of an action, as a coefficient row over the source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leak {
    pub r: RBasis,
    pub coef: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct KPiece {
    pub point: Point,
    pub level: usize,
    pub tokens: Vec<Vec<Vec<SXToken>>>,
    pub bimod: Bimod,
    /// `leak_left[a][j]`: `K[s(a)][j] → R[t(a)][j]`.
    pub leak_left: Vec<Vec<Vec<Leak>>>,
    /// `leak_right[i][b]`: `K[i][t(b)] → R[i][s(b)]`.
    pub leak_right: Vec<Vec<Vec<Leak>>>,
}

impl KPiece {
    /// Entry-wise inclusion of a lower level of the same component.
    pub fn include_from(&self, lower: &KPiece) -> Vec<Vec<QMat>> {
        assert!(lower.level <= self.level && lower.point == self.point);
        prefix_inclusions(&lower.bimod.dims, &self.bimod.dims)
    }
}

pub(crate) fn prefix_inclusions(lower: &[Vec<usize>], upper: &[Vec<usize>]) -> Vec<Vec<QMat>> {
    lower
        .iter()
        .zip(upper)
        .map(|(lr, ur)| {
            lr.iter()
                .zip(ur)
                .map(|(&l, &u)| QMat::from_fn(u, l, |r, c| if r == c { Rat::one() } else { Rat::zero() }))
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    UAsLeftRModule,
    KAsLeftRModule,
    UBimodule,
    KBimodule,
}

impl Target {
    fn is_u(self) -> bool {
        matches!(self, Target::UAsLeftRModule | Target::UBimodule)
    }

    fn is_bimodule(self) -> bool {
        matches!(self, Target::UBimodule | Target::KBimodule)
    }
}

/// A truncation level with its actions. Left actions land in level `action_level`, which
/// equals `level` except for `U` over ℚ[x], where `x·xⁿ` leaves level `n`.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub target: Target,
    pub level: usize,
    pub action_level: usize,
    pub tokens: Vec<Vec<Vec<SXToken>>>,
    pub quiver: Quiver,
    pub left: Vec<Vec<QMat>>,
    pub right: Option<Vec<Vec<QMat>>>,
    /// Entry-wise inclusion from level `level − 1`.
    pub include: Vec<Vec<QMat>>,
}

impl Truncation {
    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.tokens.iter().map(|r| r.iter().map(Vec::len).collect()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().flatten().sum()
    }

    /// The level as a bimodule, when the actions stay inside it.
    pub fn bimod(&self) -> Option<Bimod> {
        let right = self.right.clone()?;
        (self.action_level == self.level).then(|| Bimod {
            quiver: self.quiver,
            dims: self.dims(),
            left: self.left.clone(),
            right,
        })
    }

    /// The level as a left module: the direct sum of its columns.
    pub fn left_module(&self) -> Option<Rep> {
        if self.action_level != self.level {
            return None;
        }
        let v = self.quiver.vertices();
        let dims = self.dims();
        let cols: Vec<Rep> = (0..v)
            .map(|j| {
                let d = dims.iter().map(|r| r[j]).collect();
                let maps = self.left.iter().map(|m| m[j].clone()).collect();
                Rep::new(self.quiver, d, maps)
            })
            .collect();
        Some(cols.iter().skip(1).fold(cols[0].clone(), |acc, c| acc.direct_sum(c)))
    }
}

/// Quiver vertex to matrix index.
pub fn matrix_index(v: usize) -> usize {
    if v == 0 {
        2
    } else {
        1
    }
}

/// The `R`-tokens of entry `[i][j]` for the Kronecker algebra.
fn kron_r_tokens(i: usize, j: usize) -> Vec<(SXToken, RBasis)> {
    match (matrix_index(i), matrix_index(j)) {
        (1, 1) => vec![(SXToken::pow(0), RBasis::Idem(1))],
        (2, 2) => vec![(SXToken::pow(0), RBasis::Idem(0))],
        (1, 2) => vec![(SXToken::pow(0), RBasis::Arrow(0)), (SXToken::pow(1), RBasis::Arrow(1))],
        _ => vec![],
    }
}

fn r_basis_of(inst: &EpiInstance, i: usize, j: usize, t: &SXToken) -> Option<RBasis> {
    match inst.family() {
        Family::Cpid => match t {
            SXToken::Pow { m } => Some(RBasis::XPow(*m)),
            SXToken::Pole { .. } => None,
        },
        Family::Kron => kron_r_tokens(i, j).into_iter().find(|(u, _)| u == t).map(|(_, r)| r),
    }
}

fn arrow_times(inst: &EpiInstance, a: usize, t: &SXToken) -> Combo {
    match (inst.family(), a) {
        (Family::Kron, 0) => vec![(Rat::one(), t.clone())],
        _ => x_times(t),
    }
}

fn piece_tokens(inst: &EpiInstance, point: &Point, n: usize) -> Vec<Vec<Vec<SXToken>>> {
    let v = inst.quiver().vertices();
    (0..v)
        .map(|i| {
            (0..v)
                .map(|j| match point {
                    Point::Finite(l) => (1..=n).map(|k| SXToken::pole(l.clone(), k)).collect(),
                    Point::Infinity => {
                        assert!(inst.is_kron(), "no component at infinity over the affine line");
                        let off = kron_r_tokens(i, j).len();
                        (off..off + n).map(SXToken::pow).collect()
                    }
                })
                .collect()
        })
        .collect()
}

fn r_tokens(inst: &EpiInstance, i: usize, j: usize, n: usize) -> Vec<SXToken> {
    match inst.family() {
        Family::Cpid => (0..=n).map(SXToken::pow).collect(),
        Family::Kron => kron_r_tokens(i, j).into_iter().map(|(t, _)| t).collect(),
    }
}

/// The matrix of arrow `a` from tokens `src` of entry `[si][sj]` into tokens `tgt` of entry
/// `[ti][tj]`. With `quotient`, `R`-tokens of the target entry are split off as leaks.
#[allow(clippy::too_many_arguments)]
fn act(
    inst: &EpiInstance,
    a: usize,
    src: &[SXToken],
    tgt: &[SXToken],
    (ti, tj): (usize, usize),
    quotient: bool,
) -> (QMat, Vec<Leak>) {
    let index: HashMap<&SXToken, usize> = tgt.iter().enumerate().map(|(k, t)| (t, k)).collect();
    let mut m = QMat::zeros(tgt.len(), src.len());
    let mut leaks: Vec<Leak> = Vec::new();
    for (c, t) in src.iter().enumerate() {
        for (coef, u) in arrow_times(inst, a, t) {
            if quotient {
                if let Some(r) = r_basis_of(inst, ti, tj, &u) {
                    match leaks.iter_mut().find(|l| l.r == r) {
                        Some(l) => l.coef[c] = &l.coef[c] + &coef,
                        None => {
                            let mut row = vec![Rat::zero(); src.len()];
                            row[c] = coef;
                            leaks.push(Leak { r, coef: row });
                        }
                    }
                    continue;
                }
            }
            let k = *index.get(&u).unwrap_or_else(|| panic!("{u} is outside the target level"));
            m[(k, c)] = &m[(k, c)] + &coef;
        }
    }
    leaks.retain(|l| l.coef.iter().any(|c| !c.is_zero()));
    (m, leaks)
}

struct Built {
    left: Vec<Vec<QMat>>,
    right: Vec<Vec<QMat>>,
    leak_left: Vec<Vec<Vec<Leak>>>,
    leak_right: Vec<Vec<Vec<Leak>>>,
}

fn build_actions(
    inst: &EpiInstance,
    src: &[Vec<Vec<SXToken>>],
    tgt: &[Vec<Vec<SXToken>>],
    quotient: bool,
    with_right: bool,
) -> Built {
    let q = inst.quiver();
    let v = q.vertices();
    let arrows = q.arrows();
    let mut left = Vec::new();
    let mut leak_left = Vec::new();
    for (a, &(s, t)) in arrows.iter().enumerate() {
        let (mats, leaks): (Vec<QMat>, Vec<Vec<Leak>>) =
            (0..v).map(|j| act(inst, a, &src[s][j], &tgt[t][j], (t, j), quotient)).unzip();
        left.push(mats);
        leak_left.push(leaks);
    }
    let mut right = Vec::new();
    let mut leak_right = Vec::new();
    if with_right {
        for i in 0..v {
            let (mats, leaks): (Vec<QMat>, Vec<Vec<Leak>>) = arrows
                .iter()
                .enumerate()
                .map(|(b, &(s, t))| act(inst, b, &src[i][t], &tgt[i][s], (i, s), quotient))
                .unzip();
            right.push(mats);
            leak_right.push(leaks);
        }
    }
    Built { left, right, leak_left, leak_right }
}

pub(crate) fn build_piece(inst: &EpiInstance, point: &Point, n: usize) -> KPiece {
    assert!(inst.points().contains(point), "{point} is not a point of {}", inst.desc());
    let tokens = piece_tokens(inst, point, n);
    let b = build_actions(inst, &tokens, &tokens, true, true);
    let dims = tokens.iter().map(|r| r.iter().map(Vec::len).collect()).collect();
    KPiece {
        point: point.clone(),
        level: n,
        tokens,
        bimod: Bimod { quiver: inst.quiver(), dims, left: b.left, right: b.right },
        leak_left: b.leak_left,
        leak_right: b.leak_right,
    }
}

fn level_tokens(inst: &EpiInstance, target: Target, n: usize) -> Vec<Vec<Vec<SXToken>>> {
    let v = inst.quiver().vertices();
    let pieces: Vec<Vec<Vec<Vec<SXToken>>>> = inst.points().iter().map(|p| piece_tokens(inst, p, n)).collect();
    (0..v)
        .map(|i| {
            (0..v)
                .map(|j| {
                    let mut toks = if target.is_u() { r_tokens(inst, i, j, n) } else { Vec::new() };
                    for p in &pieces {
                        toks.extend(p[i][j].iter().cloned());
                    }
                    toks
                })
                .collect()
        })
        .collect()
}

fn lookup_inclusion(lower: &[SXToken], upper: &[SXToken]) -> QMat {
    let index: HashMap<&SXToken, usize> = upper.iter().enumerate().map(|(k, t)| (t, k)).collect();
    let mut m = QMat::zeros(upper.len(), lower.len());
    for (c, t) in lower.iter().enumerate() {
        m[(index[t], c)] = Rat::one();
    }
    m
}

pub(crate) fn build_truncation(inst: &EpiInstance, target: Target, n: usize) -> Truncation {
    assert!(n >= 1, "truncation levels start at 1");
    let tokens = level_tokens(inst, target, n);
    let action_level = if target.is_u() && inst.family() == Family::Cpid { n + 1 } else { n };
    let tgt = if action_level == n { tokens.clone() } else { level_tokens(inst, target, action_level) };
    let b = build_actions(inst, &tokens, &tgt, !target.is_u(), target.is_bimodule());
    let lower = level_tokens(inst, target, n - 1);
    let include = lower
        .iter()
        .zip(&tokens)
        .map(|(lr, ur)| lr.iter().zip(ur).map(|(l, u)| lookup_inclusion(l, u)).collect())
        .collect();
    Truncation {
        target,
        level: n,
        action_level,
        tokens,
        quiver: inst.quiver(),
        left: b.left,
        right: target.is_bimodule().then_some(b.right),
        include,
    }
}

/// The combination `Σ coef·token` of an entry's basis, for display and tests.
pub fn expand(tokens: &[SXToken], v: &[Rat]) -> Combo {
    let mut c = Combo::new();
    for (t, a) in tokens.iter().zip(v) {
        push(&mut c, a.clone(), t.clone());
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{FPModPID, Poly};

    #[test]
    fn prufer_truncation() {
        let inst = EpiInstance::cpid(&[0]);
        let t = inst.truncate(Target::KAsLeftRModule, 3);
        assert_eq!(t.dims(), vec![vec![3]]);
        let m = FPModPID::from_action(&t.left[0][0]);
        assert_eq!(m.normalized().divisors, vec![Poly::from_ints(&[0, 0, 0, 1])]);
        let two = EpiInstance::cpid(&[0, 1]);
        for n in 1..5 {
            assert_eq!(two.truncate(Target::KBimodule, n).total_dim(), 2 * n);
        }
    }

    #[test]
    fn kronecker_first_level_is_the_lowest_tokens() {
        let inst = EpiInstance::kron(&[]);
        let t = inst.truncate(Target::KBimodule, 1);
        let lowest = |i: usize, j: usize| t.tokens[i][j].clone();
        assert_eq!(lowest(0, 1), vec![SXToken::pow(0)]);
        assert_eq!(lowest(1, 1), vec![SXToken::pow(1)]);
        assert_eq!(lowest(0, 0), vec![SXToken::pow(1)]);
        assert_eq!(lowest(1, 0), vec![SXToken::pow(2)]);
        assert!(t.bimod().unwrap().actions_commute());
    }

    fn check_inclusions(inst: &EpiInstance, target: Target, top: usize) {
        for n in 1..top {
            let lo = inst.truncate(target, n);
            let hi = inst.truncate(target, n + 1);
            let q = inst.quiver();
            // the inclusion into the action level of the upper truncation
            let act_inc = if lo.action_level == lo.level { hi.include.clone() } else {
                inst.truncate(target, lo.action_level + 1).include.clone()
            };
            for (a, &(s, t)) in q.arrows().iter().enumerate() {
                for j in 0..q.vertices() {
                    assert_eq!(hi.left[a][j].mul(&hi.include[s][j]), act_inc[t][j].mul(&lo.left[a][j]));
                }
            }
            for row in &hi.include {
                for m in row {
                    assert_eq!(m.rank(), m.cols(), "inclusions are injective");
                }
            }
        }
    }

    #[test]
    fn inclusions_intertwine_actions() {
        for inst in [EpiInstance::cpid(&[0, 1]), EpiInstance::kron(&[]), EpiInstance::kron(&[0, 2])] {
            for target in [Target::KBimodule, Target::UBimodule, Target::KAsLeftRModule, Target::UAsLeftRModule] {
                check_inclusions(&inst, target, 4);
            }
        }
    }

    #[test]
    fn bimodule_levels_commute() {
        for inst in [EpiInstance::cpid(&[0, 1]), EpiInstance::kron(&[0, 2])] {
            for n in 1..4 {
                for p in inst.k_level(n) {
                    assert!(p.bimod.actions_commute());
                }
                if let Some(u) = inst.truncate(Target::UBimodule, n).bimod() {
                    assert!(u.actions_commute());
                }
            }
        }
    }

    #[test]
    fn restricted_u_levels_have_injective_f() {
        let inst = EpiInstance::kron(&[2]);
        for n in 1..4 {
            let u = inst.truncate(Target::UAsLeftRModule, n).left_module().unwrap();
            assert_eq!(u.maps[0].rank(), u.dims[0]);
        }
    }

    #[test]
    fn exhaustion() {
        let inst = EpiInstance::kron(&[2]);
        let t = inst.truncate(Target::UBimodule, 6);
        for i in 0..2 {
            for j in 0..2 {
                for m in 0..5 {
                    assert!(t.tokens[i][j].contains(&SXToken::pow(m)));
                }
                for k in 1..6 {
                    assert!(t.tokens[i][j].contains(&SXToken::pole(Rat::int(2), k)));
                }
            }
        }
    }

    #[test]
    fn leaks_record_the_unit() {
        let inst = EpiInstance::cpid(&[3]);
        let p = inst.k_piece(&Point::int(3), 2);
        assert_eq!(p.leak_left[0][0], vec![Leak { r: RBasis::XPow(0), coef: vec![Rat::one(), Rat::zero()] }]);
        assert_eq!(p.bimod.left[0][0], QMat::from_ints(2, 2, &[3, 1, 0, 3]));
    }
}
