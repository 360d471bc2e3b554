//! Stabilization certificates for towers of finite-dimensional level values.
//!
//! `k` is the run of consecutive isomorphisms, `w` the window within which classes must die
//! (`w = 0` for towers with injective, resp. surjective, transition maps).
//!
//! Colimit at `s`: with `D_n = ker(T_n → T_h)` for the horizon `h = s + k + w`, every `D_n` for
//! `n ∈ [s, s+k]` is already reached within `w` levels, and `T_n/D_n → T_{n+1}/D_{n+1}` is an
//! isomorphism for `n ∈ [s, s+k)`. The value is `T_s/D_s`. A zero value additionally needs every
//! class of every level `n < s` to die within `w` levels.
//!
//! Limit at `s`: images `I_n = im(V_h → V_n)` are already reached from `V_{n+w}` for
//! `n ∈ [s, s+k]`, and `I_{n+1} → I_n` is an isomorphism for `n ∈ [s, s+k)`. The value is `I_s`.

use serde::{Deserialize, Serialize};

use super::tower::{Obj, Tower};
use super::FunctorError;
use crate::exact::QMat;
use crate::quiver::{Morphism, Rep};

/// Consecutive isomorphisms required.
pub const WINDOW: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Colim,
    Lim,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertKind {
    /// Transition maps certified isomorphisms (modulo classes that die).
    Stable,
    /// The stabilized value is zero.
    Vanishing,
    /// Value given by a closed-form rule; the levels were checked for consistency.
    ClosedForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabCert {
    pub stable_level: usize,
    pub checked_through: usize,
    pub mode: Mode,
    pub kind: CertKind,
}

impl StabCert {
    pub fn trivial(mode: Mode) -> StabCert {
        StabCert { stable_level: 1, checked_through: 1, mode, kind: CertKind::Vanishing }
    }
}

/// A certified value in the basis of level `level`.
#[derive(Clone, Debug)]
pub struct Stabilized {
    pub level: usize,
    pub rep: Rep,
    /// Colimit: `T_s → value`. Limit: `value → V_s`.
    pub canon: Morphism,
    /// Colimit: a section of `canon`. Limit: a retraction of `canon` (exact on its image).
    pub lift: Morphism,
    pub cert: StabCert,
}

/// Levels a certificate at `s` with dying window `w` needs.
pub fn horizon(s: usize, w: usize) -> usize {
    s + WINDOW + w
}

fn rank_total(m: &Morphism) -> usize {
    m.rank_dims().iter().sum()
}

/// Whether the certificate conditions hold at level `s`.
pub fn certified_at(tower: &Tower, o: Obj, s: usize, w: usize) -> bool {
    let (k, h) = (WINDOW, horizon(s, w));
    if o.is_lim() {
        let img = |n: usize, m: usize| rank_total(&tower.composite(o, n, m));
        (s..=s + k).all(|n| img(n, n + w) == img(n, h)) && (s..s + k).all(|n| img(n + 1, h) == img(n, h))
    } else {
        let alive = |n: usize, m: usize| rank_total(&tower.composite(o, n, m));
        (s..=s + k).all(|n| alive(n, n + w) == alive(n, h)) && (s..s + k).all(|n| alive(n + 1, h) == alive(n, h))
    }
}

/// Finds the first certified level `s ≤ budget`. The tower must reach `horizon(budget, w)`.
pub fn certify(tower: &Tower, o: Obj, budget: usize, w: usize) -> Result<Stabilized, FunctorError> {
    assert!(tower.max_level() >= horizon(budget, w), "tower too short for the budget");
    for s in 1..=budget.max(1) {
        if !certified_at(tower, o, s, w) {
            continue;
        }
        let value = value_at(tower, o, s, w);
        if value.rep.is_zero() && !o.is_lim() {
            // every class of every lower level must die within the window as well
            let dies = |n: usize| rank_total(&tower.composite(o, n, n + w)) == 0;
            if !(1..s).all(dies) {
                continue;
            }
        }
        return Ok(value);
    }
    Err(FunctorError::NoStabilization(budget))
}

/// The value read off at level `s`, assuming `certified_at(tower, o, s, w)`.
pub fn value_at(tower: &Tower, o: Obj, s: usize, w: usize) -> Stabilized {
    let h = horizon(s, w);
    if o.is_lim() {
        lim_value(tower, o, s, h)
    } else {
        colim_value(tower, o, s, h)
    }
}

fn colim_value(tower: &Tower, o: Obj, s: usize, h: usize) -> Stabilized {
    let ts = tower.obj(o, s).rep.clone();
    let dying: Vec<QMat> = tower.composite(o, s, h).comps.iter().map(QMat::kernel).collect();
    let (rep, canon) = ts.quotient(&dying);
    let lift = Morphism { comps: canon.comps.iter().map(section).collect() };
    let kind = if rep.is_zero() { CertKind::Vanishing } else { CertKind::Stable };
    Stabilized {
        level: s,
        rep,
        canon,
        lift,
        cert: StabCert { stable_level: s, checked_through: h, mode: Mode::Colim, kind },
    }
}

fn lim_value(tower: &Tower, o: Obj, s: usize, h: usize) -> Stabilized {
    let vs = tower.obj(o, s).rep.clone();
    let image: Vec<QMat> = tower.composite(o, s, h).comps.iter().map(QMat::column_space).collect();
    let (rep, canon) = vs.subrep(&image);
    let lift = Morphism { comps: canon.comps.iter().map(retraction).collect() };
    let kind = if rep.is_zero() { CertKind::Vanishing } else { CertKind::Stable };
    Stabilized {
        level: s,
        rep,
        canon,
        lift,
        cert: StabCert { stable_level: s, checked_through: h, mode: Mode::Lim, kind },
    }
}

/// A right inverse of a surjection.
pub(crate) fn section(p: &QMat) -> QMat {
    p.transpose().mul(&p.mul(&p.transpose()).inverse().expect("surjective projection"))
}

/// A left inverse of an injection.
pub(crate) fn retraction(i: &QMat) -> QMat {
    i.transpose().mul(&i).inverse().expect("injective inclusion").mul(&i.transpose())
}
