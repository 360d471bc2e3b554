//! The eight module classes, computed twice: from the functor values (definitional) and from
//! eigenvalue and block data (structural). Their agreement is tested, never assumed.

pub mod blocks;
pub mod endring;
pub mod flat;
pub mod matlis;
pub mod projinj;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::exact::{FPModPID, Poly, QMat, Rat};
use crate::functor::{closed, horizon, Engine, FinMod, FunctorError, Obj};
use crate::instances::EpiInstance;
use crate::quiver::{pencil_profile, KronRep, Point, Rep};

pub use blocks::{lambda_decompose, BlockDecomp, BlockSide, Component};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Path {
    Definitional,
    Structural,
}

impl FromStr for Path {
    type Err = FunctorError;

    fn from_str(s: &str) -> Result<Path, FunctorError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "definitional" | "def" => Ok(Path::Definitional),
            "structural" | "struct" => Ok(Path::Structural),
            other => Err(FunctorError::Precondition(format!("unknown path {other}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFlags {
    pub torsion: bool,
    pub torsionfree: bool,
    pub divisible: bool,
    pub reduced: bool,
    pub special: bool,
    pub cospecial: bool,
    pub comodule: bool,
    pub contramodule: bool,
    pub path: Path,
}

pub const FLAG_NAMES: [&str; 8] =
    ["torsion", "torsionfree", "divisible", "reduced", "special", "cospecial", "comodule", "contramodule"];

impl ClassFlags {
    pub fn values(&self) -> [bool; 8] {
        [
            self.torsion,
            self.torsionfree,
            self.divisible,
            self.reduced,
            self.special,
            self.cospecial,
            self.comodule,
            self.contramodule,
        ]
    }

    /// Names of the flags on which `self` and `other` differ.
    pub fn disagreements(&self, other: &ClassFlags) -> Vec<&'static str> {
        let (a, b) = (self.values(), other.values());
        FLAG_NAMES.iter().zip(a.iter().zip(&b)).filter(|(_, (x, y))| x != y).map(|(n, _)| *n).collect()
    }

    /// Implications forced by the definitions.
    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.comodule && !self.torsion {
            v.push("comodule without torsion");
        }
        if self.contramodule && !self.reduced {
            v.push("contramodule without reduced");
        }
        v
    }
}

impl fmt::Display for ClassFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let on: Vec<&str> = FLAG_NAMES.iter().zip(self.values()).filter(|(_, b)| *b).map(|(n, _)| *n).collect();
        write!(f, "{{{}}}", on.join(", "))
    }
}

pub fn classify(inst: &EpiInstance, m: &Rep, path: Path) -> Result<ClassFlags, FunctorError> {
    inst.check_module(m)?;
    let flags = match path {
        Path::Definitional => definitional(inst, m)?,
        Path::Structural if inst.is_kron() => structural_kron(inst, &KronRep::from_rep(m))?,
        Path::Structural => structural_cpid(inst, &m.maps[0]),
    };
    let bad = flags.violations();
    if !bad.is_empty() {
        return Err(FunctorError::Inconsistent(bad.join("; ")));
    }
    Ok(flags)
}

/// Finite input as a representation; modules over `ℚ[x]` with a free part are not
/// finite-dimensional.
pub fn classify_fin(inst: &EpiInstance, m: &FinMod, path: Path) -> Result<ClassFlags, FunctorError> {
    let rep = m.to_rep()?;
    classify(inst, &rep, path)
}

fn definitional(inst: &EpiInstance, m: &Rep) -> Result<ClassFlags, FunctorError> {
    let e = Engine::new(inst, m);
    let t = e.tower();
    let total = m.total_dim();
    // U ⊗ M and Tor₁(U, M) are infinite exactly when the pencil `G − xF` has a free cokernel,
    // resp. a kernel; otherwise they are certified finite values
    let (tor0u_infinite, tor1u_infinite) = if inst.is_kron() {
        let (coker, ker_rank) = closed::morita(inst, &KronRep::from_rep(m));
        (coker.normalized().free_rank > 0, ker_rank > 0)
    } else {
        (false, false)
    };
    let torsion = !tor0u_infinite && e.stabilize(Obj::Tor0U)?.rep.is_zero();
    let tor1u_zero = !tor1u_infinite && e.stabilize(Obj::Tor1U)?.rep.is_zero();
    // ker(M → U ⊗ M) = im γ and im(Hom(U, M) → M)
    let gamma_dim: usize = e.gamma_image()?.0.iter().map(QMat::cols).sum();
    let eval_dim: usize = e.eval_image()?.0.iter().map(QMat::cols).sum();
    let homk_zero = e.lim_vanishes(Obj::HomK)?;
    // with im(Hom(U, M) → M) = 0 the sequence gives Hom(U, M) = Hom(K, M)
    let reduced = eval_dim == 0 && homk_zero;
    // Ext¹(U, M) has surjective transitions: it vanishes iff every level does
    let top = horizon(e.budget, 0);
    let ext1u_zero = (1..=top).all(|n| t.delta_rank(n) == t.ext1k_dim(n));
    Ok(ClassFlags {
        torsion,
        torsionfree: gamma_dim == 0,
        divisible: eval_dim == total,
        reduced,
        special: e.colim_vanishes(Obj::Tor0K)?,
        cospecial: homk_zero,
        comodule: torsion && tor1u_zero,
        contramodule: reduced && ext1u_zero,
        path: Path::Definitional,
    })
}

/// A finite point outside `points`, for the coordinate change `x ↦ x − c`.
fn chart_center(points: &[Point]) -> Rat {
    (0..).map(Rat::int).find(|c| !points.contains(&Point::Finite(c.clone()))).expect("finitely many points")
}

/// `(A, c)` with `A = G − cF` and `c` a finite point outside `points`.
pub fn chart(m: &KronRep, points: &[Point]) -> (QMat, Rat) {
    let c = chart_center(points);
    (m.g.sub(&m.f.scale(&c)), c)
}

/// Eigenvalue of `y = F (G − cF)⁻¹` belonging to the point `λ`: `0` at `∞`, `1/(λ − c)` else.
pub fn chart_eigenvalue(p: &Point, c: &Rat) -> Rat {
    match p {
        Point::Infinity => Rat::zero(),
        Point::Finite(l) => (l - c).recip(),
    }
}

/// `∏_μ (y − μ)^d`.
fn annihilator(y: &QMat, mus: &[Rat]) -> QMat {
    let d = y.rows();
    mus.iter().fold(QMat::identity(d), |acc, mu| acc.mul(&y.sub(&QMat::scalar(d, mu)).pow(d)))
}

/// `M` is supported in `points` with nilpotent local operators: after the coordinate change
/// `G − cF` is invertible and `y = F(G − cF)⁻¹` has its spectrum in the images of `points`.
pub fn supported_in(m: &KronRep, points: &[Point]) -> bool {
    if m.d1 != m.d2 {
        return false;
    }
    if m.is_zero() {
        return true;
    }
    let (a, c) = chart(m, points);
    let Some(inv) = a.inverse() else { return false };
    let y = m.f.mul(&inv);
    let mus: Vec<Rat> = points.iter().map(|p| chart_eigenvalue(p, &c)).collect();
    annihilator(&y, &mus).is_zero()
}

fn structural_kron(inst: &EpiInstance, m: &KronRep) -> Result<ClassFlags, FunctorError> {
    let prof = pencil_profile(m)?;
    let p = prof.preprojective_count();
    let q = prof.preinjective_count();
    let at_x: usize = inst.points().iter().map(|x| prof.regular_dim_at(x)).sum();
    let off_x = prof.regular_dim() - at_x;
    let local = supported_in(m, inst.points());
    if local != (p == 0 && q == 0 && off_x == 0) {
        return Err(FunctorError::Inconsistent("eigenvalue criterion disagrees with the block profile".into()));
    }
    Ok(ClassFlags {
        torsion: p == 0 && off_x == 0,
        torsionfree: q == 0 && at_x == 0,
        divisible: p == 0 && at_x == 0,
        reduced: q == 0 && off_x == 0,
        special: p == 0,
        cospecial: q == 0,
        comodule: local,
        contramodule: local,
        path: Path::Structural,
    })
}

/// `s(x) = ∏_{y ∈ Y} (x − y)` on the module.
pub(crate) fn pole_operator(inst: &EpiInstance, x: &QMat) -> QMat {
    let s = inst.poles().iter().fold(Poly::one(), |acc, y| &acc * &Poly::linear(y));
    let d = x.rows();
    s.coeffs().iter().rev().fold(QMat::zeros(d, d), |acc, c| acc.mul(x).add(&QMat::scalar(d, c)))
}

/// A finite-length `ℚ[x]`-module splits as `T_Y ⊕ T_off`; `T_off = 0` iff `s` is nilpotent
/// and `T_Y = 0` iff `s` is invertible.
fn structural_cpid(inst: &EpiInstance, x: &QMat) -> ClassFlags {
    let s = pole_operator(inst, x);
    let local = s.pow(x.rows()).is_zero();
    let unit = s.is_invertible();
    ClassFlags {
        torsion: local,
        torsionfree: unit,
        divisible: unit,
        reduced: local,
        special: true,
        cospecial: true,
        comodule: local,
        contramodule: local,
        path: Path::Structural,
    }
}

/// The divisor data of a finite `ℚ[x]`-module given by its action.
pub fn pid_divisors(x: &QMat) -> Vec<Poly> {
    FPModPID::from_action(x).normalized().divisors
}

#[cfg(test)]
mod tests;
