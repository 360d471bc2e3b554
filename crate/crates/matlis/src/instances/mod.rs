//! The two instance families of an injective ring epimorphism `u: R → U`.
//!
//! * `Cpid(Y)`: `R = ℚ[x]`, `U = S_Y`, the localization inverting `x − μ` for `μ ∈ Y`.
//! * `Kron(X)`: `R` is the Kronecker algebra `(k, k⊕kx; 0, k)` and `U` the full 2×2 matrix
//!   ring over `S_X`, the localization at the finite points of `X ∋ ∞`.
//!
//! Quiver vertex 0 is `V₁ = e₂₂·M` and vertex 1 is `V₂ = e₁₁·M`, so the bimodule component
//! `B[i][j]` is the matrix entry `(idx(i), idx(j))` with `idx(0) = 2`, `idx(1) = 1`.

pub mod levels;
pub mod tokens;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{QMat, Rat};
use crate::quiver::{KronRep, Point, Quiver, Rep};

pub use levels::{KPiece, Leak, RBasis, Target, Truncation};
pub use tokens::{inverse_action_on_tokens, x_action_on_tokens, Combo, SXToken};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("the point set of a Kronecker instance must contain inf")]
    MissingInfinity,
    #[error("the point set of a localization instance must be nonempty")]
    EmptyPoints,
    #[error("inf is not a point of the affine line")]
    InfiniteAffinePoint,
    #[error("pole at {0} is not a point of the instance")]
    PoleOutsideInstance(String),
    #[error("malformed token {0}")]
    BadToken(String),
    #[error("unknown instance kind {0}")]
    UnknownKind(String),
    #[error("bad point {0}")]
    BadPoint(String),
    #[error("module does not match the instance's ring")]
    WrongModule,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cpid,
    Kron,
}

impl FromStr for Family {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Family, InstanceError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cpid" => Ok(Family::Cpid),
            "kron" => Ok(Family::Kron),
            other => Err(InstanceError::UnknownKind(other.to_string())),
        }
    }
}

/// `{"kind": "kron"|"cpid", "points": ["inf", "2", …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InstanceDesc {
    pub kind: Family,
    pub points: Vec<Point>,
}

impl fmt::Display for InstanceDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.points.iter().map(Point::to_string).collect();
        write!(f, "{}{{{}}}", if self.kind == Family::Cpid { "CPID" } else { "KRON" }, pts.join(","))
    }
}

type PieceKey = (Point, usize);

/// Immutable after construction; level data is memoized behind a shared lock.
#[derive(Clone)]
pub struct EpiInstance {
    desc: InstanceDesc,
    pieces: Arc<Mutex<HashMap<PieceKey, Arc<KPiece>>>>,
    truncations: Arc<Mutex<HashMap<(Target, usize), Arc<Truncation>>>>,
}

impl fmt::Debug for EpiInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpiInstance({})", self.desc)
    }
}

impl PartialEq for EpiInstance {
    fn eq(&self, other: &EpiInstance) -> bool {
        self.desc == other.desc
    }
}

/// Points are sorted (finite ascending, `∞` last) and deduplicated.
pub fn make_instance(kind: Family, points: &[Point]) -> Result<EpiInstance, InstanceError> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    match kind {
        Family::Cpid => {
            if pts.is_empty() {
                return Err(InstanceError::EmptyPoints);
            }
            if pts.iter().any(Point::is_infinite) {
                return Err(InstanceError::InfiniteAffinePoint);
            }
        }
        Family::Kron => {
            if !pts.contains(&Point::Infinity) {
                return Err(InstanceError::MissingInfinity);
            }
        }
    }
    Ok(EpiInstance {
        desc: InstanceDesc { kind, points: pts },
        pieces: Arc::default(),
        truncations: Arc::default(),
    })
}

impl EpiInstance {
    pub fn from_desc(d: &InstanceDesc) -> Result<EpiInstance, InstanceError> {
        make_instance(d.kind, &d.points)
    }

    pub fn cpid(points: &[i64]) -> EpiInstance {
        make_instance(Family::Cpid, &points.iter().map(|&p| Point::int(p)).collect::<Vec<_>>())
            .expect("valid localization points")
    }

    /// `Kron({∞} ∪ finite)`.
    pub fn kron(finite: &[i64]) -> EpiInstance {
        let mut pts: Vec<Point> = finite.iter().map(|&p| Point::int(p)).collect();
        pts.push(Point::Infinity);
        make_instance(Family::Kron, &pts).expect("valid Kronecker points")
    }

    pub fn desc(&self) -> &InstanceDesc {
        &self.desc
    }

    pub fn family(&self) -> Family {
        self.desc.kind
    }

    pub fn is_kron(&self) -> bool {
        self.desc.kind == Family::Kron
    }

    pub fn quiver(&self) -> Quiver {
        match self.desc.kind {
            Family::Cpid => Quiver::Loop,
            Family::Kron => Quiver::Kronecker,
        }
    }

    /// The components of `K = U/R`, one per point.
    pub fn points(&self) -> &[Point] {
        &self.desc.points
    }

    /// The finite points, i.e. the inverted `x − λ`.
    pub fn poles(&self) -> Vec<Rat> {
        self.desc.points.iter().filter_map(|p| p.finite().cloned()).collect()
    }

    pub fn x_action(&self, t: &SXToken) -> Result<Combo, InstanceError> {
        x_action_on_tokens(&self.poles(), t)
    }

    /// Restrictions of `U`-modules: `f` invertible and `g − λf` invertible for finite `λ ∈ X`.
    pub fn is_u_module(&self, m: &KronRep) -> bool {
        m.d1 == m.d2
            && m.f.is_invertible()
            && self.poles().iter().all(|l| m.g.sub(&m.f.scale(l)).is_invertible())
    }

    /// For `Cpid`: `x − μ` invertible on `M` for every `μ ∈ Y`.
    pub fn is_u_module_loop(&self, x: &QMat) -> bool {
        self.poles().iter().all(|l| x.sub(&QMat::scalar(x.rows(), l)).is_invertible())
    }

    /// A module in the instance's generic representation form.
    pub fn check_module(&self, m: &Rep) -> Result<(), InstanceError> {
        if m.quiver == self.quiver() {
            Ok(())
        } else {
            Err(InstanceError::WrongModule)
        }
    }

    /// `K^λ` truncated at level `n`.
    pub fn k_piece(&self, point: &Point, n: usize) -> Arc<KPiece> {
        let key = (point.clone(), n);
        if let Some(p) = self.pieces.lock().expect("cache lock").get(&key) {
            return p.clone();
        }
        let piece = Arc::new(levels::build_piece(self, point, n));
        self.pieces.lock().expect("cache lock").entry(key).or_insert(piece).clone()
    }

    /// All components of `K` at level `n`, in point order.
    pub fn k_level(&self, n: usize) -> Vec<Arc<KPiece>> {
        self.desc.points.iter().map(|p| self.k_piece(p, n)).collect()
    }

    pub fn truncate(&self, target: Target, n: usize) -> Arc<Truncation> {
        let key = (target, n);
        if let Some(t) = self.truncations.lock().expect("cache lock").get(&key) {
            return t.clone();
        }
        let t = Arc::new(levels::build_truncation(self, target, n));
        self.truncations.lock().expect("cache lock").entry(key).or_insert(t).clone()
    }

    /// The matrix of an element of the `R`-basis acting `M_v → M_i`.
    pub fn r_action(&self, r: &RBasis, m: &Rep) -> QMat {
        match r {
            RBasis::Idem(v) => QMat::identity(m.dims[*v]),
            RBasis::Arrow(a) => m.maps[*a].clone(),
            RBasis::XPow(k) => m.maps[0].pow(*k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_errors() {
        assert_eq!(make_instance(Family::Kron, &[Point::int(2)]).unwrap_err(), InstanceError::MissingInfinity);
        assert_eq!(make_instance(Family::Cpid, &[]).unwrap_err(), InstanceError::EmptyPoints);
        assert_eq!(make_instance(Family::Cpid, &[Point::Infinity]).unwrap_err(), InstanceError::InfiniteAffinePoint);
        let k = make_instance(Family::Kron, &[Point::Infinity, Point::int(2), Point::int(2)]).unwrap();
        assert_eq!(k.points(), &[Point::int(2), Point::Infinity]);
    }

    #[test]
    fn descriptor_json() {
        let d: InstanceDesc = serde_json::from_str(r#"{"kind":"kron","points":["inf","2"]}"#).unwrap();
        let k = EpiInstance::from_desc(&d).unwrap();
        assert_eq!(k, EpiInstance::kron(&[2]));
        assert_eq!(serde_json::to_string(k.desc()).unwrap(), r#"{"kind":"kron","points":["2","inf"]}"#);
    }

    #[test]
    fn u_module_predicate() {
        let k = EpiInstance::kron(&[2]);
        assert!(k.is_u_module(&KronRep::from_ints(1, 1, &[1], &[0])));
        assert!(!k.is_u_module(&KronRep::from_ints(1, 1, &[1], &[2])));
        assert!(!k.is_u_module(&KronRep::from_ints(1, 1, &[0], &[1])));
    }
}
