//! The adjunctions `Hom(M, Γ(A)) ≅ Hom(M, A)` for comodules `M` and
//! `Hom(Δ(B), C) ≅ Hom(B, C)` for contramodules `C`, as explicit linear maps.
//!
//! When `Γ(A)` has a localized part `L`, `Hom(M, L) = Ext¹(M, L) = 0` for a comodule `M`,
//! so `Hom(M, Γ(A)) = Hom(M, Γ(A)/L)` and the check runs on the finite quotient `im γ`.
//! Dually, when `Δ(B)` does not stabilize, the check runs on `B / im(Hom(U, B) → B)`.

use serde::{Deserialize, Serialize};

use super::{delta, delta_core, gamma, tor_ext_u, Functor, FunctorError, ModValue};
use crate::exact::{QMat, Rat};
use crate::instances::EpiInstance;
use crate::quiver::rep::hom_basis;
use crate::quiver::{Morphism, Rep};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjunctionVerdict {
    /// `dim Hom(M, Γ(A))`, resp. `dim Hom(Δ(B), C)`.
    pub dim_adjoint: usize,
    /// `dim Hom(M, A)`, resp. `dim Hom(B, C)`.
    pub dim_direct: usize,
    pub rank: usize,
    /// The value was finite; otherwise the reduction to its finite part was used.
    pub complete: bool,
    pub iso: bool,
}

fn verdict(images: Vec<Vec<Rat>>, dim_adjoint: usize, dim_direct: usize, complete: bool) -> AdjunctionVerdict {
    let rank = if images.is_empty() { 0 } else { QMat::from_columns(images[0].len(), &images).rank() };
    AdjunctionVerdict { dim_adjoint, dim_direct, rank, complete, iso: rank == dim_adjoint && rank == dim_direct }
}

/// Both `U`-functors vanish on `m`.
fn vanishes(inst: &EpiInstance, m: &Rep, fs: [Functor; 2]) -> Result<bool, FunctorError> {
    let v = ModValue::fin(m);
    for f in fs {
        if !tor_ext_u(inst, &v, f)?.value.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Hom(M, Γ(A)) → Hom(M, A)`, `φ ↦ γ∘φ`, for a comodule `M`.
pub fn adjunction_check_comodule(inst: &EpiInstance, m: &Rep, a: &Rep) -> Result<AdjunctionVerdict, FunctorError> {
    if !vanishes(inst, m, [Functor::Tor0, Functor::Tor1])? {
        return Err(FunctorError::Precondition("first argument is not a comodule".into()));
    }
    let g = gamma(inst, a)?;
    let basis = hom_basis(m, &g.core);
    let images: Vec<_> = basis.iter().map(|phi| g.map.compose(phi).to_vec()).collect();
    Ok(verdict(images, basis.len(), hom_basis(m, a).len(), g.complete))
}

/// `Hom(Δ(B), C) → Hom(B, C)`, `ψ ↦ ψ∘δ`, for a contramodule `C`.
pub fn adjunction_check_contramodule(inst: &EpiInstance, c: &Rep, b: &Rep) -> Result<AdjunctionVerdict, FunctorError> {
    if !vanishes(inst, c, [Functor::Ext0, Functor::Ext1])? {
        return Err(FunctorError::Precondition("first argument is not a contramodule".into()));
    }
    let (core, map, complete): (Rep, Morphism, bool) = match delta(inst, b) {
        Ok(d) => (d.core, d.map, true),
        Err(FunctorError::NoStabilization(_)) => {
            let (q, p, _) = delta_core(inst, b)?;
            (q, p, false)
        }
        Err(e) => return Err(e),
    };
    let basis = hom_basis(&core, c);
    let images: Vec<_> = basis.iter().map(|psi| psi.compose(&map).to_vec()).collect();
    Ok(verdict(images, basis.len(), hom_basis(b, c).len(), complete))
}
