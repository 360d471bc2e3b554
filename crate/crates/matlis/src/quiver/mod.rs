//! Representations of the Kronecker quiver `V₁ ⇉ V₂` (left modules over the triangular
//! algebra `(k, k⊕kx; 0, k)`) and of the one-loop quiver.

pub mod bimod;
pub mod kron;
pub mod pencil;
pub mod rep;

use thiserror::Error;

pub use kron::{euler_form, hom_dim, hom_ext_rep, standard_reps, HomExtRep, KronRep, Point, RepMap, StdRep};
pub use pencil::{are_isomorphic, find_iso, pencil_decompose, pencil_profile, PencilBlock, PencilBlocks, PencilProfile};
pub use bimod::{Bimod, RightRep};
pub use rep::{Morphism, Quiver, Rep};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("invalid representation kind: {0}")]
    InvalidKind(String),
    #[error("invalid point of the projective line: {0}")]
    BadPoint(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("the regular part has an eigenvalue outside Q and infinity")]
    IrrationalEigenvalue,
    #[error("rational root search exceeded its coefficient bound")]
    RootSearch,
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
