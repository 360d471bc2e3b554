//! Exact arithmetic over ℚ and ℚ[x]: rationals, polynomials, dense matrices,
//! Smith normal form and finitely presented modules over the PID ℚ[x].

pub mod fpmod;
pub mod poly;
pub mod polymat;
pub mod qmat;
pub mod rat;
pub mod subspace;

pub use fpmod::{fp_module_normal_form, pid_hom_ext_tor, pid_tensor, FPModPID, Normal};
pub use poly::Poly;
pub use polymat::{smith_normal_form, PolyMat, SmithForm};
pub use qmat::{QMat, Solver};
pub use rat::Rat;
pub use subspace::Subquotient;
