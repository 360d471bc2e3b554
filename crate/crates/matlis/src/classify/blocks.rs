//! Decomposition of a finite-dimensional comodule (equivalently contramodule) over the
//! Kronecker family into its `{λ}`-components, `λ ∈ X`.
//!
//! After the coordinate change `A = G − cF` with `c ∉ X`, the operators
//! `y₁ = A⁻¹F` on `V₁` and `y₂ = FA⁻¹` on `V₂` satisfy `y₂A = Ay₁`, and the component at `λ`
//! is the generalized eigenspace of both for the eigenvalue belonging to `λ`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{chart, chart_eigenvalue, classify, supported_in, Path};
use crate::exact::QMat;
use crate::functor::FunctorError;
use crate::instances::EpiInstance;
use crate::quiver::{KronRep, Point, RepMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockSide {
    Comodule,
    Contramodule,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Component {
    pub module: KronRep,
    /// Column-echelon bases of the component inside `V₁` and `V₂`.
    pub inclusion: RepMap,
    /// The `{λ}`-predicate.
    pub local: bool,
}

/// Components keyed by point, `∞` last. In finite dimension the direct product is the sum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockDecomp {
    pub side: BlockSide,
    pub components: BTreeMap<Point, Component>,
    /// `⊕ components → M`, the inclusions side by side.
    pub witness: RepMap,
    pub reassembles: bool,
}

impl BlockDecomp {
    pub fn dims(&self) -> BTreeMap<Point, (usize, usize)> {
        self.components.iter().map(|(p, c)| (p.clone(), c.module.dims())).collect()
    }

    pub fn sum(&self) -> KronRep {
        KronRep::sum_all(self.components.values().map(|c| &c.module))
    }
}

fn eigenspace(y: &QMat, mu: &crate::exact::Rat) -> QMat {
    let d = y.rows();
    y.sub(&QMat::scalar(d, mu)).pow(d).kernel().column_space()
}

pub fn lambda_decompose(inst: &EpiInstance, m: &KronRep, side: BlockSide) -> Result<BlockDecomp, FunctorError> {
    if !inst.is_kron() {
        return Err(FunctorError::Precondition("block decomposition needs the Kronecker family".into()));
    }
    let flags = classify(inst, &m.to_rep(), Path::Structural)?;
    let admitted = match side {
        BlockSide::Comodule => flags.comodule,
        BlockSide::Contramodule => flags.contramodule,
    };
    if !admitted {
        return Err(FunctorError::Precondition(format!("module is not a {side:?}").to_lowercase()));
    }
    let d = m.d1;
    let (y1, y2, c) = if d == 0 {
        (QMat::zeros(0, 0), QMat::zeros(0, 0), crate::exact::Rat::zero())
    } else {
        let (a, c) = chart(m, inst.points());
        let inv = a.inverse().ok_or_else(|| FunctorError::Inconsistent("G − cF is singular on a comodule".into()))?;
        (inv.mul(&m.f), m.f.mul(&inv), c)
    };
    let mut components = BTreeMap::new();
    for p in inst.points() {
        let mu = chart_eigenvalue(p, &c);
        let (w1, w2) = (eigenspace(&y1, &mu), eigenspace(&y2, &mu));
        let (f, g) = (m.f.mul(&w1), m.g.mul(&w1));
        let (Some(fc), Some(gc)) = (w2.solve_mat(&f), w2.solve_mat(&g)) else {
            return Err(FunctorError::Inconsistent(format!("component at {p} is not a subrepresentation")));
        };
        let module = KronRep { d1: w1.cols(), d2: w2.cols(), f: fc, g: gc };
        let local = supported_in(&module, std::slice::from_ref(p));
        components.insert(p.clone(), Component { module, inclusion: RepMap::new(w1, w2), local });
    }
    let stack = |pick: fn(&RepMap) -> &QMat, rows: usize| {
        components.values().fold(QMat::zeros(rows, 0), |acc, c| acc.hstack(pick(&c.inclusion)))
    };
    let witness = RepMap::new(stack(|r| &r.a1, m.d1), stack(|r| &r.a2, m.d2));
    let sum = KronRep::sum_all(components.values().map(|c| &c.module));
    let reassembles = witness.is_iso() && witness.is_intertwiner(&sum, m);
    Ok(BlockDecomp { side, components, witness, reassembles })
}
