//! Finitely presented ℚ[x]-modules.
//!
//! A presentation matrix `A` (m×n) defines `ℚ[x]^m / A·ℚ[x]^n`: rows index generators,
//! columns index relations.

use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::polymat::{smith_normal_form, PolyMat};
use super::qmat::QMat;
use super::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normal {
    pub free_rank: usize,
    /// Monic, nonconstant, each dividing the next.
    pub divisors: Vec<Poly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FPModPID {
    pub presentation: PolyMat,
    #[serde(default)]
    pub normal: Option<Normal>,
}

impl FPModPID {
    pub fn new(presentation: PolyMat) -> FPModPID {
        FPModPID { presentation, normal: None }
    }

    pub fn zero() -> FPModPID {
        FPModPID::new(PolyMat::zeros(0, 0))
    }

    pub fn free(rank: usize) -> FPModPID {
        FPModPID::new(PolyMat::zeros(rank, 0))
    }

    /// `ℚ[x]/(p)`.
    pub fn cyclic(p: &Poly) -> FPModPID {
        FPModPID::new(PolyMat::from_rows(vec![vec![p.clone()]], 1))
    }

    /// Free part plus cyclic summands, diagonally presented and normalized.
    pub fn from_parts(free_rank: usize, cyclics: &[Poly]) -> FPModPID {
        let k = cyclics.len();
        let mut a = PolyMat::zeros(free_rank + k, k);
        for (i, p) in cyclics.iter().enumerate() {
            a[(free_rank + i, i)] = p.clone();
        }
        fp_module_normal_form(&FPModPID::new(a))
    }

    /// The module `coker(x·I − X)`, i.e. `ℚⁿ` with `x` acting by `X`.
    pub fn from_action(x: &QMat) -> FPModPID {
        let n = x.rows();
        FPModPID::new(PolyMat::linear(&x.neg(), &QMat::identity(n)))
    }

    pub fn direct_sum(&self, other: &FPModPID) -> FPModPID {
        let (a, b) = (&self.presentation, &other.presentation);
        let mut m = PolyMat::zeros(a.rows() + b.rows(), a.cols() + b.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                m[(i, j)] = a[(i, j)].clone();
            }
        }
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                m[(a.rows() + i, a.cols() + j)] = b[(i, j)].clone();
            }
        }
        FPModPID::new(m)
    }

    pub fn normalized(&self) -> Normal {
        match &self.normal {
            Some(n) => n.clone(),
            None => fp_module_normal_form(self).normal.expect("normal form present"),
        }
    }

    pub fn is_zero(&self) -> bool {
        let n = self.normalized();
        n.free_rank == 0 && n.divisors.is_empty()
    }

    /// `ℚ`-dimension, `None` when a free summand is present.
    pub fn dim(&self) -> Option<usize> {
        let n = self.normalized();
        (n.free_rank == 0).then(|| n.divisors.iter().map(|d| d.degree().unwrap_or(0)).sum())
    }

    /// Companion model: the matrix of `x` on the basis `1, x, …` of each cyclic summand.
    /// `None` when a free summand is present.
    pub fn action_matrix(&self) -> Option<QMat> {
        let n = self.normalized();
        if n.free_rank > 0 {
            return None;
        }
        let blocks: Vec<QMat> = n.divisors.iter().map(companion).collect();
        Some(QMat::block_diag(&blocks.iter().collect::<Vec<_>>()))
    }

    /// Largest multiplicity of any root `a` among the divisors.
    pub fn exponent_at(&self, a: &Rat) -> usize {
        self.normalized().divisors.iter().map(|d| d.valuation_at(a)).max().unwrap_or(0)
    }
}

/// Companion matrix of a monic polynomial: `x·xⁱ = xⁱ⁺¹`, reduced modulo `p`.
pub fn companion(p: &Poly) -> QMat {
    let d = p.degree().expect("companion of zero");
    let p = p.monic();
    let mut c = QMat::zeros(d, d);
    for i in 0..d {
        if i + 1 < d {
            c[(i + 1, i)] = Rat::one();
        }
        c[(i, d - 1)] = -p.coeff(i);
    }
    c
}

pub fn fp_module_normal_form(m: &FPModPID) -> FPModPID {
    if m.normal.is_some() {
        return m.clone();
    }
    let s = smith_normal_form(&m.presentation);
    let divisors: Vec<Poly> = s.diag.into_iter().filter(|d| !d.is_constant()).collect();
    FPModPID { presentation: m.presentation.clone(), normal: Some(Normal { free_rank: s.profile, divisors }) }
}

/// `Hom`, `Ext¹` and `Tor₁` from the diagonal resolution
/// `0 → ℚ[x]^t --diag(pᵢ)--> ℚ[x]^{f+t} → M → 0` of a normalized `M`.
pub fn pid_hom_ext_tor(m: &FPModPID, n: &FPModPID) -> (FPModPID, FPModPID, FPModPID) {
    let (mn, nn) = (m.normalized(), n.normalized());
    let gcds = |p: &Poly| -> Vec<Poly> { nn.divisors.iter().map(|q| p.gcd(q)).collect() };
    // ker(p on N) ≅ ⊕ ℚ[x]/gcd(p, q_j); coker(p on N) adds (ℚ[x]/p)^free.
    let mut hom = Vec::new();
    for _ in 0..mn.free_rank {
        hom.extend(nn.divisors.iter().cloned());
    }
    let mut ext = Vec::new();
    let mut tor = Vec::new();
    for p in &mn.divisors {
        let g = gcds(p);
        hom.extend(g.iter().cloned());
        tor.extend(g.iter().cloned());
        ext.extend(g);
        for _ in 0..nn.free_rank {
            ext.push(p.clone());
        }
    }
    let keep = |v: Vec<Poly>| -> Vec<Poly> { v.into_iter().filter(|p| !p.is_constant()).collect() };
    (
        FPModPID::from_parts(mn.free_rank * nn.free_rank, &keep(hom)),
        FPModPID::from_parts(0, &keep(ext)),
        FPModPID::from_parts(0, &keep(tor)),
    )
}

/// `M ⊗ N` for normalized inputs.
pub fn pid_tensor(m: &FPModPID, n: &FPModPID) -> FPModPID {
    let (mn, nn) = (m.normalized(), n.normalized());
    let mut parts = Vec::new();
    for _ in 0..mn.free_rank {
        parts.extend(nn.divisors.iter().cloned());
    }
    for p in &mn.divisors {
        for q in &nn.divisors {
            let g = p.gcd(q);
            if !g.is_constant() {
                parts.push(g);
            }
        }
        for _ in 0..nn.free_rank {
            parts.push(p.clone());
        }
    }
    FPModPID::from_parts(mn.free_rank * nn.free_rank, &parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_ints(cs)
    }

    fn divisors(m: &FPModPID) -> Vec<Poly> {
        m.normalized().divisors
    }

    #[test]
    fn normal_forms() {
        let x2 = p(&[0, 0, 1]);
        assert_eq!(divisors(&FPModPID::cyclic(&x2)), vec![x2.clone()]);
        let two = PolyMat::from_rows(vec![vec![p(&[0, 1]), p(&[])], vec![p(&[]), p(&[0, 1])]], 2);
        assert_eq!(divisors(&FPModPID::new(two)), vec![p(&[0, 1]), p(&[0, 1])]);
        // The off-diagonal 1 glues two copies of ℚ[x]/(x) into ℚ[x]/(x²).
        let glued = PolyMat::from_rows(vec![vec![p(&[0, 1]), p(&[1])], vec![p(&[]), p(&[0, 1])]], 2);
        assert_eq!(divisors(&FPModPID::new(glued)), vec![x2]);
        let n = fp_module_normal_form(&FPModPID::free(2));
        assert_eq!(n.normalized(), Normal { free_rank: 2, divisors: vec![] });
    }

    #[test]
    fn normal_form_is_idempotent() {
        let m = fp_module_normal_form(&FPModPID::from_action(&QMat::from_ints(2, 2, &[0, 1, 0, 0])));
        assert_eq!(fp_module_normal_form(&m), m);
        assert_eq!(divisors(&m), vec![p(&[0, 0, 1])]);
    }

    #[test]
    fn companion_model_recovers_module() {
        let f = &p(&[0, 1]).pow(2) * &p(&[-1, 1]);
        let m = FPModPID::cyclic(&f);
        let x = m.action_matrix().unwrap();
        assert_eq!(divisors(&FPModPID::from_action(&x)), vec![f]);
    }

    #[test]
    fn hom_ext_tor_examples() {
        let kx = FPModPID::cyclic(&p(&[0, 1]));
        let (h, e, t) = pid_hom_ext_tor(&kx, &kx);
        for v in [&h, &e, &t] {
            assert_eq!(divisors(v), vec![p(&[0, 1])]);
        }
        let n = FPModPID::from_parts(1, &[p(&[0, 0, 1])]);
        let (h, e, t) = pid_hom_ext_tor(&fp_module_normal_form(&FPModPID::free(1)), &n);
        assert_eq!(h.normalized(), n.normalized());
        assert!(e.is_zero() && t.is_zero());
        let k1 = FPModPID::cyclic(&p(&[-1, 1]));
        let (h, e, t) = pid_hom_ext_tor(&kx, &k1);
        assert!(h.is_zero() && e.is_zero() && t.is_zero());
    }

    #[test]
    fn torsion_into_free() {
        let kx = FPModPID::cyclic(&p(&[0, 1]));
        let r = FPModPID::free(1);
        let (h, e, t) = pid_hom_ext_tor(&kx, &r);
        assert!(h.is_zero() && t.is_zero());
        assert_eq!(divisors(&e), vec![p(&[0, 1])]);
        assert_eq!(pid_tensor(&kx, &r).dim(), Some(1));
    }
}
