//! Subspaces, quotients and subquotients of `ℚⁿ`, all given by column bases.

use super::qmat::QMat;
use super::rat::Rat;

/// Column-echelon basis of the span of the columns.
pub fn span(m: &QMat) -> QMat {
    m.column_space()
}

pub fn dim(m: &QMat) -> usize {
    m.rank()
}

pub fn sum(a: &QMat, b: &QMat) -> QMat {
    span(&a.hstack(b))
}

pub fn intersect(a: &QMat, b: &QMat) -> QMat {
    let k = a.hstack(&b.neg()).kernel();
    span(&a.mul(&k.block(0, a.cols(), 0, k.cols())))
}

/// `{v : map·v ∈ span(sub)}`.
pub fn preimage(map: &QMat, sub: &QMat) -> QMat {
    let k = map.hstack(&sub.neg()).kernel();
    span(&k.block(0, map.cols(), 0, k.cols()))
}

pub fn image(map: &QMat, sub: &QMat) -> QMat {
    span(&map.mul(sub))
}

pub fn contains(space: &QMat, v: &[Rat]) -> bool {
    space.hstack(&QMat::column(v.to_vec())).rank() == space.rank()
}

pub fn is_subspace(a: &QMat, b: &QMat) -> bool {
    sum(a, b).cols() == b.rank()
}

pub fn equal(a: &QMat, b: &QMat) -> bool {
    let (ra, rb) = (a.rank(), b.rank());
    ra == rb && sum(a, b).cols() == ra
}

/// Coordinate vectors spanning a complement of `span(sub)` in `ℚⁿ`.
pub fn complement(sub: &QMat) -> QMat {
    let n = sub.rows();
    let (_, pivots) = sub.transpose().rref();
    let rest: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    QMat::identity(n).select_cols(&rest)
}

/// `Z / B` where `Z` is a kernel (or the whole space) and `B ⊆ Z`.
///
/// Elements of `Z` are recovered from their entries at `free`; classes are read off
/// after reducing against `B` in column-echelon form.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: usize,
    zbasis: QMat,
    free: Vec<usize>,
    echelon: QMat,
    pivots: Vec<usize>,
    kept: Vec<usize>,
}

impl Subquotient {
    /// Homology at the middle of `· --d_in--> ℚⁿ --d_out--> ·`.
    /// `d_out = None` means the whole space; `d_in` has `n` rows.
    pub fn new(d_out: Option<&QMat>, d_in: &QMat) -> Subquotient {
        let n = d_in.rows();
        let (zbasis, free) = match d_out {
            Some(d) => {
                assert_eq!(d.cols(), n, "differentials do not compose");
                d.kernel_and_free()
            }
            None => (QMat::identity(n), (0..n).collect()),
        };
        let z = free.len();
        let bz = d_in.select_rows(&free);
        let (r, pivots) = bz.transpose().rref();
        let echelon = r.select_rows(&(0..pivots.len()).collect::<Vec<_>>()).transpose();
        let kept: Vec<usize> = (0..z).filter(|j| !pivots.contains(j)).collect();
        Subquotient { ambient: n, zbasis, free, echelon, pivots, kept }
    }

    /// The kernel of `d` with no boundaries.
    pub fn kernel(d: &QMat) -> Subquotient {
        Subquotient::new(Some(d), &QMat::zeros(d.cols(), 0))
    }

    /// `ℚⁿ / im(d)`.
    pub fn cokernel(d: &QMat) -> Subquotient {
        Subquotient::new(None, d)
    }

    /// The subquotient of a direct sum of complexes, with ambient coordinates concatenated.
    pub fn direct_sum(parts: &[Subquotient]) -> Subquotient {
        let mut out = Subquotient {
            ambient: 0,
            zbasis: QMat::zeros(0, 0),
            free: Vec::new(),
            echelon: QMat::zeros(0, 0),
            pivots: Vec::new(),
            kept: Vec::new(),
        };
        for p in parts {
            let z = out.free.len();
            out.free.extend(p.free.iter().map(|f| f + out.ambient));
            out.pivots.extend(p.pivots.iter().map(|q| q + z));
            out.kept.extend(p.kept.iter().map(|k| k + z));
            out.zbasis = QMat::block_diag(&[&out.zbasis, &p.zbasis]);
            out.echelon = QMat::block_diag(&[&out.echelon, &p.echelon]);
            out.ambient += p.ambient;
        }
        out
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.kept.len()
    }

    /// Representative cycles, one column per basis class.
    pub fn reps(&self) -> QMat {
        self.zbasis.select_cols(&self.kept)
    }

    /// Class of a cycle in the chosen basis.
    pub fn project(&self, v: &[Rat]) -> Vec<Rat> {
        let w: Vec<&Rat> = self.free.iter().map(|&i| &v[i]).collect();
        self.kept
            .iter()
            .map(|&j| {
                let mut acc = w[j].clone();
                for (i, &p) in self.pivots.iter().enumerate() {
                    let e = &self.echelon[(j, i)];
                    if !e.is_zero() && !w[p].is_zero() {
                        acc -= w[p] * e;
                    }
                }
                acc
            })
            .collect()
    }

    /// Column-wise `project`.
    pub fn project_mat(&self, m: &QMat) -> QMat {
        let cols: Vec<Vec<Rat>> = (0..m.cols()).map(|j| self.project(&m.col(j))).collect();
        QMat::from_columns(self.dim(), &cols)
    }

    /// The matrix of the map induced by a chain-level map `f` into `target`.
    pub fn induced(&self, f: &QMat, target: &Subquotient) -> QMat {
        target.project_mat(&f.mul(&self.reps()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(r: usize, c: usize, v: &[i64]) -> QMat {
        QMat::from_ints(r, c, v)
    }

    #[test]
    fn intersections_and_preimages() {
        let a = m(3, 2, &[1, 0, 0, 1, 0, 0]);
        let b = m(3, 2, &[0, 0, 1, 0, 0, 1]);
        let i = intersect(&a, &b);
        assert_eq!(i.cols(), 1);
        assert!(equal(&i, &m(3, 1, &[0, 1, 0])));
        let p = m(2, 2, &[0, 1, 0, 0]);
        let pre = preimage(&p, &m(2, 1, &[0, 1]));
        assert!(equal(&pre, &QMat::identity(2).select_cols(&[0])));
        assert_eq!(complement(&a).shape(), (3, 1));
    }

    #[test]
    fn homology_of_a_short_complex() {
        // ℚ --(1,1,0)--> ℚ³ --[1 -1 0]--> ℚ: Z has dim 2, B dim 1, H dim 1.
        let d_in = m(3, 1, &[1, 1, 0]);
        let d_out = m(1, 3, &[1, -1, 0]);
        let h = Subquotient::new(Some(&d_out), &d_in);
        assert_eq!(h.dim(), 1);
        let reps = h.reps();
        assert!(d_out.mul(&reps).is_zero());
        assert_eq!(h.project(&reps.col(0)), vec![Rat::one()]);
        assert_eq!(h.project(&[Rat::int(2), Rat::int(2), Rat::zero()]), vec![Rat::zero()]);
        let q = Subquotient::cokernel(&d_in);
        assert_eq!(q.dim(), 2);
        assert!(q.project(&d_in.col(0)).iter().all(Rat::is_zero));
    }

    #[test]
    fn direct_sums_concatenate_coordinates() {
        let d_in = m(3, 1, &[1, 1, 0]);
        let d_out = m(1, 3, &[1, -1, 0]);
        let a = Subquotient::new(Some(&d_out), &d_in);
        let b = Subquotient::cokernel(&m(2, 1, &[0, 1]));
        let s = Subquotient::direct_sum(&[a.clone(), b.clone()]);
        assert_eq!(s.dim(), a.dim() + b.dim());
        let reps = s.reps();
        assert_eq!(reps.rows(), 5);
        // the second summand's class sits in the last two coordinates
        let v: Vec<Rat> = [0, 0, 0, 3, 0].into_iter().map(Rat::int).collect();
        assert_eq!(s.project(&v), vec![Rat::zero(), Rat::int(3)]);
        let w: Vec<Rat> = [1, 1, 0, 0, 5].into_iter().map(Rat::int).collect();
        assert!(s.project(&w).iter().all(Rat::is_zero));
    }
}
