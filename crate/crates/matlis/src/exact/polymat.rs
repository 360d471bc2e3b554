//! Matrices over ℚ[x] and the Smith normal form.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::qmat::QMat;
use super::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PolyMatJson", into = "PolyMatJson")]
pub struct PolyMat {
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

#[derive(Serialize, Deserialize)]
struct PolyMatJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Poly>>,
}

impl TryFrom<PolyMatJson> for PolyMat {
    type Error = String;
    fn try_from(j: PolyMatJson) -> Result<PolyMat, String> {
        if j.entries.len() != j.rows || j.entries.iter().any(|r| r.len() != j.cols) {
            return Err(format!("polynomial matrix entries do not match shape {}x{}", j.rows, j.cols));
        }
        Ok(PolyMat { rows: j.rows, cols: j.cols, data: j.entries.into_iter().flatten().collect() })
    }
}

impl From<PolyMat> for PolyMatJson {
    fn from(m: PolyMat) -> PolyMatJson {
        let entries = (0..m.rows).map(|i| m.data[i * m.cols..(i + 1) * m.cols].to_vec()).collect();
        PolyMatJson { rows: m.rows, cols: m.cols, entries }
    }
}

impl PolyMat {
    pub fn zeros(rows: usize, cols: usize) -> PolyMat {
        PolyMat { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> PolyMat {
        let mut m = PolyMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Poly::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Poly) -> PolyMat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PolyMat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>, cols: usize) -> PolyMat {
        let r = rows.len();
        let c = rows.first().map_or(cols, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PolyMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[Poly]) -> PolyMat {
        let mut m = PolyMat::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// `a0 + x·a1`.
    pub fn linear(a0: &QMat, a1: &QMat) -> PolyMat {
        assert_eq!(a0.shape(), a1.shape(), "pencil shape mismatch");
        PolyMat::from_fn(a0.rows(), a0.cols(), |i, j| Poly::new(vec![a0[(i, j)].clone(), a1[(i, j)].clone()]))
    }

    pub fn from_qmat(a: &QMat) -> PolyMat {
        PolyMat::from_fn(a.rows(), a.cols(), |i, j| Poly::constant(a[(i, j)].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn transpose(&self) -> PolyMat {
        PolyMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &PolyMat) -> PolyMat {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        PolyMat::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Poly::zero();
            for k in 0..self.cols {
                let (a, b) = (&self[(i, k)], &rhs[(k, j)]);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }

    pub fn eval(&self, a: &Rat) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].eval(a))
    }

    /// Stack `other` to the right (more columns).
    pub fn hstack(&self, other: &PolyMat) -> PolyMat {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        PolyMat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += q · row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, q: &Poly) {
        for j in 0..self.cols {
            let s = &self[(src, j)];
            if !s.is_zero() {
                let t = q * s;
                self[(dst, j)] = &self[(dst, j)] + &t;
            }
        }
    }

    /// `col[dst] += q · col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, q: &Poly) {
        for i in 0..self.rows {
            let s = &self[(i, src)];
            if !s.is_zero() {
                let t = q * s;
                self[(i, dst)] = &self[(i, dst)] + &t;
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: &Rat) {
        for j in 0..self.cols {
            self[(r, j)] = self[(r, j)].scale(c);
        }
    }

    /// Fraction-free (Bareiss) determinant; every division is exact in ℚ[x].
    pub fn det(&self) -> Poly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Poly::one();
        }
        let mut m = self.clone();
        let mut sign = Rat::one();
        let mut prev = Poly::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else { return Poly::zero() };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[(k, k)] * &m[(i, j)]) - &(&m[(i, k)] * &m[(k, j)]);
                    m[(i, j)] = num.div_exact(&prev);
                }
            }
            prev = m[(k, k)].clone();
        }
        m[(n - 1, n - 1)].scale(&sign)
    }
}

impl Index<(usize, usize)> for PolyMat {
    type Output = Poly;
    fn index(&self, (i, j): (usize, usize)) -> &Poly {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for PolyMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Poly {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for PolyMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "{}[", if i == 0 { "" } else { "; " })?;
            for j in 0..self.cols {
                write!(f, "{}{}", if j == 0 { "" } else { ", " }, self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `left · A · right = diag(diag) padded with zeros`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    /// Nonzero invariant factors, monic, each dividing the next.
    pub diag: Vec<Poly>,
    pub left: PolyMat,
    pub right: PolyMat,
    /// Free rank of the cokernel `ℚ[x]^rows / A·ℚ[x]^cols`.
    pub profile: usize,
}

impl SmithForm {
    pub fn diagonal_matrix(&self) -> PolyMat {
        PolyMat::diagonal(self.left.rows(), self.right.cols(), &self.diag)
    }
}

pub fn smith_normal_form(a: &PolyMat) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut left = PolyMat::identity(m);
    let mut right = PolyMat::identity(n);
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if let Some(deg) = d[(i, j)].degree() {
                        if best.is_none_or(|(_, _, bd)| deg < bd) {
                            best = Some((i, j, deg));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            d.swap_rows(t, pi);
            left.swap_rows(t, pi);
            d.swap_cols(t, pj);
            right.swap_cols(t, pj);
            let pivot = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let (q, r) = d[(i, t)].divrem(&pivot);
                let nq = -&q;
                d.add_row(i, t, &nq);
                left.add_row(i, t, &nq);
                clean &= r.is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let (q, r) = d[(t, j)].divrem(&pivot);
                let nq = -&q;
                d.add_col(j, t, &nq);
                right.add_col(j, t, &nq);
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !pivot.divides(&d[(i, j)])));
            match bad {
                Some(i) => {
                    d.add_row(t, i, &Poly::one());
                    left.add_row(t, i, &Poly::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_zero() {
            break;
        }
        let inv = d[(t, t)].lead().recip();
        d.scale_row(t, &inv);
        left.scale_row(t, &inv);
        diag.push(d[(t, t)].clone());
    }
    let profile = m - diag.len();
    SmithForm { diag, left, right, profile }
}
