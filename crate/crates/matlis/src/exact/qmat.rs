//! Dense rational matrices and exact elimination.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rat::Rat;

/// Row-major dense matrix; `data.len() == rows * cols`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> QMat {
        QMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> QMat {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &Rat) -> QMat {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rat>) -> QMat {
        assert_eq!(data.len(), rows * cols, "entry count mismatch");
        QMat { rows, cols, data }
    }

    /// Rows must share a length; `cols` is only used when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<Rat>>, cols: usize) -> QMat {
        let r = rows.len();
        let c = rows.first().map_or(cols, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: usize, cols: usize, v: &[i64]) -> QMat {
        QMat::from_vec(rows, cols, v.iter().map(|&x| Rat::int(x)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> QMat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        QMat { rows, cols, data }
    }

    /// A single column.
    pub fn column(v: Vec<Rat>) -> QMat {
        QMat { rows: v.len(), cols: 1, data: v }
    }

    pub fn from_columns(n: usize, cols: &[Vec<Rat>]) -> QMat {
        QMat::from_fn(n, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rat::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == if i == j { Rat::one() } else { Rat::zero() }))
    }

    pub fn transpose(&self) -> QMat {
        QMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = QMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let t = a * b;
                        out[(i, j)] += t;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "shape mismatch in apply");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sum");
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in difference");
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Rat) -> QMat {
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn neg(&self) -> QMat {
        self.scale(&Rat::int(-1))
    }

    pub fn pow(&self, e: usize) -> QMat {
        let mut acc = QMat::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn hstack(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.rows, rhs.rows, "row mismatch in hstack");
        QMat::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.cols, rhs.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        QMat { rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    pub fn block_diag(blocks: &[&QMat]) -> QMat {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = QMat::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &QMat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> QMat {
        QMat::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> QMat {
        QMat::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> QMat {
        QMat::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    /// Kronecker product with row index `(i, k) ↦ i·rhs.rows + k`.
    pub fn kron(&self, rhs: &QMat) -> QMat {
        let mut m = QMat::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = &rhs[(k, l)];
                        if !b.is_zero() {
                            m[(i * rhs.rows + k, j * rhs.cols + l)] = a * b;
                        }
                    }
                }
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row[dst] -= c · row[src]`, touching only the columns in `support`.
    fn axpy_row(&mut self, dst: usize, src: usize, c: &Rat, support: &[usize]) {
        let cols = self.cols;
        for &j in support {
            let t = c * &self.data[src * cols + j];
            self.data[dst * cols + j] -= t;
        }
    }

    /// Reduced row echelon form in place over the first `pivot_cols` columns; row
    /// operations are applied to every column. Returns the pivot columns.
    pub fn rref_prefix(&mut self, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols.min(self.cols) {
            if r == self.rows {
                break;
            }
            let mut best: Option<(usize, u64)> = None;
            for i in r..self.rows {
                let v = &self[(i, c)];
                if !v.is_zero() {
                    let h = v.height();
                    if best.is_none_or(|(_, bh)| h < bh) {
                        best = Some((i, h));
                    }
                }
            }
            let Some((p, _)) = best else { continue };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            let support: Vec<usize> = (c..self.cols).filter(|&j| !self[(r, j)].is_zero()).collect();
            for &j in &support {
                let t = &self[(r, j)] * &inv;
                self[(r, j)] = t;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    self.axpy_row(i, r, &f, &support);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_prefix(self.cols);
        (m, p)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut m = if self.rows > self.cols { self.transpose() } else { self.clone() };
        let c = m.cols;
        m.rref_prefix(c).len()
    }

    /// Columns form a basis of the null space, in the standard RREF parametrization.
    pub fn kernel(&self) -> QMat {
        self.kernel_and_free().0
    }

    /// Kernel basis together with the free positions: basis vector `t` is 1 at
    /// `free[t]` and 0 at every other free position.
    pub fn kernel_and_free(&self) -> (QMat, Vec<usize>) {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut k = QMat::zeros(self.cols, free.len());
        for (t, &f) in free.iter().enumerate() {
            k[(f, t)] = Rat::one();
            for (pi, &pc) in pivots.iter().enumerate() {
                k[(pc, t)] = -&r[(pi, f)];
            }
        }
        (k, free)
    }

    /// A basis of the column space, reduced to column echelon form.
    pub fn column_space(&self) -> QMat {
        let (r, p) = self.transpose().rref();
        r.select_rows(&(0..p.len()).collect::<Vec<_>>()).transpose()
    }

    pub fn inverse(&self) -> Option<QMat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.hstack(&QMat::identity(n));
        let p = a.rref_prefix(n);
        if p.len() < n {
            return None;
        }
        Some(a.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn det(&self) -> Rat {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else { return Rat::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            let inv = piv.recip();
            let support: Vec<usize> = (c..n).filter(|&j| !m[(c, j)].is_zero()).collect();
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = &m[(i, c)] * &inv;
                    m.axpy_row(i, c, &f, &support);
                }
            }
        }
        det
    }

    /// Some `x` with `self · x = b`.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        Solver::new(self).solve(b)
    }

    /// Some `X` with `self · X = B`.
    pub fn solve_mat(&self, b: &QMat) -> Option<QMat> {
        let s = Solver::new(self);
        let cols: Option<Vec<Vec<Rat>>> = (0..b.cols).map(|j| s.solve(&b.col(j))).collect();
        Some(QMat::from_columns(self.cols, &cols?))
    }
}

impl Index<(usize, usize)> for QMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "{}[", if i == 0 { "" } else { ", " })?;
            for j in 0..self.cols {
                write!(f, "{}{}", if j == 0 { "" } else { " " }, self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Serialized as a list of rows.
impl Serialize for QMat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<QMat, D::Error> {
        let rows = Vec::<Vec<Rat>>::deserialize(d)?;
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(QMat::from_rows(rows, c))
    }
}

/// Factorization `T·A = RREF(A)` reused across right-hand sides.
#[derive(Clone, Debug)]
pub struct Solver {
    t: QMat,
    pivots: Vec<usize>,
    cols: usize,
}

impl Solver {
    pub fn new(a: &QMat) -> Solver {
        let n = a.rows;
        let mut aug = a.hstack(&QMat::identity(n));
        let pivots = aug.rref_prefix(a.cols);
        Solver { t: aug.block(0, n, a.cols, n), pivots, cols: a.cols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        let y = self.t.apply(b);
        if y[self.pivots.len()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (i, &p) in self.pivots.iter().enumerate() {
            x[p] = y[i].clone();
        }
        Some(x)
    }

    pub fn in_span(&self, b: &[Rat]) -> bool {
        let y = self.t.apply(b);
        y[self.pivots.len()..].iter().all(Rat::is_zero)
    }
}
