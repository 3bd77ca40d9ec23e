//! Dense exact linear algebra over any [`Field`].
//!
//! Elimination always processes columns from left to right, so pivot columns
//! (and therefore basis choices made from them) depend only on the column
//! order chosen by the caller. Within a column the lightest available pivot
//! is used, which keeps rational-function entries small.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalars::Field;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F> {
    pub matrix: Matrix<F>,
    /// Pivot column of each nonzero row, increasing.
    pub pivots: Vec<usize>,
}

impl<F: Field> Rref<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns that carry no pivot.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.matrix.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.matrix.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Basis of the right kernel, one vector per free column (with a 1 there).
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let free = self.free_columns();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.matrix.cols];
                v[f] = F::one();
                for (r, &p) in self.pivots.iter().enumerate() {
                    let x = self.matrix.get(r, f);
                    if !x.is_zero() {
                        v[p] = -x.clone();
                    }
                }
                v
            })
            .collect()
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<F> {
        self.row(r).to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn map<G: Field>(&self, f: impl FnMut(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<G: Field, E>(&self, f: impl FnMut(&F) -> Result<G, E>) -> Result<Matrix<G>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "matrix shapes do not match");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).clone() + a.clone() * b.clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| dot(self.row(r), v))
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![F::zero(); self.cols];
        for (r, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (c, slot) in out.iter_mut().enumerate() {
                let a = self.get(r, c);
                if !a.is_zero() {
                    *slot = slot.clone() + x.clone() * a.clone();
                }
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |r, c| self.get(rows[r], c).clone())
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |r, c| self.get(r, cols[c]).clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Lightest nonzero entry in column `c` among rows `from..`.
    fn pick_pivot(&self, c: usize, from: usize) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for r in from..self.rows {
            let x = self.get(r, c);
            if x.is_zero() {
                continue;
            }
            let w = x.pivot_weight();
            if best.map_or(true, |(_, bw)| w < bw) {
                best = Some((r, w));
                if w <= 1 {
                    break;
                }
            }
        }
        best.map(|(r, _)| r)
    }

    /// `row[target] -= factor * row[source]`, restricted to columns `from..`.
    fn eliminate(&mut self, target: usize, source: usize, factor: &F, from: usize) {
        for c in from..self.cols {
            let s = self.get(source, c);
            if s.is_zero() {
                continue;
            }
            let v = self.get(target, c).clone() - factor.clone() * s.clone();
            self.set(target, c, v);
        }
    }

    fn scale_row(&mut self, r: usize, factor: &F, from: usize) {
        for c in from..self.cols {
            let x = self.get(r, c);
            if x.is_zero() {
                continue;
            }
            let v = x.clone() * factor.clone();
            self.set(r, c, v);
        }
    }

    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = m.pick_pivot(c, row) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, c).inverse().expect("pivot is nonzero");
            m.scale_row(row, &inv, c);
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, c).clone();
                if !factor.is_zero() {
                    m.eliminate(r, row, &factor, c);
                }
            }
            pivots.push(c);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    /// Rank by forward elimination only.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut row = 0;
        for c in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = m.pick_pivot(c, row) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, c).inverse().expect("pivot is nonzero");
            for r in row + 1..m.rows {
                let x = m.get(r, c);
                if x.is_zero() {
                    continue;
                }
                let factor = x.clone() * inv.clone();
                m.eliminate(r, row, &factor, c);
            }
            row += 1;
        }
        row
    }

    pub fn kernel(&self) -> Vec<Vec<F>> {
        self.rref().kernel()
    }

    /// Kernel of the transpose: row vectors `y` with `y * self = 0`.
    pub fn left_kernel(&self) -> Vec<Vec<F>> {
        self.transpose().kernel()
    }

    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..m.cols {
            let Some(p) = m.pick_pivot(c, c) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            let inv = pivot.inverse().expect("pivot is nonzero");
            for r in c + 1..m.rows {
                let x = m.get(r, c);
                if x.is_zero() {
                    continue;
                }
                let factor = x.clone() * inv.clone();
                m.eliminate(r, c, &factor, c);
            }
            det = det * pivot;
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, F::one());
        }
        let red = aug.rref();
        if red.pivots.len() < n || red.pivots[n - 1] >= n {
            return None;
        }
        Some(Self::from_fn(n, n, |r, c| red.matrix.get(r, n + c).clone()))
    }

    /// Some solution `x` of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let red = aug.rref();
        if red.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &p) in red.pivots.iter().enumerate() {
            x[p] = red.matrix.get(r, self.cols).clone();
        }
        Some(x)
    }
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = acc + x.clone() * y.clone();
    }
    acc
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

/// Row echelon form built one vector at a time; used to pick the first
/// independent vectors of a sequence.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    width: usize,
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Echelon<F> {
    pub fn new(width: usize) -> Self {
        Echelon { width, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `v` after reduction by the stored rows.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.width);
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let x = v[*p].clone();
            if x.is_zero() {
                continue;
            }
            for (slot, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *slot = slot.clone() - x.clone() * r.clone();
                }
            }
        }
        v
    }

    /// The stored rows, each normalized at its pivot.
    pub fn into_rows(self) -> Vec<Vec<F>> {
        self.rows.into_iter().map(|(_, r)| r).collect()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v` if it is independent of the stored rows; reports whether it was.
    pub fn insert(&mut self, v: &[F]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inverse().expect("nonzero");
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        self.rows.push((p, r));
        true
    }
}

/// Dimension of the span of `vectors`.
pub fn span_rank<F: Field>(vectors: &[Vec<F>], width: usize) -> usize {
    let mut ech = Echelon::new(width);
    vectors.iter().filter(|v| ech.insert(v)).count()
}

/// Indices of the first maximal independent subsequence of `vectors`.
pub fn greedy_independent<F: Field>(vectors: &[Vec<F>], width: usize) -> Vec<usize> {
    let mut ech = Echelon::new(width);
    let mut picked = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        if ech.insert(v) {
            picked.push(i);
        }
    }
    picked
}
