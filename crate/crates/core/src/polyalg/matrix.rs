use std::collections::HashMap;

use super::Poly;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Largest size accepted by [`PolyMatrix::det`].
pub const MAX_DET_SIZE: usize = 6;

/// Dense grid of polynomials sharing one variable set.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix<C> {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<Poly<C>>,
}

impl<C: Scalar> PolyMatrix<C> {
    pub fn from_columns(columns: Vec<Vec<Poly<C>>>) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let nvars = columns.first().and_then(|c| c.first()).map_or(0, Poly::nvars);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::ShapeError("columns of unequal length".into()));
        }
        if columns.iter().flatten().any(|p| p.nvars() != nvars) {
            return Err(Error::ShapeError("entries disagree on nvars".into()));
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for col in &columns {
                entries.push(col[i].clone());
            }
        }
        Ok(PolyMatrix { rows, cols, nvars, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Poly<C>>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let nvars = rows.first().and_then(|r| r.first()).map_or(0, Poly::nvars);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ShapeError("ragged rows".into()));
        }
        if rows.iter().flatten().any(|p| p.nvars() != nvars) {
            return Err(Error::ShapeError("entries disagree on nvars".into()));
        }
        Ok(PolyMatrix { rows: nrows, cols: ncols, nvars, entries: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<C> {
        &self.entries[i * self.cols + j]
    }

    /// Submatrix on the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let entries = rows.iter().flat_map(|&i| cols.iter().map(move |&j| (i, j))).map(|(i, j)| self.get(i, j).clone()).collect();
        PolyMatrix { rows: rows.len(), cols: cols.len(), nvars: self.nvars, entries }
    }

    /// Determinant by cofactor expansion along rows, memoized on the set of
    /// remaining columns.
    pub fn det(&self) -> Result<Poly<C>> {
        if self.rows != self.cols {
            return Err(Error::ShapeError(format!("determinant of non-square {}x{} matrix", self.rows, self.cols)));
        }
        if self.rows > MAX_DET_SIZE {
            return Err(Error::ShapeError(format!("determinant limited to size {MAX_DET_SIZE}")));
        }
        if self.rows == 0 {
            return Ok(Poly::one(self.nvars));
        }
        let mut memo = HashMap::new();
        Ok(self.det_rec(0, (1u32 << self.cols) - 1, &mut memo))
    }

    fn det_rec(&self, row: usize, mask: u32, memo: &mut HashMap<u32, Poly<C>>) -> Poly<C> {
        if row == self.rows {
            return Poly::one(self.nvars);
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let mut acc = Poly::zero(self.nvars);
        let mut sign_positive = true;
        for j in 0..self.cols {
            if mask & (1 << j) == 0 {
                continue;
            }
            let entry = self.get(row, j);
            if !entry.is_zero() {
                let minor = self.det_rec(row + 1, mask & !(1 << j), memo);
                let term = entry.mul(&minor).expect("shared nvars");
                acc = if sign_positive { acc.add(&term) } else { acc.sub(&term) }.expect("shared nvars");
            }
            sign_positive = !sign_positive;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    /// All `k x k` minors, keyed by (row subset, column subset).
    pub fn minors(&self, k: usize) -> Result<Vec<(Vec<usize>, Vec<usize>, Poly<C>)>> {
        let mut out = Vec::new();
        for rows in combinations(self.rows, k) {
            for cols in combinations(self.cols, k) {
                let det = self.submatrix(&rows, &cols).det()?;
                out.push((rows.clone(), cols, det));
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[C]) -> Matrix<C> {
        let rows = (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).evaluate(point)).collect()).collect();
        Matrix::from_rows(rows).expect("rectangular by construction")
    }

    pub fn map_entries(&self, f: impl Fn(&Poly<C>) -> Result<Poly<C>>) -> Result<Self> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        let nvars = entries.first().map_or(self.nvars, Poly::nvars);
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, nvars, entries })
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}
