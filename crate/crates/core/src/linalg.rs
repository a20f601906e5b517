//! Small dense matrices over a [`Scalar`] domain.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Debug, Hash, Eq)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Scalar> Matrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ShapeError("ragged rows".into()));
        }
        Ok(Matrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors (all of length `n`).
    pub fn from_columns(n: usize, cols: &[Vec<C>]) -> Result<Self> {
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::ShapeError("column length mismatch".into()));
        }
        let mut m = Self::zeros(n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[C] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeError(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.mul(&other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&prod);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Matrix<D> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Reduced row echelon form; returns the pivot columns.
    ///
    /// Exact for rationals. For floats, entries with magnitude below `tol`
    /// relative to the largest entry are treated as zero.
    pub fn rref(&mut self, tol: f64) -> Vec<usize> {
        let scale = self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max).max(1.0);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let pivot_row = if C::EXACT {
                (r..self.rows).find(|&i| !self[(i, c)].is_zero())
            } else {
                (r..self.rows)
                    .max_by(|&a, &b| self[(a, c)].magnitude().total_cmp(&self[(b, c)].magnitude()))
                    .filter(|&i| self[(i, c)].magnitude() > tol * scale)
            };
            let Some(p) = pivot_row else { continue };
            self.swap_rows(r, p);
            let inv = C::one().div(&self[(r, c)]);
            for j in 0..self.cols {
                self[(r, j)] = self[(r, j)].mul(&inv);
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let factor = self[(i, c)].clone();
                for j in 0..self.cols {
                    let t = factor.mul(&self[(r, j)]);
                    self[(i, j)] = self[(i, j)].sub(&t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the right null space, one vector per free column.
    ///
    /// Each vector is scaled so that its first nonzero entry is positive.
    pub fn kernel(&self, tol: f64) -> Vec<Vec<C>> {
        let mut m = self.clone();
        let pivots = m.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![C::zero(); self.cols];
                v[f] = C::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = m[(r, f)].neg();
                }
                normalize_sign(v)
            })
            .collect()
    }

    /// Solves `self * x = rhs`. Returns `None` if the system is inconsistent;
    /// free variables are set to zero.
    pub fn solve(&self, rhs: &[C], tol: f64) -> Option<Vec<C>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = rhs[i].clone();
        }
        let pivots = aug.rref(tol);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![C::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }
}

impl Matrix<Rational> {
    pub fn rank(&self) -> usize {
        self.clone().rref(0.0).len()
    }

    pub fn is_orthogonal(&self) -> bool {
        self.rows == self.cols
            && self.transpose().matmul(self).map(|p| p == Matrix::identity(self.rows)).unwrap_or(false)
    }
}

impl Matrix<f64> {
    /// Numerical rank: singular values above `rel_tol` times the largest
    /// absolute entry.
    pub fn rank(&self, rel_tol: f64) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let max_entry = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if max_entry == 0.0 {
            return 0;
        }
        let m = nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data);
        let sv = m.singular_values();
        sv.iter().filter(|&&s| s > rel_tol * max_entry).count()
    }

    pub fn is_orthogonal(&self, tol: f64) -> bool {
        self.rows == self.cols
            && self
                .transpose()
                .matmul(self)
                .map(|p| p.approx_eq(&Matrix::identity(self.rows), tol))
                .unwrap_or(false)
    }
}

impl<C> std::ops::Index<(usize, usize)> for Matrix<C> {
    type Output = C;
    fn index(&self, (i, j): (usize, usize)) -> &C {
        &self.data[i * self.cols + j]
    }
}

impl<C> std::ops::IndexMut<(usize, usize)> for Matrix<C> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C {
        &mut self.data[i * self.cols + j]
    }
}

impl<C: Scalar> fmt::Display for Matrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn dot<C: Scalar>(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).fold(C::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

pub fn norm_sq<C: Scalar>(a: &[C]) -> C {
    dot(a, a)
}

pub fn norm_f64(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Scales `v` by -1 if its first nonzero entry is negative.
pub fn normalize_sign<C: Scalar>(v: Vec<C>) -> Vec<C> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(first) if first.signum_i() < 0 => v.iter().map(Scalar::neg).collect(),
        _ => v,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn kernel_of_root_x1_minus_x2() {
        let k = qm(&[&[1, -1, 0]]).kernel(0.0);
        assert_eq!(k, vec![vec![q(1), q(1), q(0)], vec![q(0), q(0), q(1)]]);
    }

    #[test]
    fn kernel_sign_is_normalized() {
        let k = qm(&[&[1, 1]]).kernel(0.0);
        assert_eq!(k, vec![vec![q(1), q(-1)]]);
    }

    #[test]
    fn exact_and_float_rank_agree() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.to_f64().rank(1e-9), 2);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = qm(&[&[1, 1], &[2, 2]]);
        assert!(m.solve(&[q(1), q(3)], 0.0).is_none());
        assert_eq!(m.solve(&[q(1), q(2)], 0.0).unwrap(), vec![q(1), q(0)]);
    }
}
