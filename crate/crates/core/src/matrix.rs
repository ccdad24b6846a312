//! Dense row-major real matrices and the validated symmetric wrapper.
//!
//! This is the minimal matrix toolbox the rest of the crate needs:
//! construction, products, Kronecker products, Frobenius norms, and
//! submatrix extraction. Everything is `f64` and row-major.

use std::ops::{Index, IndexMut};

use crate::Error;

/// Relative tolerance for the symmetry check in [`RealSymMatrix::new`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Dense real matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Mutable views of rows `i` and `i + 1`.
    pub fn adjacent_rows_mut(&mut self, i: usize) -> (&mut [f64], &mut [f64]) {
        let c = self.cols;
        let (head, tail) = self.data.split_at_mut((i + 1) * c);
        (&mut head[i * c..], &mut tail[..c])
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scale(&self, factor: f64) -> Matrix {
        let mut out = self.clone();
        for x in &mut out.data {
            *x *= factor;
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x += y;
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x -= y;
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        out
    }

    /// Matrix-vector product `self * v`.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &x)| a * x)
                    .sum()
            })
            .collect()
    }

    /// Kronecker product with `other` as the inner (fast) factor:
    /// entry `(i*p + k, j*q + l) = self[i][j] * other[k][l]`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (p, q) = (other.rows, other.cols);
        let mut out = Matrix::zeros(self.rows * p, self.cols * q);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == 0.0 {
                    continue;
                }
                for k in 0..p {
                    for l in 0..q {
                        out[(i * p + k, j * q + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Commutator `self * other - other * self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn trace(&self) -> f64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Submatrix restricted to the given row/column index set.
    pub fn select(&self, indices: &[usize]) -> Matrix {
        let m = indices.len();
        let mut out = Matrix::zeros(m, m);
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Real symmetric matrix, validated at construction:
/// `|M[i][j] - M[j][i]| <= 1e-12 * max|M|` for all `i, j`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSymMatrix {
    inner: Matrix,
}

impl RealSymMatrix {
    pub fn new(m: Matrix) -> Result<Self, Error> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                actual: m.cols(),
            });
        }
        let tol = SYMMETRY_TOL * m.max_abs();
        for i in 0..m.rows() {
            for j in (i + 1)..m.cols() {
                let defect = (m[(i, j)] - m[(j, i)]).abs();
                if defect > tol {
                    return Err(Error::NotSymmetric { i, j, defect });
                }
            }
        }
        Ok(Self { inner: m })
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix {
        self.inner
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace()
    }

    /// Symmetric submatrix on the given index set (principal submatrix).
    pub fn select(&self, indices: &[usize]) -> RealSymMatrix {
        RealSymMatrix {
            inner: self.inner.select(indices),
        }
    }

    /// Quadratic form `v^T M v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        let mv = self.inner.matvec(v);
        v.iter().zip(&mv).map(|(&a, &b)| a * b).sum()
    }
}

impl Index<(usize, usize)> for RealSymMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.inner[idx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_identity() {
        let a = Matrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let i = Matrix::identity(2);
        assert_eq!(a.matmul(&i), a);
        assert_eq!(i.matmul(&a), a);
    }

    #[test]
    fn kron_inner_factor_is_fast() {
        // kron(diag(1,2), sigma_x) must interleave the 2x2 factor.
        let d = Matrix::diagonal(&[1.0, 2.0]);
        let sx = Matrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let k = d.kron(&sx);
        assert_eq!(k[(0, 1)], 1.0);
        assert_eq!(k[(1, 0)], 1.0);
        assert_eq!(k[(2, 3)], 2.0);
        assert_eq!(k[(3, 2)], 2.0);
        assert_eq!(k[(0, 2)], 0.0);
    }

    #[test]
    fn symmetry_check_rejects_asymmetric() {
        let m = Matrix::from_rows(&[&[0.0, 1.0], &[0.5, 0.0]]);
        assert!(matches!(
            RealSymMatrix::new(m),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn symmetry_check_tolerates_rounding() {
        let eps = 1e-14;
        let m = Matrix::from_rows(&[&[0.0, 1.0 + eps], &[1.0, 0.0]]);
        assert!(RealSymMatrix::new(m).is_ok());
    }

    #[test]
    fn commutator_of_commuting_is_zero() {
        let a = Matrix::diagonal(&[1.0, 2.0, 3.0]);
        let b = Matrix::diagonal(&[4.0, 5.0, 6.0]);
        assert_eq!(a.commutator(&b).frobenius_norm(), 0.0);
    }

    #[test]
    fn select_principal_submatrix() {
        let m = Matrix::from_rows(&[
            &[1.0, 2.0, 3.0],
            &[2.0, 4.0, 5.0],
            &[3.0, 5.0, 6.0],
        ]);
        let s = m.select(&[0, 2]);
        assert_eq!(s, Matrix::from_rows(&[&[1.0, 3.0], &[3.0, 6.0]]));
    }
}
