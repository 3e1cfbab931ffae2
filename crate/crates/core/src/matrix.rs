//! Exact square matrices over the Gaussian rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::GaussRational;

/// Dense square matrix with exact entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    dim: usize,
    data: Vec<GaussRational>,
}

impl Matrix {
    pub fn zero(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![GaussRational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.set(i, i, GaussRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussRational>>) -> Result<Self> {
        let dim = rows.len();
        for row in &rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
        }
        Ok(Matrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Small-integer constructor, mostly for tests and fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| GaussRational::from_int(v)).collect())
                .collect(),
        )
        .expect("ragged rows")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &GaussRational {
        &self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: GaussRational) {
        self.data[row * self.dim + col] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GaussRational::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussRational) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn trace(&self) -> GaussRational {
        let mut acc = GaussRational::zero();
        for i in 0..self.dim {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_skew_symmetric(&self) -> bool {
        for i in 0..self.dim {
            if !self.get(i, i).is_zero() {
                return false;
            }
            for j in (i + 1)..self.dim {
                if self.get(i, j) != &-self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Symmetric part `(M + M^T)/2`.
    pub fn symmetric_part(&self) -> Matrix {
        let half = GaussRational::from_ratio(1, 2);
        (self + &self.transpose()).scale(&half)
    }

    /// Exact determinant by fraction-preserving Gaussian elimination.
    pub fn det(&self) -> GaussRational {
        let mut m = self.clone();
        let mut det = GaussRational::one();
        for col in 0..m.dim {
            let pivot_row = match (col..m.dim).find(|&r| !m.get(r, col).is_zero()) {
                Some(r) => r,
                None => return GaussRational::zero(),
            };
            if pivot_row != col {
                for c in 0..m.dim {
                    let a = m.get(pivot_row, c).clone();
                    let b = m.get(col, c).clone();
                    m.set(pivot_row, c, b);
                    m.set(col, c, a);
                }
                det = -&det;
            }
            let pivot = m.get(col, col).clone();
            det = &det * &pivot;
            let pivot_inv = pivot.inv().expect("pivot is nonzero");
            for r in (col + 1)..m.dim {
                let factor = &(m.get(r, col) * &pivot_inv).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.dim {
                    let v = m.get(r, c) - &(factor * m.get(col, c));
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.dim;
        let mut m = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !m.get(r, col).is_zero())?;
            if pivot_row != col {
                for c in 0..n {
                    let a = m.get(pivot_row, c).clone();
                    let b = m.get(col, c).clone();
                    m.set(pivot_row, c, b);
                    m.set(col, c, a);
                    let a = inv.get(pivot_row, c).clone();
                    let b = inv.get(col, c).clone();
                    inv.set(pivot_row, c, b);
                    inv.set(col, c, a);
                }
            }
            let pivot_inv = m.get(col, col).inv().expect("pivot is nonzero");
            for c in 0..n {
                let v = m.get(col, c) * &pivot_inv;
                m.set(col, c, v);
                let v = inv.get(col, c) * &pivot_inv;
                inv.set(col, c, v);
            }
            for r in 0..n {
                if r == col || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in 0..n {
                    let v = m.get(r, c) - &(&factor * m.get(col, c));
                    m.set(r, c, v);
                    let v = inv.get(r, c) - &(&factor * inv.get(col, c));
                    inv.set(r, c, v);
                }
            }
        }
        Some(inv)
    }
}

impl<'b> Add<&'b Matrix> for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &'b Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'b> Sub<&'b Matrix> for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &'b Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<'b> Mul<&'b Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &'b Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }
}

impl Neg for Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        -&self
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Symmetric matrix, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMatrix {
    inner: Matrix,
}

impl SymMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.is_symmetric() {
            Ok(SymMatrix { inner: m })
        } else {
            Err(Error::NotSymmetric)
        }
    }

    pub fn zero(dim: usize) -> Self {
        SymMatrix {
            inner: Matrix::zero(dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        SymMatrix {
            inner: Matrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix {
        self.inner
    }
}
