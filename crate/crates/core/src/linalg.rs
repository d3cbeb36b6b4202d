//! Dense square-or-rectangular matrices over a [`ScalarAlgebra`].

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use crate::algebra::{Quaternion, ScalarAlgebra};
use crate::error::{Error, Result};

/// Row-major matrix of [`Quaternion`] entries, all lying in `algebra`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarMatrix {
    algebra: ScalarAlgebra,
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl ScalarMatrix {
    pub fn zeros(algebra: ScalarAlgebra, rows: usize, cols: usize) -> Self {
        ScalarMatrix { algebra, rows, cols, data: vec![Quaternion::ZERO; rows * cols] }
    }

    pub fn identity(algebra: ScalarAlgebra, dim: usize) -> Self {
        let mut m = ScalarMatrix::zeros(algebra, dim, dim);
        for i in 0..dim {
            m[(i, i)] = Quaternion::ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries; fails if an entry lies outside
    /// the declared algebra or the length disagrees with the shape.
    pub fn from_entries(algebra: ScalarAlgebra, rows: usize, cols: usize, data: Vec<Quaternion>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension { expected: rows * cols, found: data.len() });
        }
        if let Some(q) = data.iter().find(|q| !q.lies_in(algebra)) {
            return Err(Error::Algebra(format!("entry {q:?} is not {algebra}")));
        }
        if data.iter().any(|q| q.coords().iter().any(|c| !c.is_finite())) {
            return Err(Error::Validity("matrix entries must be finite".into()));
        }
        Ok(ScalarMatrix { algebra, rows, cols, data })
    }

    pub fn from_fn(algebra: ScalarAlgebra, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Quaternion) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        ScalarMatrix { algebra, rows, cols, data }
    }

    pub fn from_real(m: &DMatrix<f64>) -> Self {
        ScalarMatrix::from_fn(ScalarAlgebra::Real, m.nrows(), m.ncols(), |r, c| Quaternion::real(m[(r, c)]))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        ScalarMatrix::from_fn(ScalarAlgebra::Real, n, n, |r, c| {
            if r == c {
                Quaternion::real(values[r])
            } else {
                Quaternion::ZERO
            }
        })
    }

    pub fn algebra(&self) -> ScalarAlgebra {
        self.algebra
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Quaternion] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ScalarMatrix {
        ScalarMatrix::from_fn(self.algebra, self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn matmul(&self, rhs: &ScalarMatrix) -> Result<ScalarMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension { expected: self.cols, found: rhs.rows });
        }
        let mut out = ScalarMatrix::zeros(self.algebra.join(rhs.algebra), self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Quaternion::ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs[(k, c)];
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &ScalarMatrix) -> Result<ScalarMatrix> {
        self.zip(rhs, |a, b| a - b)
    }

    pub fn add(&self, rhs: &ScalarMatrix) -> Result<ScalarMatrix> {
        self.zip(rhs, |a, b| a + b)
    }

    fn zip(&self, rhs: &ScalarMatrix, f: impl Fn(Quaternion, Quaternion) -> Quaternion) -> Result<ScalarMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension { expected: self.rows * self.cols, found: rhs.rows * rhs.cols });
        }
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(ScalarMatrix { algebra: self.algebra.join(rhs.algebra), rows: self.rows, cols: self.cols, data })
    }

    /// Largest absolute real coordinate over all entries.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, q| m.max(q.max_abs()))
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].w).sum()
    }

    /// Largest entry of `A - A†`.
    pub fn self_adjoint_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0_f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).max_abs());
            }
        }
        worst
    }

    /// Keeps the diagonal, zeroes everything else.
    pub fn diagonal_part(&self) -> ScalarMatrix {
        ScalarMatrix::from_fn(self.algebra, self.rows, self.cols, |r, c| if r == c { self[(r, c)] } else { Quaternion::ZERO })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self[(r, c)] == Quaternion::ZERO))
    }

    /// Real `(rows·b)×(cols·b)` matrix obtained by replacing every entry with
    /// its left-multiplication block, `b = algebra.block_dim()`.
    pub fn real_representation(&self) -> DMatrix<f64> {
        let b = self.algebra.block_dim();
        let mut out = DMatrix::zeros(self.rows * b, self.cols * b);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let block = self[(r, c)].left_matrix();
                for i in 0..b {
                    for j in 0..b {
                        out[(r * b + i, c * b + j)] = block[(i, j)];
                    }
                }
            }
        }
        out
    }

    /// Real matrix of the `w` coordinates; errors if any entry is not real.
    pub fn to_real(&self) -> Result<DMatrix<f64>> {
        if let Some(q) = self.data.iter().find(|q| !q.lies_in(ScalarAlgebra::Real)) {
            return Err(Error::Algebra(format!("entry {q:?} is not real")));
        }
        Ok(DMatrix::from_fn(self.rows, self.cols, |r, c| self[(r, c)].w))
    }

    /// `self · v` for a column of scalars.
    pub fn apply(&self, v: &[Quaternion]) -> Result<Vec<Quaternion>> {
        if v.len() != self.cols {
            return Err(Error::Dimension { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(Quaternion::ZERO, |acc, (&a, &x)| acc + a * x))
            .collect())
    }
}

impl Index<(usize, usize)> for ScalarMatrix {
    type Output = Quaternion;

    fn index(&self, (r, c): (usize, usize)) -> &Quaternion {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ScalarMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Quaternion {
        &mut self.data[r * self.cols + c]
    }
}
