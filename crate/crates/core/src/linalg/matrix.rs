//! Dense matrices with exact entries.
//!
//! Entries live in a [`GroundRing`] passed explicitly to every arithmetic
//! operation. Shapes with zero rows or columns are legal throughout; they
//! show up constantly as zero modules and empty kernels.

use std::fmt;

use super::scalar::{GroundRing, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>, // row-major
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        Matrix { rows, cols, entries }
    }

    pub fn zeros(ring: &GroundRing, rows: usize, cols: usize) -> Self {
        Matrix::new(rows, cols, vec![ring.zero(); rows * cols])
    }

    pub fn identity(ring: &GroundRing, n: usize) -> Self {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix::new(rows, cols, entries)
    }

    /// Build from rows of i64 values, for tests and fixtures.
    pub fn from_i64(ring: &GroundRing, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Matrix::from_fn(r, c, |i, j| ring.from_i64(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn add(&self, other: &Matrix, ring: &GroundRing) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| ring.add(&self[(i, j)], &other[(i, j)]))
    }

    pub fn sub(&self, other: &Matrix, ring: &GroundRing) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |i, j| ring.sub(&self[(i, j)], &other[(i, j)]))
    }

    pub fn neg(&self, ring: &GroundRing) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| ring.neg(&self[(i, j)]))
    }

    pub fn scale(&self, s: &Scalar, ring: &GroundRing) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| ring.mul(s, &self[(i, j)]))
    }

    pub fn mul(&self, other: &Matrix, ring: &GroundRing) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = ring.zero();
            for k in 0..self.cols {
                if self[(i, k)].is_zero() || other[(k, j)].is_zero() {
                    continue;
                }
                acc = ring.add(&acc, &ring.mul(&self[(i, k)], &other[(k, j)]));
            }
            acc
        })
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[Scalar], ring: &GroundRing) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = ring.zero();
                for k in 0..self.cols {
                    if self[(i, k)].is_zero() || v[k].is_zero() {
                        continue;
                    }
                    acc = ring.add(&acc, &ring.mul(&self[(i, k)], &v[k]));
                }
                acc
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn from_columns(ring: &GroundRing, rows: usize, cols: &[Vec<Scalar>]) -> Matrix {
        let mut m = Matrix::zeros(ring, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        Matrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn block_diag(ring: &GroundRing, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(ring, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Kronecker product, blocks of `other` scaled by entries of `self`.
    pub fn kron(&self, other: &Matrix, ring: &GroundRing) -> Matrix {
        Matrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            let a = &self[(i / other.rows, j / other.cols)];
            let b = &other[(i % other.rows, j % other.cols)];
            if a.is_zero() || b.is_zero() {
                ring.zero()
            } else {
                ring.mul(a, b)
            }
        })
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    /// Column-stacking vectorisation: columns of `self` concatenated.
    pub fn vec_columns(&self) -> Vec<Scalar> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)].clone());
            }
        }
        v
    }

    /// Inverse of [`Matrix::vec_columns`].
    pub fn from_vec_columns(rows: usize, cols: usize, v: &[Scalar]) -> Matrix {
        assert_eq!(v.len(), rows * cols);
        Matrix::from_fn(rows, cols, |i, j| v[j * rows + i].clone())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_shapes() {
        let q = GroundRing::Rationals;
        let a = Matrix::from_i64(&q, &[&[1, 2], &[3, 4]]);
        let b = Matrix::from_i64(&q, &[&[0, 1], &[1, 0]]);
        let ab = a.mul(&b, &q);
        assert_eq!(ab, Matrix::from_i64(&q, &[&[2, 1], &[4, 3]]));
    }

    #[test]
    fn empty_matrices() {
        let z = GroundRing::Integers;
        let a = Matrix::zeros(&z, 0, 3);
        let b = Matrix::zeros(&z, 3, 2);
        let ab = a.mul(&b, &z);
        assert_eq!((ab.rows(), ab.cols()), (0, 2));
        assert!(Matrix::identity(&z, 0).is_identity());
    }

    #[test]
    fn vec_roundtrip() {
        let z = GroundRing::Integers;
        let a = Matrix::from_i64(&z, &[&[1, 2, 3], &[4, 5, 6]]);
        let v = a.vec_columns();
        assert_eq!(Matrix::from_vec_columns(2, 3, &v), a);
    }
}
