//! Gaussian elimination over the field rings (ℚ and 𝔽_p).
//!
//! Deterministic pivoting (first nonzero entry top-down) so that every
//! derived basis is reproducible run to run.

use super::matrix::Matrix;
use super::scalar::{GroundRing, Scalar};

/// Reduced row echelon form together with the pivot column indices.
pub fn rref(ring: &GroundRing, a: &Matrix) -> (Matrix, Vec<usize>) {
    assert!(ring.is_field(), "rref requires a field");
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                let tmp = m[(pr, j)].clone();
                m[(pr, j)] = m[(r, j)].clone();
                m[(r, j)] = tmp;
            }
        }
        let inv = ring.inv(&m[(r, c)]).expect("pivot must be invertible");
        for j in 0..cols {
            m[(r, j)] = ring.mul(&inv, &m[(r, j)]);
        }
        for i in 0..rows {
            if i != r && !m[(i, c)].is_zero() {
                let f = m[(i, c)].clone();
                for j in 0..cols {
                    let t = ring.mul(&f, &m[(r, j)]);
                    m[(i, j)] = ring.sub(&m[(i, j)], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(ring: &GroundRing, a: &Matrix) -> usize {
    rref(ring, a).1.len()
}

/// Basis of the right null space, one basis vector per column.
pub fn kernel(ring: &GroundRing, a: &Matrix) -> Matrix {
    let (r, pivots) = rref(ring, a);
    let cols = a.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut k = Matrix::zeros(ring, cols, free.len());
    for (j, &fc) in free.iter().enumerate() {
        k[(fc, j)] = ring.one();
        for (pi, &pc) in pivots.iter().enumerate() {
            k[(pc, j)] = ring.neg(&r[(pi, fc)]);
        }
    }
    k
}

/// Solve `a · x = b` columnwise; `None` when any column is inconsistent.
pub fn solve(ring: &GroundRing, a: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows(), b.rows(), "shape mismatch in solve");
    let aug = a.hstack(b);
    let (r, pivots) = rref(ring, &aug);
    // any pivot in the b-block means an inconsistent column
    if pivots.iter().any(|&c| c >= a.cols()) {
        return None;
    }
    let mut x = Matrix::zeros(ring, a.cols(), b.cols());
    for (pi, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x[(pc, j)] = r[(pi, a.cols() + j)].clone();
        }
    }
    Some(x)
}

pub fn inverse(ring: &GroundRing, a: &Matrix) -> Option<Matrix> {
    if a.rows() != a.cols() {
        return None;
    }
    let x = solve(ring, a, &Matrix::identity(ring, a.rows()))?;
    if a.mul(&x, ring).is_identity() {
        Some(x)
    } else {
        None
    }
}

/// Determinant by elimination.
pub fn det(ring: &GroundRing, a: &Matrix) -> Scalar {
    assert!(ring.is_field());
    assert_eq!(a.rows(), a.cols());
    let n = a.rows();
    let mut m = a.clone();
    let mut acc = ring.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
            return ring.zero();
        };
        if pr != c {
            for j in 0..n {
                let tmp = m[(pr, j)].clone();
                m[(pr, j)] = m[(c, j)].clone();
                m[(c, j)] = tmp;
            }
            acc = ring.neg(&acc);
        }
        acc = ring.mul(&acc, &m[(c, c)]);
        let inv = ring.inv(&m[(c, c)]).unwrap();
        for i in c + 1..n {
            if m[(i, c)].is_zero() {
                continue;
            }
            let f = ring.mul(&m[(i, c)], &inv);
            for j in c..n {
                let t = ring.mul(&f, &m[(c, j)]);
                m[(i, j)] = ring.sub(&m[(i, j)], &t);
            }
        }
    }
    acc
}
