//! Integer lattice algorithms: Hermite and Smith normal forms, integral
//! solving, kernel lattices, saturation.
//!
//! Matrices here are over ℤ; entries are arbitrary-precision. The Smith
//! reduction tracks all four transforms (U, U⁻¹, V, V⁻¹) so callers can
//! split lattices and build complements without re-inverting anything.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::scalar::{GroundRing, Scalar};

fn to_bigint(a: &Matrix) -> Vec<Vec<BigInt>> {
    (0..a.rows())
        .map(|i| (0..a.cols()).map(|j| a[(i, j)].as_int().clone()).collect())
        .collect()
}

fn from_bigint(rows: usize, cols: usize, m: &[Vec<BigInt>]) -> Matrix {
    Matrix::from_fn(rows, cols, |i, j| Scalar::Int(m[i][j].clone()))
}

/// Smith normal form data: `u * a * v = diag(divisors)` with unimodular
/// transforms; each divisor divides the next.
#[derive(Clone, Debug)]
pub struct SmithData {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
    pub divisors: Vec<BigInt>,
}

impl SmithData {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Divisors different from 1, i.e. the torsion part of the cokernel.
    pub fn nonunit_divisors(&self) -> Vec<BigInt> {
        self.divisors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

struct Reducer {
    m: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
}

impl Reducer {
    fn new(a: &Matrix) -> Self {
        let (rows, cols) = (a.rows(), a.cols());
        let ident = |n: usize| -> Vec<Vec<BigInt>> {
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
                .collect()
        };
        Reducer {
            m: to_bigint(a),
            rows,
            cols,
            u: ident(rows),
            u_inv: ident(rows),
            v: ident(cols),
            v_inv: ident(cols),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.m.swap(a, b);
        self.u.swap(a, b);
        for row in self.u_inv.iter_mut() {
            row.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in self.m.iter_mut() {
            row.swap(a, b);
        }
        for row in self.v.iter_mut() {
            row.swap(a, b);
        }
        self.v_inv.swap(a, b);
    }

    /// row a += c * row b
    fn add_row(&mut self, a: usize, b: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = &self.m[b][j] * c;
            self.m[a][j] += t;
        }
        for j in 0..self.rows {
            let t = &self.u[b][j] * c;
            self.u[a][j] += t;
        }
        for i in 0..self.rows {
            let t = &self.u_inv[i][a] * c;
            self.u_inv[i][b] -= t;
        }
    }

    /// col a += c * col b
    fn add_col(&mut self, a: usize, b: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = &self.m[i][b] * c;
            self.m[i][a] += t;
        }
        for i in 0..self.cols {
            let t = &self.v[i][b] * c;
            self.v[i][a] += t;
        }
        for j in 0..self.cols {
            let t = &self.v_inv[a][j] * c;
            self.v_inv[b][j] -= t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            self.m[a][j] = -self.m[a][j].clone();
        }
        for j in 0..self.rows {
            self.u[a][j] = -self.u[a][j].clone();
        }
        for i in 0..self.rows {
            self.u_inv[i][a] = -self.u_inv[i][a].clone();
        }
    }

    /// Position of a nonzero entry of minimal absolute value in the block
    /// at (k.., k..), preferring low indices.
    fn min_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..self.rows {
            for j in k..self.cols {
                if self.m[i][j].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if self.m[i][j].abs() < self.m[bi][bj].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }

    fn smith(mut self) -> SmithData {
        let limit = self.rows.min(self.cols);
        let mut k = 0;
        while k < limit {
            let Some((pi, pj)) = self.min_pivot(k) else { break };
            self.swap_rows(k, pi);
            self.swap_cols(k, pj);
            loop {
                let mut clean = true;
                for i in k + 1..self.rows {
                    if self.m[i][k].is_zero() {
                        continue;
                    }
                    let q = self.m[i][k].div_rem(&self.m[k][k]).0;
                    self.add_row(i, k, &-q);
                    if !self.m[i][k].is_zero() {
                        self.swap_rows(k, i);
                        clean = false;
                    }
                }
                for j in k + 1..self.cols {
                    if self.m[k][j].is_zero() {
                        continue;
                    }
                    let q = self.m[k][j].div_rem(&self.m[k][k]).0;
                    self.add_col(j, k, &-q);
                    if !self.m[k][j].is_zero() {
                        self.swap_cols(k, j);
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            // pivot must divide the remaining block; if not, fold the
            // offending row in and re-run elimination at k
            let mut retry = false;
            'scan: for i in k + 1..self.rows {
                for j in k + 1..self.cols {
                    if !self.m[i][j].is_multiple_of(&self.m[k][k]) {
                        self.add_row(k, i, &BigInt::one());
                        retry = true;
                        break 'scan;
                    }
                }
            }
            if retry {
                continue;
            }
            if self.m[k][k].is_negative() {
                self.negate_row(k);
            }
            k += 1;
        }
        let divisors: Vec<BigInt> = (0..k).map(|i| self.m[i][i].clone()).collect();
        debug_assert!(divisors.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        SmithData {
            u: from_bigint(self.rows, self.rows, &self.u),
            u_inv: from_bigint(self.rows, self.rows, &self.u_inv),
            v: from_bigint(self.cols, self.cols, &self.v),
            v_inv: from_bigint(self.cols, self.cols, &self.v_inv),
            divisors,
        }
    }
}

pub fn smith_form(a: &Matrix) -> SmithData {
    Reducer::new(a).smith()
}

/// Canonical column Hermite form of the column lattice of `a`: zero columns
/// dropped, pivots positive, entries left of each pivot reduced. Two
/// matrices span the same lattice iff their Hermite forms are equal.
pub fn hnf_columns(a: &Matrix) -> Matrix {
    let z = GroundRing::Integers;
    let mut m = to_bigint(a);
    let rows = a.rows();
    let cols = a.cols();
    let mut next = 0usize; // next pivot column slot
    for row in 0..rows {
        if next >= cols {
            break;
        }
        loop {
            // column with minimal nonzero |entry| in this row at >= next
            let mut best: Option<usize> = None;
            for j in next..cols {
                if m[row][j].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(j),
                    Some(b) => {
                        if m[row][j].abs() < m[row][b].abs() {
                            best = Some(j);
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            if b != next {
                for r in m.iter_mut() {
                    r.swap(b, next);
                }
            }
            let mut clean = true;
            for j in next + 1..cols {
                if m[row][j].is_zero() {
                    continue;
                }
                let q = m[row][j].div_rem(&m[row][next]).0;
                for r in m.iter_mut() {
                    let t = &r[next] * &q;
                    r[j] -= t;
                }
                if !m[row][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if m[row][next].is_zero() {
            continue;
        }
        if m[row][next].is_negative() {
            for r in m.iter_mut() {
                r[next] = -r[next].clone();
            }
        }
        // reduce earlier pivot columns against this one
        let g = m[row][next].clone();
        for j in 0..next {
            let q = m[row][j].div_mod_floor(&g).0;
            if !q.is_zero() {
                for r in m.iter_mut() {
                    let t = &r[next] * &q;
                    r[j] -= t;
                }
            }
        }
        next += 1;
    }
    let kept = from_bigint(rows, cols, &m);
    let nonzero: Vec<usize> = (0..cols)
        .filter(|&j| (0..rows).any(|i| !kept[(i, j)].is_zero()))
        .collect();
    if nonzero.len() == cols {
        kept
    } else {
        let sel = kept.select_columns(&nonzero);
        if sel.cols() == 0 {
            Matrix::zeros(&z, rows, 0)
        } else {
            sel
        }
    }
}

/// Basis of the full integral kernel lattice of `a` (always saturated).
pub fn kernel_lattice(a: &Matrix) -> Matrix {
    let s = smith_form(a);
    let idx: Vec<usize> = (s.rank()..a.cols()).collect();
    s.v.select_columns(&idx)
}

/// An integral solution of `a · x = b` (columnwise), if one exists.
pub fn solve_integer(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows(), b.rows(), "shape mismatch in solve");
    let z = GroundRing::Integers;
    let s = smith_form(a);
    let c = s.u.mul(b, &z);
    let mut y = Matrix::zeros(&z, a.cols(), b.cols());
    for col in 0..b.cols() {
        for i in 0..a.rows() {
            let ci = c[(i, col)].as_int();
            if i < s.rank() {
                let (q, r) = ci.div_rem(&s.divisors[i]);
                if !r.is_zero() {
                    return None;
                }
                if i < a.cols() {
                    y[(i, col)] = Scalar::Int(q);
                }
            } else if !ci.is_zero() {
                return None;
            }
        }
    }
    Some(s.v.mul(&y, &z))
}

/// Saturation of the column lattice of `s`: the smallest sublattice
/// containing it with torsion-free quotient.
pub fn saturation(a: &Matrix) -> Matrix {
    let s = smith_form(a);
    let idx: Vec<usize> = (0..s.rank()).collect();
    hnf_columns(&s.u_inv.select_columns(&idx))
}
