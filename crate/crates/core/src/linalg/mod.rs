//! Exact dense linear algebra over ℚ, 𝔽_p, ℤ.
//!
//! The public operations dispatch on the [`GroundRing`]: over the fields they
//! are plain Gaussian elimination, over ℤ they are lattice computations via
//! Hermite/Smith normal forms. Over ℤ every kernel is returned as a basis of
//! the full (hence saturated) kernel lattice, and `solve` means an integral
//! solution.

pub mod field;
pub mod matrix;
pub mod scalar;
pub mod snf;

pub use matrix::Matrix;
pub use scalar::{GroundRing, Scalar};
pub use snf::{smith_form, SmithData};

use crate::error::Error;
use num_traits::Signed;

/// Rank of `a` (over ℤ: the free rank, i.e. rank over ℚ).
pub fn rank(ring: &GroundRing, a: &Matrix) -> usize {
    match ring {
        GroundRing::Integers => snf::smith_form(a).rank(),
        _ => field::rank(ring, a),
    }
}

/// Basis of `{x : a·x = 0}`, one column per basis vector. Over ℤ the columns
/// span the full kernel lattice, which is automatically saturated.
pub fn kernel_basis(ring: &GroundRing, a: &Matrix) -> Matrix {
    match ring {
        GroundRing::Integers => snf::kernel_lattice(a),
        _ => field::kernel(ring, a),
    }
}

/// Solve `a·x = b` columnwise over the ring; `None` if unsolvable.
pub fn solve(ring: &GroundRing, a: &Matrix, b: &Matrix) -> Option<Matrix> {
    match ring {
        GroundRing::Integers => snf::solve_integer(a, b),
        _ => field::solve(ring, a, b),
    }
}

/// A basis of the column span: over ℤ the canonical Hermite basis of the
/// column lattice, over a field the pivot columns of the input.
pub fn image_basis(ring: &GroundRing, a: &Matrix) -> Matrix {
    match ring {
        GroundRing::Integers => snf::hnf_columns(a),
        _ => {
            let (_, piv) = field::rref(ring, a);
            a.select_columns(&piv)
        }
    }
}

/// Saturation of the column lattice (over fields this is just a basis of the
/// span).
pub fn saturation(ring: &GroundRing, a: &Matrix) -> Matrix {
    match ring {
        GroundRing::Integers => snf::saturation(a),
        _ => image_basis(ring, a),
    }
}

/// Does the column span of `a` equal its saturation? Always true over
/// fields; over ℤ this is the purity test.
pub fn is_saturated(ring: &GroundRing, a: &Matrix) -> bool {
    match ring {
        GroundRing::Integers => smith_form(a).nonunit_divisors().is_empty(),
        _ => true,
    }
}

/// Is every column of `small` in the span/lattice of `big`?
pub fn span_contains(ring: &GroundRing, big: &Matrix, small: &Matrix) -> bool {
    solve(ring, big, small).is_some()
}

/// Do the two column spans/lattices coincide?
pub fn span_eq(ring: &GroundRing, a: &Matrix, b: &Matrix) -> bool {
    span_contains(ring, a, b) && span_contains(ring, b, a)
}

/// Determinant; over ℤ computed through ℚ and converted back exactly.
pub fn det(ring: &GroundRing, a: &Matrix) -> Scalar {
    match ring {
        GroundRing::Integers => {
            let q = GroundRing::Rationals;
            let aq = cast(ring, &q, a);
            let d = field::det(&q, &aq);
            match d {
                Scalar::Rat(x) => {
                    debug_assert!(num_traits::One::is_one(x.denom()));
                    Scalar::Int(x.numer().clone())
                }
                _ => unreachable!(),
            }
        }
        _ => field::det(ring, a),
    }
}

/// Is `a` invertible over the ring (over ℤ: unimodular)?
pub fn is_unit_matrix(ring: &GroundRing, a: &Matrix) -> bool {
    a.rows() == a.cols() && ring.is_unit(&det(ring, a))
}

pub fn inverse(ring: &GroundRing, a: &Matrix) -> Option<Matrix> {
    match ring {
        GroundRing::Integers => {
            if a.rows() != a.cols() {
                return None;
            }
            solve(ring, a, &Matrix::identity(ring, a.rows()))
                .filter(|x| a.mul(x, ring).is_identity())
        }
        _ => field::inverse(ring, a),
    }
}

/// Split the ambient free module along an independent, saturated set of
/// columns `b`: returns `(proj, lift)` with `proj·lift = I`, `proj·b = 0`,
/// and `lift` a basis of a complement of the span of `b`.
pub fn complement_split(ring: &GroundRing, b: &Matrix) -> Result<(Matrix, Matrix), Error> {
    let n = b.rows();
    let r = b.cols();
    match ring {
        GroundRing::Integers => {
            let s = smith_form(b);
            if s.rank() != r {
                return Err(Error::Inconsistency("complement of dependent columns".into()));
            }
            if !s.nonunit_divisors().is_empty() {
                return Err(Error::NotSaturated);
            }
            let proj_rows: Vec<usize> = (r..n).collect();
            let lift_cols: Vec<usize> = (r..n).collect();
            Ok((s.u.select_rows(&proj_rows), s.u_inv.select_columns(&lift_cols)))
        }
        _ => {
            let (_, piv) = field::rref(ring, &b.transpose());
            if piv.len() != r {
                return Err(Error::Inconsistency("complement of dependent columns".into()));
            }
            let comp: Vec<usize> = (0..n).filter(|i| !piv.contains(i)).collect();
            let mut lift = Matrix::zeros(ring, n, comp.len());
            for (j, &i) in comp.iter().enumerate() {
                lift[(i, j)] = ring.one();
            }
            let full = b.hstack(&lift);
            let inv = field::inverse(ring, &full)
                .ok_or_else(|| Error::Inconsistency("complement basis not invertible".into()))?;
            let rows: Vec<usize> = (r..n).collect();
            Ok((inv.select_rows(&rows), lift))
        }
    }
}

/// Entrywise cast between rings: ℤ → ℚ, ℤ → 𝔽_p (reduction), embeddings of
/// equal rings. Panics on casts that do not make sense (e.g. ℚ → ℤ when a
/// denominator is not 1).
pub fn cast(from: &GroundRing, to: &GroundRing, a: &Matrix) -> Matrix {
    if from == to {
        return a.clone();
    }
    Matrix::from_fn(a.rows(), a.cols(), |i, j| cast_scalar(from, to, &a[(i, j)]))
}

pub fn cast_scalar(from: &GroundRing, to: &GroundRing, s: &Scalar) -> Scalar {
    match (from, to, s) {
        (GroundRing::Integers, GroundRing::Rationals, Scalar::Int(x)) => {
            Scalar::Rat(num_rational::BigRational::from(x.clone()))
        }
        (GroundRing::Integers, GroundRing::PrimeField(p), Scalar::Int(x)) => {
            let m = num_integer::Integer::mod_floor(x, &num_bigint::BigInt::from(*p));
            let digits = m.to_u64_digits().1;
            Scalar::Fp(if digits.is_empty() { 0 } else { digits[0] })
        }
        (GroundRing::Rationals, GroundRing::Integers, Scalar::Rat(x)) => {
            assert!(num_traits::One::is_one(x.denom()), "rational is not integral");
            Scalar::Int(x.numer().clone())
        }
        _ => panic!("unsupported cast {from:?} -> {to:?}"),
    }
}

/// The primes dividing `d`, by trial division (divisors at desk scale are
/// tiny).
pub fn prime_factors(d: &num_bigint::BigInt) -> Vec<u64> {
    let mut n = d.abs();
    let mut out = Vec::new();
    let mut p = num_bigint::BigInt::from(2u64);
    while &p * &p <= n {
        if num_integer::Integer::is_multiple_of(&n, &p) {
            let digits = p.to_u64_digits().1;
            out.push(digits[0]);
            while num_integer::Integer::is_multiple_of(&n, &p) {
                n /= p.clone();
            }
        }
        p += 1;
    }
    if n > num_bigint::BigInt::from(1u64) {
        let digits = n.to_u64_digits().1;
        if digits.len() == 1 {
            out.push(digits[0]);
        }
    }
    out
}
