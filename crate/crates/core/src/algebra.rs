//! Free finite-rank algebras over a ground ring, given by structure
//! constants, a unit vector and a designated complete set of orthogonal
//! idempotents.
//!
//! The designated idempotents are part of the data: the whole verification
//! pipeline sources its projective covers and split data from them, so no
//! idempotent lifting is ever needed.

use std::sync::Arc;

use crate::error::Error;
use crate::linalg::{self, GroundRing, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Algebra {
    ring: GroundRing,
    dim: usize,
    /// `left_mult[i]` is the matrix of x ↦ b_i·x, i.e. column j holds the
    /// coordinates of b_i·b_j.
    left_mult: Vec<Matrix>,
    unit: Vec<Scalar>,
    idempotents: Vec<Vec<Scalar>>,
    basis_labels: Vec<String>,
}

impl Algebra {
    pub fn new(
        ring: GroundRing,
        left_mult: Vec<Matrix>,
        unit: Vec<Scalar>,
        idempotents: Vec<Vec<Scalar>>,
        basis_labels: Vec<String>,
    ) -> Result<Arc<Self>, Error> {
        let dim = left_mult.len();
        let labels = if basis_labels.is_empty() {
            (0..dim).map(|i| format!("b{i}")).collect()
        } else {
            basis_labels
        };
        if labels.len() != dim || unit.len() != dim {
            return Err(Error::ShapeMismatch("algebra data sizes disagree".into()));
        }
        let a = Algebra { ring, dim, left_mult, unit, idempotents, basis_labels: labels };
        a.check()?;
        Ok(Arc::new(a))
    }

    /// Build from structure constants `c[i][j][k]` with b_i·b_j = Σ_k c·b_k.
    pub fn from_structure_constants(
        ring: GroundRing,
        dim: usize,
        entries: &[(usize, usize, usize, Scalar)],
        unit: Vec<Scalar>,
        idempotents: Vec<Vec<Scalar>>,
        basis_labels: Vec<String>,
    ) -> Result<Arc<Self>, Error> {
        let mut left_mult = vec![Matrix::zeros(&ring, dim, dim); dim];
        for (i, j, k, c) in entries {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(Error::InvalidInput(format!(
                    "structure constant index ({i},{j},{k}) out of range for rank {dim}"
                )));
            }
            let cur = left_mult[*i][(*k, *j)].clone();
            left_mult[*i][(*k, *j)] = ring.add(&cur, c);
        }
        Algebra::new(ring, left_mult, unit, idempotents, basis_labels)
    }

    fn check(&self) -> Result<(), Error> {
        let ring = &self.ring;
        for m in &self.left_mult {
            if m.rows() != self.dim || m.cols() != self.dim {
                return Err(Error::ShapeMismatch("multiplication table shape".into()));
            }
        }
        // associativity: left_mult(b_i) ∘ left_mult(b_j) = left_mult(b_i·b_j)
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = self.left_mult[i].mul(&self.left_mult[j], ring);
                let rhs = self.left_mult_matrix(&self.left_mult[i].column(j));
                if lhs != rhs {
                    return Err(Error::Validation(format!(
                        "associativity fails at basis pair ({}, {})",
                        self.basis_labels[i], self.basis_labels[j]
                    )));
                }
            }
        }
        if !self.left_mult_matrix(&self.unit).is_identity() {
            return Err(Error::Validation("unit fails on the left".into()));
        }
        if !self.right_mult_matrix(&self.unit).is_identity() {
            return Err(Error::Validation("unit fails on the right".into()));
        }
        // idempotents: orthogonal, idempotent, summing to the unit
        let mut total = vec![ring.zero(); self.dim];
        for (a, e) in self.idempotents.iter().enumerate() {
            if e.len() != self.dim {
                return Err(Error::ShapeMismatch("idempotent vector length".into()));
            }
            for (b, f) in self.idempotents.iter().enumerate() {
                let prod = self.multiply(e, f);
                let expect = if a == b { e.clone() } else { vec![ring.zero(); self.dim] };
                if prod != expect {
                    return Err(Error::Validation(format!(
                        "idempotent orthogonality fails at pair ({a}, {b})"
                    )));
                }
            }
            for k in 0..self.dim {
                total[k] = ring.add(&total[k], &e[k]);
            }
        }
        if total != self.unit {
            return Err(Error::Validation("idempotents do not sum to the unit".into()));
        }
        Ok(())
    }

    pub fn ring(&self) -> &GroundRing {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn idempotents(&self) -> &[Vec<Scalar>] {
        &self.idempotents
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn left_mult(&self, i: usize) -> &Matrix {
        &self.left_mult[i]
    }

    /// Matrix of x ↦ a·x for a with the given coordinates.
    pub fn left_mult_matrix(&self, coeffs: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(&self.ring, self.dim, self.dim);
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            m = m.add(&self.left_mult[i].scale(c, &self.ring), &self.ring);
        }
        m
    }

    /// Matrix of x ↦ x·a for a with the given coordinates.
    pub fn right_mult_matrix(&self, coeffs: &[Scalar]) -> Matrix {
        Matrix::from_fn(self.dim, self.dim, |k, i| {
            // entry (k, i): coefficient of b_k in b_i·a
            let mut acc = self.ring.zero();
            for (j, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                acc = self.ring.add(&acc, &self.ring.mul(c, &self.left_mult[i][(k, j)]));
            }
            acc
        })
    }

    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.left_mult_matrix(x).apply(y, &self.ring)
    }

    /// The opposite algebra, on the same basis.
    pub fn opposite(self: &Arc<Self>) -> Arc<Algebra> {
        let right: Vec<Matrix> = (0..self.dim)
            .map(|i| {
                let mut e = vec![self.ring.zero(); self.dim];
                e[i] = self.ring.one();
                self.right_mult_matrix(&e)
            })
            .collect();
        Arc::new(Algebra {
            ring: self.ring.clone(),
            dim: self.dim,
            left_mult: right,
            unit: self.unit.clone(),
            idempotents: self.idempotents.clone(),
            basis_labels: self.basis_labels.clone(),
        })
    }

    /// The ground ring itself as a rank-1 algebra.
    pub fn ground(ring: GroundRing) -> Arc<Algebra> {
        let one = ring.one();
        Algebra::new(
            ring.clone(),
            vec![Matrix::identity(&ring, 1)],
            vec![one.clone()],
            vec![vec![one]],
            vec!["1".into()],
        )
        .expect("ground ring algebra is valid")
    }
}

/// A quotient of an algebra by a two-sided ideal given as a saturated
/// sublattice, with the projection and a section fixed once.
#[derive(Clone, Debug)]
pub struct AlgebraQuotient {
    pub parent: Arc<Algebra>,
    pub quotient: Arc<Algebra>,
    /// Saturated basis of the ideal inside the parent coordinates.
    pub ideal: Matrix,
    /// dim(quotient) × dim(parent)
    pub proj: Matrix,
    /// dim(parent) × dim(quotient), a section of `proj`.
    pub lift: Matrix,
}

impl AlgebraQuotient {
    pub fn new(parent: &Arc<Algebra>, ideal_gens: &Matrix) -> Result<Self, Error> {
        let ring = parent.ring().clone();
        let basis = linalg::image_basis(&ring, ideal_gens);
        if !linalg::is_saturated(&ring, &basis) {
            return Err(Error::NotSaturated);
        }
        // two-sided: closed under left and right multiplication by the basis
        for i in 0..parent.dim() {
            let mut e = vec![ring.zero(); parent.dim()];
            e[i] = ring.one();
            let l = parent.left_mult_matrix(&e).mul(&basis, &ring);
            let r = parent.right_mult_matrix(&e).mul(&basis, &ring);
            if !linalg::span_contains(&ring, &basis, &l) || !linalg::span_contains(&ring, &basis, &r)
            {
                return Err(Error::NotInvariant);
            }
        }
        let (proj, lift) = linalg::complement_split(&ring, &basis)?;
        let dq = proj.rows();
        let mut left_mult = Vec::with_capacity(dq);
        for i in 0..dq {
            let bi = lift.column(i);
            let m = proj.mul(&parent.left_mult_matrix(&bi), &ring).mul(&lift, &ring);
            left_mult.push(m);
        }
        let unit = proj.apply(parent.unit(), &ring);
        let idempotents = parent
            .idempotents()
            .iter()
            .map(|e| proj.apply(e, &ring))
            .collect();
        let labels = (0..dq).map(|i| format!("q{i}")).collect();
        let quotient = Algebra::new(ring, left_mult, unit, idempotents, labels)?;
        Ok(AlgebraQuotient { parent: parent.clone(), quotient, ideal: basis, proj, lift })
    }

    /// The identity quotient (zero ideal).
    pub fn identity(parent: &Arc<Algebra>) -> Self {
        let ring = parent.ring().clone();
        AlgebraQuotient {
            parent: parent.clone(),
            quotient: parent.clone(),
            ideal: Matrix::zeros(&ring, parent.dim(), 0),
            proj: Matrix::identity(&ring, parent.dim()),
            lift: Matrix::identity(&ring, parent.dim()),
        }
    }

    /// Compose with a further quotient of `self.quotient`.
    pub fn then(&self, next: &AlgebraQuotient) -> AlgebraQuotient {
        assert_eq!(next.parent.as_ref(), self.quotient.as_ref());
        let ring = self.parent.ring();
        // ideal in the parent = preimage of next.ideal
        let lifted = self.lift.mul(&next.ideal, ring);
        let gens = self.ideal.hstack(&lifted);
        AlgebraQuotient {
            parent: self.parent.clone(),
            quotient: next.quotient.clone(),
            ideal: linalg::image_basis(ring, &gens),
            proj: next.proj.mul(&self.proj, ring),
            lift: self.lift.mul(&next.lift, ring),
        }
    }
}
