//! Modules over a free finite-rank algebra, morphisms between them, and the
//! basic constructions: duals, direct sums, submodules, quotients,
//! inflation along algebra quotients, isomorphism search.
//!
//! Modules are free over the ground ring by construction; an A-module of
//! rank n is a tuple of n×n action matrices, one per algebra basis element.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, AlgebraQuotient};
use crate::error::Error;
use crate::linalg::{self, GroundRing, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct AModule {
    algebra: Arc<Algebra>,
    rank: usize,
    action: Vec<Matrix>,
}

impl AModule {
    pub fn new(algebra: Arc<Algebra>, rank: usize, action: Vec<Matrix>) -> Result<Self, Error> {
        let m = AModule { algebra, rank, action };
        m.check()?;
        Ok(m)
    }

    /// Build without validating the representation identities; for internal
    /// constructions whose matrices already satisfy them. Debug builds still
    /// assert.
    pub(crate) fn new_unchecked(algebra: Arc<Algebra>, rank: usize, action: Vec<Matrix>) -> Self {
        let m = AModule { algebra, rank, action };
        debug_assert!(m.check().is_ok(), "internal module construction broke the axioms");
        m
    }

    pub fn check(&self) -> Result<(), Error> {
        let ring = self.ring();
        if self.action.len() != self.algebra.dim() {
            return Err(Error::ShapeMismatch("one action matrix per basis element".into()));
        }
        for m in &self.action {
            if m.rows() != self.rank || m.cols() != self.rank {
                return Err(Error::ShapeMismatch("action matrix shape".into()));
            }
        }
        if !self.action_of(self.algebra.unit()).is_identity() {
            return Err(Error::Validation("unit does not act as the identity".into()));
        }
        for i in 0..self.algebra.dim() {
            for j in 0..self.algebra.dim() {
                let lhs = self.action[i].mul(&self.action[j], ring);
                let rhs = self.action_of(&self.algebra.left_mult(i).column(j));
                if lhs != rhs {
                    return Err(Error::Validation(format!(
                        "action is not multiplicative at basis pair ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn ring(&self) -> &GroundRing {
        self.algebra.ring()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.action[i]
    }

    /// Action matrix of the algebra element with the given coordinates.
    pub fn action_of(&self, coeffs: &[Scalar]) -> Matrix {
        let ring = self.ring();
        let mut m = Matrix::zeros(ring, self.rank, self.rank);
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            m = m.add(&self.action[i].scale(c, ring), ring);
        }
        m
    }

    pub fn same_algebra(&self, other: &AModule) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra
    }

    pub fn zero(algebra: Arc<Algebra>) -> AModule {
        let ring = algebra.ring().clone();
        let action = vec![Matrix::zeros(&ring, 0, 0); algebra.dim()];
        AModule { algebra, rank: 0, action }
    }

    /// The left regular module.
    pub fn regular(algebra: &Arc<Algebra>) -> AModule {
        let action = (0..algebra.dim()).map(|i| algebra.left_mult(i).clone()).collect();
        AModule::new_unchecked(algebra.clone(), algebra.dim(), action)
    }

    /// The R-linear dual as a module over the opposite algebra. Applying it
    /// twice gives back the identical matrices, so the natural isomorphism
    /// D(D M) ≅ M is the identity here.
    pub fn dual(&self, opposite: &Arc<Algebra>) -> AModule {
        let action = self.action.iter().map(Matrix::transpose).collect();
        AModule::new_unchecked(opposite.clone(), self.rank, action)
    }

    pub fn direct_sum(parts: &[&AModule]) -> AModule {
        assert!(!parts.is_empty());
        let algebra = parts[0].algebra.clone();
        let ring = algebra.ring().clone();
        assert!(parts.iter().all(|p| p.same_algebra(parts[0])));
        let rank = parts.iter().map(|p| p.rank).sum();
        let action = (0..algebra.dim())
            .map(|i| {
                let blocks: Vec<&Matrix> = parts.iter().map(|p| &p.action[i]).collect();
                Matrix::block_diag(&ring, &blocks)
            })
            .collect();
        AModule { algebra, rank, action }
    }

    /// Direct sum of `m` copies (tensoring with the free module Rᵐ).
    pub fn tensor_free(&self, m: usize) -> AModule {
        if m == 0 {
            return AModule::zero(self.algebra.clone());
        }
        let parts: Vec<&AModule> = (0..m).map(|_| self).collect();
        AModule::direct_sum(&parts)
    }

    /// Inclusion of the k-th summand into the direct sum with the given
    /// part ranks.
    pub fn summand_inclusion(ring: &GroundRing, ranks: &[usize], k: usize) -> Matrix {
        let total: usize = ranks.iter().sum();
        let before: usize = ranks[..k].iter().sum();
        let mut m = Matrix::zeros(ring, total, ranks[k]);
        for j in 0..ranks[k] {
            m[(before + j, j)] = ring.one();
        }
        m
    }

    pub fn summand_projection(ring: &GroundRing, ranks: &[usize], k: usize) -> Matrix {
        Self::summand_inclusion(ring, ranks, k).transpose()
    }
}

#[derive(Clone, Debug)]
pub struct Morphism {
    pub source: AModule,
    pub target: AModule,
    pub matrix: Matrix,
}

impl Morphism {
    pub fn new(source: AModule, target: AModule, matrix: Matrix) -> Result<Self, Error> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::ShapeMismatch("morphism matrix".into()));
        }
        let f = Morphism { source, target, matrix };
        if !f.is_intertwiner() {
            return Err(Error::Validation("matrix does not intertwine the actions".into()));
        }
        Ok(f)
    }

    pub fn is_intertwiner(&self) -> bool {
        let ring = self.source.ring();
        (0..self.source.algebra().dim()).all(|i| {
            self.matrix.mul(self.source.action(i), ring)
                == self.target.action(i).mul(&self.matrix, ring)
        })
    }

    /// self ∘ other
    pub fn compose(&self, other: &Morphism) -> Morphism {
        assert_eq!(other.target.rank(), self.source.rank());
        Morphism {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&other.matrix, self.source.ring()),
        }
    }

    pub fn identity(m: &AModule) -> Morphism {
        Morphism {
            source: m.clone(),
            target: m.clone(),
            matrix: Matrix::identity(m.ring(), m.rank()),
        }
    }
}

/// Basis of the space (over ℤ: the full lattice) of intertwiners M → N.
/// Matrices are target.rank × source.rank.
pub fn hom_space(m: &AModule, n: &AModule) -> Result<Vec<Matrix>, Error> {
    if !m.same_algebra(n) {
        return Err(Error::AlgebraMismatch);
    }
    let ring = m.ring();
    let d = m.algebra().dim();
    let (nr, mr) = (n.rank(), m.rank());
    let unknowns = nr * mr;
    let mut system = Matrix::zeros(ring, d * nr * mr, unknowns);
    // unknown F_{p,q} has index q*nr + p (columnwise vec of F)
    for i in 0..d {
        let rho_m = m.action(i);
        let rho_n = n.action(i);
        for r in 0..nr {
            for c in 0..mr {
                let row = i * nr * mr + c * nr + r;
                // (F·ρ_M)_{r,c} = Σ_q F_{r,q}·ρ_M[q,c]
                for q in 0..mr {
                    if rho_m[(q, c)].is_zero() {
                        continue;
                    }
                    let col = q * nr + r;
                    let cur = system[(row, col)].clone();
                    system[(row, col)] = ring.add(&cur, &rho_m[(q, c)]);
                }
                // −(ρ_N·F)_{r,c} = −Σ_p ρ_N[r,p]·F_{p,c}
                for p in 0..nr {
                    if rho_n[(r, p)].is_zero() {
                        continue;
                    }
                    let col = c * nr + p;
                    let cur = system[(row, col)].clone();
                    system[(row, col)] = ring.sub(&cur, &rho_n[(r, p)]);
                }
            }
        }
    }
    let kernel = linalg::kernel_basis(ring, &system);
    Ok((0..kernel.cols())
        .map(|j| Matrix::from_vec_columns(nr, mr, &kernel.column(j)))
        .collect())
}

pub fn hom_rank(m: &AModule, n: &AModule) -> Result<usize, Error> {
    Ok(hom_space(m, n)?.len())
}

/// Coordinates of an intertwiner with respect to a hom-space basis.
pub fn hom_coordinates(ring: &GroundRing, basis: &[Matrix], f: &Matrix) -> Option<Vec<Scalar>> {
    if basis.is_empty() {
        return if f.is_zero() { Some(vec![]) } else { None };
    }
    let cols: Vec<Vec<Scalar>> = basis.iter().map(Matrix::vec_columns).collect();
    let b = Matrix::from_columns(ring, cols[0].len(), &cols);
    let rhs = Matrix::from_columns(ring, cols[0].len(), &[f.vec_columns()]);
    linalg::solve(ring, &b, &rhs).map(|x| x.column(0))
}

/// The smallest A-invariant span/lattice containing the given columns.
/// Over ℤ this is the genuine sublattice generated, not its saturation.
pub fn invariant_span(m: &AModule, gens: &Matrix) -> Matrix {
    let ring = m.ring();
    let mut basis = linalg::image_basis(ring, gens);
    loop {
        let mut bigger = basis.clone();
        for i in 0..m.algebra().dim() {
            bigger = bigger.hstack(&m.action(i).mul(&basis, ring));
        }
        let next = linalg::image_basis(ring, &bigger);
        if linalg::span_contains(ring, &basis, &next) {
            return basis;
        }
        basis = next;
    }
}

/// A submodule presented by a basis of an invariant sublattice, together
/// with its induced module structure.
pub struct Submodule {
    pub module: AModule,
    /// ambient.rank × module.rank inclusion
    pub inclusion: Matrix,
}

/// Submodule generated by the given column vectors.
pub fn submodule_generated(m: &AModule, gens: &Matrix) -> Submodule {
    let basis = invariant_span(m, gens);
    submodule_from_basis(m, &basis).expect("generated span is invariant")
}

/// Submodule on an explicit invariant basis; errors when the span is not
/// invariant or the columns are dependent.
pub fn submodule_from_basis(m: &AModule, basis: &Matrix) -> Result<Submodule, Error> {
    let ring = m.ring();
    if linalg::rank(ring, basis) != basis.cols() {
        return Err(Error::InvalidInput("submodule basis is not independent".into()));
    }
    let mut action = Vec::with_capacity(m.algebra().dim());
    for i in 0..m.algebra().dim() {
        let moved = m.action(i).mul(basis, ring);
        let coords = linalg::solve(ring, basis, &moved).ok_or(Error::NotInvariant)?;
        action.push(coords);
    }
    Ok(Submodule {
        module: AModule::new_unchecked(m.algebra().clone(), basis.cols(), action),
        inclusion: basis.clone(),
    })
}

/// Image of a morphism as a submodule of its target.
pub fn image(f: &Morphism) -> Submodule {
    let ring = f.source.ring();
    let basis = linalg::image_basis(ring, &f.matrix);
    submodule_from_basis(&f.target, &basis).expect("images are invariant")
}

/// A quotient of a module by a saturated invariant sublattice.
pub struct QuotientModule {
    pub module: AModule,
    /// module.rank × ambient.rank projection
    pub projection: Matrix,
    /// ambient.rank × module.rank section of the projection
    pub section: Matrix,
}

pub fn quotient_module(m: &AModule, sub_basis: &Matrix) -> Result<QuotientModule, Error> {
    let ring = m.ring();
    if !linalg::is_saturated(ring, sub_basis) {
        return Err(Error::NotSaturated);
    }
    for i in 0..m.algebra().dim() {
        let moved = m.action(i).mul(sub_basis, ring);
        if !linalg::span_contains(ring, sub_basis, &moved) {
            return Err(Error::NotInvariant);
        }
    }
    let (proj, lift) = linalg::complement_split(ring, sub_basis)?;
    let action = (0..m.algebra().dim())
        .map(|i| proj.mul(m.action(i), ring).mul(&lift, ring))
        .collect();
    Ok(QuotientModule {
        module: AModule::new_unchecked(m.algebra().clone(), proj.rows(), action),
        projection: proj,
        section: lift,
    })
}

/// Pull a module over the quotient algebra back to the parent (inflation).
pub fn inflate(module: &AModule, through: &AlgebraQuotient) -> AModule {
    assert_eq!(module.algebra().as_ref(), through.quotient.as_ref());
    let action = (0..through.parent.dim())
        .map(|i| module.action_of(&through.proj.column(i)))
        .collect();
    AModule::new_unchecked(through.parent.clone(), module.rank(), action)
}

/// Search for an isomorphism M → N: an intertwiner that is invertible over
/// the ring (over ℤ: unimodular). Over ℤ this is a semi-decision: the
/// search walks small coefficient boxes of the Hom lattice and can miss
/// exotic unimodular combinations; callers needing certainty compare ranks
/// and invariants instead.
pub fn find_isomorphism(m: &AModule, n: &AModule) -> Result<Option<Matrix>, Error> {
    let ring = m.ring().clone();
    if m.rank() != n.rank() {
        return Ok(None);
    }
    if m.rank() == 0 {
        return Ok(Some(Matrix::zeros(&ring, 0, 0)));
    }
    let basis = hom_space(m, n)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let k = basis.len();
    let check = |f: &Matrix| linalg::is_unit_matrix(&ring, f);
    for f in &basis {
        if check(f) {
            return Ok(Some(f.clone()));
        }
    }
    let combine = |coeffs: &[i64]| -> Matrix {
        let mut acc = Matrix::zeros(&ring, n.rank(), m.rank());
        for (f, c) in basis.iter().zip(coeffs) {
            if *c == 0 {
                continue;
            }
            acc = acc.add(&f.scale(&ring.from_i64(*c), &ring), &ring);
        }
        acc
    };
    // exhaustive small boxes, then seeded random combinations
    let box_limit: i64 = 2;
    let box_size = (2 * box_limit + 1).pow(k.min(8) as u32);
    if k <= 8 && box_size <= 600_000 {
        let mut coeffs = vec![-box_limit; k];
        loop {
            let f = combine(&coeffs);
            if !f.is_zero() && check(&f) {
                return Ok(Some(f));
            }
            let mut idx = 0;
            loop {
                if idx == k {
                    return Ok(None);
                }
                coeffs[idx] += 1;
                if coeffs[idx] <= box_limit {
                    break;
                }
                coeffs[idx] = -box_limit;
                idx += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x71c0_de00 + k as u64);
    for _ in 0..64 {
        let coeffs: Vec<i64> = (0..k).map(|_| rng.gen_range(-3..=3)).collect();
        let f = combine(&coeffs);
        if !f.is_zero() && check(&f) {
            return Ok(Some(f));
        }
    }
    Ok(None)
}
