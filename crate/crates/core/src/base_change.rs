//! ℤ → 𝔽_p reduction and fiberwise verification of integral structures.
//!
//! "All maximal ideals" cannot be sampled exhaustively; the automatic prime
//! set adds every prime dividing a torsion divisor seen in the relevant Ext
//! computations (the only places fiber behavior can change) to the default
//! sample {2, 3, 5, 7}. Forward implications (integral membership forces
//! fiber membership) are exact; the reverse direction over a finite sample
//! is reported as evidence only.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::Error;
use crate::homology::ext;
use crate::linalg::{self, GroundRing, Matrix};
use crate::module::{find_isomorphism, hom_space, AModule, Morphism};
use crate::qh::{
    has_delta_filtration, verify_split_qh, FiltrationCertificate, Layer, QhInput, QhStructure,
    Verdict,
};
use crate::tilting::{CharacteristicTilting, PartialTiltingData};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    User,
    Automatic,
}

#[derive(Clone, Debug)]
pub struct PrimeSample {
    pub primes: Vec<(u64, Provenance)>,
}

impl PrimeSample {
    pub fn user(primes: &[u64]) -> Result<Self, Error> {
        let mut out = Vec::new();
        for &p in primes {
            GroundRing::prime_field(p)?;
            out.push((p, Provenance::User));
        }
        Ok(PrimeSample { primes: out })
    }

    /// The default sample {2, 3, 5, 7} extended by every prime dividing a
    /// torsion divisor of Ext¹(M, ∇(λ)) or Ext¹(Δ(λ), M) for M in the pool.
    pub fn automatic(qh: &QhStructure, pool: &[AModule]) -> Result<Self, Error> {
        let mut primes: BTreeSet<u64> = [2, 3, 5, 7].into();
        for m in pool {
            for i in 0..qh.len() {
                for e in [ext(m, qh.costandard(i)?, 1)?, ext(qh.standard(i), m, 1)?] {
                    for d in &e.torsion {
                        primes.extend(linalg::prime_factors(d));
                    }
                }
            }
        }
        Ok(PrimeSample {
            primes: primes.into_iter().map(|p| (p, Provenance::Automatic)).collect(),
        })
    }

    pub fn values(&self) -> Vec<u64> {
        self.primes.iter().map(|(p, _)| *p).collect()
    }
}

fn require_integers(ring: &GroundRing) -> Result<(), Error> {
    if *ring != GroundRing::Integers {
        return Err(Error::Precondition("base change requires an integral structure".into()));
    }
    Ok(())
}

pub fn reduce_matrix(m: &Matrix, p: u64) -> Matrix {
    linalg::cast(&GroundRing::Integers, &GroundRing::PrimeField(p), m)
}

pub fn reduce_algebra(a: &Arc<Algebra>, p: u64) -> Result<Arc<Algebra>, Error> {
    require_integers(a.ring())?;
    let fp = GroundRing::prime_field(p)?;
    let z = GroundRing::Integers;
    let left_mult = (0..a.dim()).map(|i| linalg::cast(&z, &fp, a.left_mult(i))).collect();
    let unit = a.unit().iter().map(|s| linalg::cast_scalar(&z, &fp, s)).collect();
    let idempotents = a
        .idempotents()
        .iter()
        .map(|e| e.iter().map(|s| linalg::cast_scalar(&z, &fp, s)).collect())
        .collect();
    Algebra::new(fp, left_mult, unit, idempotents, a.basis_labels().to_vec())
}

pub fn reduce_module(m: &AModule, target: &Arc<Algebra>, p: u64) -> Result<AModule, Error> {
    require_integers(m.ring())?;
    let action = (0..m.algebra().dim()).map(|i| reduce_matrix(m.action(i), p)).collect();
    AModule::new(target.clone(), m.rank(), action)
}

pub fn reduce_input(input: &QhInput, p: u64) -> Result<QhInput, Error> {
    let algebra = reduce_algebra(&input.algebra, p)?;
    let standards = input
        .standards
        .iter()
        .map(|s| reduce_module(s, &algebra, p))
        .collect::<Result<_, _>>()?;
    let extras = input
        .extras
        .iter()
        .map(|(k, v)| Ok((k.clone(), reduce_module(v, &algebra, p)?)))
        .collect::<Result<_, Error>>()?;
    Ok(QhInput { algebra, poset: input.poset.clone(), standards, extras })
}

fn reduce_certificate(cert: &FiltrationCertificate, p: u64) -> FiltrationCertificate {
    FiltrationCertificate {
        kind: cert.kind,
        chain: cert.chain.iter().map(|m| reduce_matrix(m, p)).collect(),
        layers: cert
            .layers
            .iter()
            .map(|l| Layer {
                label_index: l.label_index,
                multiplicity: l.multiplicity,
                witness: reduce_matrix(&l.witness, p),
            })
            .collect(),
    }
}

/// The input reassembled from a verified integral structure, for fiberwise
/// re-verification.
pub fn structure_input(qh: &QhStructure) -> QhInput {
    QhInput {
        algebra: qh.algebra.clone(),
        poset: qh.poset.clone(),
        standards: qh.standards.clone(),
        extras: qh.extras.clone(),
    }
}

/// Reduction report of a verified ℤ-structure at one prime: the fiber is
/// re-verified from scratch and the reduced costandards are compared
/// against the fiber pipeline's by explicit isomorphism.
pub struct FiberStructure {
    pub prime: u64,
    pub qh: QhStructure,
    /// per label: reduce(∇_ℤ(λ)) ≅ ∇_p(λ) witnessed
    pub costandards_match: Vec<bool>,
}

pub fn reduce_structure(qh: &QhStructure, p: u64) -> Result<FiberStructure, Error> {
    require_integers(qh.ring())?;
    let input = reduce_input(&structure_input(qh), p)?;
    let mut fiber = match verify_split_qh(&input)? {
        Verdict::Accepted(q) => *q,
        Verdict::Refuted(r) => {
            return Err(Error::Inconsistency(format!(
                "fiber at p = {p} failed verification: {r}"
            )))
        }
    };
    fiber.compute_costandards()?;
    let mut costandards_match = Vec::with_capacity(qh.len());
    for i in 0..qh.len() {
        let reduced = reduce_module(qh.costandard(i)?, &fiber.algebra, p)?;
        let matched = find_isomorphism(&reduced, fiber.costandard(i)?)?.is_some();
        costandards_match.push(matched);
    }
    Ok(FiberStructure { prime: p, qh: fiber, costandards_match })
}

/// Reduce a partial tilting datum to the fiber, including its certificates
/// and both exact sequences, ready for replay over 𝔽_p.
pub fn reduce_partial_tilting(
    data: &PartialTiltingData,
    fiber: &FiberStructure,
) -> Result<PartialTiltingData, Error> {
    let p = fiber.prime;
    let alg = &fiber.qh.algebra;
    let module = reduce_module(&data.module, alg, p)?;
    let delta = reduce_module(&data.embed.source, alg, p)?;
    let nabla_int = &data.onto.target;
    let nabla = reduce_module(nabla_int, alg, p)?;
    let cokernel = reduce_module(&data.cokernel, alg, p)?;
    let kernel = reduce_module(&data.kernel, alg, p)?;
    Ok(PartialTiltingData {
        label_index: data.label_index,
        module: module.clone(),
        delta_cert: reduce_certificate(&data.delta_cert, p),
        nabla_cert: reduce_certificate(&data.nabla_cert, p),
        embed: Morphism::new(delta, module.clone(), reduce_matrix(&data.embed.matrix, p))?,
        cokernel,
        cokernel_cert: reduce_certificate(&data.cokernel_cert, p),
        onto: Morphism::new(module, nabla, reduce_matrix(&data.onto.matrix, p))?,
        kernel,
        kernel_cert: reduce_certificate(&data.kernel_cert, p),
    })
}

/// Replay an integral characteristic tilting module over a fiber. The
/// reduced certificates must verify against the fiber's own standards and
/// costandards, up to isomorphism of the layer modules.
///
/// The fiber costandards need not be equal on the nose to the reduced
/// ones, so the costandard-side certificates are replayed against the
/// reduced integral costandards, which the fiber comparison has matched.
pub fn reduce_tilting_check(
    t: &CharacteristicTilting,
    qh: &QhStructure,
    fiber: &FiberStructure,
) -> Result<bool, Error> {
    let p = fiber.prime;
    let alg = &fiber.qh.algebra;
    let reduced_costandards: Vec<AModule> = (0..qh.len())
        .map(|i| reduce_module(qh.costandard(i)?, alg, p))
        .collect::<Result<_, _>>()?;
    for part in &t.parts {
        let rp = reduce_partial_tilting(part, fiber)?;
        crate::qh::verify_certificate(&rp.module, &fiber.qh.standards, &rp.delta_cert)?;
        crate::qh::verify_certificate(&rp.module, &reduced_costandards, &rp.nabla_cert)?;
        // membership through the fiber pipeline
        if !crate::tilting::add_t_membership(&rp.module, &fiber.qh)? {
            return Ok(false);
        }
    }
    let reduced_t = reduce_module(&t.module, alg, p)?;
    for degree in 1..=2 {
        if !ext(&reduced_t, &reduced_t, degree)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hom base change: rank_ℤ Hom(M, N) must equal dim Hom(M(p), N(p)) at
/// every sampled prime. Reports the offending prime on failure.
pub struct HomBaseChange {
    pub integral_rank: usize,
    pub fiber_ranks: Vec<(u64, usize)>,
    pub ok: bool,
    pub failing_prime: Option<u64>,
}

pub fn hom_base_change_check(
    m: &AModule,
    n: &AModule,
    qh: &QhStructure,
    sample: &PrimeSample,
) -> Result<HomBaseChange, Error> {
    require_integers(qh.ring())?;
    let integral_rank = hom_space(m, n)?.len();
    let mut fiber_ranks = Vec::new();
    let mut failing = None;
    for p in sample.values() {
        let alg = reduce_algebra(&qh.algebra, p)?;
        let mp = reduce_module(m, &alg, p)?;
        let np = reduce_module(n, &alg, p)?;
        let r = hom_space(&mp, &np)?.len();
        if r != integral_rank && failing.is_none() {
            failing = Some(p);
        }
        fiber_ranks.push((p, r));
    }
    Ok(HomBaseChange {
        integral_rank,
        fiber_ranks,
        ok: failing.is_none(),
        failing_prime: failing,
    })
}

/// Both sides of the fiberwise filtration criterion. The contract checked
/// here is one-directional: if the integral Ext criterion holds then every
/// fiber must pass; the converse over a finite sample is evidence only and
/// is flagged as such by `sampled_only`.
pub struct FiberwiseFiltration {
    pub ext_criterion: bool,
    pub fibers: Vec<(u64, bool)>,
    /// true: a passing fiber sample does not certify integral membership
    pub sampled_only: bool,
}

pub fn fiberwise_filtration_check(
    m: &AModule,
    qh: &QhStructure,
    sample: &PrimeSample,
) -> Result<FiberwiseFiltration, Error> {
    require_integers(qh.ring())?;
    let ext_criterion = has_delta_filtration(m, qh)?;
    let mut fibers = Vec::new();
    for p in sample.values() {
        let fiber = reduce_structure(qh, p)?;
        let mp = reduce_module(m, &fiber.qh.algebra, p)?;
        let ok = has_delta_filtration(&mp, &fiber.qh)?;
        fibers.push((p, ok));
    }
    if ext_criterion {
        if let Some((p, _)) = fibers.iter().find(|(_, ok)| !ok) {
            return Err(Error::Inconsistency(format!(
                "integral membership holds but the fiber at p = {p} fails"
            )));
        }
    }
    Ok(FiberwiseFiltration { ext_criterion, fibers, sampled_only: true })
}

/// Outcome of trying to recognize a module as a standard one.
pub enum Recognition {
    /// an explicit isomorphism M → Δ(λ), invertible over the ring
    Found(Matrix),
    /// the Hom-rank multiplicity table against the costandards is not the
    /// delta pattern; the table is returned as the diagnostic
    MultiplicityMismatch(Vec<(usize, usize)>),
    /// multiplicities match but no unit-determinant intertwiner was found
    /// (over ℤ the search is a semi-decision)
    NoWitness,
}

/// Recognize M ≅ Δ(λ) inside F(Δ̃): multiplicity test against all
/// costandards, then an explicit invertible intertwiner search.
pub fn standard_recognition(
    m: &AModule,
    qh: &QhStructure,
    i: usize,
) -> Result<Recognition, Error> {
    let mut table = Vec::new();
    let mut delta_pattern = true;
    for j in 0..qh.len() {
        let r = hom_space(m, qh.costandard(j)?)?.len();
        table.push((j, r));
        if r != usize::from(i == j) {
            delta_pattern = false;
        }
    }
    if !delta_pattern {
        return Ok(Recognition::MultiplicityMismatch(table));
    }
    match find_isomorphism(m, qh.standard(i))? {
        Some(w) => Ok(Recognition::Found(w)),
        None => Ok(Recognition::NoWitness),
    }
}
