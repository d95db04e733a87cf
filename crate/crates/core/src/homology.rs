//! Homological primitives: projective covers from the designated
//! idempotents, syzygies, Ext groups with representing cocycles, short
//! exact sequences from cocycles (pushouts), universal extensions, and
//! Tor via tensor complexes.
//!
//! Over ℤ all kernels are taken as full lattices, so syzygies stay free and
//! every Ext group is reported as a free rank together with its torsion
//! divisors. "Ext = 0" always means free rank zero and no torsion.

use num_bigint::BigInt;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::Error;
use crate::linalg::{self, GroundRing, Matrix, Scalar};
use crate::module::{hom_space, AModule, Morphism};

/// A projective cover datum: `p0 ↠ module` with `p0` a direct sum of
/// idempotent summands A·e_a, and the syzygy (the kernel lattice) as a
/// module with its inclusion.
pub struct Cover {
    pub module: AModule,
    pub p0: AModule,
    /// summand tags (generator basis index, idempotent index), in order
    pub summands: Vec<(usize, usize)>,
    /// module.rank × p0.rank
    pub d0: Matrix,
    pub syzygy: AModule,
    /// p0.rank × syzygy.rank inclusion
    pub incl: Matrix,
}

/// A two-step presentation P1 → P0 → M → 0; `d1` has image exactly the
/// kernel of `d0` (over ℤ: as lattices).
pub struct Presentation {
    pub cover: Cover,
    /// the cover of the syzygy, providing P1
    pub syzygy_cover: Cover,
    /// p0.rank × p1.rank
    pub d1: Matrix,
}

/// Greedy generating set: scan the basis vectors in order, keeping those
/// outside the submodule generated so far. Over ℤ membership is lattice
/// membership, so the chosen set generates the module exactly.
fn greedy_generators(m: &AModule) -> Vec<usize> {
    let ring = m.ring();
    let mut gens = Vec::new();
    let mut span = Matrix::zeros(ring, m.rank(), 0);
    for j in 0..m.rank() {
        let mut e = Matrix::zeros(ring, m.rank(), 1);
        e[(j, 0)] = ring.one();
        if span.cols() > 0 && linalg::span_contains(ring, &span, &e) {
            continue;
        }
        gens.push(j);
        span = crate::module::invariant_span(m, &span.hstack(&e));
    }
    gens
}

/// The idempotent summand A·e_a of the regular module, with its inclusion.
pub fn idempotent_summand(algebra: &Arc<Algebra>, a: usize) -> (AModule, Matrix) {
    let ring = algebra.ring();
    let e = &algebra.idempotents()[a];
    let right = algebra.right_mult_matrix(e);
    let basis = linalg::image_basis(ring, &right);
    let reg = AModule::regular(algebra);
    let sub = crate::module::submodule_from_basis(&reg, &basis)
        .expect("idempotent summands are invariant and saturated");
    (sub.module, sub.inclusion)
}

pub fn cover(m: &AModule) -> Cover {
    let ring = m.ring().clone();
    let algebra = m.algebra().clone();
    let gens = greedy_generators(m);
    let mut parts: Vec<AModule> = Vec::new();
    let mut maps: Vec<Matrix> = Vec::new();
    let mut summands = Vec::new();
    for &g in &gens {
        let mut v = vec![ring.zero(); m.rank()];
        v[g] = ring.one();
        for (a, e) in algebra.idempotents().iter().enumerate() {
            let ev = m.action_of(e).apply(&v, &ring);
            if ev.iter().all(Scalar::is_zero) {
                continue;
            }
            let (summand, incl) = idempotent_summand(&algebra, a);
            if summand.rank() == 0 {
                continue;
            }
            // the summand basis vector with ambient coordinates `c` maps to
            // c·(e_a v)
            let cols: Vec<Vec<Scalar>> = (0..summand.rank())
                .map(|j| m.action_of(&incl.column(j)).apply(&ev, &ring))
                .collect();
            maps.push(Matrix::from_columns(&ring, m.rank(), &cols));
            parts.push(summand);
            summands.push((g, a));
        }
    }
    let p0 = if parts.is_empty() {
        AModule::zero(algebra.clone())
    } else {
        AModule::direct_sum(&parts.iter().collect::<Vec<_>>())
    };
    let mut d0 = Matrix::zeros(&ring, m.rank(), 0);
    for t in &maps {
        d0 = d0.hstack(t);
    }
    debug_assert!(
        m.rank() == 0
            || linalg::span_contains(
                &ring,
                &linalg::image_basis(&ring, &d0),
                &Matrix::identity(&ring, m.rank())
            ),
        "cover must be surjective"
    );
    let incl = linalg::kernel_basis(&ring, &d0);
    let syzygy = induced_submodule(&p0, &incl);
    Cover { module: m.clone(), p0, summands, d0, syzygy, incl }
}

fn induced_submodule(ambient: &AModule, basis: &Matrix) -> AModule {
    let ring = ambient.ring();
    if basis.cols() == 0 {
        return AModule::zero(ambient.algebra().clone());
    }
    let action = (0..ambient.algebra().dim())
        .map(|i| {
            let moved = ambient.action(i).mul(basis, ring);
            linalg::solve(ring, basis, &moved).expect("kernel lattice is invariant")
        })
        .collect();
    AModule::new_unchecked(ambient.algebra().clone(), basis.cols(), action)
}

pub fn syzygy(m: &AModule) -> AModule {
    cover(m).syzygy
}

pub fn presentation(m: &AModule) -> Presentation {
    let c = cover(m);
    let ring = m.ring();
    let syzygy_cover = cover(&c.syzygy);
    let d1 = c.incl.mul(&syzygy_cover.d0, ring);
    Presentation { cover: c, syzygy_cover, d1 }
}

/// An Ext group in a fixed degree, with canonical representing cocycles.
///
/// Cocycles are intertwiners Ω^i M → N modulo restrictions from the cover
/// of Ω^(i-1) M; the canonical generators are fixed by the Smith transform
/// over ℤ and by column echelon pivots over a field, so builds downstream
/// are reproducible.
pub struct ExtGroup {
    pub source: AModule,
    pub target: AModule,
    pub degree: usize,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    /// canonical generators: torsion classes first (paired with `torsion`),
    /// then free classes
    pub cocycles: Vec<Matrix>,
    /// the cover of Ω^(degree-1) M the cocycles are defined against
    pub last_cover: Cover,
    hom_basis: Vec<Matrix>,
    reduce: ClassReducer,
}

enum ClassReducer {
    Field { echelon: Vec<Vec<Scalar>>, pivots: Vec<usize> },
    Integer { u: Matrix, divisors: Vec<BigInt> },
}

impl ExtGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Canonical coordinates of a cocycle's class; two cocycles represent
    /// the same extension class iff the coordinates agree.
    pub fn class_coordinates(&self, cocycle: &Matrix) -> Result<Vec<Scalar>, Error> {
        let ring = self.source.ring();
        let coords = crate::module::hom_coordinates(ring, &self.hom_basis, cocycle).ok_or_else(
            || Error::Precondition("cocycle is not an intertwiner from the stated syzygy".into()),
        )?;
        match &self.reduce {
            ClassReducer::Field { echelon, pivots } => {
                let mut v = coords;
                for (row, &p) in echelon.iter().zip(pivots) {
                    if v[p].is_zero() {
                        continue;
                    }
                    let f = v[p].clone();
                    for (x, r) in v.iter_mut().zip(row) {
                        let t = ring.mul(&f, r);
                        *x = ring.sub(x, &t);
                    }
                }
                Ok(v)
            }
            ClassReducer::Integer { u, divisors } => {
                let x = Matrix::from_columns(ring, coords.len(), &[coords]);
                let y = u.mul(&x, ring);
                let mut out = Vec::new();
                for i in 0..y.rows() {
                    let val = y[(i, 0)].as_int().clone();
                    if i < divisors.len() {
                        if num_traits::One::is_one(&divisors[i]) {
                            continue;
                        }
                        out.push(Scalar::Int(num_integer::Integer::mod_floor(&val, &divisors[i])));
                    } else {
                        out.push(Scalar::Int(val));
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Ext^degree(M, N) for degree ≥ 1, via iterated syzygies:
/// Ext^i(M, N) = Ext^1(Ω^(i-1) M, N) = Hom(Ω^i M, N) / im Hom(P_(i-1), N).
pub fn ext(m: &AModule, n: &AModule, degree: usize) -> Result<ExtGroup, Error> {
    if degree == 0 {
        return Err(Error::Precondition("degree 0 is hom_space".into()));
    }
    if !m.same_algebra(n) {
        return Err(Error::AlgebraMismatch);
    }
    let mut shifted = m.clone();
    for _ in 1..degree {
        shifted = syzygy(&shifted);
    }
    let ring = m.ring().clone();
    let c = cover(&shifted);
    let hom_omega = hom_space(&c.syzygy, n)?;
    let hom_p0 = hom_space(&c.p0, n)?;
    let h = hom_omega.len();
    // restriction Hom(P0, N) → Hom(Ω, N): g ↦ g ∘ incl, in hom coordinates
    let mut rel = Matrix::zeros(&ring, h, hom_p0.len());
    for (j, g) in hom_p0.iter().enumerate() {
        let restricted = g.mul(&c.incl, &ring);
        let coords = crate::module::hom_coordinates(&ring, &hom_omega, &restricted)
            .expect("restriction lies in the hom lattice");
        for (i, v) in coords.into_iter().enumerate() {
            rel[(i, j)] = v;
        }
    }
    match ring {
        GroundRing::Integers => {
            let s = linalg::smith_form(&rel);
            let r = s.rank();
            let mut torsion = Vec::new();
            let mut cocycles = Vec::new();
            for i in 0..r {
                if num_traits::One::is_one(&s.divisors[i]) {
                    continue;
                }
                torsion.push(s.divisors[i].clone());
                cocycles.push(combine(&ring, &hom_omega, &s.u_inv.column(i), n.rank(), c.syzygy.rank()));
            }
            for i in r..h {
                cocycles.push(combine(&ring, &hom_omega, &s.u_inv.column(i), n.rank(), c.syzygy.rank()));
            }
            Ok(ExtGroup {
                source: m.clone(),
                target: n.clone(),
                degree,
                free_rank: h - r,
                torsion,
                cocycles,
                last_cover: c,
                hom_basis: hom_omega,
                reduce: ClassReducer::Integer { u: s.u, divisors: s.divisors },
            })
        }
        _ => {
            let mut echelon: Vec<Vec<Scalar>> = Vec::new();
            let mut pivots: Vec<usize> = Vec::new();
            for j in 0..rel.cols() {
                let mut v = rel.column(j);
                for (row, &p) in echelon.iter().zip(&pivots) {
                    if v[p].is_zero() {
                        continue;
                    }
                    let f = v[p].clone();
                    for (x, r) in v.iter_mut().zip(row) {
                        let t = ring.mul(&f, r);
                        *x = ring.sub(x, &t);
                    }
                }
                if let Some(p) = v.iter().position(|x| !x.is_zero()) {
                    let inv = ring.inv(&v[p]).unwrap();
                    for x in v.iter_mut() {
                        *x = ring.mul(&inv, x);
                    }
                    echelon.push(v);
                    pivots.push(p);
                }
            }
            let free: Vec<usize> = (0..h).filter(|i| !pivots.contains(i)).collect();
            let cocycles = free.iter().map(|&i| hom_omega[i].clone()).collect();
            Ok(ExtGroup {
                source: m.clone(),
                target: n.clone(),
                degree,
                free_rank: free.len(),
                torsion: vec![],
                cocycles,
                last_cover: c,
                hom_basis: hom_omega,
                reduce: ClassReducer::Field { echelon, pivots },
            })
        }
    }
}

fn combine(ring: &GroundRing, basis: &[Matrix], coeffs: &[Scalar], rows: usize, cols: usize) -> Matrix {
    let mut acc = Matrix::zeros(ring, rows, cols);
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        acc = acc.add(&b.scale(c, ring), ring);
    }
    acc
}

/// A short exact sequence 0 → sub → mid → quot → 0 with explicit maps.
pub struct ShortExact {
    pub sub: AModule,
    pub mid: AModule,
    pub quot: AModule,
    pub incl: Morphism,
    pub proj: Morphism,
}

impl ShortExact {
    /// Validate exactness with R-split ends: injective inclusion with
    /// saturated image equal to the kernel of a surjective projection.
    pub fn check(&self) -> Result<(), Error> {
        let ring = self.mid.ring();
        if self.sub.rank() + self.quot.rank() != self.mid.rank() {
            return Err(Error::Inconsistency("ranks do not add up in short exact sequence".into()));
        }
        if linalg::rank(ring, &self.incl.matrix) != self.sub.rank() {
            return Err(Error::Inconsistency("inclusion is not injective".into()));
        }
        if !linalg::is_saturated(ring, &self.incl.matrix) {
            return Err(Error::Inconsistency("inclusion image is not saturated".into()));
        }
        let im = linalg::image_basis(ring, &self.proj.matrix);
        if self.quot.rank() > 0
            && !linalg::span_contains(ring, &im, &Matrix::identity(ring, self.quot.rank()))
        {
            return Err(Error::Inconsistency("projection is not surjective".into()));
        }
        if !self.proj.matrix.mul(&self.incl.matrix, ring).is_zero() {
            return Err(Error::Inconsistency(
                "composite of inclusion and projection is nonzero".into(),
            ));
        }
        let ker = linalg::kernel_basis(ring, &self.proj.matrix);
        if !linalg::span_eq(ring, &ker, &self.incl.matrix) {
            return Err(Error::Inconsistency("kernel of projection differs from the image".into()));
        }
        Ok(())
    }
}

/// The extension 0 → N → Y → M → 0 attached to a 1-cocycle Ω¹M → N: the
/// pushout of the cover sequence of M along the cocycle. Over ℤ the
/// relation lattice of the pushout is saturated, so Y is free.
pub fn extension_from_cocycle(e: &ExtGroup, cocycle: &Matrix) -> Result<ShortExact, Error> {
    if e.degree != 1 {
        return Err(Error::Precondition("extensions come from degree-1 classes".into()));
    }
    let ring = e.source.ring().clone();
    let n = &e.target;
    let c = &e.last_cover;
    if cocycle.rows() != n.rank() || cocycle.cols() != c.syzygy.rank() {
        return Err(Error::Precondition("cocycle is not from the stated Ext group".into()));
    }
    Morphism::new(c.syzygy.clone(), n.clone(), cocycle.clone())
        .map_err(|_| Error::Precondition("cocycle is not from the stated Ext group".into()))?;
    // ambient N ⊕ P0 modulo the graph (−c(w), ι(w)) of the cocycle
    let amb_rank = n.rank() + c.p0.rank();
    let rel = cocycle.neg(&ring).vstack(&c.incl);
    let (proj, lift) = linalg::complement_split(&ring, &rel)?;
    let ambient = AModule::direct_sum(&[n, &c.p0]);
    let action = (0..ambient.algebra().dim())
        .map(|i| proj.mul(ambient.action(i), &ring).mul(&lift, &ring))
        .collect();
    let mid = AModule::new_unchecked(ambient.algebra().clone(), amb_rank - rel.cols(), action);
    let incl_n =
        Matrix::identity(&ring, n.rank()).vstack(&Matrix::zeros(&ring, c.p0.rank(), n.rank()));
    let incl = Morphism::new(n.clone(), mid.clone(), proj.mul(&incl_n, &ring))?;
    let p0_rows: Vec<usize> = (n.rank()..amb_rank).collect();
    let proj_m = c.d0.mul(&lift.select_rows(&p0_rows), &ring);
    let proj_morphism = Morphism::new(mid.clone(), e.source.clone(), proj_m)?;
    let ses =
        ShortExact { sub: n.clone(), mid, quot: e.source.clone(), incl, proj: proj_morphism };
    ses.check()?;
    debug_assert_eq!(
        e.class_coordinates(cocycle)?,
        e.class_coordinates(&connecting_cocycle(e, &ses)?)?,
        "pushout must realize the prescribed class"
    );
    Ok(ses)
}

/// The connecting class of 0 → N → Y → M → 0 in Ext¹(M, N): lift the cover
/// of M through the surjection, restrict to the syzygy, pull back along the
/// inclusion.
pub fn connecting_cocycle(e: &ExtGroup, ses: &ShortExact) -> Result<Matrix, Error> {
    let ring = e.source.ring().clone();
    let c = &e.last_cover;
    let y = &ses.mid;
    let d = y.algebra().dim();
    let (yr, pr) = (y.rank(), c.p0.rank());
    let unknowns = yr * pr;
    let rows_total = d * yr * pr + ses.quot.rank() * pr;
    let mut system = Matrix::zeros(&ring, rows_total, unknowns);
    let mut rhs = Matrix::zeros(&ring, rows_total, 1);
    // intertwining rows: h·ρ_P0(b) − ρ_Y(b)·h = 0  (h is yr × pr)
    for i in 0..d {
        let rho_p = c.p0.action(i);
        let rho_y = y.action(i);
        for r in 0..yr {
            for col in 0..pr {
                let row = i * yr * pr + col * yr + r;
                for q in 0..pr {
                    if rho_p[(q, col)].is_zero() {
                        continue;
                    }
                    let idx = q * yr + r;
                    let cur = system[(row, idx)].clone();
                    system[(row, idx)] = ring.add(&cur, &rho_p[(q, col)]);
                }
                for p in 0..yr {
                    if rho_y[(r, p)].is_zero() {
                        continue;
                    }
                    let idx = col * yr + p;
                    let cur = system[(row, idx)].clone();
                    system[(row, idx)] = ring.sub(&cur, &rho_y[(r, p)]);
                }
            }
        }
    }
    // lifting rows: proj·h = d0
    let base = d * yr * pr;
    for r in 0..ses.quot.rank() {
        for col in 0..pr {
            let row = base + r * pr + col;
            for p in 0..yr {
                if ses.proj.matrix[(r, p)].is_zero() {
                    continue;
                }
                let idx = col * yr + p;
                let cur = system[(row, idx)].clone();
                system[(row, idx)] = ring.add(&cur, &ses.proj.matrix[(r, p)]);
            }
            rhs[(row, 0)] = c.d0[(r, col)].clone();
        }
    }
    let sol = linalg::solve(&ring, &system, &rhs)
        .ok_or_else(|| Error::Inconsistency("projective lifting has no solution".into()))?;
    let h = Matrix::from_vec_columns(yr, pr, &sol.column(0));
    let through = h.mul(&c.incl, &ring);
    let back = linalg::solve(&ring, &ses.incl.matrix, &through)
        .ok_or_else(|| Error::Inconsistency("restricted lift misses the submodule".into()))?;
    Ok(back)
}

/// Outcome of a universal (co)extension step.
pub struct UniversalExtension {
    pub sequence: ShortExact,
    pub copies: usize,
}

/// Universal extension 0 → X → Y → D^k → 0 killing Ext¹(D, X): one copy of
/// D per canonical generator of the Ext group (over ℤ: free rank plus one
/// per torsion divisor). The postcondition Ext¹(D, Y) = 0 is verified.
pub fn universal_extension(x: &AModule, d: &AModule) -> Result<UniversalExtension, Error> {
    let e = ext(d, x, 1)?;
    let gens: Vec<Matrix> = e.cocycles.clone();
    universal_extension_with(x, d, &gens)
}

/// Same construction from a caller-chosen generating set of cocycles; used
/// to exercise alternative generator orderings.
pub fn universal_extension_with(
    x: &AModule,
    d: &AModule,
    gens: &[Matrix],
) -> Result<UniversalExtension, Error> {
    let ring = x.ring().clone();
    let k = gens.len();
    if k == 0 {
        let seq = ShortExact {
            sub: x.clone(),
            mid: x.clone(),
            quot: AModule::zero(x.algebra().clone()),
            incl: Morphism::identity(x),
            proj: Morphism::new(
                x.clone(),
                AModule::zero(x.algebra().clone()),
                Matrix::zeros(&ring, 0, x.rank()),
            )?,
        };
        return Ok(UniversalExtension { sequence: seq, copies: 0 });
    }
    let ek = ext(&d.tensor_free(k), x, 1)?;
    // the canonical cover of D^k is the k-fold block of the cover of D, so
    // the block-row cocycle lines up with its syzygy
    let mut block = Matrix::zeros(&ring, x.rank(), 0);
    for g in gens {
        block = block.hstack(g);
    }
    if block.cols() != ek.last_cover.syzygy.rank() {
        return Err(Error::Inconsistency("direct-sum cover does not split blockwise".into()));
    }
    let seq = extension_from_cocycle(&ek, &block)?;
    let after = ext(d, &seq.mid, 1)?;
    if !after.is_zero() {
        return Err(Error::Inconsistency("universal extension failed to kill the Ext group".into()));
    }
    Ok(UniversalExtension { sequence: seq, copies: k })
}

/// Universal coextension 0 → D^k → Y → X → 0 killing Ext¹(X, D); the dual
/// construction, used to build projective covers with standard filtrations.
pub fn universal_coextension(x: &AModule, d: &AModule) -> Result<UniversalExtension, Error> {
    let ring = x.ring().clone();
    let e = ext(x, d, 1)?;
    let k = e.generator_count();
    if k == 0 {
        let seq = ShortExact {
            sub: AModule::zero(x.algebra().clone()),
            mid: x.clone(),
            quot: x.clone(),
            incl: Morphism::new(
                AModule::zero(x.algebra().clone()),
                x.clone(),
                Matrix::zeros(&ring, x.rank(), 0),
            )?,
            proj: Morphism::identity(x),
        };
        return Ok(UniversalExtension { sequence: seq, copies: 0 });
    }
    let dk = d.tensor_free(k);
    let ek = ext(x, &dk, 1)?;
    // stack the canonical generators vertically: Ω¹X → D^k; both groups are
    // computed against the same canonical cover of X
    let mut block = Matrix::zeros(&ring, 0, e.last_cover.syzygy.rank());
    for g in &e.cocycles {
        block = block.vstack(g);
    }
    if ek.last_cover.syzygy.rank() != e.last_cover.syzygy.rank() {
        return Err(Error::Inconsistency("canonical covers disagree".into()));
    }
    let seq = extension_from_cocycle(&ek, &block)?;
    let after = ext(&seq.mid, d, 1)?;
    if !after.is_zero() {
        return Err(Error::Inconsistency(
            "universal coextension failed to kill the Ext group".into(),
        ));
    }
    Ok(UniversalExtension { sequence: seq, copies: k })
}

/// Free rank and torsion of X ⊗_A M and of Tor₁^A(X, M), for X a module
/// over the opposite algebra. Computed from a depth-two cover resolution
/// of M, using X ⊗_A A·e ≅ X·e on each cover summand.
pub struct TensorData {
    pub tensor_free_rank: usize,
    pub tensor_torsion: Vec<BigInt>,
    pub tor1_free_rank: usize,
    pub tor1_torsion: Vec<BigInt>,
}

pub fn tensor_and_tor1(x: &AModule, m: &AModule) -> Result<TensorData, Error> {
    if x.algebra().ring() != m.algebra().ring() {
        return Err(Error::RingMismatch);
    }
    let ring = m.ring().clone();
    let pres = presentation(m);
    let c2 = cover(&pres.syzygy_cover.syzygy);
    let d2 = pres.syzygy_cover.incl.mul(&c2.d0, &ring);

    let t1 = tensor_map(x, m, &pres.syzygy_cover, &pres.cover, &pres.d1)?;
    let t2 = tensor_map(x, m, &c2, &pres.syzygy_cover, &d2)?;

    let rank0 = t1.rows();
    let (tensor_free, tensor_torsion) = cokernel_shape(&ring, rank0, &t1);
    let ker = linalg::kernel_basis(&ring, &t1);
    let coords = linalg::solve(&ring, &ker, &t2)
        .ok_or_else(|| Error::Inconsistency("tensor complex differentials do not compose to zero".into()))?;
    let (tor1_free, tor1_torsion) = cokernel_shape(&ring, ker.cols(), &coords);
    Ok(TensorData {
        tensor_free_rank: tensor_free,
        tensor_torsion,
        tor1_free_rank: tor1_free,
        tor1_torsion,
    })
}

/// The induced map X ⊗ P_src → X ⊗ P_dst of a cover map, in the bases of
/// the idempotent pieces X·e_a.
fn tensor_map(
    x: &AModule,
    m: &AModule,
    src: &Cover,
    dst: &Cover,
    map: &Matrix,
) -> Result<Matrix, Error> {
    let ring = m.ring().clone();
    let algebra = m.algebra();
    // per-summand data: X·e_a basis, summand inclusion, cover offset
    let summand_data = |cv: &Cover| -> (Vec<Matrix>, Vec<Matrix>, Vec<usize>) {
        let mut bases = Vec::new();
        let mut incls = Vec::new();
        let mut offsets = vec![0usize];
        for &(_, a) in &cv.summands {
            let proj = x.action_of(&algebra.idempotents()[a]);
            bases.push(linalg::image_basis(&ring, &proj));
            let (s, incl) = idempotent_summand(algebra, a);
            incls.push(incl);
            offsets.push(offsets.last().unwrap() + s.rank());
        }
        (bases, incls, offsets)
    };
    let (src_bases, src_incls, src_off) = summand_data(src);
    let (dst_bases, dst_incls, dst_off) = summand_data(dst);
    let dst_total: usize = dst_bases.iter().map(Matrix::cols).sum();
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    for (si, &(_, sa)) in src.summands.iter().enumerate() {
        // image of the summand generator e_sa under the cover map
        let mut amb = Matrix::zeros(&ring, algebra.dim(), 1);
        for (kk, val) in algebra.idempotents()[sa].iter().enumerate() {
            amb[(kk, 0)] = val.clone();
        }
        let e_coords = linalg::solve(&ring, &src_incls[si], &amb)
            .expect("idempotent generates its summand");
        let block_cols: Vec<usize> = (src_off[si]..src_off[si + 1]).collect();
        let img = map.select_columns(&block_cols).mul(&e_coords, &ring);
        for v in 0..src_bases[si].cols() {
            let xv = src_bases[si].column(v);
            let mut col = vec![ring.zero(); dst_total];
            let mut out_off = 0;
            for (di, _) in dst.summands.iter().enumerate() {
                let rows: Vec<usize> = (dst_off[di]..dst_off[di + 1]).collect();
                let part = img.select_rows(&rows);
                // the component is an element of A·e_db; act on x_v from the
                // right (left action of the opposite algebra)
                let amb_elt = dst_incls[di].mul(&part, &ring);
                let acted = x.action_of(&amb_elt.column(0)).apply(&xv, &ring);
                let acted_m = Matrix::from_columns(&ring, acted.len(), &[acted]);
                let coords = linalg::solve(&ring, &dst_bases[di], &acted_m).ok_or_else(|| {
                    Error::Inconsistency("tensor component misses its idempotent piece".into())
                })?;
                for r in 0..coords.rows() {
                    col[out_off + r] = coords[(r, 0)].clone();
                }
                out_off += dst_bases[di].cols();
            }
            cols.push(col);
        }
    }
    Ok(Matrix::from_columns(&ring, dst_total, &cols))
}

fn cokernel_shape(ring: &GroundRing, ambient: usize, map: &Matrix) -> (usize, Vec<BigInt>) {
    match ring {
        GroundRing::Integers => {
            let s = linalg::smith_form(map);
            (ambient - s.rank(), s.nonunit_divisors())
        }
        _ => (ambient - linalg::rank(ring, map), vec![]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::GroundRing;
    use crate::module::find_isomorphism;
    use crate::samples;

    #[test]
    fn syzygy_of_projective_vanishes() {
        for ring in [GroundRing::PrimeField(2), GroundRing::Integers] {
            let input = samples::e1(ring);
            // Δ(2) = A·e2 is projective, so its syzygy is zero
            assert_eq!(syzygy(&input.standards[0]).rank(), 0);
            assert_eq!(syzygy(&input.standards[1]).rank(), 0);
            // rank bookkeeping for a non-projective module
            let c = cover(&input.extras["S1"]);
            assert_eq!(c.p0.rank() - c.module.rank(), c.syzygy.rank());
        }
    }

    #[test]
    fn ext_vanishes_on_projectives() {
        let input = samples::e1(GroundRing::Integers);
        let reg = crate::module::AModule::regular(&input.algebra);
        for n in [&input.standards[0], &input.standards[1], &input.extras["S1"]] {
            assert!(ext(&reg, n, 1).unwrap().is_zero());
            assert!(ext(&reg, n, 2).unwrap().is_zero());
        }
    }

    #[test]
    fn ext_between_simples_of_e1() {
        // brute-force oracle over F_2: enumerate all rank-2 module
        // structures Y with submodule S2 and quotient S1; count nonsplit
        let ring = GroundRing::PrimeField(2);
        let input = samples::e1(ring.clone());
        let s1 = input.extras["S1"].clone();
        let s2 = input.standards[0].clone(); // Δ(2) = S2
        let e12 = ext(&s1, &s2, 1).unwrap();
        let e21 = ext(&s2, &s1, 1).unwrap();
        assert_eq!((e12.free_rank, e21.free_rank), (1, 0));

        let mut nonsplit = 0u32;
        let mut split = 0u32;
        // lower-triangular action matrices: fix sub coordinates (0,1)^t
        // (second basis vector spans the S2 part)
        for bits in 0..8u32 {
            let val = |k: u32| ring.from_i64(((bits >> k) & 1) as i64);
            // ρ(E11) = [[1,0],[x,0]], ρ(E22) = [[0,0],[y,1]], ρ(E21) = [[0,0],[z,0]]
            let a0 = Matrix::from_fn(2, 2, |i, j| match (i, j) {
                (0, 0) => ring.one(),
                (1, 0) => val(0),
                _ => ring.zero(),
            });
            let a1 = Matrix::from_fn(2, 2, |i, j| match (i, j) {
                (1, 1) => ring.one(),
                (1, 0) => val(1),
                _ => ring.zero(),
            });
            let a2 = Matrix::from_fn(2, 2, |i, j| match (i, j) {
                (1, 0) => val(2),
                _ => ring.zero(),
            });
            let Ok(y) = crate::module::AModule::new(input.algebra.clone(), 2, vec![a0, a1, a2])
            else {
                continue;
            };
            // does the sequence split? iff Y ≅ S1 ⊕ S2
            let sum = crate::module::AModule::direct_sum(&[&s1, &s2]);
            if find_isomorphism(&y, &sum).unwrap().is_some() {
                split += 1;
            } else {
                nonsplit += 1;
            }
        }
        // over F_2 there are exactly two classes: split and the projective
        assert!(split >= 1);
        assert!(nonsplit >= 1);
        // the nonsplit extension is P(1): check via the Ext machinery
        let ses = extension_from_cocycle(&e12, &e12.cocycles[0]).unwrap();
        let reg = crate::module::AModule::regular(&input.algebra);
        let mut gen = Matrix::zeros(&ring, 3, 1);
        gen[(0, 0)] = ring.one();
        let p1 = crate::module::submodule_generated(&reg, &gen).module;
        assert!(find_isomorphism(&ses.mid, &p1).unwrap().is_some());
    }

    #[test]
    fn extension_roundtrip_class() {
        let ring = GroundRing::PrimeField(3);
        let input = samples::e2(ring.clone());
        let e = ext(&input.standards[0], &input.standards[1], 1).unwrap();
        assert_eq!(e.generator_count(), 1);
        let ses = extension_from_cocycle(&e, &e.cocycles[0]).unwrap();
        let back = connecting_cocycle(&e, &ses).unwrap();
        assert_eq!(
            e.class_coordinates(&e.cocycles[0]).unwrap(),
            e.class_coordinates(&back).unwrap()
        );
        // the zero cocycle gives the split extension
        let zero = Matrix::zeros(&ring, e.cocycles[0].rows(), e.cocycles[0].cols());
        let ses0 = extension_from_cocycle(&e, &zero).unwrap();
        let sum = crate::module::AModule::direct_sum(&[&input.standards[1], &input.standards[0]]);
        assert!(find_isomorphism(&ses0.mid, &sum).unwrap().is_some());
        assert_eq!(ses0.mid.rank(), input.standards[0].rank() + input.standards[1].rank());
    }

    #[test]
    fn dimension_shift_matches() {
        let input = samples::e2(GroundRing::PrimeField(2));
        let s1 = &input.standards[0];
        let s3 = &input.standards[2];
        let e2 = ext(s1, s3, 2).unwrap();
        let shifted = ext(&syzygy(s1), s3, 1).unwrap();
        assert_eq!(e2.free_rank, shifted.free_rank);
        assert_eq!(e2.torsion, shifted.torsion);
    }

    #[test]
    fn torsion_ext_on_group_algebra() {
        let (_, trivial, sign) = samples::cyclic_group_z2();
        // Ext¹(sign, trivial) ≅ ℤ/2, Ext¹(trivial, trivial) = 0,
        // Ext²(trivial, trivial) ≅ ℤ/2
        let e = ext(&sign, &trivial, 1).unwrap();
        assert_eq!(e.free_rank, 0);
        assert_eq!(e.torsion, vec![BigInt::from(2)]);
        assert!(ext(&trivial, &trivial, 1).unwrap().is_zero());
        let e2 = ext(&trivial, &trivial, 2).unwrap();
        assert_eq!(e2.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn universal_extension_kills_torsion() {
        let (_, trivial, sign) = samples::cyclic_group_z2();
        let ue = universal_extension(&trivial, &sign).unwrap();
        assert_eq!(ue.copies, 1);
        assert_eq!(ue.sequence.mid.rank(), 2);
        assert!(ext(&sign, &ue.sequence.mid, 1).unwrap().is_zero());
    }

    #[test]
    fn universal_extension_trivial_case() {
        let input = samples::e1(GroundRing::Rationals);
        // standards of E1 are projective: nothing to extend
        let ue = universal_extension(&input.standards[1], &input.standards[0]).unwrap();
        assert_eq!(ue.copies, 0);
        assert_eq!(ue.sequence.mid.rank(), input.standards[1].rank());
    }

    #[test]
    fn universal_extension_on_e2() {
        // Ext¹(Δ(1), Δ(2)) over E2 has one generator; the middle is P(1)
        let input = samples::e2(GroundRing::PrimeField(2));
        let ue = universal_extension(&input.standards[1], &input.standards[0]).unwrap();
        assert_eq!(ue.copies, 1);
        assert_eq!(ue.sequence.mid.rank(), 2);
        assert!(find_isomorphism(&ue.sequence.mid, &input.extras["P1"]).unwrap().is_some());
    }

    #[test]
    fn tensor_and_tor_examples() {
        let input = samples::e1(GroundRing::Integers);
        let reg = crate::module::AModule::regular(&input.algebra);
        let op = input.algebra.opposite();
        let da = reg.dual(&op);
        // DA ⊗ M is exact: Tor₁ = 0, computed not assumed
        let t = tensor_and_tor1(&da, &input.standards[1]).unwrap();
        assert_eq!(t.tor1_free_rank, 0);
        assert!(t.tor1_torsion.is_empty());
        // tensor with the zero module vanishes
        let zero = crate::module::AModule::zero(op.clone());
        let t = tensor_and_tor1(&zero, &reg).unwrap();
        assert_eq!(t.tensor_free_rank, 0);
        assert!(t.tensor_torsion.is_empty());
    }

    #[test]
    fn costandard_tensor_standard_has_rank_one() {
        // D∇(λ) ⊗ Δ(λ) ≅ R for E1 over ℤ
        let input = samples::e1(GroundRing::Integers);
        let mut qh = crate::qh::verify_split_qh(&input).unwrap().accepted().unwrap();
        qh.compute_costandards().unwrap();
        for i in 0..qh.len() {
            let dn = qh.costandard(i).unwrap().dual(&qh.op_algebra);
            let t = tensor_and_tor1(&dn, &qh.standards[i]).unwrap();
            assert_eq!(t.tensor_free_rank, 1);
            assert!(t.tensor_torsion.is_empty());
            assert_eq!(t.tor1_free_rank, 0);
        }
    }
}
