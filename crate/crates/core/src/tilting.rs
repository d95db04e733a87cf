//! Characteristic tilting modules: for each label a module T(λ)
//! interpolating Δ(λ) ↪ T(λ) ↠ ∇(λ), built by universal extensions through
//! the labels below λ in decreasing enumeration order.
//!
//! The Ext-group generators used at each step are the canonical ones, so
//! two runs produce identical modules; an alternate generator path exists
//! to exercise that different builds land in the same additive closure.

use crate::error::Error;
use crate::homology::{self, ext};
use crate::linalg::{self, Matrix};
use crate::module::{hom_space, AModule, Morphism};
use crate::qh::{
    extract_nabla_filtration, has_delta_filtration, has_nabla_filtration, verify_certificate,
    FiltrationCertificate, Layer, LayerKind, QhStructure,
};

/// How to pick the generating set of each Ext group during a build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorStyle {
    /// the canonical generators of the Ext machinery
    Canonical,
    /// the canonical set reversed and mixed by a unimodular triangular
    /// transformation; generates the same group
    Alternate,
}

pub struct PartialTiltingData {
    pub label_index: usize,
    pub module: AModule,
    /// standard filtration certificate of T(λ): Δ(λ) at the bottom
    pub delta_cert: FiltrationCertificate,
    /// costandard filtration certificate of T(λ): ∇(λ) on top
    pub nabla_cert: FiltrationCertificate,
    /// Δ(λ) ↪ T(λ)
    pub embed: Morphism,
    /// cokernel of the embedding with its certificate on labels < λ
    pub cokernel: AModule,
    pub cokernel_cert: FiltrationCertificate,
    /// T(λ) ↠ ∇(λ)
    pub onto: Morphism,
    /// kernel of the surjection with its certificate on labels < λ
    pub kernel: AModule,
    pub kernel_cert: FiltrationCertificate,
}

pub struct CharacteristicTilting {
    pub parts: Vec<PartialTiltingData>,
    pub module: AModule,
    /// rank offsets of the summands inside the direct sum
    pub offsets: Vec<usize>,
}

impl CharacteristicTilting {
    pub fn summand_inclusion(&self, k: usize) -> Matrix {
        let ring = self.module.ring();
        let ranks: Vec<usize> = self.parts.iter().map(|p| p.module.rank()).collect();
        AModule::summand_inclusion(ring, &ranks, k)
    }

    pub fn summand_projection(&self, k: usize) -> Matrix {
        self.summand_inclusion(k).transpose()
    }
}

fn mix_generators(qh: &QhStructure, gens: &[Matrix]) -> Vec<Matrix> {
    let ring = qh.ring();
    let mut out: Vec<Matrix> = gens.iter().rev().cloned().collect();
    for i in 1..out.len() {
        let prev = out[i - 1].clone();
        out[i] = out[i].add(&prev, ring);
    }
    out
}

/// Build T(λ): starting from Δ(λ), kill Ext¹(Δ(μ), −) for the labels μ
/// below λ in decreasing enumeration order with universal extensions, then
/// recover the surjection onto ∇(λ) from the top layer of the costandard
/// filtration.
pub fn build_partial_tilting(
    qh: &QhStructure,
    i: usize,
    style: GeneratorStyle,
) -> Result<PartialTiltingData, Error> {
    let ring = qh.ring().clone();
    let delta = qh.standard(i).clone();
    let mut module = delta.clone();
    let mut chain: Vec<Matrix> = vec![Matrix::identity(&ring, module.rank())];
    let mut layers: Vec<Layer> = vec![Layer {
        label_index: i,
        multiplicity: 1,
        witness: Matrix::identity(&ring, module.rank()),
    }];
    let cap = 10 * qh.len().max(1);
    let mut passes = 0;
    loop {
        passes += 1;
        if passes > cap {
            return Err(Error::Inconsistency(
                "tilting construction did not terminate within the iteration cap".into(),
            ));
        }
        let mut extended = false;
        for j in (0..i).rev() {
            let e = ext(qh.standard(j), &module, 1)?;
            if e.is_zero() {
                continue;
            }
            let gens = match style {
                GeneratorStyle::Canonical => e.cocycles.clone(),
                GeneratorStyle::Alternate => mix_generators(qh, &e.cocycles),
            };
            let step = homology::universal_extension_with(&module, qh.standard(j), &gens)?;
            let seq = step.sequence;
            let mut new_chain: Vec<Matrix> = chain
                .iter()
                .map(|member| linalg::image_basis(&ring, &seq.incl.matrix.mul(member, &ring)))
                .collect();
            let mut new_layers: Vec<Layer> = layers
                .iter()
                .map(|l| Layer {
                    label_index: l.label_index,
                    multiplicity: l.multiplicity,
                    witness: seq.incl.matrix.mul(&l.witness, &ring),
                })
                .collect();
            // top layer witness: a linear section of the projection onto
            // Δ(μ)^k (equivariance modulo the lower member is automatic)
            let w = linalg::solve(&ring, &seq.proj.matrix, &Matrix::identity(&ring, seq.quot.rank()))
                .ok_or_else(|| Error::Inconsistency("projection has no linear section".into()))?;
            new_chain.push(Matrix::identity(&ring, seq.mid.rank()));
            new_layers.push(Layer {
                label_index: j,
                multiplicity: step.copies,
                witness: w,
            });
            module = seq.mid;
            chain = new_chain;
            layers = new_layers;
            extended = true;
        }
        // verify the vanishing across all labels before stopping
        let mut clean = true;
        for j in 0..qh.len() {
            if !ext(qh.standard(j), &module, 1)?.is_zero() {
                clean = false;
                break;
            }
        }
        if clean {
            break;
        }
        if !extended {
            return Err(Error::Inconsistency(
                "tilting construction stalled with surviving extensions".into(),
            ));
        }
    }
    let delta_cert = FiltrationCertificate { kind: LayerKind::Standard, chain, layers };
    verify_certificate(&module, &qh.standards, &delta_cert)?;

    // the embedding of Δ(λ) is the composite inclusion: the bottom witness
    let embed = Morphism::new(delta.clone(), module.clone(), delta_cert.layers[0].witness.clone())?;
    // cokernel with the projected certificate (labels < λ)
    let q = crate::module::quotient_module(&module, &delta_cert.chain[0])?;
    let mut ck_chain = Vec::new();
    let mut ck_layers = Vec::new();
    for (member, layer) in delta_cert.chain.iter().zip(&delta_cert.layers).skip(1) {
        ck_chain.push(linalg::image_basis(&ring, &q.projection.mul(member, &ring)));
        ck_layers.push(Layer {
            label_index: layer.label_index,
            multiplicity: layer.multiplicity,
            witness: q.projection.mul(&layer.witness, &ring),
        });
        if layer.label_index >= i {
            return Err(Error::Inconsistency("cokernel certificate leaks a high label".into()));
        }
    }
    let cokernel_cert =
        FiltrationCertificate { kind: LayerKind::Standard, chain: ck_chain, layers: ck_layers };
    verify_certificate(&q.module, &qh.standards, &cokernel_cert)?;

    // costandard side: extract and read the surjection off the top layer
    let nabla_cert = extract_nabla_filtration(&module, qh)?;
    let s = nabla_cert.layers.len();
    let top = &nabla_cert.layers[s - 1];
    if top.label_index != i || top.multiplicity != 1 {
        return Err(Error::Inconsistency(
            "costandard filtration of the tilting summand does not end with its own label".into(),
        ));
    }
    let below = if s >= 2 {
        nabla_cert.chain[s - 2].clone()
    } else {
        Matrix::zeros(&ring, module.rank(), 0)
    };
    let nabla = qh.costandard(i)?.clone();
    let (onto, kernel, kernel_cert) = {
        let qq = crate::module::quotient_module(&module, &below)?;
        // the witness descends to an isomorphism onto the quotient
        let wq = qq.projection.mul(&top.witness, &ring);
        let winv = linalg::inverse(&ring, &wq)
            .ok_or_else(|| Error::Inconsistency("top costandard witness is not invertible".into()))?;
        let onto = Morphism::new(module.clone(), nabla.clone(), winv.mul(&qq.projection, &ring))?;
        let sub = crate::module::submodule_from_basis(&module, &below)?;
        let mut k_chain = Vec::new();
        let mut k_layers = Vec::new();
        for (member, layer) in nabla_cert.chain.iter().zip(&nabla_cert.layers).take(s - 1) {
            let coords = linalg::solve(&ring, &below, member)
                .ok_or_else(|| Error::Inconsistency("kernel chain is not inside the kernel".into()))?;
            k_chain.push(coords);
            let wit = linalg::solve(&ring, &below, &layer.witness)
                .ok_or_else(|| Error::Inconsistency("kernel witness is not inside the kernel".into()))?;
            k_layers.push(Layer {
                label_index: layer.label_index,
                multiplicity: layer.multiplicity,
                witness: wit,
            });
            if layer.label_index >= i {
                return Err(Error::Inconsistency("kernel certificate leaks a high label".into()));
            }
        }
        let kernel_cert =
            FiltrationCertificate { kind: LayerKind::Costandard, chain: k_chain, layers: k_layers };
        verify_certificate(&sub.module, qh.costandards()?, &kernel_cert)?;
        (onto, sub.module, kernel_cert)
    };

    Ok(PartialTiltingData {
        label_index: i,
        module,
        delta_cert,
        nabla_cert,
        embed,
        cokernel: q.module,
        cokernel_cert,
        onto,
        kernel,
        kernel_cert,
    })
}

/// Build the characteristic tilting module T = ⊕ T(λ).
pub fn build_characteristic_tilting(
    qh: &QhStructure,
    style: GeneratorStyle,
) -> Result<CharacteristicTilting, Error> {
    let mut parts = Vec::with_capacity(qh.len());
    for i in 0..qh.len() {
        parts.push(build_partial_tilting(qh, i, style)?);
    }
    let module = AModule::direct_sum(&parts.iter().map(|p| &p.module).collect::<Vec<_>>());
    let mut offsets = vec![0];
    for p in &parts {
        offsets.push(offsets.last().unwrap() + p.module.rank());
    }
    offsets.pop();
    Ok(CharacteristicTilting { parts, module, offsets })
}

/// Replay all certificates of a partial tilting datum and check the two
/// exact sequences.
pub fn verify_partial_tilting(
    data: &PartialTiltingData,
    qh: &QhStructure,
) -> Result<bool, Error> {
    let ring = qh.ring();
    verify_certificate(&data.module, &qh.standards, &data.delta_cert)?;
    verify_certificate(&data.module, qh.costandards()?, &data.nabla_cert)?;
    verify_certificate(&data.cokernel, &qh.standards, &data.cokernel_cert)?;
    verify_certificate(&data.kernel, qh.costandards()?, &data.kernel_cert)?;
    // embedding exactness
    if linalg::rank(ring, &data.embed.matrix) != data.embed.source.rank()
        || !linalg::is_saturated(ring, &data.embed.matrix)
    {
        return Ok(false);
    }
    if data.cokernel.rank() + data.embed.source.rank() != data.module.rank() {
        return Ok(false);
    }
    // surjection exactness
    let im = linalg::image_basis(ring, &data.onto.matrix);
    if data.onto.target.rank() > 0
        && !linalg::span_contains(ring, &im, &Matrix::identity(ring, data.onto.target.rank()))
    {
        return Ok(false);
    }
    let ker = linalg::kernel_basis(ring, &data.onto.matrix);
    if ker.cols() != data.kernel.rank() {
        return Ok(false);
    }
    // no self-extensions in degrees one and two against every label
    for j in 0..qh.len() {
        if !ext(qh.standard(j), &data.module, 1)?.is_zero() {
            return Ok(false);
        }
        if !ext(&data.module, qh.costandard(j)?, 1)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Full verification of a characteristic tilting module: certificates of
/// every summand plus Ext¹(T, T) = Ext²(T, T) = 0.
pub fn verify_tilting(t: &CharacteristicTilting, qh: &QhStructure) -> Result<bool, Error> {
    for p in &t.parts {
        if !verify_partial_tilting(p, qh)? {
            return Ok(false);
        }
    }
    for degree in 1..=2 {
        if !ext(&t.module, &t.module, degree)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Is the induced map Hom(T(λ), X) → Hom(Δ(λ), X) surjective for each
/// probe X ∈ F(∇̃), and dually Hom(Y, T(λ)) → Hom(Y, ∇(λ)) surjective for
/// each probe Y ∈ F(Δ̃)?
pub fn approximation_check(
    data: &PartialTiltingData,
    qh: &QhStructure,
    nabla_probes: &[AModule],
    delta_probes: &[AModule],
) -> Result<bool, Error> {
    let ring = qh.ring();
    for x in nabla_probes {
        if !has_nabla_filtration(x, qh)? {
            return Err(Error::Precondition("probe is not costandard-filtered".into()));
        }
        let from = hom_space(&data.module, x)?;
        let to = hom_space(&data.embed.source, x)?;
        if to.is_empty() {
            continue;
        }
        let mut coords = Matrix::zeros(ring, to.len(), from.len());
        for (j, f) in from.iter().enumerate() {
            let restricted = f.mul(&data.embed.matrix, ring);
            let c = crate::module::hom_coordinates(ring, &to, &restricted)
                .ok_or_else(|| Error::Inconsistency("restriction left the hom lattice".into()))?;
            for (i, v) in c.into_iter().enumerate() {
                coords[(i, j)] = v;
            }
        }
        let im = linalg::image_basis(ring, &coords);
        if !linalg::span_contains(ring, &im, &Matrix::identity(ring, to.len())) {
            return Ok(false);
        }
    }
    for y in delta_probes {
        if !has_delta_filtration(y, qh)? {
            return Err(Error::Precondition("probe is not standard-filtered".into()));
        }
        let from = hom_space(y, &data.module)?;
        let to = hom_space(y, &data.onto.target)?;
        if to.is_empty() {
            continue;
        }
        let mut coords = Matrix::zeros(ring, to.len(), from.len());
        for (j, f) in from.iter().enumerate() {
            let pushed = data.onto.matrix.mul(f, ring);
            let c = crate::module::hom_coordinates(ring, &to, &pushed)
                .ok_or_else(|| Error::Inconsistency("composition left the hom lattice".into()))?;
            for (i, v) in c.into_iter().enumerate() {
                coords[(i, j)] = v;
            }
        }
        let im = linalg::image_basis(ring, &coords);
        if !linalg::span_contains(ring, &im, &Matrix::identity(ring, to.len())) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in add T, decided by the double filtration criterion: X lies
/// in the additive closure of any characteristic tilting module iff it has
/// both a standard and a costandard filtration.
pub fn add_t_membership(x: &AModule, qh: &QhStructure) -> Result<bool, Error> {
    Ok(has_delta_filtration(x, qh)? && has_nabla_filtration(x, qh)?)
}
