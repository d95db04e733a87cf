//! Shared helpers for the integration suites: brute-force filtration
//! search over small prime fields, module pools, and pipeline shortcuts.
//! Each suite uses its own subset of these.
#![allow(dead_code)]

use qhkit::linalg::{self, GroundRing, Matrix};
use qhkit::module::{find_isomorphism, AModule};
use qhkit::qh::{verify_split_qh, QhInput, QhStructure};

pub fn prepared(input: &QhInput) -> QhStructure {
    let mut qh = verify_split_qh(input).expect("engine error").accepted().expect("must accept");
    qh.compute_costandards().expect("costandards");
    qh
}

/// All subspaces of 𝔽_p^n of every dimension, as column-basis matrices,
/// enumerated through reduced echelon forms. Sizes here stay tiny (n ≤ 6,
/// p ∈ {2, 3}).
pub fn all_subspaces(ring: &GroundRing, n: usize) -> Vec<Matrix> {
    let p = match ring {
        GroundRing::PrimeField(p) => *p,
        _ => panic!("subspace enumeration needs a prime field"),
    };
    fn next_combination(pivots: &mut [usize], n: usize) -> bool {
        let k = pivots.len();
        for i in (0..k).rev() {
            if pivots[i] + (k - i) < n {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
    let mut out = Vec::new();
    for k in 1..=n {
        let mut pivots: Vec<usize> = (0..k).collect();
        loop {
            // free positions: row i may have entries at columns j > pivots[i]
            // with j not a pivot
            let mut free = Vec::new();
            for (i, &pi) in pivots.iter().enumerate() {
                for j in pi + 1..n {
                    if !pivots.contains(&j) {
                        free.push((i, j));
                    }
                }
            }
            let total = (p as u64).pow(free.len() as u32);
            for code in 0..total {
                let mut rows = Matrix::zeros(ring, k, n);
                for (i, &pi) in pivots.iter().enumerate() {
                    rows[(i, pi)] = ring.one();
                }
                let mut c = code;
                for &(i, j) in &free {
                    let v = (c % p as u64) as i64;
                    c /= p as u64;
                    rows[(i, j)] = ring.from_i64(v);
                }
                out.push(rows.transpose());
            }
            if !next_combination(&mut pivots, n) {
                break;
            }
        }
    }
    out
}

fn invariant(m: &AModule, basis: &Matrix) -> bool {
    let ring = m.ring();
    (0..m.algebra().dim()).all(|i| {
        let moved = m.action(i).mul(basis, ring);
        linalg::span_contains(ring, basis, &moved)
    })
}

/// Brute-force membership in F(Δ̃) by exhaustive chain search: some
/// invariant subspace isomorphic to a standard module whose quotient again
/// has a filtration. Entirely independent of the Ext-criterion path.
pub fn brute_force_has_delta(m: &AModule, standards: &[AModule]) -> bool {
    if m.rank() == 0 {
        return true;
    }
    let ring = m.ring().clone();
    for basis in all_subspaces(&ring, m.rank()) {
        if !invariant(m, &basis) {
            continue;
        }
        let sub = match qhkit::module::submodule_from_basis(m, &basis) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let matches = standards.iter().any(|s| {
            s.rank() == sub.module.rank()
                && find_isomorphism(&sub.module, s).unwrap().is_some()
        });
        if !matches {
            continue;
        }
        let q = qhkit::module::quotient_module(m, &basis).expect("field quotients always split");
        if brute_force_has_delta(&q.module, standards) {
            return true;
        }
    }
    false
}

/// A deterministic pool of small modules attached to a structure:
/// standards, costandards, projective covers, the regular module and its
/// dual, simple-ish extras, and seeded extension middles. Every member has
/// rank at most `max_rank`.
pub fn module_pool(qh: &QhStructure, max_rank: usize) -> Vec<AModule> {
    let mut pool: Vec<AModule> = Vec::new();
    let mut push = |m: AModule| {
        if m.rank() > 0 && m.rank() <= max_rank {
            pool.push(m);
        }
    };
    for i in 0..qh.len() {
        push(qh.standard(i).clone());
        push(qh.costandard(i).unwrap().clone());
        push(qh.projectives[i].module.clone());
    }
    push(AModule::regular(&qh.algebra));
    push(AModule::regular(&qh.op_algebra).dual(&qh.algebra));
    for m in qh.extras.values() {
        push(m.clone());
    }
    // extension middles of standards against standards: the canonical
    // classes plus seeded random combinations of the generators
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x9001);
    for i in 0..qh.len() {
        for j in 0..qh.len() {
            let e = qhkit::homology::ext(qh.standard(i), qh.standard(j), 1).unwrap();
            if e.generator_count() == 0 {
                continue;
            }
            let ses = qhkit::homology::extension_from_cocycle(&e, &e.cocycles[0]).unwrap();
            push(ses.mid);
            let ring = qh.ring();
            let mut combo = qhkit::linalg::Matrix::zeros(
                ring,
                e.cocycles[0].rows(),
                e.cocycles[0].cols(),
            );
            for g in &e.cocycles {
                let c = ring.from_i64(rng.gen_range(0..=2));
                combo = combo.add(&g.scale(&c, ring), ring);
            }
            let ses = qhkit::homology::extension_from_cocycle(&e, &combo).unwrap();
            push(ses.mid);
        }
    }
    // a couple of direct sums
    if qh.len() >= 2 {
        push(AModule::direct_sum(&[qh.standard(0), qh.standard(qh.len() - 1)]));
        push(AModule::direct_sum(&[
            qh.costandard(0).unwrap(),
            qh.costandard(qh.len() - 1).unwrap(),
        ]));
    }
    pool
}
