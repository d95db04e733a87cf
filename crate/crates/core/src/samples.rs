//! Sample algebras with candidate quasi-hereditary data: small fixtures
//! used by the test suites, the documentation, and as seeds for golden
//! spec files.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::linalg::{GroundRing, Matrix, Scalar};
use crate::module::{submodule_generated, AModule};
use crate::poset::Poset;
use crate::qh::QhInput;
use crate::quiver::{self, Arrow, Quiver};

/// The ground ring itself: one label, the regular module as its standard.
pub fn ground(ring: GroundRing) -> QhInput {
    let algebra = Algebra::ground(ring);
    let reg = AModule::regular(&algebra);
    QhInput {
        algebra,
        poset: Poset::new(vec!["1".into()], &[]).unwrap(),
        standards: vec![reg],
        extras: BTreeMap::new(),
    }
}

/// Lower-triangular 2×2 matrices over the ring, basis {E11, E22, E21},
/// idempotents e1 = E11, e2 = E22. Poset 2 < 1 with Δ(1) = A·e1 (rank 2)
/// and Δ(2) = A·e2 (rank 1): the standards are the indecomposable
/// projectives.
pub fn e1(ring: GroundRing) -> QhInput {
    let one = || ring.one();
    let zero = || ring.zero();
    let entries = vec![
        (0usize, 0usize, 0usize, one()),
        (1, 1, 1, one()),
        (2, 0, 2, one()),
        (1, 2, 2, one()),
    ];
    let algebra = Algebra::from_structure_constants(
        ring.clone(),
        3,
        &entries,
        vec![one(), one(), zero()],
        vec![vec![one(), zero(), zero()], vec![zero(), one(), zero()]],
        vec!["E11".into(), "E22".into(), "E21".into()],
    )
    .unwrap();
    let reg = AModule::regular(&algebra);
    let gen = |i: usize| {
        let mut g = Matrix::zeros(&ring, 3, 1);
        g[(i, 0)] = ring.one();
        submodule_generated(&reg, &g).module
    };
    let delta1 = gen(0);
    let delta2 = gen(1);
    // the simple top of the big projective, as a named extra
    let mut s1_action = vec![Matrix::zeros(&ring, 1, 1); 3];
    s1_action[0] = Matrix::identity(&ring, 1);
    let s1 = AModule::new(algebra.clone(), 1, s1_action).unwrap();
    let mut extras = BTreeMap::new();
    extras.insert("S1".to_string(), s1);
    QhInput {
        algebra,
        poset: Poset::new(vec!["2".into(), "1".into()], &[(0, 1)]).unwrap(),
        standards: vec![delta2, delta1],
        extras,
    }
}

/// The same algebra and standards as [`e1`] but with the order reversed to
/// 1 < 2, which breaks the hom-order axiom.
pub fn e1_wrong_poset(ring: GroundRing) -> QhInput {
    let good = e1(ring);
    QhInput {
        algebra: good.algebra,
        poset: Poset::new(vec!["1".into(), "2".into()], &[(0, 1)]).unwrap(),
        standards: vec![good.standards[1].clone(), good.standards[0].clone()],
        extras: good.extras,
    }
}

/// The Nakayama quiver algebra 1 → 2 → 3 with the composite relation
/// killed (rank 5), poset 1 < 2 < 3 and the simple modules as standards.
/// This is the smallest corpus member whose tilting modules properly
/// extend the standards.
pub fn e2(ring: GroundRing) -> QhInput {
    let one = || ring.one();
    let zero = || ring.zero();
    // basis e1, e2, e3, a: 1→2, b: 2→3; b·a = 0
    let entries = vec![
        (0usize, 0usize, 0usize, one()),
        (1, 1, 1, one()),
        (2, 2, 2, one()),
        (1, 3, 3, one()), // e2·a = a
        (3, 0, 3, one()), // a·e1 = a
        (2, 4, 4, one()), // e3·b = b
        (4, 1, 4, one()), // b·e2 = b
    ];
    let algebra = Algebra::from_structure_constants(
        ring.clone(),
        5,
        &entries,
        vec![one(), one(), one(), zero(), zero()],
        vec![
            vec![one(), zero(), zero(), zero(), zero()],
            vec![zero(), one(), zero(), zero(), zero()],
            vec![zero(), zero(), one(), zero(), zero()],
        ],
        vec!["e1".into(), "e2".into(), "e3".into(), "a".into(), "b".into()],
    )
    .unwrap();
    let simple = |v: usize| {
        let mut action = vec![Matrix::zeros(&ring, 1, 1); 5];
        action[v] = Matrix::identity(&ring, 1);
        AModule::new(algebra.clone(), 1, action).unwrap()
    };
    let reg = AModule::regular(&algebra);
    let proj = |v: usize| {
        let mut g = Matrix::zeros(&ring, 5, 1);
        g[(v, 0)] = ring.one();
        submodule_generated(&reg, &g).module
    };
    let mut extras = BTreeMap::new();
    extras.insert("P1".to_string(), proj(0));
    extras.insert("P2".to_string(), proj(1));
    extras.insert("P3".to_string(), proj(2));
    let standards = vec![simple(0), simple(1), simple(2)];
    QhInput {
        algebra,
        poset: Poset::new(vec!["1".into(), "2".into(), "3".into()], &[(0, 1), (1, 2)]).unwrap(),
        standards,
        extras,
    }
}

/// Two vertices with arrows in both directions and the composite through
/// the second vertex killed: basis {e1, e2, a: 1→2, b: 2→1, ba}, relation
/// a·b = 0. Poset 1 < 2 with Δ(1) the simple at the first vertex and
/// Δ(2) = A·e2 projective of rank 2. The smallest member whose standards
/// are neither all projective nor all simple; its tilting summand T(2) is
/// the rank-3 projective cover of the first vertex.
pub fn e3(ring: GroundRing) -> QhInput {
    let one = || ring.one();
    let zero = || ring.zero();
    // indices: e1, e2, a, b, c = b∘a
    let entries = vec![
        (0usize, 0usize, 0usize, one()),
        (1, 1, 1, one()),
        (1, 2, 2, one()), // e2·a = a
        (2, 0, 2, one()), // a·e1 = a
        (0, 3, 3, one()), // e1·b = b
        (3, 1, 3, one()), // b·e2 = b
        (0, 4, 4, one()), // e1·c = c
        (4, 0, 4, one()), // c·e1 = c
        (3, 2, 4, one()), // b·a = c
    ];
    let algebra = Algebra::from_structure_constants(
        ring.clone(),
        5,
        &entries,
        vec![one(), one(), zero(), zero(), zero()],
        vec![
            vec![one(), zero(), zero(), zero(), zero()],
            vec![zero(), one(), zero(), zero(), zero()],
        ],
        vec!["e1".into(), "e2".into(), "a".into(), "b".into(), "b*a".into()],
    )
    .unwrap();
    let mut s1_action = vec![Matrix::zeros(&ring, 1, 1); 5];
    s1_action[0] = Matrix::identity(&ring, 1);
    let s1 = AModule::new(algebra.clone(), 1, s1_action).unwrap();
    let reg = AModule::regular(&algebra);
    let proj = |v: usize| {
        let mut g = Matrix::zeros(&ring, 5, 1);
        g[(v, 0)] = ring.one();
        submodule_generated(&reg, &g).module
    };
    let delta2 = proj(1);
    let mut extras = BTreeMap::new();
    extras.insert("P1".to_string(), proj(0));
    let standards = vec![s1, delta2];
    QhInput {
        algebra,
        poset: Poset::new(vec!["1".into(), "2".into()], &[(0, 1)]).unwrap(),
        standards,
        extras,
    }
}

/// The dual numbers `R[x]/(x²)`: rank 2, a single idempotent. Not
/// quasi-hereditary for any choice of standard module.
pub fn dual_numbers(ring: GroundRing) -> (Arc<Algebra>, Vec<QhInput>) {
    let one = || ring.one();
    let zero = || ring.zero();
    let entries = vec![
        (0usize, 0usize, 0usize, one()),
        (0, 1, 1, one()),
        (1, 0, 1, one()),
    ];
    let algebra = Algebra::from_structure_constants(
        ring.clone(),
        2,
        &entries,
        vec![one(), zero()],
        vec![vec![one(), zero()]],
        vec!["1".into(), "x".into()],
    )
    .unwrap();
    let reg = AModule::regular(&algebra);
    let mut k_action = vec![Matrix::zeros(&ring, 1, 1); 2];
    k_action[0] = Matrix::identity(&ring, 1);
    let k = AModule::new(algebra.clone(), 1, k_action).unwrap();
    let poset = Poset::new(vec!["1".into()], &[]).unwrap();
    let candidates = vec![
        QhInput {
            algebra: algebra.clone(),
            poset: poset.clone(),
            standards: vec![reg],
            extras: BTreeMap::new(),
        },
        QhInput {
            algebra: algebra.clone(),
            poset,
            standards: vec![k],
            extras: BTreeMap::new(),
        },
    ];
    (algebra, candidates)
}

/// The group algebra ℤC₂ with its trivial and sign modules; the smallest
/// source of genuine torsion in Ext (Ext¹(sign, triv) ≅ ℤ/2). Not
/// quasi-hereditary; used as a torsion fixture.
pub fn cyclic_group_z2() -> (Arc<Algebra>, AModule, AModule) {
    let ring = GroundRing::Integers;
    let one = || ring.one();
    let zero = || ring.zero();
    let entries = vec![
        (0usize, 0usize, 0usize, one()),
        (0, 1, 1, one()),
        (1, 0, 1, one()),
        (1, 1, 0, one()),
    ];
    let algebra = Algebra::from_structure_constants(
        ring.clone(),
        2,
        &entries,
        vec![one(), zero()],
        vec![vec![one(), zero()]],
        vec!["1".into(), "g".into()],
    )
    .unwrap();
    let scalar_module = |g: i64| {
        let action = vec![Matrix::identity(&ring, 1), Matrix::from_i64(&ring, &[&[g]])];
        AModule::new(algebra.clone(), 1, action).unwrap()
    };
    let trivial = scalar_module(1);
    let sign = scalar_module(-1);
    (algebra, trivial, sign)
}

/// A rank-2 module over the integral [`e1`] algebra whose radical embedding
/// is scaled by 2: integrally it has no standard filtration (the trace of
/// the big standard is not pure), while every odd fiber is the projective
/// cover. Fails exactly at p = 2.
pub fn e1_twisted_fixture() -> (QhInput, AModule) {
    let ring = GroundRing::Integers;
    let input = e1(ring.clone());
    let action = vec![
        Matrix::from_i64(&ring, &[&[1, 0], &[0, 0]]),
        Matrix::from_i64(&ring, &[&[0, 0], &[0, 1]]),
        Matrix::from_i64(&ring, &[&[0, 0], &[2, 0]]),
    ];
    let m = AModule::new(input.algebra.clone(), 2, action).unwrap();
    (input, m)
}

/// Outer tensor product of two inputs over the same ring: the algebra
/// A ⊗ B on the Kronecker basis, the product poset with its lexicographic
/// enumeration, and the outer tensor products of the standards.
pub fn tensor_product(a: &QhInput, b: &QhInput) -> QhInput {
    let ring = a.algebra.ring().clone();
    assert_eq!(&ring, b.algebra.ring(), "inputs must share the ground ring");
    let (da, db) = (a.algebra.dim(), b.algebra.dim());
    let dim = da * db;
    let left_mult: Vec<Matrix> = (0..dim)
        .map(|k| {
            let (i, j) = (k / db, k % db);
            a.algebra.left_mult(i).kron(b.algebra.left_mult(j), &ring)
        })
        .collect();
    let outer = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
        let mut v = Vec::with_capacity(dim);
        for xi in x {
            for yj in y {
                v.push(ring.mul(xi, yj));
            }
        }
        v
    };
    let unit = outer(a.algebra.unit(), b.algebra.unit());
    let mut idempotents = Vec::new();
    for ea in a.algebra.idempotents() {
        for eb in b.algebra.idempotents() {
            idempotents.push(outer(ea, eb));
        }
    }
    let mut labels = Vec::new();
    for la in a.algebra.basis_labels() {
        for lb in b.algebra.basis_labels() {
            labels.push(format!("{la}*{lb}"));
        }
    }
    let algebra = Algebra::new(ring.clone(), left_mult, unit, idempotents, labels).unwrap();
    let poset = a.poset.product(&b.poset);
    let mut standards = Vec::new();
    for i in 0..a.poset.len() {
        for j in 0..b.poset.len() {
            let (sa, sb) = (&a.standards[i], &b.standards[j]);
            let action: Vec<Matrix> = (0..dim)
                .map(|k| {
                    let (x, y) = (k / db, k % db);
                    sa.action(x).kron(sb.action(y), &ring)
                })
                .collect();
            standards.push(AModule::new(algebra.clone(), sa.rank() * sb.rank(), action).unwrap());
        }
    }
    QhInput { algebra, poset, standards, extras: BTreeMap::new() }
}

/// A seeded random directed path algebra on three vertices with arrows
/// pointing from lower to higher vertex numbers, its projectives as
/// standards and the hom-order poset. Always split quasi-hereditary; gives
/// the corpus a non-handpicked member.
pub fn random_triangular(ring: GroundRing, seed: u64) -> QhInput {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices: Vec<String> = (1..=3).map(|v| v.to_string()).collect();
    let mut arrows = Vec::new();
    loop {
        arrows.clear();
        let mut n = 0;
        for i in 1..=3u32 {
            for j in (i + 1)..=3u32 {
                for copy in 0..rng.gen_range(0..=2u32) {
                    arrows.push(Arrow {
                        name: format!("a{i}{j}{copy}"),
                        source: i.to_string(),
                        target: j.to_string(),
                    });
                    n += 1;
                }
            }
        }
        if n >= 1 {
            break;
        }
    }
    let quiver = Quiver { vertices, arrows, relations: vec![], max_len: 4 };
    let compiled = quiver::compile(&ring, &quiver).expect("acyclic quivers always compile");
    quiver::default_qh_input(&compiled).expect("directed algebras accept the default structure")
}

/// The corpus over a given ring: the base ring, the three handpicked
/// algebras, a product, and a seeded random triangular algebra.
pub fn corpus(ring: GroundRing) -> Vec<(String, QhInput)> {
    let e1i = e1(ring.clone());
    vec![
        ("R".to_string(), ground(ring.clone())),
        ("E1".to_string(), e1i.clone()),
        ("E2".to_string(), e2(ring.clone())),
        ("E3".to_string(), e3(ring.clone())),
        ("E1xE1".to_string(), tensor_product(&e1i, &e1i)),
        ("RT".to_string(), random_triangular(ring, 0x5eed)),
    ]
}
