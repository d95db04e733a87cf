//! Quiver-with-relations frontend: compiles a quiver presentation into a
//! structure-constant algebra whose basis is the surviving path classes.
//!
//! Path words compose right to left: `b*a` means "apply a, then b", so the
//! word is composable when `target(a) = source(b)`. Relations are linear
//! combinations of parallel path words. Reduction works per length with
//! plain row reduction over the relation span; the quotient must stabilize
//! below the user-supplied length bound `max_len`, otherwise compilation
//! reports non-stabilization.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::Error;
use crate::linalg::{self, GroundRing, Matrix, Scalar};
use crate::module::{submodule_generated, AModule};
use crate::poset::Poset;
use crate::qh::QhInput;

#[derive(Clone, Debug)]
pub struct Arrow {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    /// Relations as linear combinations of composable parallel words; a term
    /// is a coefficient string and a `*`-separated word of arrow names.
    pub relations: Vec<Vec<(String, String)>>,
    pub max_len: usize,
}

/// A path: arrow indices stored leftmost-first, so `arrows[last]` acts
/// first. Trivial paths have an empty arrow list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Path {
    source: usize,
    target: usize,
    arrows: Vec<usize>,
}

impl Path {
    fn label(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e_{}", q.vertices[self.source])
        } else {
            self.arrows.iter().map(|&a| q.arrows[a].name.clone()).collect::<Vec<_>>().join("*")
        }
    }
}

pub struct CompiledQuiver {
    pub algebra: Arc<Algebra>,
    pub quiver: Quiver,
    /// basis index of the trivial path at each vertex
    pub vertex_class: Vec<usize>,
}

struct PathSpace {
    paths: Vec<Path>,
    index: BTreeMap<Path, usize>,
    /// coordinate order: by decreasing length, then lexicographic; pivots of
    /// the relation span then prefer eliminating long paths
    coord_of_path: Vec<usize>,
    path_of_coord: Vec<usize>,
}

fn vertex_index(q: &Quiver, name: &str) -> Result<usize, Error> {
    q.vertices
        .iter()
        .position(|v| v == name)
        .ok_or_else(|| Error::InvalidInput(format!("unknown vertex {name:?}")))
}

fn enumerate_paths(q: &Quiver) -> Result<PathSpace, Error> {
    let nv = q.vertices.len();
    let mut paths: Vec<Path> = (0..nv).map(|v| Path { source: v, target: v, arrows: vec![] }).collect();
    let mut frontier = paths.clone();
    for _len in 1..=q.max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for (ai, arrow) in q.arrows.iter().enumerate() {
                let asrc = vertex_index(q, &arrow.source)?;
                let atgt = vertex_index(q, &arrow.target)?;
                if asrc == p.target {
                    // prepending: the new arrow acts last
                    let mut w = p.arrows.clone();
                    w.insert(0, ai);
                    next.push(Path { source: p.source, target: atgt, arrows: w });
                }
            }
        }
        if next.is_empty() {
            break;
        }
        paths.extend(next.iter().cloned());
        frontier = next;
        if paths.len() > 20_000 {
            return Err(Error::InvalidInput(
                "path space exceeds 20000 elements; lower max_len".into(),
            ));
        }
    }
    let mut order: Vec<usize> = (0..paths.len()).collect();
    order.sort_by(|&a, &b| {
        paths[b]
            .arrows
            .len()
            .cmp(&paths[a].arrows.len())
            .then_with(|| paths[a].cmp(&paths[b]))
    });
    let mut coord_of_path = vec![0; paths.len()];
    for (coord, &p) in order.iter().enumerate() {
        coord_of_path[p] = coord;
    }
    let index = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    Ok(PathSpace { paths, index, coord_of_path, path_of_coord: order })
}

struct Reduction {
    /// rows of the reduced relation span, in coordinate order
    rows: Vec<Vec<Scalar>>,
    /// pivot coordinate of each row
    pivot_of_row: Vec<usize>,
    /// row index for each pivot coordinate
    row_of_pivot: BTreeMap<usize, usize>,
}

impl Reduction {
    /// Reduce a coordinate vector modulo the span, in place.
    fn reduce(&self, ring: &GroundRing, v: &mut [Scalar]) {
        for (row, &p) in self.rows.iter().zip(&self.pivot_of_row) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                let t = ring.mul(&f, r);
                *x = ring.sub(x, &t);
            }
        }
    }
}

fn parse_word(q: &Quiver, word: &str) -> Result<Vec<usize>, Error> {
    let word = word.trim();
    if let Some(v) = word.strip_prefix("e_") {
        // a trivial path names a vertex
        return Ok(vec![usize::MAX - vertex_index(q, v)?]);
    }
    word.split('*')
        .map(|name| {
            q.arrows
                .iter()
                .position(|a| a.name == name.trim())
                .ok_or_else(|| Error::InvalidInput(format!("unknown arrow {name:?}")))
        })
        .collect()
}

fn word_to_path(q: &Quiver, word: &[usize]) -> Result<Path, Error> {
    if word.len() == 1 && word[0] > q.arrows.len() {
        let v = usize::MAX - word[0];
        return Ok(Path { source: v, target: v, arrows: vec![] });
    }
    let mut arrows = word.to_vec();
    // validate composability right to left
    let mut target = None;
    let mut source = 0;
    for (k, &ai) in arrows.iter().enumerate().rev() {
        let a = &q.arrows[ai];
        let asrc = vertex_index(q, &a.source)?;
        let atgt = vertex_index(q, &a.target)?;
        match target {
            None => {
                source = asrc;
            }
            Some(t) => {
                if asrc != t {
                    return Err(Error::InvalidInput(format!(
                        "word is not composable at position {k}"
                    )));
                }
            }
        }
        target = Some(atgt);
    }
    let target = target.ok_or_else(|| Error::InvalidInput("empty word".into()))?;
    arrows.shrink_to_fit();
    Ok(Path { source, target, arrows })
}

pub fn compile(ring: &GroundRing, q: &Quiver) -> Result<CompiledQuiver, Error> {
    if q.max_len == 0 {
        return Err(Error::InvalidInput("max_len must be at least 1".into()));
    }
    let space = enumerate_paths(q)?;
    let np = space.paths.len();

    // relation elements: every p·r·s with all terms of length ≤ max_len
    let mut rel_vectors: Vec<Vec<Scalar>> = Vec::new();
    for rel in &q.relations {
        let mut terms = Vec::new();
        let mut endpoints: Option<(usize, usize)> = None;
        for (coeff, word) in rel {
            // relation coefficients are friendlier than file coefficients:
            // any integer is accepted and reduced into the ring
            let c = match ring.parse(coeff) {
                Ok(c) => c,
                Err(e) => match coeff.trim().parse::<i64>() {
                    Ok(n) => ring.from_i64(n),
                    Err(_) => return Err(e),
                },
            };
            let w = parse_word(q, word)?;
            let p = word_to_path(q, &w)?;
            match endpoints {
                None => endpoints = Some((p.source, p.target)),
                Some(e) => {
                    if e != (p.source, p.target) {
                        return Err(Error::InvalidInput(
                            "relation terms must be parallel paths".into(),
                        ));
                    }
                }
            }
            terms.push((c, p));
        }
        let Some((rsrc, rtgt)) = endpoints else { continue };
        for pre in &space.paths {
            if pre.target != rsrc {
                continue;
            }
            for post in &space.paths {
                if post.source != rtgt {
                    continue;
                }
                // post ∘ term ∘ pre for each term
                let mut vec = vec![ring.zero(); np];
                let mut fits = true;
                for (c, t) in &terms {
                    let len = pre.arrows.len() + t.arrows.len() + post.arrows.len();
                    if len > q.max_len {
                        fits = false;
                        break;
                    }
                    let mut arrows = post.arrows.clone();
                    arrows.extend(&t.arrows);
                    arrows.extend(&pre.arrows);
                    let full = Path { source: pre.source, target: post.target, arrows };
                    let idx = *space.index.get(&full).expect("generated path exists");
                    let coord = space.coord_of_path[idx];
                    vec[coord] = ring.add(&vec[coord], c);
                }
                if fits && vec.iter().any(|x| !x.is_zero()) {
                    rel_vectors.push(vec);
                }
            }
        }
    }

    // row reduce the span over the (length-descending) coordinate order
    let field = if ring.is_field() { ring.clone() } else { GroundRing::Rationals };
    let mut reduction = Reduction { rows: vec![], pivot_of_row: vec![], row_of_pivot: BTreeMap::new() };
    for v in rel_vectors {
        let mut v: Vec<Scalar> = if ring.is_field() {
            v
        } else {
            v.iter().map(|s| linalg::cast_scalar(ring, &field, s)).collect()
        };
        reduction.reduce(&field, &mut v);
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = field.inv(&v[p]).expect("leading coefficient is invertible");
            for x in v.iter_mut() {
                *x = field.mul(&inv, x);
            }
            reduction.rows.push(v);
            reduction.pivot_of_row.push(p);
            reduction.row_of_pivot.insert(p, reduction.rows.len() - 1);
        }
    }

    // stabilization: every path of maximal length must reduce away
    let surviving: Vec<usize> = (0..np)
        .filter(|&coord| !reduction.row_of_pivot.contains_key(&coord))
        .collect();
    for &coord in &surviving {
        let p = &space.paths[space.path_of_coord[coord]];
        if p.arrows.len() >= q.max_len {
            return Err(Error::InvalidInput(format!(
                "path space did not stabilize by max_len {}: class {:?} survives",
                q.max_len,
                p.label(q)
            )));
        }
    }

    // over ℤ the relation span must have unimodular reduction for the
    // quotient to carry integral structure constants; with coefficient ±1
    // monomial relations (the practical case) the pivots are already units.
    let reduce_word = |arrows: &[usize]| -> Result<Vec<Scalar>, Error> {
        // returns coordinates over the surviving basis
        fn go(
            field: &GroundRing,
            q: &Quiver,
            space: &PathSpace,
            red: &Reduction,
            surviving: &[usize],
            arrows: &[usize],
        ) -> Result<Vec<Scalar>, Error> {
            if arrows.len() <= q.max_len {
                let p = word_to_path(q, arrows)?;
                let idx = *space.index.get(&p).expect("path of legal length exists");
                let mut v = vec![field.zero(); space.paths.len()];
                v[space.coord_of_path[idx]] = field.one();
                red.reduce(field, &mut v);
                return Ok(surviving.iter().map(|&c| v[c].clone()).collect());
            }
            let split = arrows.len() - q.max_len;
            let head = &arrows[..split];
            let tail = &arrows[split..];
            let mut combo = go(field, q, space, red, surviving, tail)?;
            for &arrow in head.iter().rev() {
                let mut next = vec![field.zero(); surviving.len()];
                for (k, c) in combo.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let base = &space.paths[space.path_of_coord[surviving[k]]];
                    let asrc = vertex_index(q, &q.arrows[arrow].source)?;
                    if asrc != base.target {
                        continue;
                    }
                    let mut w = vec![arrow];
                    w.extend(&base.arrows);
                    let part = go(field, q, space, red, surviving, &w)?;
                    for (x, y) in next.iter_mut().zip(&part) {
                        let t = field.mul(c, y);
                        *x = field.add(x, &t);
                    }
                }
                combo = next;
            }
            Ok(combo)
        }
        go(&field, q, &space, &reduction, &surviving, arrows)
    };

    let dim = surviving.len();
    let mut entries: Vec<(usize, usize, usize, Scalar)> = Vec::new();
    for (i, &ci) in surviving.iter().enumerate() {
        let pi = &space.paths[space.path_of_coord[ci]];
        for (j, &cj) in surviving.iter().enumerate() {
            let pj = &space.paths[space.path_of_coord[cj]];
            if pi.source != pj.target {
                continue;
            }
            let mut w = pi.arrows.clone();
            w.extend(&pj.arrows);
            let combo = if w.is_empty() {
                // product of two trivial paths at the same vertex
                reduce_word(&[usize::MAX - pi.source])?
            } else {
                reduce_word(&w)?
            };
            for (k, c) in combo.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let back = if ring.is_field() {
                    c.clone()
                } else {
                    match c {
                        Scalar::Rat(x) if num_traits::One::is_one(x.denom()) => {
                            Scalar::Int(x.numer().clone())
                        }
                        _ => {
                            return Err(Error::InvalidInput(
                                "relations do not define an integral quotient basis".into(),
                            ))
                        }
                    }
                };
                entries.push((i, j, k, back));
            }
        }
    }

    let mut vertex_class = Vec::with_capacity(q.vertices.len());
    let mut unit = vec![ring.zero(); dim];
    let mut idempotents = Vec::with_capacity(q.vertices.len());
    for v in 0..q.vertices.len() {
        let p = Path { source: v, target: v, arrows: vec![] };
        let idx = space.index[&p];
        let coord = space.coord_of_path[idx];
        let Some(pos) = surviving.iter().position(|&c| c == coord) else {
            return Err(Error::InvalidInput(format!(
                "trivial path at vertex {} dies in the quotient",
                q.vertices[v]
            )));
        };
        vertex_class.push(pos);
        unit[pos] = ring.one();
        let mut e = vec![ring.zero(); dim];
        e[pos] = ring.one();
        idempotents.push(e);
    }
    let labels = surviving
        .iter()
        .map(|&c| space.paths[space.path_of_coord[c]].label(q))
        .collect();
    let algebra =
        Algebra::from_structure_constants(ring.clone(), dim, &entries, unit, idempotents, labels)?;
    Ok(CompiledQuiver { algebra, quiver: q.clone(), vertex_class })
}

/// The default quasi-hereditary candidate structure on a compiled quiver:
/// one label per vertex, Δ(v) the projective A·e_v, and v ≤ w exactly when
/// some nonzero path runs from w to v. Fails when that relation is cyclic.
pub fn default_qh_input(c: &CompiledQuiver) -> Result<QhInput, Error> {
    let ring = c.algebra.ring().clone();
    let nv = c.quiver.vertices.len();
    let reg = AModule::regular(&c.algebra);
    let mut projectives = Vec::with_capacity(nv);
    for v in 0..nv {
        let mut gen = Matrix::zeros(&ring, c.algebra.dim(), 1);
        gen[(c.vertex_class[v], 0)] = ring.one();
        projectives.push(submodule_generated(&reg, &gen).module);
    }
    // v <= w when Hom(Ae_v, Ae_w) = e_v·A·e_w ≠ 0, i.e. a path w -> v
    let mut strict = Vec::new();
    for v in 0..nv {
        for w in 0..nv {
            if v == w {
                continue;
            }
            if crate::module::hom_rank(&projectives[v], &projectives[w])? > 0 {
                strict.push((v, w));
            }
        }
    }
    // linear extension: repeatedly take the first remaining minimal vertex
    let mut closure = vec![vec![false; nv]; nv];
    for &(v, w) in &strict {
        closure[v][w] = true;
    }
    for k in 0..nv {
        for i in 0..nv {
            for j in 0..nv {
                if closure[i][k] && closure[k][j] {
                    closure[i][j] = true;
                }
            }
        }
    }
    for (v, row) in closure.iter().enumerate() {
        if row[v] {
            return Err(Error::InvalidInput(
                "default structure needs an acyclic hom relation between vertex projectives".into(),
            ));
        }
    }
    // enumeration: repeatedly take the first remaining minimal vertex
    let mut order = Vec::with_capacity(nv);
    let mut used = vec![false; nv];
    while order.len() < nv {
        let v = (0..nv)
            .find(|&v| !used[v] && (0..nv).all(|w| used[w] || !closure[w][v]))
            .expect("acyclic relation always has a minimal element");
        used[v] = true;
        order.push(v);
    }
    let labels: Vec<String> = order.iter().map(|&v| c.quiver.vertices[v].clone()).collect();
    let mut relations = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        for (j, &w) in order.iter().enumerate() {
            if closure[v][w] {
                relations.push((i, j));
            }
        }
    }
    let poset = Poset::new(labels, &relations)?;
    let standards = order.iter().map(|&v| projectives[v].clone()).collect();
    Ok(QhInput {
        algebra: c.algebra.clone(),
        poset,
        standards,
        extras: BTreeMap::new(),
    })
}
