//! The on-disk algebra and quiver formats: a strict JSON profile with
//! exact coefficient strings ("a/b" fractions over ℚ, decimal integers
//! otherwise) and row-major nested matrices. Emission is deterministic
//! byte for byte, so golden files stay diffable.
//!
//! An algebra file carries: the ring, the basis labels, the multiplication
//! table as (i, j, k, coefficient) quadruples, the unit vector, the
//! designated idempotents, the poset (elements in enumeration order plus
//! strict relations), one standard-module block per poset element, and
//! optional named extra modules.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;

use crate::algebra::Algebra;
use crate::linalg::{GroundRing, Matrix, Scalar};
use crate::module::AModule;
use crate::poset::Poset;
use crate::qh::QhInput;
use crate::quiver::{Arrow, Quiver};

#[derive(Debug)]
pub enum SpecFileError {
    /// JSON syntax error with position
    Syntax { line: usize, column: usize, message: String },
    /// semantic problem at a named field
    Invalid { field: String, reason: String },
}

impl std::fmt::Display for SpecFileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpecFileError::Syntax { line, column, message } => {
                write!(f, "syntax error at line {line}, column {column}: {message}")
            }
            SpecFileError::Invalid { field, reason } => {
                write!(f, "invalid value at {field}: {reason}")
            }
        }
    }
}

impl std::error::Error for SpecFileError {}

fn invalid(field: &str, reason: impl std::fmt::Display) -> SpecFileError {
    SpecFileError::Invalid { field: field.to_string(), reason: reason.to_string() }
}

/// A coefficient in a file: either a JSON integer or an exact string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    fn parse(&self, ring: &GroundRing, field: &str) -> Result<Scalar, SpecFileError> {
        match self {
            Coeff::Int(n) => ring.parse(&n.to_string()).map_err(|e| invalid(field, e)),
            Coeff::Text(s) => ring.parse(s).map_err(|e| invalid(field, e)),
        }
    }
}

#[derive(Debug, Deserialize)]
struct RawTableEntry(usize, usize, usize, Coeff);

#[derive(Debug, Deserialize)]
struct RawPoset {
    elements: Vec<String>,
    #[serde(default)]
    relations: Vec<(String, String)>,
}

#[derive(Debug, Deserialize)]
struct RawModule {
    #[serde(default)]
    label: Option<String>,
    #[serde(default)]
    name: Option<String>,
    rank: usize,
    action: Vec<Vec<Vec<Coeff>>>,
}

#[derive(Debug, Deserialize)]
struct RawAlgebraSpec {
    format: String,
    ring: String,
    basis: Vec<String>,
    table: Vec<RawTableEntry>,
    unit: Vec<Coeff>,
    idempotents: Vec<Vec<Coeff>>,
    poset: RawPoset,
    standards: Vec<RawModule>,
    #[serde(default)]
    modules: Vec<RawModule>,
}

pub const ALGEBRA_FORMAT: &str = "qhkit-algebra/1";
pub const QUIVER_FORMAT: &str = "qhkit-quiver/1";

pub fn parse_ring(text: &str) -> Result<GroundRing, SpecFileError> {
    match text {
        "Q" => Ok(GroundRing::Rationals),
        "Z" => Ok(GroundRing::Integers),
        other => {
            if let Some(p) = other.strip_prefix('F') {
                let p: u64 =
                    p.parse().map_err(|_| invalid("ring", format!("bad prime in {other:?}")))?;
                GroundRing::prime_field(p).map_err(|e| invalid("ring", e))
            } else {
                Err(invalid("ring", format!("unknown ring {other:?}; use Q, Z or F<p>")))
            }
        }
    }
}

pub fn ring_name(ring: &GroundRing) -> String {
    match ring {
        GroundRing::Rationals => "Q".into(),
        GroundRing::Integers => "Z".into(),
        GroundRing::PrimeField(p) => format!("F{p}"),
    }
}

fn parse_matrix(
    ring: &GroundRing,
    rows: usize,
    cols: usize,
    raw: &[Vec<Coeff>],
    field: &str,
) -> Result<Matrix, SpecFileError> {
    if raw.len() != rows || raw.iter().any(|r| r.len() != cols) {
        return Err(invalid(field, format!("expected a {rows}×{cols} matrix")));
    }
    let mut m = Matrix::zeros(ring, rows, cols);
    for (i, row) in raw.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            m[(i, j)] = c.parse(ring, &format!("{field}[{i}][{j}]"))?;
        }
    }
    Ok(m)
}

fn parse_module(
    algebra: &std::sync::Arc<Algebra>,
    raw: &RawModule,
    field: &str,
) -> Result<AModule, SpecFileError> {
    if raw.action.len() != algebra.dim() {
        return Err(invalid(
            field,
            format!("expected one action matrix per basis element ({})", algebra.dim()),
        ));
    }
    let action = raw
        .action
        .iter()
        .enumerate()
        .map(|(k, m)| {
            parse_matrix(algebra.ring(), raw.rank, raw.rank, m, &format!("{field}.action[{k}]"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    AModule::new(algebra.clone(), raw.rank, action).map_err(|e| invalid(field, e))
}

/// Parse and fully validate an algebra spec file.
pub fn parse_algebra_spec(text: &str) -> Result<QhInput, SpecFileError> {
    let raw: RawAlgebraSpec = serde_json::from_str(text).map_err(|e| SpecFileError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.format != ALGEBRA_FORMAT {
        return Err(invalid("format", format!("expected {ALGEBRA_FORMAT:?}")));
    }
    let ring = parse_ring(&raw.ring)?;
    let dim = raw.basis.len();
    let mut entries = Vec::with_capacity(raw.table.len());
    for (n, RawTableEntry(i, j, k, c)) in raw.table.iter().enumerate() {
        if *i >= dim || *j >= dim || *k >= dim {
            return Err(invalid(&format!("table[{n}]"), "index out of range"));
        }
        entries.push((*i, *j, *k, c.parse(&ring, &format!("table[{n}]"))?));
    }
    if raw.unit.len() != dim {
        return Err(invalid("unit", format!("expected {dim} coefficients")));
    }
    let unit = raw
        .unit
        .iter()
        .enumerate()
        .map(|(i, c)| c.parse(&ring, &format!("unit[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut idempotents = Vec::with_capacity(raw.idempotents.len());
    for (a, e) in raw.idempotents.iter().enumerate() {
        if e.len() != dim {
            return Err(invalid(&format!("idempotents[{a}]"), format!("expected {dim} coefficients")));
        }
        idempotents.push(
            e.iter()
                .enumerate()
                .map(|(i, c)| c.parse(&ring, &format!("idempotents[{a}][{i}]")))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let algebra =
        Algebra::from_structure_constants(ring, dim, &entries, unit, idempotents, raw.basis.clone())
            .map_err(|e| invalid("table", e))?;

    let mut relations = Vec::new();
    for (n, (a, b)) in raw.poset.relations.iter().enumerate() {
        let field = format!("poset.relations[{n}]");
        let ia = raw
            .poset
            .elements
            .iter()
            .position(|l| l == a)
            .ok_or_else(|| invalid(&field, format!("unknown element {a:?}")))?;
        let ib = raw
            .poset
            .elements
            .iter()
            .position(|l| l == b)
            .ok_or_else(|| invalid(&field, format!("unknown element {b:?}")))?;
        relations.push((ia, ib));
    }
    let poset =
        Poset::new(raw.poset.elements.clone(), &relations).map_err(|e| invalid("poset", e))?;
    if raw.standards.len() != poset.len() {
        return Err(invalid("standards", "expected one standard module per poset element"));
    }
    let mut standards: Vec<Option<AModule>> = vec![None; poset.len()];
    for (n, raw_mod) in raw.standards.iter().enumerate() {
        let field = format!("standards[{n}]");
        let label = raw_mod
            .label
            .as_deref()
            .ok_or_else(|| invalid(&field, "missing label"))?;
        let idx = poset
            .index_of(label)
            .ok_or_else(|| invalid(&field, format!("unknown poset element {label:?}")))?;
        if standards[idx].is_some() {
            return Err(invalid(&field, format!("duplicate standard for {label:?}")));
        }
        standards[idx] = Some(parse_module(&algebra, raw_mod, &field)?);
    }
    let standards = standards.into_iter().map(Option::unwrap).collect();
    let mut extras = BTreeMap::new();
    for (n, raw_mod) in raw.modules.iter().enumerate() {
        let field = format!("modules[{n}]");
        let name = raw_mod
            .name
            .as_deref()
            .ok_or_else(|| invalid(&field, "missing name"))?;
        if extras.contains_key(name) {
            return Err(invalid(&field, format!("duplicate module name {name:?}")));
        }
        extras.insert(name.to_string(), parse_module(&algebra, raw_mod, &field)?);
    }
    Ok(QhInput { algebra, poset, standards, extras })
}

fn scalar_json(s: &Scalar) -> String {
    format!("\"{s}\"")
}

fn matrix_json(m: &Matrix, indent: &str) -> String {
    let mut out = String::from("[\n");
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| scalar_json(&m[(i, j)])).collect();
        let _ = writeln!(
            out,
            "{indent}  [{}]{}",
            row.join(", "),
            if i + 1 < m.rows() { "," } else { "" }
        );
    }
    let _ = write!(out, "{indent}]");
    if m.rows() == 0 {
        return "[]".into();
    }
    out
}

fn module_json(key: &str, ident: &str, m: &AModule, indent: &str) -> String {
    let mut out = String::new();
    let _ = write!(out, "{indent}{{\n{indent}  \"{key}\": \"{ident}\",\n");
    let _ = write!(out, "{indent}  \"rank\": {},\n{indent}  \"action\": [\n", m.rank());
    for i in 0..m.algebra().dim() {
        let _ = writeln!(
            out,
            "{indent}    {}{}",
            matrix_json(m.action(i), &format!("{indent}    ")),
            if i + 1 < m.algebra().dim() { "," } else { "" }
        );
    }
    let _ = write!(out, "{indent}  ]\n{indent}}}");
    out
}

/// Serialize an input back to the strict profile. Emission is sorted and
/// byte-deterministic; `parse_algebra_spec(emit_algebra_spec(x))` returns
/// objects equal to `x` up to basis-order identity.
pub fn emit_algebra_spec(input: &QhInput) -> String {
    let a = &input.algebra;
    let ring = a.ring();
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"format\": \"{ALGEBRA_FORMAT}\",");
    let _ = writeln!(out, "  \"ring\": \"{}\",", ring_name(ring));
    let basis: Vec<String> = a.basis_labels().iter().map(|l| format!("\"{l}\"")).collect();
    let _ = writeln!(out, "  \"basis\": [{}],", basis.join(", "));
    let mut quads = Vec::new();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            for k in 0..a.dim() {
                let c = &a.left_mult(i)[(k, j)];
                if !c.is_zero() {
                    quads.push(format!("    [{i}, {j}, {k}, {}]", scalar_json(c)));
                }
            }
        }
    }
    let _ = writeln!(out, "  \"table\": [\n{}\n  ],", quads.join(",\n"));
    let unit: Vec<String> = a.unit().iter().map(scalar_json).collect();
    let _ = writeln!(out, "  \"unit\": [{}],", unit.join(", "));
    let idems: Vec<String> = a
        .idempotents()
        .iter()
        .map(|e| {
            let v: Vec<String> = e.iter().map(scalar_json).collect();
            format!("    [{}]", v.join(", "))
        })
        .collect();
    let _ = writeln!(out, "  \"idempotents\": [\n{}\n  ],", idems.join(",\n"));
    let elements: Vec<String> =
        input.poset.labels().iter().map(|l| format!("\"{l}\"")).collect();
    let rels: Vec<String> = input
        .poset
        .covering_relations()
        .iter()
        .map(|(i, j)| format!("[\"{}\", \"{}\"]", input.poset.label(*i), input.poset.label(*j)))
        .collect();
    let _ = writeln!(
        out,
        "  \"poset\": {{\n    \"elements\": [{}],\n    \"relations\": [{}]\n  }},",
        elements.join(", "),
        rels.join(", ")
    );
    let stds: Vec<String> = (0..input.poset.len())
        .map(|i| module_json("label", input.poset.label(i), &input.standards[i], "    "))
        .collect();
    let _ = write!(out, "  \"standards\": [\n{}\n  ]", stds.join(",\n"));
    if input.extras.is_empty() {
        out.push('\n');
    } else {
        let mods: Vec<String> = input
            .extras
            .iter()
            .map(|(name, m)| module_json("name", name, m, "    "))
            .collect();
        let _ = write!(out, ",\n  \"modules\": [\n{}\n  ]\n", mods.join(",\n"));
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Deserialize)]
struct RawArrow {
    name: String,
    from: String,
    to: String,
}

#[derive(Debug, Deserialize)]
struct RawQuiverSpec {
    format: String,
    vertices: Vec<String>,
    arrows: Vec<RawArrow>,
    #[serde(default)]
    relations: Vec<Vec<(Coeff, String)>>,
    max_len: usize,
}

/// Parse a quiver presentation file.
pub fn parse_quiver_spec(text: &str) -> Result<Quiver, SpecFileError> {
    let raw: RawQuiverSpec = serde_json::from_str(text).map_err(|e| SpecFileError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.format != QUIVER_FORMAT {
        return Err(invalid("format", format!("expected {QUIVER_FORMAT:?}")));
    }
    let arrows = raw
        .arrows
        .into_iter()
        .map(|a| Arrow { name: a.name, source: a.from, target: a.to })
        .collect();
    let relations = raw
        .relations
        .into_iter()
        .map(|rel| {
            rel.into_iter()
                .map(|(c, w)| {
                    let coeff = match c {
                        Coeff::Int(n) => n.to_string(),
                        Coeff::Text(s) => s,
                    };
                    (coeff, w)
                })
                .collect()
        })
        .collect();
    Ok(Quiver { vertices: raw.vertices, arrows, relations, max_len: raw.max_len })
}
