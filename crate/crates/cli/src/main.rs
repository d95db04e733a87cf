//! Command-line driver: parses spec files, runs the verification pipeline
//! and prints deterministic reports.
//!
//! Exit codes: 0 when the requested property holds or the computation
//! succeeded, 1 when a property is refuted (a witness is printed), 2 when
//! the input is invalid.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qhkit::base_change::{self, PrimeSample};
use qhkit::error::Error;
use qhkit::linalg::GroundRing;
use qhkit::module::AModule;
use qhkit::qh::{self, QhInput, QhStructure, Verdict};
use qhkit::quiver;
use qhkit::ringel::{self, SelfDualityVerdict};
use qhkit::specfile;
use qhkit::tilting::{self, CharacteristicTilting, GeneratorStyle};

#[derive(Parser)]
#[command(
    name = "qhkit",
    version,
    about = "Exact-arithmetic toolkit for split quasi-hereditary algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Csv,
    Md,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum FiltrationKind {
    #[default]
    Delta,
    Nabla,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify the split quasi-hereditary axioms and print the heredity chain
    Check { spec: PathBuf },
    /// Compute the costandard modules and their ranks
    Costandard {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// The Ext-orthogonality table over degrees 0..2
    ExtTable {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Test and extract a standard or costandard filtration of a module
    Filtration {
        spec: PathBuf,
        /// module name: an entry of "modules", a standard via "delta:L",
        /// a costandard via "nabla:L", a projective via "P:L", a tilting
        /// summand via "T:L", the regular module "A", or its injective
        /// cogenerator "DA"
        #[arg(long)]
        module: String,
        #[arg(long, value_enum, default_value_t)]
        kind: FiltrationKind,
    },
    /// Build the characteristic tilting module and verify it
    Tilt {
        spec: PathBuf,
        /// restrict the table to one label
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Compute the Ringel dual and verify its structure
    Ringel {
        spec: PathBuf,
        /// write the dual back out as a spec file
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Compare the Morita-invariant tables of A and its double Ringel dual
    DoubleDual { spec: PathBuf },
    /// Necessary-condition probe for Ringel self-duality
    SelfDual { spec: PathBuf },
    /// Reduce an integral structure mod p and re-verify the fibers
    Reduce {
        spec: PathBuf,
        /// comma-separated primes; defaults to the automatic sample
        #[arg(long)]
        primes: Option<String>,
    },
    /// Compile a quiver presentation into an algebra spec file
    Quiver {
        spec: PathBuf,
        /// ring of the compiled algebra: Q, Z or F<p>
        #[arg(long, default_value = "Q")]
        ring: String,
        /// write the compiled spec here instead of stdout
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Aggregate report: axioms, tables, tilting, Ringel dual, base change
    Report {
        spec: PathBuf,
        #[arg(long)]
        primes: Option<String>,
    },
}

/// 0 = holds, 1 = refuted (witness printed), 2 = invalid input.
enum Outcome {
    Holds,
    Refuted,
}

fn main() -> ExitCode {
    // die quietly when the output pipe closes (e.g. piping into head)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Holds) => ExitCode::SUCCESS,
        Ok(Outcome::Refuted) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &PathBuf) -> anyhow::Result<QhInput> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    Ok(specfile::parse_algebra_spec(&text)?)
}

fn verified(input: &QhInput) -> anyhow::Result<Result<QhStructure, qh::Refutation>> {
    match qh::verify_split_qh(input)? {
        Verdict::Accepted(mut q) => {
            q.compute_costandards()?;
            Ok(Ok(*q))
        }
        Verdict::Refuted(r) => Ok(Err(r)),
    }
}

fn table(format: Format, headers: &[&str], rows: &[Vec<String>]) -> String {
    match format {
        Format::Csv => {
            let mut out = headers.join(",");
            out.push('\n');
            for r in rows {
                out.push_str(&r.join(","));
                out.push('\n');
            }
            out
        }
        Format::Md => {
            let mut out = format!("| {} |\n", headers.join(" | "));
            out.push_str(&format!("|{}\n", "---|".repeat(headers.len())));
            for r in rows {
                out.push_str(&format!("| {} |\n", r.join(" | ")));
            }
            out
        }
        Format::Text => {
            let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
            for r in rows {
                for (w, cell) in widths.iter_mut().zip(r) {
                    *w = (*w).max(cell.len());
                }
            }
            let fmt_row = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            let mut out = fmt_row(&headers.iter().map(|s| s.to_string()).collect::<Vec<_>>());
            out.push('\n');
            for r in rows {
                out.push_str(&fmt_row(r));
                out.push('\n');
            }
            out
        }
    }
}

fn chain_summary(qh: &QhStructure) -> String {
    let ranks: Vec<String> = qh.chain_layer_ranks().iter().map(|r| r.to_string()).collect();
    format!("heredity chain layer ranks: ({})", ranks.join(", "))
}

fn resolve_module(
    qh: &QhStructure,
    tilting: &mut Option<CharacteristicTilting>,
    name: &str,
) -> anyhow::Result<AModule> {
    if let Some(m) = qh.extras.get(name) {
        return Ok(m.clone());
    }
    if name == "A" {
        return Ok(AModule::regular(&qh.algebra));
    }
    if name == "DA" {
        return Ok(AModule::regular(&qh.op_algebra).dual(&qh.algebra));
    }
    let lookup = |label: &str| -> anyhow::Result<usize> {
        qh.poset
            .index_of(label)
            .ok_or_else(|| anyhow::anyhow!("unknown poset label {label:?}"))
    };
    if let Some(l) = name.strip_prefix("delta:") {
        return Ok(qh.standard(lookup(l)?).clone());
    }
    if let Some(l) = name.strip_prefix("nabla:") {
        return Ok(qh.costandard(lookup(l)?)?.clone());
    }
    if let Some(l) = name.strip_prefix("P:") {
        return Ok(qh.projectives[lookup(l)?].module.clone());
    }
    if let Some(l) = name.strip_prefix("T:") {
        let i = lookup(l)?;
        if tilting.is_none() {
            *tilting = Some(tilting::build_characteristic_tilting(qh, GeneratorStyle::Canonical)?);
        }
        return Ok(tilting.as_ref().unwrap().parts[i].module.clone());
    }
    anyhow::bail!("unknown module {name:?}; see --help for the naming scheme")
}

fn parse_primes(
    qh: &QhStructure,
    primes: &Option<String>,
    pool: &[AModule],
) -> anyhow::Result<PrimeSample> {
    match primes {
        Some(list) => {
            let values: Vec<u64> = list
                .split(',')
                .map(|p| p.trim().parse::<u64>().map_err(|_| anyhow::anyhow!("bad prime {p:?}")))
                .collect::<Result<_, _>>()?;
            Ok(PrimeSample::user(&values)?)
        }
        None => Ok(PrimeSample::automatic(qh, pool)?),
    }
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.cmd {
        Cmd::Check { spec } => {
            let input = read_input(&spec)?;
            match verified(&input)? {
                Ok(qh) => {
                    println!(
                        "accepted: split quasi-hereditary over {}",
                        specfile::ring_name(qh.ring())
                    );
                    println!("labels (increasing enumeration): {}", qh.poset.labels().join(", "));
                    println!("{}", chain_summary(&qh));
                    for i in 0..qh.len() {
                        println!(
                            "Δ({}): rank {}, opposite standard rank {}",
                            qh.poset.label(i),
                            qh.standard(i).rank(),
                            qh.levels[i].hom_rank
                        );
                    }
                    Ok(Outcome::Holds)
                }
                Err(r) => {
                    println!("refuted: {r}");
                    Ok(Outcome::Refuted)
                }
            }
        }
        Cmd::Costandard { spec, format } => {
            let input = read_input(&spec)?;
            let qh = verified(&input)?.map_err(|r| anyhow::anyhow!("not quasi-hereditary: {r}"))?;
            let rows: Vec<Vec<String>> = (0..qh.len())
                .map(|i| {
                    Ok(vec![
                        qh.poset.label(i).to_string(),
                        qh.standard(i).rank().to_string(),
                        qh.costandard(i)?.rank().to_string(),
                    ])
                })
                .collect::<Result<_, Error>>()?;
            print!("{}", table(format, &["label", "delta_rank", "nabla_rank"], &rows));
            Ok(Outcome::Holds)
        }
        Cmd::ExtTable { spec, format } => {
            let input = read_input(&spec)?;
            let qh = verified(&input)?.map_err(|r| anyhow::anyhow!("not quasi-hereditary: {r}"))?;
            let t = qh::ext_orthogonality_table(&qh)?;
            let rows: Vec<Vec<String>> = t
                .cells
                .iter()
                .map(|c| {
                    vec![
                        qh.poset.label(c.lambda).to_string(),
                        qh.poset.label(c.beta).to_string(),
                        c.degree.to_string(),
                        c.free_rank.to_string(),
                        if c.torsion.is_empty() {
                            "-".into()
                        } else {
                            c.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(";")
                        },
                        if c.ok { "ok" } else { "FAIL" }.into(),
                    ]
                })
                .collect();
            print!(
                "{}",
                table(format, &["lambda", "beta", "degree", "free_rank", "torsion", "status"], &rows)
            );
            if t.pass {
                println!("orthogonality: PASS");
                Ok(Outcome::Holds)
            } else {
                println!("orthogonality: FAIL");
                Ok(Outcome::Refuted)
            }
        }
        Cmd::Filtration { spec, module, kind } => {
            let input = read_input(&spec)?;
            let qh = verified(&input)?.map_err(|r| anyhow::anyhow!("not quasi-hereditary: {r}"))?;
            let mut tilting = None;
            let m = resolve_module(&qh, &mut tilting, &module)?;
            let member = match kind {
                FiltrationKind::Delta => qh::has_delta_filtration(&m, &qh)?,
                FiltrationKind::Nabla => qh::has_nabla_filtration(&m, &qh)?,
            };
            let kind_name = match kind {
                FiltrationKind::Delta => "standard",
                FiltrationKind::Nabla => "costandard",
            };
            println!("module {module}: rank {}", m.rank());
            if !member {
                println!("{kind_name} filtration: none (Ext criterion fails)");
                return Ok(Outcome::Refuted);
            }
            let cert = match kind {
                FiltrationKind::Delta => qh::extract_delta_filtration(&m, &qh)?,
                FiltrationKind::Nabla => qh::extract_nabla_filtration(&m, &qh)?,
            };
            println!("{kind_name} filtration: found ({} layers, bottom first)", cert.layers.len());
            for layer in &cert.layers {
                println!(
                    "  layer {}({}) multiplicity {}",
                    if kind == FiltrationKind::Delta { "delta" } else { "nabla" },
                    qh.poset.label(layer.label_index),
                    layer.multiplicity
                );
            }
            println!("certificate replay: ok");
            Ok(Outcome::Holds)
        }
        Cmd::Tilt { spec, lambda, format } => {
            let input = read_input(&spec)?;
            let qh = verified(&input)?.map_err(|r| anyhow::anyhow!("not quasi-hereditary: {r}"))?;
            let t = tilting::build_characteristic_tilting(&qh, GeneratorStyle::Canonical)?;
            let selected: Vec<usize> = match &lambda {
                Some(l) => vec![qh
                    .poset
                    .index_of(l)
                    .ok_or_else(|| anyhow::anyhow!("unknown poset label {l:?}"))?],
                None => (0..qh.len()).collect(),
            };
            let rows: Vec<Vec<String>> = selected
                .iter()
                .map(|&i| {
                    let p = &t.parts[i];
                    vec![
                        qh.poset.label(i).to_string(),
                        qh.standard(i).rank().to_string(),
                        p.module.rank().to_string(),
                        p.cokernel.rank().to_string(),
                        p.kernel.rank().to_string(),
                    ]
                })
                .collect();
            print!(
                "{}",
                table(
                    format,
                    &["label", "delta_rank", "tilting_rank", "coker_rank", "kernel_rank"],
                    &rows
                )
            );
            let ok = tilting::verify_tilting(&t, &qh)?;
            println!("tilting verification: {}", if ok { "PASS" } else { "FAIL" });
            Ok(if ok { Outcome::Holds } else { Outcome::Refuted })
        }
        Cmd::Ringel { spec, emit } => {
            let input = read_input(&spec)?;
            let qh = verified(&input)?.map_err(|r| anyhow::anyhow!("not quasi-hereditary: {r}"))?;
            let t = tilting::build_characteristic_tilting(&qh, GeneratorStyle::Canonical)?;
            let dual = ringel::ringel_dual(&qh, &t)?;
            println!("Ringel dual rank: {}", dual.algebra.dim());
            println!("dual labels (reversed enumeration): {}", dual.qh.poset.labels().join(", "));
            for i in 0..dual.qh.len() {
                println!("Δ_B({}): rank {}", dual.qh.poset.label(i), dual.qh.standard(i).rank());
            }
            println!("dual verification: PASS");
            if let Some(path) = emit {
                let out = specfile::emit_algebra_spec(&base_change::structure_input(&dual.qh));
                std::fs::write(&path, out)
                    .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
                println!("dual spec written to {}", path.display());
            }
            Ok(Outcome::Holds)
        }
        Cmd::DoubleDual { spec } => {
            let input = read_input(&spec)?;
            let qh = verified(&input)?.map_err(|r| anyhow::anyhow!("not quasi-hereditary: {r}"))?;
            let t = tilting::build_characteristic_tilting(&qh, GeneratorStyle::Canonical)?;
            let report = ringel::double_dual_invariants(&qh, &t)?;
            println!("label count equal: {}", report.label_count_equal);
            println!("[P(λ):Δ(μ)] multiplicity matrices equal: {}", report.multiplicities_equal);
            for (name, m) in [
                ("A", &report.cover_multiplicities_a),
                ("R(R(A))", &report.cover_multiplicities_dd),
            ] {
                println!(
                    "  {name}: {}",
                    m.iter().map(|row| format!("{row:?}")).collect::<Vec<_>>().join(" ")
                );
            }
            println!("Hom(Δ, ∇) tables equal: {}", report.hom_tables_equal);
            println!(
                "orthogonality pass: A = {}, R(R(A)) = {}",
                report.ext_orthogonality_a, report.ext_orthogonality_dd
            );
            if report.all_equal() {
                println!("double dual invariants: PASS");
                Ok(Outcome::Holds)
            } else {
                println!("double dual invariants: FAIL");
                Ok(Outcome::Refuted)
            }
        }
        Cmd::SelfDual { spec } => {
            let input = read_input(&spec)?;
            let qh = verified(&input)?.map_err(|r| anyhow::anyhow!("not quasi-hereditary: {r}"))?;
            let t = tilting::build_characteristic_tilting(&qh, GeneratorStyle::Canonical)?;
            let r = ringel::self_duality_probe(&qh, &t)?;
            println!("standard ranks: {:?} vs dual {:?}", r.standard_ranks, r.dual_standard_ranks);
            println!("total rank: {} vs dual {}", r.total_rank, r.dual_total_rank);
            match r.verdict {
                SelfDualityVerdict::PossiblySelfDual => {
                    println!("verdict: possibly-self-dual (necessary conditions hold)");
                    Ok(Outcome::Holds)
                }
                SelfDualityVerdict::NotSelfDual { witness } => {
                    println!("verdict: not-self-dual ({witness})");
                    Ok(Outcome::Refuted)
                }
            }
        }
        Cmd::Reduce { spec, primes } => {
            let input = read_input(&spec)?;
            if input.algebra.ring() != &GroundRing::Integers {
                anyhow::bail!("reduce requires an integral (ring Z) structure");
            }
            let qh = verified(&input)?.map_err(|r| anyhow::anyhow!("not quasi-hereditary: {r}"))?;
            let sample = parse_primes(&qh, &primes, &qh.standards)?;
            let t = tilting::build_characteristic_tilting(&qh, GeneratorStyle::Canonical)?;
            let mut all_ok = true;
            for (p, prov) in &sample.primes {
                let fiber = base_change::reduce_structure(&qh, *p)?;
                let nabla_ok = fiber.costandards_match.iter().all(|&b| b);
                let tilt_ok = base_change::reduce_tilting_check(&t, &qh, &fiber)?;
                all_ok &= nabla_ok && tilt_ok;
                println!(
                    "p = {p} ({}): fiber verified, costandards {}, tilting {}",
                    match prov {
                        base_change::Provenance::User => "user",
                        base_change::Provenance::Automatic => "auto",
                    },
                    if nabla_ok { "match" } else { "MISMATCH" },
                    if tilt_ok { "PASS" } else { "FAIL" },
                );
            }
            println!(
                "note: a passing finite sample is evidence, not a certificate, for all-primes claims"
            );
            Ok(if all_ok { Outcome::Holds } else { Outcome::Refuted })
        }
        Cmd::Quiver { spec, ring, emit } => {
            let text = std::fs::read_to_string(&spec)
                .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", spec.display()))?;
            let q = specfile::parse_quiver_spec(&text)?;
            let ring = specfile::parse_ring(&ring)?;
            let compiled = quiver::compile(&ring, &q)?;
            let input = quiver::default_qh_input(&compiled)?;
            let out = specfile::emit_algebra_spec(&input);
            match emit {
                Some(path) => {
                    std::fs::write(&path, out)
                        .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
                    println!(
                        "compiled algebra of rank {} written to {}",
                        compiled.algebra.dim(),
                        path.display()
                    );
                }
                None => print!("{out}"),
            }
            Ok(Outcome::Holds)
        }
        Cmd::Report { spec, primes } => {
            let input = read_input(&spec)?;
            let mut ok = true;
            println!("# qhkit report");
            println!();
            match verified(&input)? {
                Err(r) => {
                    println!("## Verification");
                    println!();
                    println!("REFUTED: {r}");
                    Ok(Outcome::Refuted)
                }
                Ok(qh) => {
                    println!("## Verification");
                    println!();
                    println!("- ring: {}", specfile::ring_name(qh.ring()));
                    println!("- labels: {}", qh.poset.labels().join(", "));
                    println!("- {}", chain_summary(&qh));
                    println!();
                    println!("## Standards and costandards");
                    println!();
                    let rows: Vec<Vec<String>> = (0..qh.len())
                        .map(|i| {
                            Ok(vec![
                                qh.poset.label(i).to_string(),
                                qh.standard(i).rank().to_string(),
                                qh.costandard(i)?.rank().to_string(),
                                qh.levels[i].hom_rank.to_string(),
                            ])
                        })
                        .collect::<Result<_, Error>>()?;
                    print!("{}", table(Format::Md, &["label", "delta", "nabla", "delta_op"], &rows));
                    println!();
                    println!("## Ext orthogonality");
                    println!();
                    let t = qh::ext_orthogonality_table(&qh)?;
                    ok &= t.pass;
                    println!("- result: {}", if t.pass { "PASS" } else { "FAIL" });
                    println!();
                    println!("## Characteristic tilting");
                    println!();
                    let tilt = tilting::build_characteristic_tilting(&qh, GeneratorStyle::Canonical)?;
                    let rows: Vec<Vec<String>> = (0..qh.len())
                        .map(|i| {
                            vec![
                                qh.poset.label(i).to_string(),
                                qh.standard(i).rank().to_string(),
                                tilt.parts[i].module.rank().to_string(),
                            ]
                        })
                        .collect();
                    print!("{}", table(Format::Md, &["label", "delta", "tilting"], &rows));
                    let tok = tilting::verify_tilting(&tilt, &qh)?;
                    ok &= tok;
                    println!();
                    println!("- verification: {}", if tok { "PASS" } else { "FAIL" });
                    println!();
                    println!("## Ringel dual");
                    println!();
                    let dual = ringel::ringel_dual(&qh, &tilt)?;
                    println!("- rank: {}", dual.algebra.dim());
                    println!(
                        "- standard ranks (reversed order): {:?}",
                        dual.qh.standards.iter().map(AModule::rank).collect::<Vec<_>>()
                    );
                    if qh.ring() == &GroundRing::Integers {
                        println!();
                        println!("## Base change");
                        println!();
                        let sample = parse_primes(&qh, &primes, &qh.standards)?;
                        for (p, _) in &sample.primes {
                            let fiber = base_change::reduce_structure(&qh, *p)?;
                            let nabla_ok = fiber.costandards_match.iter().all(|&b| b);
                            let tilt_ok = base_change::reduce_tilting_check(&tilt, &qh, &fiber)?;
                            ok &= nabla_ok && tilt_ok;
                            println!(
                                "- p = {p}: fiber verified, costandards {}, tilting {}",
                                if nabla_ok { "match" } else { "MISMATCH" },
                                if tilt_ok { "PASS" } else { "FAIL" }
                            );
                        }
                        println!();
                        println!(
                            "(sampled fibers are evidence, not a certificate, for all-primes claims)"
                        );
                    }
                    Ok(if ok { Outcome::Holds } else { Outcome::Refuted })
                }
            }
        }
    }
}
