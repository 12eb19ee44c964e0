//! `mimp`: command-line front end for mimp-core.
//!
//! Exit status: 0 on success, 1 when the input is well formed but the
//! requested property fails (ill-formed proof, unmet hypotheses, formula
//! not provable, ...), 2 on usage or input format errors.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use mimp_core::branch::branch_reports;
use mimp_core::compress::{from_dag, to_dag, ProofDag};
use mimp_core::derivation::{check_derivation, metrics, proof_from_str, Derivation};
use mimp_core::emap::{build_emap, count_epart_types, verify_emap, EMappedProof, OccVertexMap};
use mimp_core::formula::{parse_formula, Formula, SyntaxTree};
use mimp_core::prover::{decide_and_prove_with, gen_redundant_family, Family, FamilySpec, DEFAULT_BUDGET};
use mimp_core::redundancy::{
    brute_force_max_repeats, find_redundant_with, growth_fit, oracle_count, Bounds, DEFAULT_NODE_LIMIT,
};
use mimp_core::transform::{expand, find_maximal_formulas, normalize_with, ReductionStep};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "mimp", version, about = "Natural deduction tools for minimal implicational logic")]
struct Cli {
    /// Output format of the report on stdout.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its canonical form and syntax tree.
    Parse { formula: String },
    /// Check a proof file against the rules.
    Check { proof: PathBuf },
    /// Normalize a proof.
    Normalize {
        proof: PathBuf,
        /// Include every contraction in the report.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        max_steps: Option<usize>,
        /// Write the normal proof here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Eta-expand a normal proof.
    Expand {
        proof: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List branches with order, reverse rank and E/I split.
    Branches { proof: PathBuf },
    /// Build (or verify) the map from occurrences to syntax-tree vertices.
    Map {
        proof: PathBuf,
        /// Syntax tree file; defaults to the tree of the conclusion.
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Existing map to verify instead of building one.
        #[arg(long = "map")]
        map_file: Option<PathBuf>,
        #[arg(long, requires = "map_file")]
        verify_only: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for a subderivation repeated many times at one level.
    Analyze {
        proof: PathBuf,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        q: u32,
        /// Scale; defaults to the number of syntax-tree vertices.
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, default_value_t = 1)]
        height_factor: u64,
        /// Cross-check with exhaustive counting.
        #[arg(long)]
        oracle: bool,
        /// Count oracle repeats per level.
        #[arg(long)]
        per_level: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Share repeated subderivations in a DAG.
    Compress {
        proof: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Expand a DAG back into a proof.
    Decompress {
        dag: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide a formula and print a normal expanded proof.
    Prove {
        formula: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a proof family.
    Generate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        members: usize,
        /// Write the first member's proof here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fit size against m on a family or on a points file.
    Fit {
        /// JSON list of `[m, size]` pairs.
        points: Option<PathBuf>,
        #[arg(long, conflicts_with = "points")]
        family: Option<Family>,
        /// Comma-separated values of m.
        #[arg(long, value_delimiter = ',', requires = "family")]
        ms: Vec<u64>,
        #[arg(long)]
        p: Option<u32>,
    },
}

/// Exit code and message.
struct Failure(u8, String);

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure(2, e.to_string())
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure(1, e.to_string())
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure(2, format!("{e:#}"))
    }
}

/// A report plus a one-line text summary. Domain failures still print
/// their report before exiting 1.
struct Outcome {
    result: Value,
    summary: String,
    failed: Option<String>,
}

fn ok(result: impl Serialize, summary: impl Into<String>) -> Result<Outcome, Failure> {
    Ok(Outcome {
        result: serde_json::to_value(result).map_err(usage)?,
        summary: summary.into(),
        failed: None,
    })
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_proof(path: &Path) -> Result<Derivation, Failure> {
    let text = read_text(path)?;
    proof_from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_json(path: &Path) -> Result<Value, Failure> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_artifact(path: &Option<PathBuf>, v: &impl Serialize) -> Result<(), Failure> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(v).map_err(usage)?;
        fs::write(p, text + "\n").map_err(|e| usage(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn formula_arg(s: &str) -> Result<Formula, Failure> {
    parse_formula(s).map_err(|e| usage(format!("bad formula: {e}")))
}

fn mapped(proof: Derivation, tree: Option<&PathBuf>) -> Result<EMappedProof, Failure> {
    let t = match tree {
        Some(p) => SyntaxTree::from_json(&load_json(p)?).map_err(usage)?,
        None => SyntaxTree::build(proof.conclusion()),
    };
    build_emap(&proof, &t).map_err(domain)
}

fn node_limit() -> Result<usize, Failure> {
    match std::env::var("MIMP_NODE_LIMIT") {
        Ok(v) => v
            .parse()
            .map_err(|_| usage(format!("MIMP_NODE_LIMIT must be a number, got `{v}`"))),
        Err(_) => Ok(DEFAULT_NODE_LIMIT),
    }
}

fn run(cmd: Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Parse { formula } => {
            let f = formula_arg(&formula)?;
            let t = SyntaxTree::build(&f);
            ok(
                json!({
                    "formula": f,
                    "symbols": f.symbol_count(),
                    "nodes": f.node_count(),
                    "tree": t.to_json(),
                }),
                f.to_string(),
            )
        }
        Command::Check { proof } => {
            let d = load_proof(&proof)?;
            let r = check_derivation(&d);
            let m = metrics(&d);
            let summary = if r.ok {
                format!("ok: {} nodes, height {}", m.size_nodes, m.height)
            } else {
                format!("{} violation(s), first at {}", r.violations.len(), r.violations[0].address)
            };
            let failed = (!r.ok).then(|| "proof is ill-formed".to_string());
            Ok(Outcome {
                result: json!({
                    "report": r,
                    "conclusion": d.conclusion(),
                    "size_nodes": m.size_nodes,
                    "size_symbols": m.size_symbols,
                    "height": m.height,
                }),
                summary,
                failed,
            })
        }
        Command::Normalize {
            proof,
            trace,
            max_steps,
            output,
        } => {
            let d = load_proof(&proof)?;
            let r = check_derivation(&d);
            if !r.ok {
                return Err(domain("proof is ill-formed; run `check` for details"));
            }
            let mut steps: Vec<ReductionStep> = Vec::new();
            let n = normalize_with(&d, max_steps, |s| {
                if trace {
                    steps.push(s.clone())
                }
            })
            .map_err(domain)?;
            write_artifact(&output, &n)?;
            let mut res = json!({ "proof": n, "size_before": d.size(), "size_after": n.size() });
            if trace {
                res["trace"] = serde_json::to_value(&steps).map_err(usage)?;
            }
            ok(res, format!("normal form has {} nodes (was {})", n.size(), d.size()))
        }
        Command::Expand { proof, output } => {
            let d = load_proof(&proof)?;
            let e = expand(&d).map_err(domain)?;
            write_artifact(&output, &e)?;
            ok(json!({ "proof": e }), format!("expanded form has {} nodes", e.size()))
        }
        Command::Branches { proof } => {
            let d = load_proof(&proof)?;
            let normal = find_maximal_formulas(&d).is_empty();
            let reports = branch_reports(&d);
            let summary = format!("{} branches (normal: {normal})", reports.len());
            ok(json!({ "normal": normal, "branches": reports }), summary)
        }
        Command::Map {
            proof,
            tree,
            map_file,
            verify_only,
            output,
        } => {
            let d = load_proof(&proof)?;
            let e = if verify_only {
                let t = match &tree {
                    Some(p) => SyntaxTree::from_json(&load_json(p)?).map_err(usage)?,
                    None => SyntaxTree::build(d.conclusion()),
                };
                let path = map_file.as_ref().expect("clap enforces --map");
                let m: OccVertexMap = serde_json::from_value(load_json(path)?).map_err(usage)?;
                EMappedProof::from_parts(d, t, &m).map_err(usage)?
            } else {
                mapped(d, tree.as_ref())?
            };
            let r = verify_emap(&e);
            let map = e.map();
            write_artifact(&output, &map)?;
            let failed = (!r.ok).then(|| "map violates the mapping conditions".to_string());
            Ok(Outcome {
                summary: format!(
                    "{} occurrences mapped onto {} vertices; {} E-part types; verified: {}",
                    map.entries.len(),
                    e.tree.len(),
                    count_epart_types(&e),
                    r.ok
                ),
                result: json!({
                    "map": map,
                    "tree_size": e.tree.len(),
                    "epart_types": count_epart_types(&e),
                    "notes": e.notes,
                    "report": r,
                }),
                failed,
            })
        }
        Command::Analyze {
            proof,
            p,
            q,
            m,
            height_factor,
            oracle,
            per_level,
            jobs,
        } => {
            let d = load_proof(&proof)?;
            let e = mapped(d, None)?;
            let mut bounds = Bounds::new(p, q).with_height_factor(height_factor);
            if let Some(m) = m {
                bounds = bounds.with_m(m);
            }
            let r = find_redundant_with(&e, &bounds, jobs).map_err(domain)?;
            let mut res = json!({ "report": r });
            let mut summary = format!(
                "{:?} case: {} copies at level {} (threshold {})",
                r.case, r.multiplicity, r.level, r.witness_threshold
            );
            if oracle {
                let b = brute_force_max_repeats(&e.proof, per_level, node_limit()?).map_err(domain)?;
                let recount = oracle_count(&e.proof, &r.subderivation, Some(r.level));
                let agrees = r.multiplicity <= b.multiplicity && recount == r.multiplicity;
                res["oracle"] = json!({ "best": b, "recount": recount, "agrees": agrees });
                summary += &format!("; oracle best {} (agrees: {agrees})", b.multiplicity);
            }
            ok(res, summary)
        }
        Command::Compress { proof, output } => {
            let d = load_proof(&proof)?;
            if !check_derivation(&d).ok {
                return Err(domain("proof is ill-formed; run `check` for details"));
            }
            let g = to_dag(&d);
            write_artifact(&output, &g)?;
            let ratio = g.len() as f64 / d.size() as f64;
            ok(
                json!({ "dag": g, "dag_nodes": g.len(), "tree_nodes": d.size(), "ratio": ratio }),
                format!("{} tree nodes -> {} dag nodes ({ratio:.3})", d.size(), g.len()),
            )
        }
        Command::Decompress { dag, output } => {
            let g: ProofDag = serde_json::from_value(load_json(&dag)?).map_err(usage)?;
            let d = from_dag(&g).map_err(domain)?;
            write_artifact(&output, &d)?;
            ok(json!({ "proof": d }), format!("{} nodes", d.size()))
        }
        Command::Prove {
            formula,
            budget,
            output,
        } => {
            let f = formula_arg(&formula)?;
            match decide_and_prove_with(&f, budget).map_err(domain)? {
                Some(d) => {
                    write_artifact(&output, &d)?;
                    ok(json!({ "provable": true, "proof": d }), format!("provable ({} nodes)", d.size()))
                }
                None => Ok(Outcome {
                    result: json!({ "provable": false }),
                    summary: "not provable".into(),
                    failed: Some("not provable".into()),
                }),
            }
        }
        Command::Generate {
            family,
            m,
            p,
            seed,
            members,
            output,
        } => {
            let spec = FamilySpec {
                family,
                m,
                p,
                seed,
                members,
            };
            let out = gen_redundant_family(&spec).map_err(domain)?;
            if let Some((_, d)) = out.first() {
                write_artifact(&output, d)?;
            }
            let list: Vec<Value> = out
                .iter()
                .map(|(f, d)| {
                    let mt = metrics(d);
                    json!({ "formula": f, "size_nodes": mt.size_nodes, "size_symbols": mt.size_symbols, "height": mt.height, "proof": d })
                })
                .collect();
            let summary = format!("{} member(s)", list.len());
            ok(json!({ "spec": spec, "exponent": spec.exponent(), "members": list }), summary)
        }
        Command::Fit {
            points,
            family,
            ms,
            p,
        } => {
            let pts: Vec<(u64, usize)> = match (points, family) {
                (Some(path), _) => serde_json::from_value(load_json(&path)?).map_err(usage)?,
                (None, Some(fam)) => {
                    let mut pts = Vec::new();
                    for &m in &ms {
                        let spec = FamilySpec {
                            family: fam,
                            m,
                            p,
                            seed: 0,
                            members: 1,
                        };
                        let out = gen_redundant_family(&spec).map_err(domain)?;
                        pts.push((m, out[0].1.size()));
                    }
                    pts
                }
                (None, None) => return Err(usage("give a points file or --family with --ms")),
            };
            let g = growth_fit(&pts).map_err(domain)?;
            let summary = format!(
                "size ~ {:.3} * m^{:.3} (diagnostic; windows increasing: {})",
                g.constant, g.exponent, g.increasing
            );
            ok(g, summary)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Parse { .. } => "parse",
        Command::Check { .. } => "check",
        Command::Normalize { .. } => "normalize",
        Command::Expand { .. } => "expand",
        Command::Branches { .. } => "branches",
        Command::Map { .. } => "map",
        Command::Analyze { .. } => "analyze",
        Command::Compress { .. } => "compress",
        Command::Decompress { .. } => "decompress",
        Command::Prove { .. } => "prove",
        Command::Generate { .. } => "generate",
        Command::Fit { .. } => "fit",
    }
}

/// Prints a line, ignoring a closed stdout.
fn emit(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let format = cli.format;
    let name = command_name(&cli.command);
    // deep proofs recurse in the JSON writer
    let handle = std::thread::Builder::new()
        .stack_size(256 * 1024 * 1024)
        .spawn(move || {
            let outcome = run(cli.command);
            let code = match &outcome {
                Ok(o) if o.failed.is_none() => 0,
                Ok(_) => 1,
                Err(Failure(c, _)) => *c,
            };
            match outcome {
                Ok(o) => {
                    match format {
                        Format::Json => {
                            let mut env = json!({
                                "tool": "mimp",
                                "version": VERSION,
                                "command": name,
                                "args": args,
                                "ok": o.failed.is_none(),
                                "result": o.result,
                            });
                            if let Some(msg) = &o.failed {
                                env["error"] = json!(msg);
                            }
                            emit(&serde_json::to_string_pretty(&env).expect("serializable"));
                        }
                        Format::Text => emit(&o.summary),
                    }
                    if let Some(msg) = o.failed {
                        eprintln!("mimp {name}: {msg}");
                    }
                }
                Err(Failure(_, msg)) => {
                    if format == Format::Json {
                        let env = json!({
                            "tool": "mimp",
                            "version": VERSION,
                            "command": name,
                            "args": args,
                            "ok": false,
                            "error": msg,
                        });
                        emit(&serde_json::to_string_pretty(&env).expect("serializable"));
                    }
                    eprintln!("mimp {name}: {msg}");
                }
            }
            code
        })
        .expect("spawn worker thread");
    ExitCode::from(handle.join().unwrap_or(101))
}
