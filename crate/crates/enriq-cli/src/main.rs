//! Batch front end for the `enriq` library.
//!
//! Reads instance files (a quantale spec, a category, and optional
//! weight-pair / ball-system / extension sections), runs the requested
//! analysis, and writes a canonical report. Every command is a thin
//! wrapper: parsing, dispatch, serialization, and an exit code — the
//! mathematics lives in the library.
//!
//! Exit codes: 0 the requested property holds (or the artifact was
//! produced), 1 a checked property fails, 2 an axiom or precondition is
//! violated, 3 the input cannot be parsed, 4 the combination is
//! unsupported, 5 an enumeration cap would be exceeded.

// Library errors carry full diagnostic context and only exist on cold
// paths; boxing them would buy nothing.
#![allow(clippy::result_large_err)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use enriq::analysis::{self, Ball};
use enriq::dot;
use enriq::json;
use enriq::laws;
use enriq::macneille::{self, PresheafPair};
use enriq::{Error, QCategory, QFunctor, Quantale, Result};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(
    name = "enriq",
    version,
    about = "Exact analysis of quantale-enriched categories",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Candidate cap for enumerative searches; beats the ENRIQ_CAP
    /// environment variable, which beats the built-in default.
    #[arg(long, global = true)]
    cap: Option<u128>,

    /// Denominator of the rational grid used by convexity scans.
    #[arg(long, global = true, default_value_t = 1)]
    grid_den: u32,

    /// Report format. DOT is only meaningful for `macneille`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance file and re-run every axiom check.
    Validate { path: PathBuf },

    /// Decide properties of the instance category.
    Check {
        path: PathBuf,
        #[command(flatten)]
        props: CheckFlags,
    },

    /// Compute the MacNeille completion of the instance category.
    Macneille {
        path: PathBuf,
        /// Also write a DOT rendering of the completion order here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },

    /// Close a weight pair, or take the hull of a ball system.
    Closure { path: PathBuf },

    /// Kan extensions and the full solution list for g after i = f.
    Extend { path: PathBuf },

    /// Run the algebraic law suite for the instance quantale.
    Lawbook {
        path: PathBuf,
        /// Seed for the randomized triple pool (infinite carriers only).
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = true)]
struct CheckFlags {
    /// Isomorphic objects must be equal.
    #[arg(long)]
    skeletal: bool,

    /// Powers, copowers, and order-completeness.
    #[arg(long)]
    complete: bool,

    /// Retraction search against the MacNeille completion. Also reports
    /// whether the canonical embedding is essential.
    #[arg(long)]
    injective: bool,

    /// Every consistent weight pair on the scalar grid has an object
    /// witness (metric-flavored quantales only).
    #[arg(long)]
    convex: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

/// Exit code for an error, per the documented table.
fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Axiom(_)
        | Error::Functor { .. }
        | Error::Weight { .. }
        | Error::Precondition { .. } => 2,
        Error::Invalid(_)
        | Error::Domain { .. }
        | Error::QuantaleMismatch { .. }
        | Error::Shape { .. }
        | Error::UnknownObject { .. } => 3,
        Error::Unsupported { .. } => 4,
        Error::ResourceCap { .. } => 5,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not failures; anything else
            // is a command-line parse error and lands in the same exit
            // lane as a malformed instance file.
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Validate { path } => cmd_validate(cli, path),
        Command::Check { path, props } => cmd_check(cli, path, props),
        Command::Macneille { path, dot } => cmd_macneille(cli, path, dot.as_deref()),
        Command::Closure { path } => cmd_closure(cli, path),
        Command::Extend { path } => cmd_extend(cli, path),
        Command::Lawbook { path, seed } => cmd_lawbook(cli, path, *seed),
    }
}

// ---------------------------------------------------------------------
// instance files

/// A parsed instance: the shared quantale, the category, and whichever
/// optional sections the file carries. Parsing a section validates it.
struct Instance {
    quantale: Quantale,
    category: QCategory,
    pair: Option<PresheafPair>,
    balls: Option<Vec<Ball>>,
    extend: Option<ExtendSection>,
}

/// The data of an extension problem: extend `f` along `i`, both leaving
/// the instance category.
struct ExtendSection {
    i: QFunctor,
    f: QFunctor,
}

fn load_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance> {
    let doc = load_json(path)?;
    let top = doc
        .as_object()
        .ok_or_else(|| Error::Invalid("instance file must be a JSON object".into()))?;
    let quantale = json::quantale_from_json(
        top.get("quantale")
            .ok_or_else(|| Error::Invalid("instance file is missing \"quantale\"".into()))?,
    )?;
    let category = json::category_from_json(
        top.get("category")
            .ok_or_else(|| Error::Invalid("instance file is missing \"category\"".into()))?,
        Some(&quantale),
    )?;
    let pair = top
        .get("pair")
        .map(|v| json::pair_from_json(&category, v))
        .transpose()?;
    let balls = top
        .get("balls")
        .map(|v| json::balls_from_json(&quantale, v))
        .transpose()?;
    let extend = top
        .get("extend")
        .map(|v| extend_from_json(&quantale, &category, v))
        .transpose()?;
    Ok(Instance {
        quantale,
        category,
        pair,
        balls,
        extend,
    })
}

/// Reads an extension section: `along` carries the category the problem
/// extends along and the functor into it, `target` the codomain data.
fn extend_from_json(q: &Quantale, base: &QCategory, v: &Value) -> Result<ExtendSection> {
    let m = v
        .as_object()
        .ok_or_else(|| Error::Invalid("extend section must be a JSON object".into()))?;
    let leg = |name: &str| -> Result<QFunctor> {
        let section = m
            .get(name)
            .ok_or_else(|| Error::Invalid(format!("extend section is missing \"{name}\"")))?
            .as_object()
            .ok_or_else(|| Error::Invalid(format!("extend {name} must be a JSON object")))?;
        let cat = json::category_from_json(
            section
                .get("category")
                .ok_or_else(|| Error::Invalid(format!("extend {name} is missing \"category\"")))?,
            Some(q),
        )?;
        json::functor_from_json(base, &cat, &Value::Object(section.clone()))
    };
    Ok(ExtendSection {
        i: leg("along")?,
        f: leg("target")?,
    })
}

// ---------------------------------------------------------------------
// shared plumbing

/// Effective enumeration cap: flag, then environment, then default.
fn effective_cap(cli: &Cli) -> Result<u128> {
    if let Some(cap) = cli.cap {
        return Ok(cap);
    }
    match std::env::var("ENRIQ_CAP") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("ENRIQ_CAP must be an integer, got {s:?}"))),
        Err(_) => Ok(macneille::DEFAULT_CANDIDATE_CAP),
    }
}

fn write_report(cli: &Cli, text: &str) -> Result<u8> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn reject_dot(cli: &Cli, command: &str) -> Result<()> {
    if cli.format == Format::Dot {
        return Err(Error::Unsupported {
            quantale: command.into(),
            operation: "DOT output (only `macneille` draws a graph)".into(),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------
// commands

fn cmd_validate(cli: &Cli, path: &Path) -> Result<u8> {
    reject_dot(cli, "validate")?;
    let inst = load_instance(path)?;
    let report = json!({
        "valid": true,
        "quantale": inst.quantale.to_string(),
        "objects": inst.category.len(),
    });
    let text = match cli.format {
        Format::Json => json::to_canonical_string(&report),
        _ => format!(
            "valid: {} objects over {}\n",
            inst.category.len(),
            inst.quantale
        ),
    };
    write_report(cli, &text)
}

fn cmd_check(cli: &Cli, path: &Path, props: &CheckFlags) -> Result<u8> {
    reject_dot(cli, "check")?;
    let inst = load_instance(path)?;
    let c = &inst.category;
    let cap = effective_cap(cli)?;

    let mut report = Map::new();
    let mut witnesses = Map::new();
    let mut all_hold = true;

    if props.skeletal {
        let skeletal = c.is_skeletal();
        all_hold &= skeletal;
        report.insert("skeletal".into(), json!(skeletal));
    }
    if props.complete {
        let completeness = analysis::is_complete(c)?;
        all_hold &= completeness.complete;
        report.insert("complete".into(), json::completeness_to_json(&completeness));
        witnesses.extend(json::completeness_witnesses_to_json(
            c.quantale(),
            c.objects(),
            &completeness,
        )?);
    }
    if props.injective {
        let mn = macneille::construct(c, cap)?;
        let injectivity = analysis::is_injective(c, cap)?;
        all_hold &= injectivity.injective;
        report.insert("injective".into(), json!(injectivity.injective));
        report.insert(
            "essential_i".into(),
            json!(analysis::is_essential_embedding(mn.embedding())),
        );
        if let Some(r) = &injectivity.retraction {
            witnesses.insert("retraction".into(), json::functor_to_json(r));
        }
    }
    if props.convex {
        let verdict = analysis::is_isbell_convex(c, cli.grid_den)?;
        all_hold &= verdict.convex;
        report.insert("convex".into(), json!(verdict.convex));
        if let Some(pair) = &verdict.counterexample {
            witnesses.insert("convexity_counterexample".into(), json::pair_to_json(pair)?);
        }
    }
    report.insert("witnesses".into(), Value::Object(witnesses));

    let text = match cli.format {
        Format::Json => json::to_canonical_string(&Value::Object(report.clone())),
        _ => {
            let mut s = String::new();
            for key in ["skeletal", "complete", "injective", "essential_i", "convex"] {
                match report.get(key) {
                    Some(Value::Bool(b)) => writeln!(s, "{key}: {b}").unwrap(),
                    Some(inner) if key == "complete" => {
                        writeln!(s, "complete: {}", inner["complete"]).unwrap()
                    }
                    _ => {}
                }
            }
            s
        }
    };
    write_report(cli, &text)?;
    Ok(if all_hold { 0 } else { 1 })
}

fn cmd_macneille(cli: &Cli, path: &Path, dot_out: Option<&Path>) -> Result<u8> {
    let inst = load_instance(path)?;
    let mn = macneille::construct(&inst.category, effective_cap(cli)?)?;
    if let Some(dot_path) = dot_out {
        std::fs::write(dot_path, dot::completion_dot(&mn))
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", dot_path.display())))?;
    }
    let text = match cli.format {
        Format::Json => json::to_canonical_string(&json::completion_to_json(&mn)?),
        Format::Dot => dot::completion_dot(&mn),
        Format::Text => {
            let embedded: Vec<usize> = (0..inst.category.len())
                .map(|c| mn.embedding_index(c))
                .collect();
            format!(
                "completion: {} objects, {} embedded at {:?}\n",
                mn.len(),
                inst.category.len(),
                embedded
            )
        }
    };
    write_report(cli, &text)
}

fn cmd_closure(cli: &Cli, path: &Path) -> Result<u8> {
    reject_dot(cli, "closure")?;
    let inst = load_instance(path)?;
    match (&inst.pair, &inst.balls) {
        (Some(pair), None) => {
            let closed = macneille::closure(pair)?;
            let text = match cli.format {
                Format::Json => json::to_canonical_string(&json::fixed_pair_to_json(&closed)?),
                _ => {
                    let q = inst.quantale;
                    let p: Vec<String> = closed
                        .presheaf()
                        .value_vec()
                        .iter()
                        .map(|e| q.show(e))
                        .collect();
                    let r: Vec<String> = closed
                        .copresheaf()
                        .value_vec()
                        .iter()
                        .map(|e| q.show(e))
                        .collect();
                    format!("P = ({}), R = ({})\n", p.join(", "), r.join(", "))
                }
            };
            write_report(cli, &text)
        }
        (None, Some(balls)) => {
            let report = analysis::check_ball_system(&inst.category, balls)?;
            let text = match cli.format {
                Format::Json => {
                    json::to_canonical_string(&json::ball_report_to_json(&inst.category, &report)?)
                }
                _ => format!(
                    "consistent: {}, witness: {}, hull: {}\n",
                    report.consistent,
                    match report.witness {
                        Some(w) => inst.category.objects().get(w).to_string(),
                        None => "none".into(),
                    },
                    if report.hull_point.is_some() {
                        "yes"
                    } else {
                        "no"
                    }
                ),
            };
            write_report(cli, &text)
        }
        (Some(_), Some(_)) => Err(Error::Invalid(
            "instance has both \"pair\" and \"balls\"; closure takes one".into(),
        )),
        (None, None) => Err(Error::Invalid(
            "closure needs a \"pair\" or \"balls\" section".into(),
        )),
    }
}

fn cmd_extend(cli: &Cli, path: &Path) -> Result<u8> {
    reject_dot(cli, "extend")?;
    let inst = load_instance(path)?;
    let section = inst.extend.as_ref().ok_or_else(|| {
        Error::Invalid("extend needs an \"extend\" section with \"along\" and \"target\"".into())
    })?;
    let cap = effective_cap(cli)?;
    let lan = analysis::kan_lan(&section.f, &section.i)?;
    let ran = analysis::kan_ran(&section.f, &section.i)?;
    let solutions = analysis::solve_extension(&section.f, &section.i, cap)?;
    let middle = section.i.target();
    let target = section.f.target();
    let report = json!({
        "lan": json::kan_to_json(middle, target, &lan),
        "ran": json::kan_to_json(middle, target, &ran),
        "solutions": solutions.iter().map(json::functor_to_json).collect::<Vec<_>>(),
    });
    let text = match cli.format {
        Format::Json => json::to_canonical_string(&report),
        _ => format!("{} extension(s)\n", solutions.len()),
    };
    write_report(cli, &text)
}

fn cmd_lawbook(cli: &Cli, path: &Path, seed: Option<u64>) -> Result<u8> {
    reject_dot(cli, "lawbook")?;
    let doc = load_json(path)?;
    // A lawbook input is either a bare quantale spec or any instance
    // file, whose "quantale" field then supplies the spec.
    let q = match doc.get("quantale") {
        Some(spec) => json::quantale_from_json(spec)?,
        None => json::quantale_from_json(&doc)?,
    };
    let report = laws::law_suite_seeded(&q, seed.unwrap_or(laws::LAW_SEED))?;
    let text = match cli.format {
        Format::Json => json::to_canonical_string(&json::law_report_to_json(&report)),
        _ => {
            let mut s = String::new();
            for check in &report.checks {
                writeln!(
                    s,
                    "{}  {} ({} cases)",
                    if check.passed { "ok " } else { "FAIL" },
                    check.name,
                    check.cases
                )
                .unwrap();
            }
            s
        }
    };
    write_report(cli, &text)?;
    Ok(if report.passed { 0 } else { 1 })
}
