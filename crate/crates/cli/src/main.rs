//! `conic-nets`: classify nets of conics and flats of `PG(5, q)` under the
//! congruence action of `PGL(3, q)`, emit canonical orbit representatives,
//! reproduce distribution tables, run exhaustive audits, and search for
//! conjugating witnesses.
//!
//! All successful output is machine-readable (JSON documents on stdout, CSV
//! for tables and audit reports) and byte-identical across runs; timing goes
//! to stderr. Exit codes: 0 success, 1 input or usage error, 2 internal
//! inconsistency (a computation contradicted a proved statement).

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use conic_nets::classify::{
    classify_line_report, classify_net_report, classify_plane_report, expected_line_distribution,
    expected_plane_distribution, line_representative, o10_parameters, o15_parameters,
    o17_parameters, plane_representative, sigma14_admissible_c, ClassifyError, ClassifyReport,
    LineOrbitLabel, PlaneOrbitLabel, ALL_LINE_LABELS, ALL_PLANE_LABELS,
};
use conic_nets::field::{Elt, Fq};
use conic_nets::geometry::Subspace;
use conic_nets::orbits::{
    audit_conic, audit_lines, audit_planes, audit_points, csv_field, find_witness, AuditReport,
    OrbitError,
};
use conic_nets::veronese::{act_subspace_unchecked, distribution, Net};

const SCHEMA_VERSION: u32 = 1;
const EXIT_USER: u8 = 1;
const EXIT_INTERNAL: u8 = 2;

/// Largest field order any audit supports.
const MAX_AUDIT_ORDER: u16 = 13;
/// Largest field order for the exhaustive plane and line audits.
const MAX_FLAT_AUDIT_ORDER: u16 = 7;

#[derive(Parser)]
#[command(
    name = "conic-nets",
    version,
    about = "Orbit classification of nets of conics over small odd finite fields",
    long_about = "Orbit classification of nets of conics over small odd finite fields.\n\n\
        A net of conics over F_q is a 3-dimensional linear system of ternary\n\
        quadratic forms, i.e. a plane in the projective space PG(5, q) of\n\
        symmetric 3x3 matrices, on which PGL(3, q) acts by congruence. This\n\
        tool classifies nets, planes and lines into their orbits, prints\n\
        canonical representatives, reproduces the distribution tables, runs\n\
        exhaustive audits and searches for conjugating group elements.\n\n\
        Field orders are odd prime powers q = p^e with e <= 3 and q <= 169.\n\
        Element literals are integers for prime fields (any integer, reduced\n\
        mod p) and lists [c0, c1, ..] of at most e integers for extension\n\
        fields, the coordinates in ascending powers of the generator; plain\n\
        integers are accepted there too and reduce to constants.\n\n\
        Successful output is deterministic and byte-identical across runs;\n\
        timing information goes to stderr only. Exit codes: 0 success, 1\n\
        input/usage error, 2 internal inconsistency."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a net of conics, a plane, or a line from a JSON document.
    #[command(long_about = "Classify a net of conics, a plane, or a line from a JSON document.\n\n\
        Input for --kind net:\n\
        \x20 {\"q\": 5, \"forms\": [[f00 .. f22], [..], [..]]}\n\
        with exactly three forms; the six entries of each form are the\n\
        coefficients of X0^2, X0X1, X0X2, X1^2, X1X2, X2^2 in that order.\n\n\
        Input for --kind plane (three rows) or --kind line (two rows):\n\
        \x20 {\"q\": 5, \"rows\": [[m00, m01, m02, m11, m12, m22], ..]}\n\
        where each row is a point of PG(5, q), i.e. a packed symmetric 3x3\n\
        matrix listing the entries on and above the diagonal.\n\n\
        The rows (resp. forms) must be linearly independent, and the\n\
        document's \"q\" must match --q.\n\n\
        On success prints a JSON result document with \"schema\": 1, the\n\
        orbit label, the point-class distribution [n1, n2, n3, n4], the\n\
        invariant trace that drove the decision, an echo of the classified\n\
        object in canonical form, and warnings. A plane avoiding the\n\
        quadric Veronese surface classifies as \"NotMeetingVeronesean\";\n\
        a net with that property is an error (its members are never\n\
        repeated lines).")]
    Classify {
        /// What the input document describes.
        #[arg(long, value_enum)]
        kind: FlatKind,
        /// Field order (an odd prime power).
        #[arg(long)]
        q: u16,
        /// Path of the input JSON document, or "-" for stdin.
        #[arg(long)]
        input: String,
    },
    /// Print the canonical representative of an orbit label.
    #[command(long_about = "Print the canonical representative of an orbit label.\n\n\
        Accepts plane-orbit labels (Sigma1 .. Sigma15, Sigma14') and\n\
        line-orbit labels (o5, o6, o8,1, o8,2, o9, o10, o12, o13,1, o13,2,\n\
        o14,1, o14,2, o15,1, o15,2, o16, o17). The result document carries\n\
        the representative's basis rows, its point-class distribution, and\n\
        every field parameter the construction chose (epsilon is the\n\
        canonical nonsquare; c, u, v, w are family parameters), both in the\n\
        trace and as a \"parameters\" object. Labels tied to the wrong\n\
        characteristic (Sigma14 when 3 | q, Sigma14' otherwise) are\n\
        rejected with exit code 1.")]
    Rep {
        /// Orbit label, e.g. "Sigma9" or "o13,2".
        #[arg(long)]
        label: String,
        /// Field order (an odd prime power).
        #[arg(long)]
        q: u16,
    },
    /// Print a CSV distribution table for all orbit labels at q.
    #[command(long_about = "Print a CSV distribution table for all orbit labels at q.\n\n\
        One row per orbit label available at q. Each row carries the\n\
        point-class distribution computed exhaustively from the canonical\n\
        representative next to the closed-form expectation. Columns:\n\n\
        \x20 label,n1,n2,n3,n4,expected_n1,expected_n2,expected_n3,expected_n4,consistent\n\n\
        Labels containing commas are quoted. Exits 2 if any computed\n\
        distribution disagrees with its closed form.")]
    Tables {
        /// Field order (an odd prime power).
        #[arg(long)]
        q: u16,
        /// Which table to print.
        #[arg(long, value_enum)]
        kind: TableKind,
    },
    /// Exhaustively audit the orbit censuses and write CSV reports.
    #[command(long_about = "Exhaustively audit the orbit censuses and write CSV reports.\n\n\
        For q in {3, 5, 7} this enumerates every plane and every line of\n\
        PG(5, q), classifies them, and checks each tally against the orbit\n\
        size |PGL(3, q)| / |stabilizer|; larger q (9, 11, 13) run the point\n\
        and conic audits only. One CSV per audit kind is written next to\n\
        --out, with the kind inserted before the extension (report.csv\n\
        becomes report.planes.csv, report.lines.csv, report.points.csv,\n\
        report.conic.csv). CSV columns:\n\n\
        \x20 label,tally,expected_orbit_size,stabilizer_order,consistent\n\n\
        A deterministic summary goes to stdout and timing to stderr. Exits\n\
        0 iff every check passes, 2 on any consistency violation. The\n\
        tallies are independent of --workers.")]
    Audit {
        /// Field order: 3, 5 or 7 for the full flat audits; up to 13 for
        /// the point and conic audits.
        #[arg(long)]
        q: u16,
        /// Worker threads for the flat scans.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Base path for the CSV reports.
        #[arg(long)]
        out: PathBuf,
    },
    /// Search for a group element mapping one flat onto another.
    #[command(long_about = "Search for a group element mapping one flat onto another.\n\n\
        Both inputs are JSON documents in the classify --kind plane/line\n\
        format ({\"q\": .., \"rows\": [..]}) and must span flats of the same\n\
        dimension. Prints {\"schema\": 1, \"witness\": M} where M is a 3x3\n\
        matrix with unit leading coefficient whose congruence action takes\n\
        the left flat onto the right, or \"witness\": null when the flats\n\
        lie in different orbits (distinct orbit invariants prove this at\n\
        any q; the exhaustive search behind same-invariant pairs is\n\
        budgeted for q <= 7 and exits 1 beyond).")]
    Witness {
        /// Field order (an odd prime power).
        #[arg(long)]
        q: u16,
        /// Path of the left flat's JSON document.
        #[arg(long)]
        left: PathBuf,
        /// Path of the right flat's JSON document.
        #[arg(long)]
        right: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FlatKind {
    Net,
    Plane,
    Line,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    /// Plane orbits: Sigma1 .. Sigma15 (Sigma14' in characteristic 3).
    PlaneDistributions,
    /// Line orbits: o5 .. o17.
    LineDistributions,
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// A failure with a structured kind, a message, and a process exit code.
struct CliError {
    kind: &'static str,
    message: String,
    code: u8,
}

impl CliError {
    fn user(kind: &'static str, message: impl ToString) -> CliError {
        CliError { kind, message: message.to_string(), code: EXIT_USER }
    }

    fn internal(kind: &'static str, message: impl ToString) -> CliError {
        CliError { kind, message: message.to_string(), code: EXIT_INTERNAL }
    }

    fn from_classify(e: ClassifyError) -> CliError {
        let kind = match &e {
            ClassifyError::NotALine => "NotALine",
            ClassifyError::NotAPlane => "NotAPlane",
            ClassifyError::DependentForms => "DependentForms",
            ClassifyError::NotRankOne => "NotRankOne",
            ClassifyError::LabelUnavailableForCharacteristic(_) => {
                "LabelUnavailableForCharacteristic"
            }
            ClassifyError::UnknownLabel(_) => "UnknownLabel",
            // These two are ruled out by the classification theorems: their
            // occurrence is a bug, not a property of the input.
            ClassifyError::NoAdmissibleC | ClassifyError::ParameterSearchFailed => {
                return CliError::internal("InternalInconsistency", e);
            }
            ClassifyError::InternalInconsistency(_) => {
                return CliError::internal("InternalInconsistency", e);
            }
        };
        CliError::user(kind, e)
    }

    fn from_orbit(e: OrbitError) -> CliError {
        match &e {
            OrbitError::ConsistencyViolation(_) => {
                CliError::internal("ConsistencyViolation", e)
            }
            OrbitError::MemoryBoundExceeded(_) => CliError::user("MemoryBoundExceeded", e),
            OrbitError::SearchBudgetExceeded(_) => CliError::user("SearchBudgetExceeded", e),
            OrbitError::DimensionMismatch => CliError::user("DimensionMismatch", e),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version print to stdout and succeed; genuine
            // usage errors are user errors, not internal ones.
            let is_usage_error = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if is_usage_error { EXIT_USER } else { 0 });
        }
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| run(cli)));
    let err = match outcome {
        Ok(Ok(())) => return ExitCode::SUCCESS,
        Ok(Err(err)) => err,
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unexpected panic".to_string());
            CliError::internal("InternalInconsistency", message)
        }
    };
    let doc = json!({
        "schema": SCHEMA_VERSION,
        "error": { "kind": err.kind, "message": err.message },
    });
    eprintln!("{}", render(&doc));
    ExitCode::from(err.code)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Classify { kind, q, input } => cmd_classify(kind, q, &input),
        Command::Rep { label, q } => cmd_rep(&label, q),
        Command::Tables { q, kind } => cmd_tables(q, kind),
        Command::Audit { q, workers, out } => cmd_audit(q, workers, &out),
        Command::Witness { q, left, right } => cmd_witness(q, &left, &right),
    }
}

// ---------------------------------------------------------------------------
// Field construction and element literals
// ---------------------------------------------------------------------------

/// Builds `F_q` from the order alone, rejecting even or non-prime-power q.
fn field_for(q: u16) -> Result<Fq, CliError> {
    if q < 3 || q % 2 == 0 {
        return Err(CliError::user(
            "InvalidOrder",
            format!("q must be an odd prime power, got {q}"),
        ));
    }
    let mut p = q;
    for d in 3..q {
        if d * d > q {
            break;
        }
        if q % d == 0 {
            p = d;
            break;
        }
    }
    let mut e = 0u32;
    let mut m = q;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    if m != 1 {
        return Err(CliError::user(
            "InvalidOrder",
            format!("q must be an odd prime power, got {q} = {p}^{e} * {m}"),
        ));
    }
    Fq::new(p as u32, e).map_err(|err| CliError::user("InvalidOrder", err))
}

fn extension_degree(f: &Fq) -> u32 {
    let p = f.characteristic();
    let mut e = 0;
    let mut m = f.order();
    while m > 1 {
        m /= p;
        e += 1;
    }
    e
}

/// Parses one element literal: an integer (reduced mod p, or mod q over a
/// prime field) or, over an extension field, a coordinate list.
fn parse_elt(f: &Fq, v: &Value, ctx: &str) -> Result<Elt, CliError> {
    let p = f.characteristic() as i64;
    match v {
        Value::Number(_) => {
            let i = v.as_i64().ok_or_else(|| {
                CliError::user("MalformedInput", format!("{ctx}: {v} is not an integer"))
            })?;
            let modulus = if f.order() == f.characteristic() { f.order() as i64 } else { p };
            Ok((i.rem_euclid(modulus)) as Elt)
        }
        Value::Array(items) => {
            let e = extension_degree(f) as usize;
            if items.len() > e {
                return Err(CliError::user(
                    "MalformedInput",
                    format!("{ctx}: coordinate list has {} entries, at most {e} allowed", items.len()),
                ));
            }
            let mut index = 0u32;
            let mut weight = 1u32;
            for (i, item) in items.iter().enumerate() {
                let c = item.as_i64().ok_or_else(|| {
                    CliError::user(
                        "MalformedInput",
                        format!("{ctx}: coordinate {i} is not an integer"),
                    )
                })?;
                index += (c.rem_euclid(p)) as u32 * weight;
                weight *= p as u32;
            }
            Ok(index as Elt)
        }
        other => Err(CliError::user(
            "MalformedInput",
            format!("{ctx}: expected an integer or coordinate list, got {other}"),
        )),
    }
}

/// Renders one element in the same convention `parse_elt` reads.
fn elt_literal(f: &Fq, x: Elt) -> Value {
    let e = extension_degree(f);
    if e == 1 {
        return json!(x);
    }
    let p = f.characteristic();
    let mut coords = Vec::with_capacity(e as usize);
    let mut v = x;
    for _ in 0..e {
        coords.push(v % p);
        v /= p;
    }
    json!(coords)
}

fn vec6_literal(f: &Fq, row: &[Elt; 6]) -> Value {
    Value::Array(row.iter().map(|&x| elt_literal(f, x)).collect())
}

fn rows_literal(f: &Fq, rows: &[[Elt; 6]]) -> Value {
    Value::Array(rows.iter().map(|r| vec6_literal(f, r)).collect())
}

fn literal_string(f: &Fq, x: Elt) -> String {
    elt_literal(f, x).to_string()
}

fn parse_vec6(f: &Fq, row: &[Value], ctx: &str) -> Result<[Elt; 6], CliError> {
    if row.len() != 6 {
        return Err(CliError::user(
            "MalformedInput",
            format!("{ctx}: expected 6 entries, got {}", row.len()),
        ));
    }
    let mut out = [0 as Elt; 6];
    for (i, v) in row.iter().enumerate() {
        out[i] = parse_elt(f, v, &format!("{ctx}[{i}]"))?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Input documents
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NetInputDocument {
    q: u16,
    forms: Vec<Vec<Value>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FlatInputDocument {
    q: u16,
    rows: Vec<Vec<Value>>,
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::user("Io", format!("reading stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path)
            .map_err(|e| CliError::user("Io", format!("reading {path}: {e}")))
    }
}

fn parse_json<'a, T: Deserialize<'a>>(raw: &'a str) -> Result<T, CliError> {
    serde_json::from_str(raw).map_err(|e| CliError::user("MalformedInput", e))
}

fn ensure_q_matches(doc_q: u16, cli_q: u16) -> Result<(), CliError> {
    if doc_q != cli_q {
        return Err(CliError::user(
            "MalformedInput",
            format!("document has q = {doc_q} but --q {cli_q} was given"),
        ));
    }
    Ok(())
}

/// Reads a flat document and spans its rows, requiring them independent.
fn load_flat(f: &Fq, cli_q: u16, raw: &str, ctx: &str) -> Result<Subspace<6>, CliError> {
    let doc: FlatInputDocument = parse_json(raw)?;
    ensure_q_matches(doc.q, cli_q)?;
    if doc.rows.is_empty() || doc.rows.len() > 5 {
        return Err(CliError::user(
            "MalformedInput",
            format!("{ctx}: expected between 1 and 5 rows, got {}", doc.rows.len()),
        ));
    }
    let mut rows = Vec::with_capacity(doc.rows.len());
    for (i, r) in doc.rows.iter().enumerate() {
        rows.push(parse_vec6(f, r, &format!("{ctx}.rows[{i}]"))?);
    }
    let flat = Subspace::span(f, &rows)
        .map_err(|e| CliError::user("MalformedInput", format!("{ctx}: {e}")))?;
    if flat.dim() + 1 != rows.len() {
        return Err(CliError::user(
            "DependentRows",
            format!(
                "{ctx}: the {} rows only span a flat of projective dimension {}",
                rows.len(),
                flat.dim()
            ),
        ));
    }
    Ok(flat)
}

// ---------------------------------------------------------------------------
// Output documents
// ---------------------------------------------------------------------------

fn render(doc: &Value) -> String {
    serde_json::to_string(doc).expect("result documents serialize")
}

fn result_document(
    label: &str,
    distribution: [u32; 4],
    trace: Vec<String>,
    representative: Value,
    parameters: Option<Value>,
    warnings: Vec<String>,
) -> Value {
    let mut doc = json!({
        "schema": SCHEMA_VERSION,
        "label": label,
        "distribution": distribution,
        "trace": trace,
        "representative": representative,
        "warnings": warnings,
    });
    if let Some(params) = parameters {
        doc.as_object_mut()
            .expect("document is an object")
            .insert("parameters".to_string(), params);
    }
    doc
}

/// Folds a classification report into trace lines (the cubic summary, when
/// one was computed, is part of the evidence).
fn report_trace(report: &ClassifyReport) -> Vec<String> {
    let mut trace = report.trace.clone();
    if let Some(cubic) = &report.cubic_summary {
        trace.push(format!("determinantal cubic: {cubic}"));
    }
    trace
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

fn cmd_classify(kind: FlatKind, q: u16, input: &str) -> Result<(), CliError> {
    let f = field_for(q)?;
    let raw = read_input(input)?;
    let doc = match kind {
        FlatKind::Net => {
            let net_doc: NetInputDocument = parse_json(&raw)?;
            ensure_q_matches(net_doc.q, q)?;
            if net_doc.forms.len() != 3 {
                return Err(CliError::user(
                    "MalformedInput",
                    format!("a net needs exactly 3 forms, got {}", net_doc.forms.len()),
                ));
            }
            let mut forms = [[0 as Elt; 6]; 3];
            for (i, row) in net_doc.forms.iter().enumerate() {
                forms[i] = parse_vec6(&f, row, &format!("forms[{i}]"))?;
            }
            let net = Net { forms };
            let (label, report) =
                classify_net_report(&f, &net).map_err(CliError::from_classify)?;
            result_document(
                &label.to_string(),
                report.distribution.as_array(),
                report_trace(&report),
                rows_literal(&f, &forms),
                None,
                vec![],
            )
        }
        FlatKind::Plane => {
            let plane = load_flat(&f, q, &raw, "plane")?;
            if plane.dim() != 2 {
                return Err(CliError::user(
                    "NotAPlane",
                    format!("rows span a flat of projective dimension {}", plane.dim()),
                ));
            }
            let (outcome, report) =
                classify_plane_report(&f, &plane).map_err(CliError::from_classify)?;
            result_document(
                &outcome.to_string(),
                report.distribution.as_array(),
                report_trace(&report),
                rows_literal(&f, plane.rows()),
                None,
                vec![],
            )
        }
        FlatKind::Line => {
            let line = load_flat(&f, q, &raw, "line")?;
            if line.dim() != 1 {
                return Err(CliError::user(
                    "NotALine",
                    format!("rows span a flat of projective dimension {}", line.dim()),
                ));
            }
            let (label, report) =
                classify_line_report(&f, &line).map_err(CliError::from_classify)?;
            result_document(
                &label.to_string(),
                report.distribution.as_array(),
                report_trace(&report),
                rows_literal(&f, line.rows()),
                None,
                vec![],
            )
        }
    };
    println!("{}", render(&doc));
    Ok(())
}

// ---------------------------------------------------------------------------
// rep
// ---------------------------------------------------------------------------

fn cmd_rep(label: &str, q: u16) -> Result<(), CliError> {
    let f = field_for(q)?;
    let (name, flat, params) = if let Ok(pl) = label.parse::<PlaneOrbitLabel>() {
        let flat = plane_representative(&f, pl).map_err(CliError::from_classify)?;
        (pl.to_string(), flat, plane_parameters(&f, pl)?)
    } else if let Ok(ll) = label.parse::<LineOrbitLabel>() {
        let flat = line_representative(&f, ll).map_err(CliError::from_classify)?;
        (ll.to_string(), flat, line_parameters(&f, ll)?)
    } else {
        return Err(CliError::user(
            "UnknownLabel",
            format!("{label:?} names neither a plane orbit nor a line orbit"),
        ));
    };
    let dist = distribution(&f, &flat);
    let mut trace: Vec<String> = params
        .iter()
        .map(|(n, x)| format!("parameter {n} = {}", literal_string(&f, *x)))
        .collect();
    trace.push(format!(
        "distribution of the representative over F_{q}: {:?}",
        dist.as_array()
    ));
    let params_obj = Value::Object(
        params
            .iter()
            .map(|(n, x)| (n.to_string(), elt_literal(&f, *x)))
            .collect(),
    );
    let doc = result_document(
        &name,
        dist.as_array(),
        trace,
        rows_literal(&f, flat.rows()),
        Some(params_obj),
        vec![],
    );
    println!("{}", render(&doc));
    Ok(())
}

/// The field parameters behind a plane representative, by name.
fn plane_parameters(f: &Fq, label: PlaneOrbitLabel) -> Result<Vec<(&'static str, Elt)>, CliError> {
    Ok(match label {
        PlaneOrbitLabel::Sigma6 | PlaneOrbitLabel::Sigma10 | PlaneOrbitLabel::Sigma13 => {
            vec![("epsilon", f.canonical_nonsquare())]
        }
        PlaneOrbitLabel::Sigma14 => {
            vec![("c", sigma14_admissible_c(f).map_err(CliError::from_classify)?)]
        }
        _ => vec![],
    })
}

/// The field parameters behind a line representative, by name.
fn line_parameters(f: &Fq, label: LineOrbitLabel) -> Result<Vec<(&'static str, Elt)>, CliError> {
    Ok(match label {
        LineOrbitLabel::O8_2 | LineOrbitLabel::O13_2 | LineOrbitLabel::O14_2 => {
            vec![("epsilon", f.canonical_nonsquare())]
        }
        LineOrbitLabel::O10 => {
            let (u, v) = o10_parameters(f).map_err(CliError::from_classify)?;
            vec![("u", u), ("v", v)]
        }
        LineOrbitLabel::O15_1 => {
            let (u, v) = o15_parameters(f, true).map_err(CliError::from_classify)?;
            vec![("u", u), ("v", v)]
        }
        LineOrbitLabel::O15_2 => {
            let (u, v) = o15_parameters(f, false).map_err(CliError::from_classify)?;
            vec![("u", u), ("v", v)]
        }
        LineOrbitLabel::O17 => {
            let (u, v, w) = o17_parameters(f).map_err(CliError::from_classify)?;
            vec![("u", u), ("v", v), ("w", w)]
        }
        _ => vec![],
    })
}

// ---------------------------------------------------------------------------
// tables
// ---------------------------------------------------------------------------

fn cmd_tables(q: u16, kind: TableKind) -> Result<(), CliError> {
    let f = field_for(q)?;
    let mut csv =
        String::from("label,n1,n2,n3,n4,expected_n1,expected_n2,expected_n3,expected_n4,consistent\n");
    let mut consistent = true;
    match kind {
        TableKind::PlaneDistributions => {
            for label in ALL_PLANE_LABELS {
                if !label.available_for(q) {
                    continue;
                }
                let rep = plane_representative(&f, label).map_err(|e| {
                    CliError::internal("InternalInconsistency", format!("representative of {label}: {e}"))
                })?;
                let d = distribution(&f, &rep).as_array();
                let e = expected_plane_distribution(label, q)
                    .map_err(|e| CliError::internal("InternalInconsistency", e))?
                    .as_array();
                consistent &= push_table_row(&mut csv, &label.to_string(), d, e);
            }
        }
        TableKind::LineDistributions => {
            for label in ALL_LINE_LABELS {
                let rep = line_representative(&f, label).map_err(|e| {
                    CliError::internal("InternalInconsistency", format!("representative of {label}: {e}"))
                })?;
                let d = distribution(&f, &rep).as_array();
                let e = expected_line_distribution(label, q).as_array();
                consistent &= push_table_row(&mut csv, &label.to_string(), d, e);
            }
        }
    }
    print!("{csv}");
    if consistent {
        Ok(())
    } else {
        Err(CliError::internal(
            "ConsistencyViolation",
            "a computed distribution deviates from its closed form",
        ))
    }
}

fn push_table_row(csv: &mut String, label: &str, d: [u32; 4], e: [u32; 4]) -> bool {
    let ok = d == e;
    writeln!(
        csv,
        "{},{},{},{},{},{},{},{},{},{}",
        csv_field(label),
        d[0],
        d[1],
        d[2],
        d[3],
        e[0],
        e[1],
        e[2],
        e[3],
        ok
    )
    .expect("writing to a String cannot fail");
    ok
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

fn cmd_audit(q: u16, workers: usize, out: &Path) -> Result<(), CliError> {
    let f = field_for(q)?;
    if q > MAX_AUDIT_ORDER {
        return Err(CliError::user(
            "SearchBudgetExceeded",
            format!("audits support q <= {MAX_AUDIT_ORDER}, got {q}"),
        ));
    }
    let workers = workers.max(1);
    let started = Instant::now();
    let mut reports = Vec::new();
    if q <= MAX_FLAT_AUDIT_ORDER {
        reports.push(audit_planes(&f, workers).map_err(CliError::from_orbit)?);
        reports.push(audit_lines(&f, workers).map_err(CliError::from_orbit)?);
    }
    reports.push(audit_points(&f).map_err(CliError::from_orbit)?);
    reports.push(audit_conic(&f).map_err(CliError::from_orbit)?);

    println!("audit at q = {q}");
    let mut failures = Vec::new();
    for report in &reports {
        let path = kind_path(out, &report.kind);
        fs::write(&path, report.to_csv())
            .map_err(|e| CliError::user("Io", format!("writing {}: {e}", path.display())))?;
        summarize(report, &path);
        if let Err(e) = report.ensure_consistent() {
            failures.push(e.to_string());
        }
    }
    eprintln!("audit finished in {} ms", started.elapsed().as_millis());
    if failures.is_empty() {
        println!("all audits pass");
        Ok(())
    } else {
        println!("AUDIT FAILED");
        Err(CliError::internal("ConsistencyViolation", failures.join("; ")))
    }
}

/// `report.csv` with kind `planes` becomes `report.planes.csv`.
fn kind_path(base: &Path, kind: &str) -> PathBuf {
    base.with_extension(format!("{kind}.csv"))
}

fn summarize(report: &AuditReport, path: &Path) {
    let verdict = if report.violations.is_empty() { "pass" } else { "FAIL" };
    println!(
        "{}: scanned {}, {} labels, {} outside the family, {} -> {}",
        report.kind,
        report.total_scanned,
        report.rows.len(),
        report.outside_family,
        verdict,
        path.display()
    );
    for v in &report.violations {
        println!("  violation: {v}");
    }
}

// ---------------------------------------------------------------------------
// witness
// ---------------------------------------------------------------------------

fn cmd_witness(q: u16, left: &Path, right: &Path) -> Result<(), CliError> {
    let f = field_for(q)?;
    let left_raw = read_input(&left.display().to_string())?;
    let right_raw = read_input(&right.display().to_string())?;
    let l = load_flat(&f, q, &left_raw, "left")?;
    let r = load_flat(&f, q, &right_raw, "right")?;
    let witness = find_witness(&f, &l, &r).map_err(CliError::from_orbit)?;
    let doc = match witness {
        Some(g) => {
            if act_subspace_unchecked(&f, g.matrix(), &l) != r {
                return Err(CliError::internal(
                    "InternalInconsistency",
                    "the found witness does not map the left flat onto the right",
                ));
            }
            let rows: Vec<Value> = g
                .matrix()
                .iter()
                .map(|row| Value::Array(row.iter().map(|&x| elt_literal(&f, x)).collect()))
                .collect();
            json!({ "schema": SCHEMA_VERSION, "witness": rows })
        }
        None => json!({ "schema": SCHEMA_VERSION, "witness": null }),
    };
    println!("{}", render(&doc));
    Ok(())
}
