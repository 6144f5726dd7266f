//! Command-line front end.
//!
//! Verbs: `sigma` and `treks` work on one covariance entry `(i, j)`;
//! `det`, `flows`, `trek-sep`, `verify`, and `oracle-check` work on
//! ordered vertex lists `A` and `B` (given as repeated `--A`/`--B`
//! values, whose order fixes the sign convention). Graphs are read from
//! the line-oriented text format of [`crate::graph::MixedGraph::parse`].
//!
//! Every verb prints either human-readable text or, with
//! `--format structured`, a single JSON record. All enumeration orders
//! are canonical, so output is byte-identical across runs.
//!
//! Exit codes: 0 for success (including SEPARATED / PASS / clean
//! verification), 1 for a negative verdict (NOT-SEPARATED, FAIL, or
//! verification violations), 2 for command-line usage errors, 3 for
//! input or graph errors.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::determinant::{
    det_mixed, det_mixed_polynomials, trek_separated, verify_positivity, verify_power_of_two,
    DetError, DetExpansion, VerifyReport,
};
use crate::flows::{
    enumerate_flows, flow_monomial, flow_sign, FlowCycle, FlowError, FlowPath,
    SelfAvoidingFlow,
};
use crate::graph::{bidirected_subdivision, DiGraph, GraphError, MixedGraph};
use crate::oracle::{oracle_compare, OracleError};
use crate::poly::{Monomial, PolyError, Polynomial, TermRecord, VarPow};
use crate::treks::{
    enumerate_treks, exhaustive_degree, sigma_entry_collapsed, sigma_entry_truncated,
    trek_monomial, Trek, TrekError,
};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Domain(String),
}

macro_rules! domain_error {
    ($($ty:ty),*) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> CliError {
                CliError::Domain(e.to_string())
            }
        })*
    };
}

domain_error!(GraphError, PolyError, TrekError, FlowError, DetError, OracleError);

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::Domain(format!("serialization failed: {e}"))
    }
}

#[derive(Parser)]
#[command(
    name = "trekdet",
    version,
    about = "Cancellation-free determinant expansions for mixed-graph covariance models",
    after_help = "The order of repeated --A/--B values is the ordering of the vertex sets \
                  and fixes the sign convention of every expansion."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand one covariance entry as a sum over treks.
    Sigma(EntryArgs),
    /// Expand det Sigma[A, B] into cancellation-free monomial classes.
    Det(SetArgs),
    /// List the treks between two vertices.
    Treks(EntryArgs),
    /// List the self-avoiding flows from A to B on the subdivided graph.
    Flows(SetArgs),
    /// Decide whether A and B are trek-separated (det Sigma[A, B] == 0).
    #[command(name = "trek-sep")]
    TrekSep(SetArgs),
    /// Check sign uniformity and class sizes over all trek-flow classes.
    Verify(SetArgs),
    /// Compare the expansion of det Sigma[A, B] against the symbolic oracle.
    #[command(name = "oracle-check")]
    OracleCheck(SetArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
struct EntryArgs {
    /// Path to the graph description file.
    graph: std::path::PathBuf,
    /// Initial vertex of the entry.
    #[arg(long)]
    i: u32,
    /// Final vertex of the entry.
    #[arg(long)]
    j: u32,
    /// Truncation bound on directed-edge uses (default: 2 * |V|; ignored
    /// by `sigma` on acyclic graphs, whose expansion is exact).
    #[arg(long = "max-degree")]
    max_degree: Option<u32>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct SetArgs {
    /// Path to the graph description file.
    graph: std::path::PathBuf,
    /// Ordered source vertex list (one vertex per flag; a bare --A names
    /// the empty set).
    #[arg(long = "A", num_args = 0..=1, required = true)]
    a: Vec<u32>,
    /// Ordered target vertex list (one vertex per flag; a bare --B names
    /// the empty set).
    #[arg(long = "B", num_args = 0..=1, required = true)]
    b: Vec<u32>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

/// Parse and execute a command line; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            3
        }
    }
}

fn load_graph(path: &std::path::Path) -> Result<MixedGraph, CliError> {
    let text = std::fs::read_to_string(path)?;
    Ok(MixedGraph::parse(&text)?)
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Sigma(args) => cmd_sigma(args, out),
        Command::Det(args) => cmd_det(args, out),
        Command::Treks(args) => cmd_treks(args, out),
        Command::Flows(args) => cmd_flows(args, out),
        Command::TrekSep(args) => cmd_trek_sep(args, out),
        Command::Verify(args) => cmd_verify(args, out),
        Command::OracleCheck(args) => cmd_oracle_check(args, out),
    }
}

fn monomial_records(m: &Monomial) -> Vec<VarPow> {
    m.factors().map(|(v, e)| VarPow { var: v.to_string(), exp: e }).collect()
}

fn default_degree(g: &MixedGraph) -> u32 {
    2 * g.vertices().len() as u32
}

fn sign_str(sign: i8) -> &'static str {
    if sign >= 0 {
        "+1"
    } else {
        "-1"
    }
}

#[derive(Serialize)]
struct SigmaClassRecord {
    coefficient: i64,
    monomial: Vec<VarPow>,
    left: Vec<u32>,
    right: Vec<u32>,
}

#[derive(Serialize)]
struct SigmaOutput {
    command: &'static str,
    i: u32,
    j: u32,
    acyclic: bool,
    exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_degree: Option<u32>,
    terms: Vec<TermRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classes: Option<Vec<SigmaClassRecord>>,
}

fn cmd_sigma(args: EntryArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = load_graph(&args.graph)?;
    let acyclic = g.is_acyclic();
    let exact = acyclic && args.max_degree.is_none();
    let (poly, classes, max_degree) = if exact {
        let collapsed = sigma_entry_collapsed(&g, args.i, args.j)?;
        let mut poly = Polynomial::zero();
        for (rep, coeff) in &collapsed {
            poly = poly.add(&Polynomial::term(trek_monomial(rep), *coeff))?;
        }
        (poly, Some(collapsed), None)
    } else {
        let d = args.max_degree.unwrap_or_else(|| default_degree(&g));
        (sigma_entry_truncated(&g, args.i, args.j, d)?, None, Some(d))
    };
    match args.format {
        Format::Text => {
            writeln!(out, "acyclic: {acyclic}")?;
            match max_degree {
                None => writeln!(out, "exact: true")?,
                Some(d) => writeln!(out, "max-degree: {d}")?,
            }
            writeln!(out, "sigma[{},{}] = {}", args.i, args.j, poly.canonical_string())?;
            if let Some(classes) = &classes {
                writeln!(out, "classes: {}", classes.len())?;
                for (rep, coeff) in classes {
                    writeln!(out, "  [{coeff}] {} via {rep}", trek_monomial(rep))?;
                }
            }
        }
        Format::Structured => {
            let record = SigmaOutput {
                command: "sigma",
                i: args.i,
                j: args.j,
                acyclic,
                exact,
                max_degree,
                terms: poly.to_records(),
                classes: classes.map(|cs| {
                    cs.iter()
                        .map(|(rep, coeff)| SigmaClassRecord {
                            coefficient: *coeff,
                            monomial: monomial_records(&trek_monomial(rep)),
                            left: rep.left().vertices(),
                            right: rep.right().vertices(),
                        })
                        .collect()
                }),
            };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct ClassRecord {
    sign: i8,
    ud_count: u32,
    monomial: Vec<VarPow>,
}

#[derive(Serialize)]
struct DetOutput {
    command: &'static str,
    acyclic: bool,
    is_zero: bool,
    numerator_classes: Vec<ClassRecord>,
    denominator_classes: Vec<ClassRecord>,
    /// Numerator in the original mixed-graph variables; present only when
    /// the graph has bidirected edges (otherwise it equals the classes).
    #[serde(skip_serializing_if = "Option::is_none")]
    substituted_numerator: Option<Vec<TermRecord>>,
}

fn class_records(e: &DetExpansion) -> Vec<ClassRecord> {
    e.classes()
        .iter()
        .map(|c| ClassRecord {
            sign: c.sign,
            ud_count: c.ud_count,
            monomial: monomial_records(&c.monomial),
        })
        .collect()
}

fn write_expansion(
    out: &mut dyn Write,
    label: &str,
    e: &DetExpansion,
) -> Result<(), CliError> {
    writeln!(out, "{label}: {}", e.to_polynomial()?.canonical_string())?;
    for c in e.classes() {
        writeln!(out, "  [{} * 2^{}] {}", sign_str(c.sign), c.ud_count, c.monomial)?;
    }
    Ok(())
}

fn cmd_det(args: SetArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = load_graph(&args.graph)?;
    let (num, den) = det_mixed(&g, &args.a, &args.b)?;
    let has_bidirected = g.bidirected_edges().next().is_some();
    let substituted = if has_bidirected {
        Some(det_mixed_polynomials(&g, &args.a, &args.b)?.0)
    } else {
        None
    };
    match args.format {
        Format::Text => {
            writeln!(out, "acyclic: {}", g.is_acyclic())?;
            writeln!(out, "zero: {}", num.is_zero())?;
            write_expansion(out, "num", &num)?;
            write_expansion(out, "den", &den)?;
            if let Some(p) = &substituted {
                writeln!(out, "substituted num: {}", p.canonical_string())?;
            }
        }
        Format::Structured => {
            let record = DetOutput {
                command: "det",
                acyclic: g.is_acyclic(),
                is_zero: num.is_zero(),
                numerator_classes: class_records(&num),
                denominator_classes: class_records(&den),
                substituted_numerator: substituted.as_ref().map(|p| p.to_records()),
            };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct TrekRecord {
    left: Vec<u32>,
    right: Vec<u32>,
    bridging: bool,
    monomial: Vec<VarPow>,
}

#[derive(Serialize)]
struct TreksOutput {
    command: &'static str,
    i: u32,
    j: u32,
    max_degree: u32,
    count: usize,
    treks: Vec<TrekRecord>,
}

fn cmd_treks(args: EntryArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = load_graph(&args.graph)?;
    let max_degree = args.max_degree.unwrap_or_else(|| {
        if g.is_acyclic() {
            exhaustive_degree(&g)
        } else {
            default_degree(&g)
        }
    });
    let treks: Vec<Trek> = enumerate_treks(&g, args.i, args.j, max_degree)?;
    match args.format {
        Format::Text => {
            writeln!(out, "max-degree: {max_degree}")?;
            writeln!(out, "treks: {}", treks.len())?;
            for t in &treks {
                writeln!(out, "  {t}  monomial: {}", trek_monomial(t))?;
            }
        }
        Format::Structured => {
            let record = TreksOutput {
                command: "treks",
                i: args.i,
                j: args.j,
                max_degree,
                count: treks.len(),
                treks: treks
                    .iter()
                    .map(|t| TrekRecord {
                        left: t.left().vertices(),
                        right: t.right().vertices(),
                        bridging: t.bridging(),
                        monomial: monomial_records(&trek_monomial(t)),
                    })
                    .collect(),
            };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct FlowRecord {
    paths: Vec<Vec<String>>,
    cycles: Vec<Vec<String>>,
    sign: i8,
    monomial: Vec<VarPow>,
}

#[derive(Serialize)]
struct FlowsOutput {
    command: &'static str,
    count: usize,
    flows: Vec<FlowRecord>,
}

fn path_names(g: &DiGraph, p: &FlowPath) -> Vec<String> {
    p.vertices().iter().map(|&v| g.name(v).to_string()).collect()
}

fn cycle_names(g: &DiGraph, c: &FlowCycle) -> Vec<String> {
    c.vertices().iter().map(|&v| g.name(v).to_string()).collect()
}

fn render_flow(g: &DiGraph, f: &SelfAvoidingFlow) -> String {
    let paths: Vec<String> = f.paths().iter().map(|p| path_names(g, p).join("->")).collect();
    let cycles: Vec<String> = f
        .cycles()
        .iter()
        .map(|c| {
            let mut names = cycle_names(g, c);
            names.push(names[0].clone());
            names.join("->")
        })
        .collect();
    format!("paths=[{}] cycles=[{}]", paths.join(", "), cycles.join(", "))
}

fn cmd_flows(args: SetArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = load_graph(&args.graph)?;
    let sub = bidirected_subdivision(&g);
    let a = sub.node_indices(&args.a)?;
    let b = sub.node_indices(&args.b)?;
    let flows = enumerate_flows(&sub, &a, &b)?;
    match args.format {
        Format::Text => {
            writeln!(out, "flows: {}", flows.len())?;
            for f in &flows {
                let sign = flow_sign(f, &a, &b)?;
                writeln!(
                    out,
                    "  sign={} monomial={} {}",
                    sign_str(sign),
                    flow_monomial(f, &sub),
                    render_flow(&sub, f)
                )?;
            }
        }
        Format::Structured => {
            let mut records = Vec::with_capacity(flows.len());
            for f in &flows {
                records.push(FlowRecord {
                    paths: f.paths().iter().map(|p| path_names(&sub, p)).collect(),
                    cycles: f.cycles().iter().map(|c| cycle_names(&sub, c)).collect(),
                    sign: flow_sign(f, &a, &b)?,
                    monomial: monomial_records(&flow_monomial(f, &sub)),
                });
            }
            let record =
                FlowsOutput { command: "flows", count: records.len(), flows: records };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct TrekSepOutput {
    command: &'static str,
    separated: bool,
}

fn cmd_trek_sep(args: SetArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = load_graph(&args.graph)?;
    let separated = trek_separated(&g, &args.a, &args.b)?;
    match args.format {
        Format::Text => {
            writeln!(out, "{}", if separated { "SEPARATED" } else { "NOT-SEPARATED" })?;
        }
        Format::Structured => {
            let record = TrekSepOutput { command: "trek-sep", separated };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        }
    }
    Ok(if separated { 0 } else { 1 })
}

#[derive(Serialize)]
struct VerifyOutput {
    command: &'static str,
    classes_checked: usize,
    positivity_ok: bool,
    power_of_two_ok: bool,
    violations: Vec<String>,
}

fn report_violations(kind: &str, r: &VerifyReport) -> Vec<String> {
    r.violations
        .iter()
        .map(|v| format!("{kind}: monomial={} {}", v.monomial, v.detail))
        .collect()
}

fn cmd_verify(args: SetArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = load_graph(&args.graph)?;
    let sub = bidirected_subdivision(&g);
    let a = sub.node_indices(&args.a)?;
    let b = sub.node_indices(&args.b)?;
    let pos = verify_positivity(&sub, &a, &b)?;
    let pot = verify_power_of_two(&sub, &a, &b)?;
    let mut violations = report_violations("positivity", &pos);
    violations.extend(report_violations("power-of-two", &pot));
    let ok = pos.ok() && pot.ok();
    match args.format {
        Format::Text => {
            writeln!(
                out,
                "positivity: {} (classes: {})",
                if pos.ok() { "OK" } else { "FAIL" },
                pos.classes_checked
            )?;
            writeln!(
                out,
                "power-of-two: {} (classes: {})",
                if pot.ok() { "OK" } else { "FAIL" },
                pot.classes_checked
            )?;
            for v in &violations {
                writeln!(out, "  {v}")?;
            }
        }
        Format::Structured => {
            let record = VerifyOutput {
                command: "verify",
                classes_checked: pos.classes_checked,
                positivity_ok: pos.ok(),
                power_of_two_ok: pot.ok(),
                violations,
            };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        }
    }
    Ok(if ok { 0 } else { 1 })
}

#[derive(Serialize)]
struct OracleCheckOutput {
    command: &'static str,
    matches: bool,
}

fn cmd_oracle_check(args: SetArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let g = load_graph(&args.graph)?;
    let matches = oracle_compare(&g, &args.a, &args.b)?;
    match args.format {
        Format::Text => {
            writeln!(out, "{}", if matches { "PASS" } else { "FAIL" })?;
        }
        Format::Structured => {
            let record = OracleCheckOutput { command: "oracle-check", matches };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        }
    }
    Ok(if matches { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let full: Vec<&str> = std::iter::once("trekdet").chain(args.iter().copied()).collect();
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn write_graph(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path.to_string_lossy().into_owned()
    }

    #[test]
    fn det_text_output_for_single_edge() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_graph(&dir, "g.txt", "node 1\nnode 2\ndedge 1 2\n");
        let (code, out, err) = run_cli(&["det", &path, "--A", "1", "--B", "2"]);
        assert_eq!(code, 0, "stderr: {err}");
        let expect = "acyclic: true\nzero: false\nnum: w_1_1*l_1_2\n  [+1 * 2^0] w_1_1*l_1_2\nden: 1\n  [+1 * 2^0] 1\n";
        assert_eq!(out, expect);
    }

    #[test]
    fn usage_error_exits_two() {
        let (code, _, err) = run_cli(&["det"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
    }

    #[test]
    fn set_flags_take_one_vertex_each() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_graph(&dir, "g.txt", "node 1\nnode 2\ndedge 1 2\n");
        // Flags may precede the graph path without swallowing it.
        let (code, out, err) = run_cli(&["det", "--A", "1", "--B", "2", &path]);
        assert_eq!(code, 0, "stderr: {err}");
        assert!(out.contains("num: w_1_1*l_1_2"));
        // Each occurrence carries at most one vertex.
        let (code, _, _) = run_cli(&["det", &path, "--A", "1", "2", "--B", "1"]);
        assert_eq!(code, 2);
        // A bare flag names the empty set: det of the empty minor is
        // num = den = 1.
        let (code, out, err) = run_cli(&["det", &path, "--A", "--B"]);
        assert_eq!(code, 0, "stderr: {err}");
        assert!(out.starts_with("acyclic: true\nzero: false\nnum: 1\n"));
    }

    #[test]
    fn missing_file_exits_three() {
        let (code, _, err) = run_cli(&["det", "/nonexistent/g.txt", "--A", "1", "--B", "1"]);
        assert_eq!(code, 3);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn bad_graph_exits_three() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_graph(&dir, "g.txt", "node 1\ndedge 1 1\n");
        let (code, _, err) = run_cli(&["det", &path, "--A", "1", "--B", "1"]);
        assert_eq!(code, 3);
        assert!(err.contains("loop"));
    }

    #[test]
    fn trek_sep_exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let sep = write_graph(&dir, "sep.txt", "node 1\nnode 2\n");
        let (code, out, _) = run_cli(&["trek-sep", &sep, "--A", "1", "--B", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out, "SEPARATED\n");
        let conn = write_graph(&dir, "conn.txt", "node 1\nnode 2\ndedge 1 2\n");
        let (code2, out2, _) = run_cli(&["trek-sep", &conn, "--A", "1", "--B", "2"]);
        assert_eq!(code2, 1);
        assert_eq!(out2, "NOT-SEPARATED\n");
    }

    #[test]
    fn oracle_check_passes_on_two_cycle() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_graph(&dir, "c.txt", "node 1\nnode 2\ndedge 1 2\ndedge 2 1\n");
        let (code, out, err) = run_cli(&["oracle-check", &path, "--A", "1", "--B", "1"]);
        assert_eq!(code, 0, "stderr: {err}");
        assert_eq!(out, "PASS\n");
    }

    #[test]
    fn sigma_collapsed_text() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_graph(&dir, "g.txt", "node 1\nnode 2\ndedge 1 2\n");
        let (code, out, _) = run_cli(&["sigma", &path, "--i", "2", "--j", "2"]);
        assert_eq!(code, 0);
        let expect = "acyclic: true\nexact: true\nsigma[2,2] = w_2_2 + w_1_1*l_1_2^2\nclasses: 2\n  [1] w_2_2 via (2, 2)\n  [1] w_1_1*l_1_2^2 via (1->2, 1->2)\n";
        assert_eq!(out, expect);
    }

    #[test]
    fn structured_outputs_are_valid_json() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_graph(&dir, "c.txt", "node 1\nnode 2\ndedge 1 2\ndedge 2 1\n");
        for args in [
            vec!["sigma", &path, "--i", "1", "--j", "1", "--format", "structured"],
            vec!["det", &path, "--A", "1", "--B", "1", "--format", "structured"],
            vec!["treks", &path, "--i", "1", "--j", "1", "--format", "structured"],
            vec!["flows", &path, "--A", "1", "--B", "1", "--format", "structured"],
            vec!["trek-sep", &path, "--A", "1", "--B", "1", "--format", "structured"],
            vec!["verify", &path, "--A", "1", "--B", "1", "--format", "structured"],
            vec!["oracle-check", &path, "--A", "1", "--B", "1", "--format", "structured"],
        ] {
            let (code, out, err) = run_cli(&args);
            assert!(code == 0 || code == 1, "args {args:?} gave {code}: {err}");
            let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
            assert!(v.get("command").is_some(), "args {args:?}");
        }
    }

    #[test]
    fn structured_det_round_trips_to_canonical_text() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_graph(&dir, "c.txt", "node 1\nnode 2\ndedge 1 2\ndedge 2 1\n");
        let (_, text_out, _) = run_cli(&["det", &path, "--A", "1", "--B", "1"]);
        let (_, json_out, _) =
            run_cli(&["det", &path, "--A", "1", "--B", "1", "--format", "structured"]);
        let v: serde_json::Value = serde_json::from_str(json_out.trim()).unwrap();
        for (key, label) in [("numerator_classes", "num"), ("denominator_classes", "den")] {
            let mut records = Vec::new();
            for c in v[key].as_array().unwrap() {
                let sign = c["sign"].as_i64().unwrap();
                let ud = c["ud_count"].as_u64().unwrap() as u32;
                let monomial: Vec<VarPow> =
                    serde_json::from_value(c["monomial"].clone()).unwrap();
                records.push(TermRecord {
                    coeff: sign * 2i64.pow(ud),
                    monomial,
                });
            }
            let poly = Polynomial::from_records(&records).unwrap();
            let line = format!("{label}: {}", poly.canonical_string());
            assert!(
                text_out.lines().any(|l| l == line),
                "line {line:?} not found in {text_out:?}"
            );
        }
    }

    #[test]
    fn verify_reports_clean_runs() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_graph(&dir, "c.txt", "node 1\nnode 2\ndedge 1 2\ndedge 2 1\n");
        let (code, out, _) = run_cli(&["verify", &path, "--A", "1", "--B", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "positivity: OK (classes: 2)\npower-of-two: OK (classes: 2)\n");
    }

    #[test]
    fn flows_lists_subdivision_objects() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_graph(&dir, "b.txt", "node 1\nnode 2\nbedge 1 2\n");
        let (code, out, _) = run_cli(&["flows", &path, "--A", "1", "--B", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "flows: 1\n  sign=+1 monomial=1 paths=[1] cycles=[]\n");
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_cli(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("trekdet"));
    }

    #[test]
    fn output_is_byte_identical_across_runs() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_graph(
            &dir,
            "m.txt",
            "node 1\nnode 2\nnode 3\ndedge 1 2\ndedge 2 3\ndedge 3 1\nbedge 1 3\n",
        );
        for args in [
            vec!["det", &path, "--A", "1", "--B", "3", "--format", "structured"],
            vec!["sigma", &path, "--i", "1", "--j", "3", "--format", "structured"],
        ] {
            let first = run_cli(&args);
            let second = run_cli(&args);
            assert_eq!(first, second);
        }
    }
}
