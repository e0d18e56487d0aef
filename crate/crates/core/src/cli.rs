// Copyright 2026 The tpic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Command-line front end. [`run`] does all the work and returns the output
//! and exit code; the `tpic` binary only prints them.
//!
//! Exit codes: 0 success, 1 invalid input, 2 unresolved verdict, 3 I/O or
//! file-format error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::constructions::{
    minimal_d4_observable, n_prime_subspace, premise_counterexample, rank_deficit_d4, task_counterexample,
    MinimalD4Kind, TaggedSubspace,
};
use crate::determination::{decide, implication_lattice, minimal_outcome_bounds, Status, TaskPremise, DEFAULT_TRIALS};
use crate::error::Error;
use crate::io;
use crate::observables::{annihilator, observable_from_annihilator, validate, Observable};
use crate::tolerance::Tolerances;
use crate::weyl::{
    covariant_observable, fiducial_with_zero_set, single_point_analysis, smear, two_point_prime_analysis, zero_set,
    PhasePoint, ZeroSet,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_UNRESOLVED: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tpic", version, about = "Rank-restricted informational completeness of quantum observables")]
pub struct Cli {
    /// Override the linear-algebra tolerance family.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Seed for randomized searches; required by commands that sample.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Number of random trials for `check`.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Equivalence classes of (t, p) properties and their implications.
    Classify {
        #[arg(long)]
        dim: usize,
    },
    /// Decide (t, p)-informational completeness of an observable file.
    Check {
        observable: PathBuf,
        #[arg(long = "t")]
        t: usize,
        #[arg(long = "p")]
        p: usize,
    },
    /// Write one of the built-in constructions.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Phase-space tools for covariant observables.
    Weyl {
        #[command(subcommand)]
        cmd: WeylCommand,
    },
    /// Check an observable, subspace, state, zero-set or noise file.
    Validate { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum ConstructKind {
    /// Line spanned by an operator of signature (p1+1, 1).
    PremiseCex {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        p1: usize,
        #[command(flatten)]
        out: SubspaceOut,
    },
    /// Line spanned by an operator of signature (t1+1, t1+1).
    TaskCex {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        t1: usize,
        #[command(flatten)]
        out: SubspaceOut,
    },
    /// Line spanned by diag(1/3, 1/3, 1/3, -1).
    RankDeficitD4 {
        #[command(flatten)]
        out: SubspaceOut,
    },
    /// Five-dimensional subspace N'(R^5) of 4x4 operators.
    Nprime {
        #[command(flatten)]
        out: SubspaceOut,
    },
    /// Minimal observables in dimension four.
    MinimalD4 {
        #[arg(long, value_enum)]
        kind: MinimalKindArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Observable with a prescribed annihilator.
    FromAnnihilator {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args, Debug)]
pub struct SubspaceOut {
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write an observable realizing the subspace as its annihilator.
    #[arg(long)]
    pub as_observable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MinimalKindArg {
    PureVsAll,
    Rank2VsRank2,
    PureVsPureUpper,
}

impl From<MinimalKindArg> for MinimalD4Kind {
    fn from(k: MinimalKindArg) -> Self {
        match k {
            MinimalKindArg::PureVsAll => MinimalD4Kind::PureVsAll,
            MinimalKindArg::Rank2VsRank2 => MinimalD4Kind::Rank2VsRank2,
            MinimalKindArg::PureVsPureUpper => MinimalD4Kind::PureVsPureUpper,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum WeylCommand {
    /// Fiducial state with a prescribed zero set.
    Fiducial {
        #[arg(long)]
        dim: usize,
        /// Semicolon-separated "x,xi" pairs.
        #[arg(long, default_value = "")]
        zeros: String,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Add missing partners -z instead of rejecting.
        #[arg(long)]
        symmetrize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Covariant observable of a state file.
    Covariant {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Zero set of a state file.
    ZeroSet {
        #[arg(long)]
        state: PathBuf,
    },
    /// Smear a state with a noise file.
    Smear {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        noise: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Single self-symmetric zero.
    AnalyzeSingle {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        point: String,
    },
    /// Two-point zero set {z, -z} at odd prime dimension.
    AnalyzePair {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 720)]
        grid: usize,
    },
}

/// Output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        CommandResult { exit_code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(exit_code: i32, message: String) -> Self {
        CommandResult { exit_code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

/// Failure inside a command, carrying its exit code.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Format(_)) { EXIT_IO } else { EXIT_DOMAIN };
        Failure(code, e.to_string())
    }
}

fn domain(msg: impl Into<String>) -> Failure {
    Failure(EXIT_DOMAIN, msg.into())
}

type CmdResult = std::result::Result<CommandResult, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CommandResult::ok(text)
                }
                _ => CommandResult { exit_code: EXIT_DOMAIN, stdout: String::new(), stderr: text },
            };
        }
    };
    match execute(&cli) {
        Ok(r) => r,
        Err(Failure(code, msg)) => CommandResult::fail(code, msg),
    }
}

fn execute(cli: &Cli) -> CmdResult {
    if let Some(tol) = cli.tol {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(domain(format!("--tol must be positive, got {tol}")));
        }
        Tolerances::set_global(Tolerances::DEFAULT.with_base(tol));
    }
    match &cli.command {
        Command::Classify { dim } => cmd_classify(*dim, cli.format),
        Command::Check { observable, t, p } => cmd_check(cli, observable, *t, *p),
        Command::Construct { kind } => cmd_construct(kind, cli.format),
        Command::Weyl { cmd } => cmd_weyl(cmd, cli.format),
        Command::Validate { file } => cmd_validate(file),
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(EXIT_IO, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, format!("{text}\n")).map_err(|e| Failure(EXIT_IO, format!("{}: {e}", path.display())))
}

fn emit(value: &Value) -> String {
    format!("{}\n", io::to_pretty(value))
}

/// Writes `text` to `out` and returns `summary`, or returns `text` itself.
fn deliver(out: &Option<PathBuf>, text: String, mut summary: Value, format: OutputFormat) -> CmdResult {
    match out {
        Some(path) => {
            write(path, &text)?;
            summary["file"] = json!(path.display().to_string());
            Ok(CommandResult::ok(match format {
                OutputFormat::Json => emit(&summary),
                OutputFormat::Text => text_summary(&summary),
            }))
        }
        None => Ok(CommandResult::ok(format!("{text}\n"))),
    }
}

fn text_summary(v: &Value) -> String {
    let mut s = String::new();
    if let Value::Object(map) = v {
        for (k, val) in map {
            let shown = match val {
                Value::String(x) => x.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(s, "{k}: {shown}");
        }
    }
    s
}

fn cmd_classify(dim: usize, format: OutputFormat) -> CmdResult {
    if !(2..=64).contains(&dim) {
        return Err(domain(format!("--dim must be between 2 and 64, got {dim}")));
    }
    let lattice = implication_lattice(dim)?;
    let mut value = serde_json::to_value(io::lattice_to_value(&lattice)).expect("plain data");
    for (class, v) in lattice.classes.iter().zip(value["classes"].as_array_mut().expect("array")) {
        let tp = TaskPremise { t: class.canonical_t, p: class.canonical_p, dim };
        v["min_outcomes"] = serde_json::to_value(minimal_outcome_bounds(tp)).expect("plain data");
    }
    if format == OutputFormat::Json {
        return Ok(CommandResult::ok(emit(&value)));
    }
    let n = lattice.classes.len();
    let width = n.to_string().len().max(2) + 1;
    let mut s = String::new();
    let _ = writeln!(s, "d = {dim}: {n} inequivalent classes");
    let _ = write!(s, "{:>5}", "");
    for p in 1..=dim {
        let _ = write!(s, "{:>w$}", format!("p{p}"), w = width + 1);
    }
    s.push('\n');
    for t in 1..=dim {
        let _ = write!(s, "{:>5}", format!("t{t}"));
        for p in 1..=dim {
            let cell = if p < t {
                String::new()
            } else {
                let k = lattice.class_of(t, p).expect("every pair has a class") + 1;
                format!("[{k}]")
            };
            let _ = write!(s, "{:>w$}", cell, w = width + 1);
        }
        s.push('\n');
    }
    for (k, c) in lattice.classes.iter().enumerate() {
        let members: Vec<String> = c.members.iter().map(|(t, p)| format!("({t},{p})")).collect();
        let ic = if c.is_ic_class { " informationally complete" } else { "" };
        let _ = writeln!(s, "[{}] ({},{}){}: {}", k + 1, c.canonical_t, c.canonical_p, ic, members.join(" "));
    }
    Ok(CommandResult::ok(s))
}

fn cmd_check(cli: &Cli, file: &Path, t: usize, p: usize) -> CmdResult {
    let seed = cli.seed.ok_or_else(|| domain("check samples random elements and requires --seed"))?;
    let obs = io::parse_observable(&read(file)?)?;
    let report = validate(&obs);
    if !report.is_valid() {
        return Err(domain(format!("invalid observable: {report}")));
    }
    let tp = TaskPremise::new(t, p, obs.dim())?;
    let x = annihilator(&obs);
    let verdict = decide(&x, tp, cli.trials.unwrap_or(DEFAULT_TRIALS), seed)?;
    let stdout = match cli.format {
        OutputFormat::Json => format!("{}\n", io::verdict_to_json(&verdict)),
        OutputFormat::Text => {
            let mut s = format!("{} ({}, {} random trials)\n", verdict.status, verdict.method, verdict.trials_used);
            if let Some(w) = &verdict.witness {
                let sig = w.rank_signature();
                let _ = writeln!(s, "witness signature (+{}, -{})", sig.rank_plus, sig.rank_minus);
            }
            s
        }
    };
    let exit_code = if verdict.status == Status::Unresolved { EXIT_UNRESOLVED } else { EXIT_OK };
    Ok(CommandResult { exit_code, stdout, stderr: String::new() })
}

fn observable_summary(kind: &str, obs: &Observable) -> Value {
    json!({
        "kind": kind,
        "outcomes": obs.num_outcomes(),
        "annihilator_dim": annihilator(obs).dim(),
    })
}

fn deliver_subspace(kind: &str, tagged: TaggedSubspace, out: &SubspaceOut, format: OutputFormat) -> CmdResult {
    if out.as_observable {
        let obs = observable_from_annihilator(&tagged.subspace)?;
        let summary = observable_summary(kind, &obs);
        return deliver(&out.out, io::observable_to_json(&obs), summary, format);
    }
    let summary = json!({
        "kind": kind,
        "subspace_dim": tagged.subspace.dim(),
        "provenance": tagged.provenance.tag(),
        "outcomes_of_realization": tagged.subspace.dim_space().pow(2) - tagged.subspace.dim(),
    });
    let text = io::subspace_to_json(&tagged.subspace, Some(tagged.provenance.tag()));
    deliver(&out.out, text, summary, format)
}

fn cmd_construct(kind: &ConstructKind, format: OutputFormat) -> CmdResult {
    match kind {
        ConstructKind::PremiseCex { dim, p1, out } => {
            deliver_subspace("premise-cex", premise_counterexample(*dim, *p1)?, out, format)
        }
        ConstructKind::TaskCex { dim, t1, out } => {
            deliver_subspace("task-cex", task_counterexample(*dim, *t1)?, out, format)
        }
        ConstructKind::RankDeficitD4 { out } => deliver_subspace("rank-deficit-d4", rank_deficit_d4(), out, format),
        ConstructKind::Nprime { out } => deliver_subspace("nprime", n_prime_subspace(), out, format),
        ConstructKind::MinimalD4 { kind, out } => {
            let k = MinimalD4Kind::from(*kind);
            let obs = minimal_d4_observable(k);
            let mut summary = observable_summary("minimal-d4", &obs);
            summary["certified"] = json!(k.is_certified());
            deliver(out, io::observable_to_json(&obs), summary, format)
        }
        ConstructKind::FromAnnihilator { input, out } => {
            let x = io::parse_subspace(&read(input)?)?;
            let obs = observable_from_annihilator(&x)?;
            deliver(out, io::observable_to_json(&obs), observable_summary("from-annihilator", &obs), format)
        }
    }
}

/// Parses `"x,xi"` into a point of `Z_d x Z_d`.
pub fn parse_point(d: usize, text: &str) -> crate::Result<PhasePoint> {
    let bad = || Error::BadZeroSet(format!("expected \"x,xi\", got {text:?}"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let x: i64 = a.trim().parse().map_err(|_| bad())?;
    let xi: i64 = b.trim().parse().map_err(|_| bad())?;
    Ok(PhasePoint::new(d, x, xi))
}

/// Parses the `--zeros` grammar: semicolon-separated `"x,xi"` pairs.
pub fn parse_zero_points(d: usize, text: &str) -> crate::Result<Vec<PhasePoint>> {
    text.split(';').map(str::trim).filter(|s| !s.is_empty()).map(|s| parse_point(d, s)).collect()
}

fn points_value(z: &ZeroSet) -> Value {
    json!(z.points().map(|p| [p.x, p.xi]).collect::<Vec<_>>())
}

fn cmd_weyl(cmd: &WeylCommand, format: OutputFormat) -> CmdResult {
    let zero_tol = Tolerances::global().zero;
    match cmd {
        WeylCommand::Fiducial { dim, zeros, alpha, symmetrize, out } => {
            if *dim < 2 {
                return Err(domain(format!("--dim must be at least 2, got {dim}")));
            }
            let requested = parse_zero_points(*dim, zeros)?;
            let zs = if *symmetrize {
                ZeroSet::symmetrized(*dim, requested.iter().copied())?
            } else {
                ZeroSet::new(*dim, requested.iter().copied())?
            };
            let added: Vec<[usize; 2]> =
                zs.points().filter(|p| !requested.contains(p)).map(|p| [p.x, p.xi]).collect();
            let tau = fiducial_with_zero_set(*dim, &zs, *alpha)?;
            let summary = json!({
                "kind": "fiducial",
                "dim": dim,
                "zero_set": points_value(&zs),
                "added_partners": added,
                "provenance": tau.provenance,
            });
            deliver(out, io::matrix_to_json(tau.tau.matrix()), summary, format)
        }
        WeylCommand::Covariant { state, out } => {
            let tau = io::parse_state(&read(state)?)?;
            let obs = covariant_observable(&tau);
            deliver(out, io::observable_to_json(&obs), observable_summary("covariant", &obs), format)
        }
        WeylCommand::ZeroSet { state } => {
            let tau = io::parse_state(&read(state)?)?;
            let zs = zero_set(&tau, zero_tol)?;
            Ok(CommandResult::ok(match format {
                OutputFormat::Json => format!("{}\n", io::zero_set_to_json(&zs)),
                OutputFormat::Text => {
                    let pts: Vec<String> = zs.points().map(|p| p.to_string()).collect();
                    format!("{} points: {}\n", zs.len(), pts.join(" "))
                }
            }))
        }
        WeylCommand::Smear { state, noise, out } => {
            let tau0 = io::parse_state(&read(state)?)?;
            let mu = io::parse_noise(&read(noise)?)?;
            let tau = smear(&tau0, &mu)?;
            let summary = json!({
                "kind": "smear",
                "dim": tau.dim(),
                "zero_set": points_value(&zero_set(&tau, zero_tol)?),
            });
            deliver(out, io::matrix_to_json(tau.tau.matrix()), summary, format)
        }
        WeylCommand::AnalyzeSingle { dim, point } => {
            let pt = parse_point(*dim, point)?;
            let r = single_point_analysis(*dim, pt)?;
            let summary = format!("certified t <= {}, refuted t >= {}", r.certified_max_t, r.refuted_from_t);
            let mut v = serde_json::to_value(&r).expect("plain data");
            v["summary"] = json!(summary);
            Ok(CommandResult::ok(match format {
                OutputFormat::Json => emit(&v),
                OutputFormat::Text => format!(
                    "d = {}, point {}: generator signature (+{}, -{})\n{summary}\n",
                    r.dim, r.point, r.signature.rank_plus, r.signature.rank_minus
                ),
            }))
        }
        WeylCommand::AnalyzePair { dim, point, grid } => {
            let pt = parse_point(*dim, point)?;
            let r = two_point_prime_analysis(*dim, pt, *grid)?;
            let summary = format!("certified t <= {}, refuted t >= {}", r.certified_max_t, r.refuted_t);
            let mut v = serde_json::to_value(&r).expect("plain data");
            v["summary"] = json!(summary);
            Ok(CommandResult::ok(match format {
                OutputFormat::Json => emit(&v),
                OutputFormat::Text => format!(
                    "d = {}, points {} and {}: min rank_down {} over {} angles\n{summary}\n",
                    r.dim, r.point, r.point.neg(r.dim), r.min_rank_down, r.grid
                ),
            }))
        }
    }
}

fn cmd_validate(file: &Path) -> CmdResult {
    let text = read(file)?;
    let raw: Value = serde_json::from_str(&text).map_err(|e| Failure(EXIT_IO, e.to_string()))?;
    let report = if raw.get("effects").is_some() {
        let obs = io::parse_observable(&text)?;
        let r = validate(&obs);
        json!({
            "kind": "observable",
            "valid": r.is_valid(),
            "dim": obs.dim(),
            "outcomes": obs.num_outcomes(),
            "psd_violations": r.psd_violations.iter().map(|(k, m)| json!({"effect": k, "min_eigenvalue": m})).collect::<Vec<_>>(),
            "completeness_error": r.completeness_error,
        })
    } else if raw.get("basis").is_some() {
        let x = io::parse_subspace(&text)?;
        json!({"kind": "subspace", "valid": true, "dim": x.dim_space(), "subspace_dim": x.dim()})
    } else if raw.get("points").is_some() {
        let z = io::parse_zero_set(&text)?;
        json!({"kind": "zero-set", "valid": true, "dim": z.dim(), "points": z.len()})
    } else if raw.get("weights").is_some() {
        let mu = io::parse_noise(&text)?;
        json!({"kind": "noise", "valid": true, "dim": mu.dim()})
    } else if raw.get("re").is_some() {
        let tau = io::parse_state(&text)?;
        json!({"kind": "state", "valid": true, "dim": tau.dim()})
    } else {
        return Err(Failure(EXIT_IO, "unrecognized file format".into()));
    };
    let exit_code = if report["valid"] == json!(true) { EXIT_OK } else { EXIT_DOMAIN };
    Ok(CommandResult { exit_code, stdout: emit(&report), stderr: String::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CommandResult {
        run(std::iter::once("tpic").chain(args.iter().copied()))
    }

    #[test]
    fn classify_examples() {
        let r = run_args(&["classify", "--dim", "4"]);
        assert_eq!(r.exit_code, 0);
        let v: Value = serde_json::from_str(&r.stdout).unwrap();
        assert_eq!(v["count"], 5);
        let r = run_args(&["classify", "--dim", "2"]);
        let v: Value = serde_json::from_str(&r.stdout).unwrap();
        assert_eq!(v["count"], 1);
        assert_eq!(run_args(&["classify", "--dim", "1"]).exit_code, 1);
        let r = run_args(&["classify", "--dim", "4", "--format", "text"]);
        assert!(r.stdout.starts_with("d = 4: 5 inequivalent classes"));
    }

    #[test]
    fn point_grammar() {
        assert_eq!(parse_point(5, "-1,2").unwrap(), PhasePoint { x: 4, xi: 2 });
        assert_eq!(parse_zero_points(4, "0,1; 0,3").unwrap().len(), 2);
        assert!(parse_zero_points(4, "").unwrap().is_empty());
        assert!(parse_point(4, "1").is_err());
        assert!(parse_point(4, "a,b").is_err());
    }

    #[test]
    fn usage_errors_are_domain_errors() {
        assert_eq!(run_args(&["frobnicate"]).exit_code, 1);
        assert_eq!(run_args(&["--help"]).exit_code, 0);
    }
}
