//! Command-line front end.
//!
//! Each subcommand reads plain-text inputs, writes one output (a text file
//! or a `{manifest, ...}` JSON document) and reports through its exit code:
//! `0` success, `1` search budget exhausted, `2` invalid input.

mod manifest;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::ahp::{synthesize, DecisionSpec, MetricSource};
use crate::bf::text::{parse_truth_table, to_token};
use crate::bf::{classify, moebius_transform, PropertyReport, TruthTable};
use crate::cognate::{filter_ensemble, initial_ensemble, parse_ensemble};
use crate::error::{Error, Result};
use crate::sbox::{build_sbox, sbox_report, SboxReport, SubstitutionTable};
use crate::search::{
    gradient_descent_search, ConstraintSystem, FailureReason, Sampling, SearchConfig,
};

pub use manifest::{InputDigest, RunManifest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SEARCH_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cognate",
    version,
    about = "Form cryptographic Boolean functions from cognate ensembles"
)]
pub struct Cli {
    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Suppress progress notes and warnings on standard error.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report every property of one truth table (JSON).
    Analyze { input: PathBuf },
    /// Build the cognate ensemble of a nominal function and strike it down.
    Ensemble {
        nominal: PathBuf,
        constraints: PathBuf,
        /// Also list rejected members (marked pass=false).
        #[arg(long)]
        all: bool,
    },
    /// Steepest-ascent search for a function meeting the constraints.
    Search(SearchArgs),
    /// Substitution tables.
    #[command(subcommand)]
    Sbox(SboxCommand),
    /// Elect the best alternative by pairwise-comparison hierarchy (JSON).
    Select {
        problem: PathBuf,
        /// Truth-table, ensemble, table or JSON report files.
        #[arg(required = true)]
        alternatives: Vec<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    pub constraints: PathBuf,
    /// Iteration budget per restart.
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    /// Evaluate K random moves per iteration instead of all of them.
    #[arg(long, value_name = "K")]
    pub sample: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum SboxCommand {
    /// Stack component functions into a table (first file = output bit 0).
    Build {
        /// Truth-table or ensemble files; ensembles contribute their accepted members.
        #[arg(required = true)]
        components: Vec<PathBuf>,
        /// Use only the first M collected components.
        #[arg(long, value_name = "M")]
        take: Option<usize>,
    },
    /// Report table-level properties (JSON).
    Analyze { table: PathBuf },
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code; never panics on malformed input.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut ctx = Context {
        quiet: cli.quiet,
        err,
    };
    let result = match &cli.command {
        Command::Analyze { input } => cmd_analyze(input),
        Command::Ensemble {
            nominal,
            constraints,
            all,
        } => cmd_ensemble(&mut ctx, nominal, constraints, *all),
        Command::Search(args) => cmd_search(&cli, &mut ctx, args),
        Command::Sbox(SboxCommand::Build { components, take }) => cmd_sbox_build(components, *take),
        Command::Sbox(SboxCommand::Analyze { table }) => cmd_sbox_analyze(table),
        Command::Select {
            problem,
            alternatives,
        } => cmd_select(&mut ctx, problem, alternatives),
    };
    match result {
        Ok(Output { text, code }) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => out
                    .write_all(text.as_bytes())
                    .map_err(|e| format!("cannot write output: {e}")),
            };
            match written {
                Ok(()) => code,
                Err(msg) => {
                    let _ = writeln!(ctx.err, "error: {msg}");
                    EXIT_INVALID
                }
            }
        }
        Err(msg) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            EXIT_INVALID
        }
    }
}

struct Context<'a> {
    quiet: bool,
    err: &'a mut dyn Write,
}

impl Context<'_> {
    fn note(&mut self, msg: impl std::fmt::Display) {
        if !self.quiet {
            let _ = writeln!(self.err, "{msg}");
        }
    }
}

struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output {
            text,
            code: EXIT_OK,
        }
    }

    fn json(value: &serde_json::Value) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("values serialize");
        text.push('\n');
        Output::ok(text)
    }
}

type CmdResult = std::result::Result<Output, String>;

fn display(path: &Path) -> String {
    path.display().to_string()
}

/// Reads a UTF-8 input and records its digest.
fn read_input(path: &Path, manifest: &mut RunManifest) -> std::result::Result<String, String> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", display(path)))?;
    manifest.record(&display(path), &bytes);
    String::from_utf8(bytes).map_err(|_| format!("{}: not valid UTF-8", display(path)))
}

/// Prefixes library errors with the file they came from.
fn in_file<T>(path: &Path, r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| match e {
        Error::Parse { .. } => format!("{}:{e}", display(path)),
        other => format!("{}: {other}", display(path)),
    })
}

fn cmd_analyze(input: &Path) -> CmdResult {
    let mut manifest = RunManifest::new("analyze", json!({}), None);
    let text = read_input(input, &mut manifest)?;
    let f = in_file(input, parse_truth_table(&text))?;
    let report = classify(&f);
    Ok(Output::json(&json!({
        "manifest": manifest,
        "function": to_token(&f),
        "anf": moebius_transform(&f).to_string(),
        "report": report,
    })))
}

fn cmd_ensemble(ctx: &mut Context, nominal: &Path, constraints: &Path, all: bool) -> CmdResult {
    let mut manifest = RunManifest::new("ensemble", json!({ "all": all }), None);
    let nominal_text = read_input(nominal, &mut manifest)?;
    let constraint_text = read_input(constraints, &mut manifest)?;
    let f = in_file(nominal, parse_truth_table(&nominal_text))?;
    let cs = in_file(
        constraints,
        ConstraintSystem::parse(&constraint_text, Some(f.n())),
    )?;
    let outcome = filter_ensemble(&initial_ensemble(&f), &cs).map_err(|e| e.to_string())?;
    let summary = format!("kept {} of {}", outcome.kept(), outcome.total());
    ctx.note(&summary);
    if outcome.kept() == 0 {
        ctx.note("warning: no member of the ensemble satisfies the constraints");
    }
    Ok(Output::ok(format!(
        "{}{}",
        manifest.to_comment(),
        outcome.export(all)
    )))
}

fn cmd_search(cli: &Cli, ctx: &mut Context, args: &SearchArgs) -> CmdResult {
    let config = SearchConfig {
        seed: cli.seed,
        max_iterations: args.max_iter,
        max_restarts: args.restarts,
        sampling: args.sample.map_or(Sampling::AllMoves, Sampling::Sampled),
    };
    let mut manifest = RunManifest::new(
        "search",
        serde_json::to_value(&config).expect("config serializes"),
        Some(cli.seed),
    );
    let text = read_input(&args.constraints, &mut manifest)?;
    let cs = in_file(&args.constraints, ConstraintSystem::parse(&text, None))?;
    let (status, table, report, detail, code) = match gradient_descent_search(&cs, &config) {
        Ok(o) => (
            "success",
            o.table,
            o.report,
            format!(
                "# restart: {} iterations: {} total_iterations: {}\n",
                o.restart, o.iterations, o.total_iterations
            ),
            EXIT_OK,
        ),
        Err(Error::Search(failure)) => match failure.reason {
            FailureReason::Infeasible(why) => {
                return Err(format!("infeasible constraints: {}", why.join("; ")))
            }
            FailureReason::BudgetExhausted => {
                ctx.note(format!("warning: {failure}"));
                let violations: Vec<String> =
                    failure.violations.iter().map(|v| v.to_string()).collect();
                (
                    "failed",
                    failure.best,
                    failure.report,
                    format!(
                        "# restarts: {} total_iterations: {}\n# violations: {}\n",
                        failure.restarts,
                        failure.total_iterations,
                        violations.join("; ")
                    ),
                    EXIT_SEARCH_FAILED,
                )
            }
        },
        Err(e) => return Err(in_file::<()>(&args.constraints, Err(e)).unwrap_err()),
    };
    let mut out = format!("# status: {status}\n{detail}");
    out.push_str(&format!(
        "# report: {}\n",
        serde_json::to_string(&report).expect("report serializes")
    ));
    out.push_str(&manifest.to_comment());
    out.push_str(&to_token(&table));
    out.push('\n');
    Ok(Output { text: out, code })
}

/// Functions in a truth-table or ensemble file, with their labels.
fn read_functions(
    path: &Path,
    manifest: &mut RunManifest,
) -> std::result::Result<Vec<(String, TruthTable)>, String> {
    let text = read_input(path, manifest)?;
    let file = in_file(path, parse_ensemble(&text))?;
    let accepted: Vec<_> = file.accepted().collect();
    if file.entries.len() == 1 && file.nominal.is_none() {
        return Ok(vec![(display(path), file.entries[0].table.clone())]);
    }
    if file.entries.is_empty() {
        return Err(format!("{}: no truth tables found", display(path)));
    }
    Ok(accepted
        .into_iter()
        .map(|e| (format!("{}:{}", display(path), e.line), e.table.clone()))
        .collect())
}

fn cmd_sbox_build(files: &[PathBuf], take: Option<usize>) -> CmdResult {
    let mut manifest = RunManifest::new("sbox build", json!({ "take": take }), None);
    let mut components = Vec::new();
    for path in files {
        components.extend(
            read_functions(path, &mut manifest)?
                .into_iter()
                .map(|(_, t)| t),
        );
    }
    if let Some(m) = take {
        if m == 0 || m > components.len() {
            return Err(format!(
                "--take {m} needs between 1 and {} components",
                components.len()
            ));
        }
        components.truncate(m);
    }
    if components.is_empty() {
        return Err("no components given".into());
    }
    let s = build_sbox(&components).map_err(|e| match e {
        Error::DimensionMismatch { expected, found } => {
            format!("components disagree on n: expected {expected}, found {found}")
        }
        Error::Capacity { .. } | Error::InvalidValue(_) => {
            format!("{e} (use --take to choose at most n components)")
        }
        other => other.to_string(),
    })?;
    Ok(Output::ok(format!(
        "{}{}",
        manifest.to_comment(),
        s.to_text()
    )))
}

fn cmd_sbox_analyze(table: &Path) -> CmdResult {
    let mut manifest = RunManifest::new("sbox analyze", json!({}), None);
    let text = read_input(table, &mut manifest)?;
    let s = in_file(table, SubstitutionTable::parse(&text))?;
    Ok(Output::json(&json!({
        "manifest": manifest,
        "report": sbox_report(&s),
    })))
}

/// An alternative as seen by measured criteria.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
enum Candidate {
    Function(PropertyReport),
    Table(SboxReport),
}

impl MetricSource for Candidate {
    fn metric(&self, key: &str) -> Result<f64> {
        match self {
            Candidate::Function(r) => r.metric(key),
            Candidate::Table(r) => r.metric(key),
        }
    }
}

#[derive(Serialize)]
struct AlternativeInfo {
    label: String,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    token: Option<String>,
}

fn looks_like_table(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("n="))
}

fn read_alternatives(
    path: &Path,
    manifest: &mut RunManifest,
) -> std::result::Result<Vec<(AlternativeInfo, Candidate)>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", display(path)))?;
    let label = display(path);
    if text.trim_start().starts_with('{') {
        manifest.record(&label, text.as_bytes());
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| format!("{label}: {e}"))?;
        let report = value.get("report").cloned().unwrap_or(value);
        let candidate = if let Ok(r) = serde_json::from_value::<SboxReport>(report.clone()) {
            Candidate::Table(r)
        } else {
            Candidate::Function(
                serde_json::from_value::<PropertyReport>(report)
                    .map_err(|e| format!("{label}: not a property or table report: {e}"))?,
            )
        };
        let kind = match candidate {
            Candidate::Function(_) => "function report",
            Candidate::Table(_) => "table report",
        };
        return Ok(vec![(
            AlternativeInfo {
                label,
                kind,
                token: None,
            },
            candidate,
        )]);
    }
    if looks_like_table(&text) {
        manifest.record(&label, text.as_bytes());
        let s = in_file(path, SubstitutionTable::parse(&text))?;
        return Ok(vec![(
            AlternativeInfo {
                label,
                kind: "table",
                token: None,
            },
            Candidate::Table(sbox_report(&s)),
        )]);
    }
    Ok(read_functions(path, manifest)?
        .into_iter()
        .map(|(label, f)| {
            (
                AlternativeInfo {
                    label,
                    kind: "function",
                    token: Some(to_token(&f)),
                },
                Candidate::Function(classify(&f)),
            )
        })
        .collect())
}

fn cmd_select(ctx: &mut Context, problem: &Path, alternatives: &[PathBuf]) -> CmdResult {
    let mut manifest = RunManifest::new("select", json!({}), None);
    let text = read_input(problem, &mut manifest)?;
    let spec = in_file(problem, DecisionSpec::parse(&text))?;
    let mut infos = Vec::new();
    let mut candidates = Vec::new();
    for path in alternatives {
        for (info, c) in read_alternatives(path, &mut manifest)? {
            candidates.push((info.label.clone(), c));
            infos.push(info);
        }
    }
    if candidates.is_empty() {
        return Err("no alternatives to compare".into());
    }
    let base = problem.parent().unwrap_or(Path::new(""));
    let mut loaded = Vec::new();
    let problem_def = spec
        .resolve(base, &candidates, |p| {
            let bytes =
                fs::read(p).map_err(|e| Error::InvalidValue(format!("{}: {e}", display(p))))?;
            loaded.push((display(p), bytes.clone()));
            String::from_utf8(bytes)
                .map_err(|_| Error::InvalidValue(format!("{}: not valid UTF-8", display(p))))
        })
        .map_err(|e| format!("{}: {e}", display(problem)))?;
    for (path, bytes) in &loaded {
        manifest.record(path, bytes);
    }
    let ranking = synthesize(&problem_def).map_err(|e| format!("{}: {e}", display(problem)))?;
    for w in &ranking.warnings {
        ctx.note(format!("warning: {w}"));
    }
    let elected = &infos[ranking.elected_index()];
    ctx.note(format!("elected {}", elected.label));
    Ok(Output::json(&json!({
        "manifest": manifest,
        "alternatives": infos,
        "elected": elected,
        "ranking": ranking,
    })))
}
