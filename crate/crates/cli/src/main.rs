//! `spinent`: entanglement measure, spin expectations and simulated
//! measurement for pure qudit states written in Dirac notation.
//!
//! Exit codes: 0 success, 1 corpus mismatch, 2 bad input, 3 unsupported
//! state, 4 numeric failure.

mod report;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use spinent::{
    builtin_corpus, entanglement, expectation_at, max_expectation_analytic, max_expectation_grid,
    parse_state, sample_measurements, verify_entry, CorpusEntry, Direction, Error, GridSearch,
    MeasureOptions, Method, ParsedState,
};

use report::{CorpusLine, ReportDocument, SampleDocument, VerdictDoc};

#[derive(Debug, Parser)]
#[command(name = "spinent", version, about = "Entanglement of pure qudit states from spin expectation maxima")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Separability index and entanglement measure of a state.
    Measure {
        expr: String,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Expectation of the spin observable along (theta, phi) on one site.
    Expect {
        expr: String,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        site: usize,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, allow_negative_numbers = true)]
        phi: f64,
        #[arg(long)]
        json: bool,
    },
    /// Largest expectation over all directions on one site.
    Maxexpect {
        expr: String,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        site: usize,
        #[arg(long)]
        json: bool,
    },
    /// Simulated projective measurements along (theta, phi) on one site.
    Sample {
        expr: String,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        site: usize,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, allow_negative_numbers = true)]
        phi: f64,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Check expected entanglement values from a corpus file.
    Corpus {
        /// JSON-lines file with `expr`, `dim`, `expected_E`, `source`.
        path: Option<PathBuf>,
        /// Use the embedded set of worked examples.
        #[arg(long, conflicts_with = "path")]
        builtin: bool,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Local dimension; inferred from the largest digit when absent.
    #[arg(long)]
    dim: Option<usize>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, default_value = "analytic", value_parser = parse_method)]
    method: Method,
    #[arg(long, default_value_t = 64)]
    grid_steps: usize,
    #[arg(long, default_value_t = 8)]
    refine: usize,
}

impl SearchArgs {
    fn options(&self) -> MeasureOptions {
        MeasureOptions {
            method: self.method,
            grid: GridSearch {
                coarse_steps: self.grid_steps,
                refine_rounds: self.refine,
            },
        }
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

/// A failure and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::HeterogeneousDims(_) | Error::TooFewSites(_) | Error::TooLarge { .. } => 3,
            Error::AlphaUndefined { .. } => 4,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

type CmdResult = Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Measure {
            expr,
            input,
            search,
            json,
        } => cmd_measure(&expr, input.dim, &search, json),
        Command::Expect {
            expr,
            input,
            site,
            theta,
            phi,
            json,
        } => cmd_expect(&expr, input.dim, site, theta, phi, json),
        Command::Maxexpect {
            expr,
            input,
            search,
            site,
            json,
        } => cmd_maxexpect(&expr, input.dim, site, &search, json),
        Command::Sample {
            expr,
            input,
            site,
            theta,
            phi,
            shots,
            seed,
            json,
        } => cmd_sample(&expr, input.dim, site, theta, phi, shots, seed, json),
        Command::Corpus {
            path,
            builtin,
            search,
            json,
        } => cmd_corpus(path, builtin, &search, json),
    }
}

fn parse_input(expr: &str, dim: Option<usize>) -> Result<ParsedState, Failure> {
    let parsed = parse_state(expr, dim)?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed)
}

// 1-based site from the command line to a library index.
fn site_index(site: usize, sites: usize) -> Result<usize, Failure> {
    if site == 0 || site > sites {
        return Err(Failure::input(format!("--site must be between 1 and {sites}, got {site}")));
    }
    Ok(site - 1)
}

fn to_json<T: serde::Serialize>(doc: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(doc)
        .map(|s| s + "\n")
        .map_err(|e| Failure {
            code: 4,
            message: format!("serialization failed: {e}"),
        })
}

/// `x` rounded to `digits` significant digits, keeping at least one decimal.
fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{:.1}", x.abs());
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(1) as usize;
    let s = format!("{x:.decimals$}");
    let s = s.trim_end_matches('0');
    let s = if s.ends_with('.') { format!("{s}0") } else { s.to_string() };
    if s == "-0.0" {
        "0.0".to_string()
    } else {
        s
    }
}

fn cmd_measure(expr: &str, dim: Option<usize>, search: &SearchArgs, json: bool) -> CmdResult {
    let start = Instant::now();
    let parsed = parse_input(expr, dim)?;
    let report = entanglement(&parsed.state, &search.options())?;
    let elapsed = start.elapsed().as_secs_f64();
    let mut warnings = parsed.warnings.clone();
    warnings.extend(report.warnings.iter().cloned());

    if json {
        return Ok((to_json(&ReportDocument::new(expr, &report, warnings, elapsed))?, 0));
    }

    let mut out = String::new();
    writeln!(out, "input     {expr}").unwrap();
    writeln!(out, "dims      {:?}", report.dims).unwrap();
    writeln!(out, "method    {}", report.method).unwrap();
    writeln!(out, "lambda_max {}", report.lambda_max).unwrap();
    writeln!(
        out,
        "{:>4} {:>4} {:>14} {:>9} {:>9} {:>10} {:>11} {:>9} {:>9}",
        "site", "l", "eigenvalues", "eta", "alpha", "factorable", "max<sigma>", "theta", "phi"
    )
    .unwrap();
    for s in &report.sites {
        let p = &s.profile;
        let eig = p
            .distinct_eigenvalues
            .iter()
            .map(i64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let alpha = p.alpha.map_or("-".to_string(), |a| format!("{a:.6}"));
        let (theta, phi) = s
            .max_expectation
            .direction
            .map_or(("-".to_string(), "-".to_string()), |d| {
                (format!("{:.6}", d.theta()), format!("{:.6}", d.phi()))
            });
        writeln!(
            out,
            "{:>4} {:>4} {:>14} {:>9.6} {:>9} {:>10} {:>11.6} {:>9} {:>9}",
            p.site + 1,
            p.l,
            eig,
            p.eta,
            alpha,
            p.factorable,
            s.max_expectation.value,
            theta,
            phi
        )
        .unwrap();
    }
    writeln!(out, "gamma = {:.6}", report.gamma).unwrap();
    writeln!(out, "E = {:.6}", report.e).unwrap();
    if warnings.is_empty() {
        writeln!(out, "warnings: none").unwrap();
    } else {
        writeln!(out, "warnings: {}", warnings.join(", ")).unwrap();
    }
    Ok((out, 0))
}

fn direction(theta: f64, phi: f64) -> Result<Direction, Failure> {
    Direction::new(theta, phi).map_err(Failure::from)
}

fn cmd_expect(expr: &str, dim: Option<usize>, site: usize, theta: f64, phi: f64, json: bool) -> CmdResult {
    let parsed = parse_input(expr, dim)?;
    let idx = site_index(site, parsed.state.num_sites())?;
    let dir = direction(theta, phi)?;
    let value = expectation_at(&parsed.state, idx, dir)?;
    if json {
        let doc = serde_json::json!({
            "input": expr,
            "site": site,
            "theta": dir.theta(),
            "phi": dir.phi(),
            "expectation": value,
        });
        return Ok((to_json(&doc)?, 0));
    }
    Ok((format!("{}\n", sig(value, 12)), 0))
}

fn cmd_maxexpect(expr: &str, dim: Option<usize>, site: usize, search: &SearchArgs, json: bool) -> CmdResult {
    let parsed = parse_input(expr, dim)?;
    let idx = site_index(site, parsed.state.num_sites())?;
    let max = match search.method {
        Method::Analytic => max_expectation_analytic(&parsed.state, idx)?,
        Method::Grid => max_expectation_grid(&parsed.state, idx, search.grid_steps, search.refine)?,
    };
    if json {
        let doc = serde_json::json!({
            "input": expr,
            "site": site,
            "method": max.method.as_str(),
            "max_expectation": max.value,
            "direction": max.direction.map(report::DirectionDoc::from),
        });
        return Ok((to_json(&doc)?, 0));
    }
    let out = match max.direction {
        Some(d) => format!(
            "{}  theta={} phi={}\n",
            sig(max.value, 12),
            sig(d.theta(), 12),
            sig(d.phi(), 12)
        ),
        None => format!("{}  direction=none\n", sig(max.value, 12)),
    };
    Ok((out, 0))
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample(
    expr: &str,
    dim: Option<usize>,
    site: usize,
    theta: f64,
    phi: f64,
    shots: u64,
    seed: u64,
    json: bool,
) -> CmdResult {
    let parsed = parse_input(expr, dim)?;
    let idx = site_index(site, parsed.state.num_sites())?;
    let dir = direction(theta, phi)?;
    if shots == 0 {
        return Err(Failure::input("--shots must be at least 1"));
    }
    let hist = sample_measurements(&parsed.state, idx, dir, shots, seed)?;
    if json {
        return Ok((to_json(&SampleDocument::new(expr, site, dir, seed, &hist))?, 0));
    }
    let mut out = String::new();
    writeln!(out, "{:>10} {:>10}", "eigenvalue", "count").unwrap();
    for (lambda, count) in &hist.counts {
        writeln!(out, "{lambda:>10} {count:>10}").unwrap();
    }
    writeln!(out, "mean = {}", sig(hist.mean, 12)).unwrap();
    Ok((out, 0))
}

fn read_corpus(path: &PathBuf) -> Result<Vec<CorpusEntry>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            serde_json::from_str::<CorpusLine>(l)
                .map(CorpusEntry::from)
                .map_err(|e| Failure::input(format!("{}:{}: {e}", path.display(), n + 1)))
        })
        .collect()
}

fn cmd_corpus(path: Option<PathBuf>, builtin: bool, search: &SearchArgs, json: bool) -> CmdResult {
    let entries = match (builtin, path) {
        (true, _) => builtin_corpus(),
        (false, Some(p)) => read_corpus(&p)?,
        (false, None) => return Err(Failure::input("give a corpus file or --builtin")),
    };
    let opts = search.options();
    // grid search is coarser than the exact corpus tolerance
    let tolerance = match opts.method {
        Method::Analytic => spinent::measure::CORPUS_TOLERANCE,
        Method::Grid => 1e-6,
    };
    let verdicts: Vec<_> = entries
        .par_iter()
        .map(|e| verify_entry(e, &opts, tolerance))
        .collect();
    let all_pass = verdicts.iter().all(|v| v.pass);
    let code = if all_pass { 0 } else { 1 };

    if json {
        let docs: Vec<VerdictDoc> = verdicts
            .iter()
            .map(|v| VerdictDoc {
                expr: v.entry.expr.clone(),
                dim: v.entry.dim,
                source: v.entry.source.clone(),
                expected: v.entry.expected_e,
                computed: v.computed.as_ref().ok().copied(),
                error: v.computed.as_ref().err().map(Error::to_string),
                diff: v.computed.is_ok().then_some(v.diff),
                pass: v.pass,
            })
            .collect();
        return Ok((to_json(&docs)?, code));
    }

    let mut out = String::new();
    writeln!(
        out,
        "{:<52} {:>10} {:>10} {:>10}  verdict",
        "expr", "expected", "computed", "|diff|"
    )
    .unwrap();
    for v in &verdicts {
        let (computed, diff) = match &v.computed {
            Ok(e) => (format!("{e:.6}"), format!("{:.3e}", v.diff)),
            Err(err) => (format!("error: {err}"), "-".to_string()),
        };
        writeln!(
            out,
            "{:<52} {:>10.6} {:>10} {:>10}  {}",
            v.entry.expr,
            v.entry.expected_e,
            computed,
            diff,
            if v.pass { "pass" } else { "FAIL" }
        )
        .unwrap();
    }
    Ok((out, code))
}
