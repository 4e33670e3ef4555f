//! Command-line front end: reads a JSON problem file, runs one solver or
//! check, and writes a JSON report (and optionally a CSV table).
//!
//! Exit codes: 0 success, 1 bad input, 2 solver failure, 3 failed check.

pub mod commands;
pub mod problem;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use commands::Failure;
use problem::{ExampleSpec, ProblemFile};
use report::{Report, Status};

#[derive(Debug, Parser)]
#[command(name = "ccindex", version, about = "Central configurations, their indices, and relative equilibria")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Flags {
    /// Overrides `solver.rng_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `solver.tol`; for verify-identity and dynamics, the acceptance threshold.
    #[arg(long)]
    tol: Option<f64>,
    /// Overrides `solver.n_starts`.
    #[arg(long)]
    starts: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct WithProblem {
    problem: PathBuf,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Multistart search for central configurations, grouped by rotation class.
    Census {
        problem: PathBuf,
        #[command(flatten)]
        flags: Flags,
        /// Also write one CSV row per class.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// One central configuration from `configuration` or a random seed.
    FindCc(WithProblem),
    /// Morse and fixed-point index at `configuration`.
    Index(WithProblem),
    /// Compares `alpha U (I - F')` with the restricted Hessian at `configuration`.
    VerifyIdentity(WithProblem),
    /// Relative equilibrium about the vertical axis from `configuration`.
    FindRe(WithProblem),
    /// The six-body charged relative equilibrium that is neither planar nor central.
    Example {
        problem: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true)]
        c1: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        c2: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        c3: Option<f64>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Projected sign properties of the gradient over random planes.
    PropertyCheck(WithProblem),
    /// Integrates the equations of motion against a rigid rotation.
    Dynamics(WithProblem),
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the exit code. Reports go to stdout unless `--out` is given.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    execute(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn execute<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => {
            if code != 0 {
                let _ = writeln!(err, "ccindex: finished with exit code {code}");
            }
            code
        }
        Err(msg) => {
            let _ = writeln!(err, "ccindex: {msg}");
            1
        }
    }
}

fn read_problem(path: &Path) -> Result<(ProblemFile, String), String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
    let p = ProblemFile::parse(text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((p, report::sha256_hex(&bytes)))
}

fn apply(p: &mut ProblemFile, f: &Flags, tol_is_threshold: bool) -> Result<(), String> {
    if let Some(s) = f.seed {
        p.solver.rng_seed = s;
    }
    if let Some(n) = f.starts {
        p.solver.n_starts = n;
    }
    if let Some(t) = f.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(format!("--tol {t} must be positive"));
        }
        if tol_is_threshold {
            p.identity_tol = t;
            p.dynamics.tol = t;
        } else {
            p.solver.tol = t;
        }
    }
    p.solver.validate().map_err(|e| e.to_string())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, String> {
    let (name, flags, outcome, hash) = match command {
        Command::Census { problem, flags, csv } => {
            let (mut p, hash) = read_problem(&problem)?;
            apply(&mut p, &flags, false)?;
            let result = commands::run_census(&p);
            if let (Some(path), Ok(c)) = (&csv, &result) {
                let table = report::census_csv(&c.census, &c.checks.iter().map(|k| k.index.clone()).collect::<Vec<_>>())
                    .map_err(|e| e.to_string())?;
                std::fs::write(path, table).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            let outcome = result.map(|c| serde_json::to_value(&c).expect("census serializes"));
            ("census", flags, outcome, hash)
        }
        Command::Example { problem, c1, c2, c3, flags } => {
            let (mut spec, hash) = match &problem {
                Some(path) => {
                    let (p, hash) = read_problem(path)?;
                    (p.example.clone(), hash)
                }
                None => (ExampleSpec::default(), String::new()),
            };
            spec.c1 = c1.unwrap_or(spec.c1);
            spec.c2 = c2.unwrap_or(spec.c2);
            spec.c3 = c3.unwrap_or(spec.c3);
            let hash = if problem.is_some() { hash } else { report::sha256_hex(&report::canonical_json(&spec)) };
            let outcome = ccindex_core::ExampleParams::new(spec.c1, spec.c2, spec.c3)
                .map_err(Failure::from)
                .and_then(|params| commands::example_cmd(&params, spec.max_iter));
            ("example", flags, outcome, hash)
        }
        Command::FindCc(a) => single("find-cc", a, false, commands::find_cc_cmd)?,
        Command::Index(a) => single("index", a, false, commands::index_cmd)?,
        Command::VerifyIdentity(a) => single("verify-identity", a, true, commands::verify_identity_cmd)?,
        Command::FindRe(a) => single("find-re", a, false, commands::find_re_cmd)?,
        Command::PropertyCheck(a) => single("property-check", a, false, commands::property_check_cmd)?,
        Command::Dynamics(a) => single("dynamics", a, true, commands::dynamics_cmd)?,
    };
    let (status, reason, result, code) = match outcome {
        Ok(v) => (Status::Ok, None, Some(v), 0),
        Err(Failure::Schema(msg)) => return Err(msg),
        Err(f @ Failure::Solver(..)) | Err(f @ Failure::Verification(..)) => {
            let code = f.exit_code();
            let (status, msg, v) = match f {
                Failure::Solver(m, v) => (Status::SolverFailure, m, v),
                Failure::Verification(m, v) => (Status::VerificationFailure, m, v),
                Failure::Schema(_) => unreachable!(),
            };
            (status, Some(msg), v, code)
        }
    };
    let rep = Report { tool: report::TOOL, version: report::VERSION, command: name, problem_sha256: hash, status, reason, result };
    let text = report::to_json(&rep);
    match &flags.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string())?,
    }
    Ok(code)
}

type Dispatched = (&'static str, Flags, commands::Outcome, String);

fn single(
    name: &'static str,
    a: WithProblem,
    tol_is_threshold: bool,
    body: fn(&ProblemFile) -> commands::Outcome,
) -> Result<Dispatched, String> {
    let (mut p, hash) = read_problem(&a.problem)?;
    apply(&mut p, &a.flags, tol_is_threshold)?;
    Ok((name, a.flags, body(&p), hash))
}
