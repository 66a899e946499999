//! Command-line front end for `hkoty-core`: JSON instance I/O, batch sweeps
//! on a worker pool, and machine-readable reports.
//!
//! Exit codes: 0 when every check passed, 1 when a verified identity failed,
//! 2 on invalid input.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hkoty_core::algebra::AlgebraSpec;
use hkoty_core::fermionic::SumInstance;
use hkoty_core::genfun::{CoefficientWindow, Lemma, Split, Statement};
use serde_json::json;

pub mod commands;
pub mod grid;
pub mod instance;
pub mod suite;

use commands::Outcome;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum CliError {
    /// Malformed or out-of-domain input.
    Input(String),
    /// A computation could not be carried out.
    Compute(hkoty_core::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(e) => match e {
                hkoty_core::Error::InvalidAlgebra(_) | hkoty_core::Error::Shape(_) | hkoty_core::Error::Domain(_) => 2,
                _ => 1,
            },
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(s) => write!(f, "invalid input: {s}"),
            CliError::Compute(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<hkoty_core::Error> for CliError {
    fn from(e: hkoty_core::Error) -> Self {
        CliError::Compute(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Parser, Debug)]
#[command(name = "hkoty", version, about = "Fermionic sums, Q-systems and generating-function identities")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct InstanceArgs {
    /// Algebra name, e.g. A2, B3, G2.
    #[arg(long)]
    pub algebra: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Highest weight, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Row `α:v1,v2,...` of multiplicities (repeatable, or joined with `;`).
    #[arg(long)]
    pub n: Vec<String>,
    /// JSON instance file, instead of the flags above.
    #[arg(long, conflicts_with_all = ["algebra", "lambda", "n"])]
    pub instance: Option<PathBuf>,
}

impl InstanceArgs {
    pub fn resolve(&self) -> Result<SumInstance, CliError> {
        if let Some(path) = &self.instance {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            return instance::from_json(&text);
        }
        let name = self.algebra.as_deref().ok_or_else(|| CliError::input("--algebra or --instance is required"))?;
        instance::from_flags(instance::parse_algebra(name)?, self.k, self.lambda.as_deref(), &self.n)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Restricted sum M.
    Msum(InstanceArgs),
    /// Unrestricted sum N.
    Nsum(InstanceArgs),
    /// M = N on one instance, or on a grid with --max-n/--max-lambda.
    VerifyMn {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        max_n: Option<i64>,
        #[arg(long, default_value_t = 0)]
        max_lambda: i64,
        /// Also extract (N, M) as constant terms of the generating function.
        #[arg(long)]
        constant_term: bool,
    },
    /// Classical Q-system table.
    Qsystem {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Plain `Q_(α,j) = …` lines instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Deformed Q-system table.
    Deformed {
        #[arg(long)]
        algebra: String,
        #[arg(long, default_value_t = 2)]
        levels: usize,
        #[arg(long)]
        verify_recursion: bool,
        /// Include every entry as text.
        #[arg(long)]
        entries: bool,
    },
    /// Factorization statements on a coefficient window.
    Verify {
        #[command(flatten)]
        inst: InstanceArgs,
        /// Statement name, or `all`.
        #[arg(long, default_value = "all")]
        statement: String,
        /// Window half-width (default: 8, 4, 3, 2 by rank).
        #[arg(long)]
        window: Option<i64>,
        /// Split level j; with neither --j nor --p every admissible split runs
        #[arg(long)]
        j: Option<usize>,
        /// Split offset p; an omitted --j or --p is 0 when the other is given
        #[arg(long)]
        p: Option<usize>,
    },
    /// Power-series identities (lemma steps and the end-to-end statement).
    PsCheck {
        #[command(flatten)]
        inst: InstanceArgs,
        /// Lemma name, or `all`.
        #[arg(long, default_value = "all")]
        lemma: String,
        #[arg(long)]
        window: Option<i64>,
    },
    /// Brute-force oracles: `--grid sl2`, or `--grid A2|A3` for characters.
    OracleCheck {
        #[arg(long, default_value = "sl2")]
        grid: String,
        #[arg(long, default_value_t = 8)]
        max_weight: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        max_n: i64,
    },
    /// M = N with constant-term extraction over several algebras.
    Sweep {
        /// Comma-separated algebras (default: A1,A2,A3,B2,B3,C2,C3,D4,G2).
        #[arg(long)]
        algebra: Option<String>,
        /// Comma-separated levels (default: 1..3, or 1..2 from rank 3 on and for G2).
        #[arg(long)]
        levels: Option<String>,
        #[arg(long, default_value_t = 3)]
        max_n: i64,
        #[arg(long, default_value_t = 4)]
        max_lambda: i64,
        #[arg(long)]
        no_constant_term: bool,
    },
}

fn default_window(rank: usize) -> i64 {
    CoefficientWindow::default_for(rank).targets.iter().flat_map(|t| t.iter().copied()).max().unwrap_or(0)
}

/// The report text for a parsed command line.
fn dispatch(cmd: &Command) -> Result<(String, bool), CliError> {
    let wrap = |o: Outcome| -> (String, bool) {
        let mut report = o.report;
        report["version"] = json!(VERSION);
        (instance::canonical(&report), o.passed)
    };
    let with_spec = |o: Outcome, inst: &SumInstance| -> Outcome {
        let mut o = o;
        o.report["algebra"] = instance::spec_json(&inst.spec);
        o
    };
    Ok(match cmd {
        Command::Msum(a) => {
            let inst = a.resolve()?;
            wrap(with_spec(commands::msum(&inst), &inst))
        }
        Command::Nsum(a) => {
            let inst = a.resolve()?;
            wrap(with_spec(commands::nsum(&inst), &inst))
        }
        Command::VerifyMn { inst, max_n, max_lambda, constant_term } => match max_n {
            Some(max_n) => {
                let name = inst.algebra.as_deref().ok_or_else(|| CliError::input("--max-n needs --algebra"))?;
                let spec = instance::parse_algebra(name)?;
                wrap(commands::verify_mn_grid(&spec, &[inst.k], *max_n, *max_lambda, *constant_term)?)
            }
            None => {
                let i = inst.resolve()?;
                wrap(with_spec(commands::verify_mn_instance(&i, *constant_term)?, &i))
            }
        },
        Command::Qsystem { algebra, levels, text } => {
            let spec = instance::parse_algebra(algebra)?;
            if *levels == 0 {
                return Err(CliError::input("--levels must be at least 1"));
            }
            if *text {
                let out = commands::qsystem(&spec, *levels)?;
                (commands::qsystem_text(&spec, *levels)?, out.passed)
            } else {
                wrap(commands::qsystem(&spec, *levels)?)
            }
        }
        Command::Deformed { algebra, levels, verify_recursion, entries } => {
            let spec = instance::parse_algebra(algebra)?;
            if *levels == 0 {
                return Err(CliError::input("--levels must be at least 1"));
            }
            wrap(commands::deformed(&spec, *levels, *verify_recursion, *entries)?)
        }
        Command::Verify { inst, statement, window, j, p } => {
            let i = inst.resolve()?;
            let statement = match statement.as_str() {
                "all" => None,
                s => Some(s.parse::<Statement>().map_err(|e| CliError::input(e.to_string()))?),
            };
            let split = match (j, p) {
                (None, None) => None,
                (j, p) => Some(Split { j: j.unwrap_or(0), p: p.unwrap_or(0) }),
            };
            let d = window.unwrap_or_else(|| default_window(i.rank()));
            if d < 0 {
                return Err(CliError::input("--window must be non-negative"));
            }
            wrap(with_spec(commands::verify(&i, statement, split, d)?, &i))
        }
        Command::PsCheck { inst, lemma, window } => {
            let i = inst.resolve()?;
            let lemma = match lemma.as_str() {
                "all" => None,
                s => Some(s.parse::<Lemma>().map_err(|e| CliError::input(e.to_string()))?),
            };
            let d = window.unwrap_or_else(|| default_window(i.rank()));
            if d < 0 {
                return Err(CliError::input("--window must be non-negative"));
            }
            wrap(with_spec(commands::ps_check(&i, lemma, d)?, &i))
        }
        Command::OracleCheck { grid, max_weight, k, max_n } => {
            wrap(commands::oracle_check(grid, *max_weight, *k, *max_n)?)
        }
        Command::Sweep { algebra, levels, max_n, max_lambda, no_constant_term } => {
            let names: Vec<String> = match algebra {
                Some(list) => list.split(',').map(|s| s.trim().to_string()).collect(),
                None => grid::SWEEP_ALGEBRAS.iter().map(|s| s.to_string()).collect(),
            };
            let specs: Vec<AlgebraSpec> = names.iter().map(|n| instance::parse_algebra(n)).collect::<Result<_, _>>()?;
            let levels: Option<Vec<usize>> = match levels {
                Some(text) => Some(
                    instance::parse_list(text, "--levels")?
                        .into_iter()
                        .map(|k| {
                            usize::try_from(k)
                                .ok()
                                .filter(|&k| k >= 1)
                                .ok_or_else(|| CliError::input("--levels entries must be positive"))
                        })
                        .collect::<Result<_, _>>()?,
                ),
                None => None,
            };
            wrap(commands::sweep(&specs, levels.as_deref(), *max_n, *max_lambda, !no_constant_term)?)
        }
    })
}

/// Runs a command line, writing the report to `stdout` (or `--out`) and
/// diagnostics to `stderr`. Returns the exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "cannot start worker pool: {e}");
            return 2;
        }
    };
    let result = pool.install(|| dispatch(&cli.command));
    match result {
        Ok((text, passed)) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &text).map_err(CliError::from),
                None => stdout.write_all(text.as_bytes()).map_err(CliError::from),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "{e}");
                return 1;
            }
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

/// [`run_with`] on the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
