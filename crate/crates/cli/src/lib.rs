//! Command-line front end: reads a space file, runs one command and prints
//! a deterministic JSON report.
//!
//! Exit codes: 0 on success, 1 when a verification fails (the report names
//! the witness), 2 on input errors.

pub mod commands;
pub mod demos;
pub mod examples;
pub mod report;
pub mod spacefile;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use rnforge::rational::parse_ratio;
use rnforge::Rational;
use serde_json::{json, Value};

use crate::commands::Outcome;
use crate::demos::Demo;
use crate::report::Report;
use crate::spacefile::SpaceFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable holding the seed for sampled (non-exhaustive) checks.
pub const SEED_VAR: &str = "RNFORGE_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
}

impl From<rnforge::Error> for CliError {
    fn from(e: rnforge::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rnforge",
    version,
    about = "Exact Radon-Nikodym derivatives on finite measure spaces"
)]
pub struct Cli {
    /// Space file (JSON) to read.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Add wall-clock timing to the report (excluded from the digest).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hahn decomposition of a signed measure.
    Hahn {
        #[arg(long)]
        measure: String,
        /// Nonnegative measure used to pick among maximizers.
        #[arg(long)]
        tiebreak: Option<String>,
    },
    /// Jordan decomposition of a signed measure.
    Jordan {
        #[arg(long)]
        measure: String,
    },
    /// Absolute continuity of --num with respect to --den.
    CheckAc {
        #[arg(long)]
        num: String,
        #[arg(long)]
        den: String,
    },
    /// Density d(num)/d(den) along a refinement chain.
    RnDerive {
        #[arg(long)]
        num: String,
        #[arg(long)]
        den: String,
        /// Chain name; defaults to the atomic partition alone.
        #[arg(long)]
        chain: Option<String>,
        /// Check the density identity on subsets.
        #[arg(long)]
        verify: bool,
    },
    /// Dyadic simple-function approximants of the density.
    Approx {
        #[arg(long)]
        num: String,
        #[arg(long)]
        den: String,
        #[arg(long)]
        levels: u32,
    },
    /// Level set {f >= at} of the density and its Hahn counterpart.
    Levelset {
        #[arg(long)]
        num: String,
        #[arg(long)]
        den: String,
        #[arg(long)]
        at: String,
        /// Upper end of the band at <= f < band.
        #[arg(long)]
        band: Option<String>,
    },
    /// limsup of an eventually periodic set sequence.
    Limsup {
        #[arg(long)]
        sequence: String,
        /// Measure the limsup with this nonnegative measure.
        #[arg(long)]
        measure: Option<String>,
    },
    /// Hyperreal demonstrations.
    HyperDemo {
        #[arg(value_enum)]
        demo: Demo,
        #[arg(long)]
        horizon: u64,
        #[arg(long)]
        tolerance: String,
    },
    /// Write the bundled example space files into a directory.
    EmitExamples { dir: PathBuf },
}

impl Command {
    fn echo(&self) -> Value {
        match self {
            Command::Hahn { measure, tiebreak } => {
                json!({ "name": "hahn", "measure": measure, "tiebreak": tiebreak })
            }
            Command::Jordan { measure } => json!({ "name": "jordan", "measure": measure }),
            Command::CheckAc { num, den } => json!({ "name": "check-ac", "num": num, "den": den }),
            Command::RnDerive {
                num,
                den,
                chain,
                verify,
            } => {
                json!({ "name": "rn-derive", "num": num, "den": den, "chain": chain, "verify": verify })
            }
            Command::Approx { num, den, levels } => {
                json!({ "name": "approx", "num": num, "den": den, "levels": levels })
            }
            Command::Levelset { num, den, at, band } => {
                json!({ "name": "levelset", "num": num, "den": den, "at": at, "band": band })
            }
            Command::Limsup { sequence, measure } => {
                json!({ "name": "limsup", "sequence": sequence, "measure": measure })
            }
            Command::HyperDemo {
                demo,
                horizon,
                tolerance,
            } => {
                let demo = format!("{demo:?}").to_lowercase();
                json!({ "name": "hyper-demo", "demo": demo, "horizon": horizon, "tolerance": tolerance })
            }
            Command::EmitExamples { dir } => json!({ "name": "emit-examples", "dir": dir.display().to_string() }),
        }
    }
}

fn rational_flag(flag: &str, text: &str) -> Result<Rational, CliError> {
    parse_ratio(text).map_err(|e| CliError::Input(format!("--{flag}: {e}")))
}

fn seed_from_env() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Input(format!("{SEED_VAR} must be an unsigned integer, got {s:?}"))),
        Err(_) => Ok(None),
    }
}

fn load(path: Option<&Path>) -> Result<(SpaceFile, Value), CliError> {
    let path = path.ok_or_else(|| CliError::Input("--input FILE is required for this command".into()))?;
    let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{}: not valid UTF-8", path.display())))?;
    let file = SpaceFile::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let input = json!({ "file": path.display().to_string(), "sha256": report::sha256_hex(text.as_bytes()) });
    Ok((file, input))
}

fn execute(cli: &Cli) -> Result<(Outcome, Value), CliError> {
    let input_path = cli.input.as_deref();
    let with_file = |f: &dyn Fn(&SpaceFile) -> Result<Outcome, CliError>| {
        let (file, input) = load(input_path)?;
        Ok((f(&file)?, input))
    };
    match &cli.command {
        Command::Hahn { measure, tiebreak } => with_file(&|f| commands::hahn(f, measure, tiebreak.as_deref())),
        Command::Jordan { measure } => with_file(&|f| commands::jordan(f, measure)),
        Command::CheckAc { num, den } => with_file(&|f| commands::check_ac(f, num, den)),
        Command::RnDerive {
            num,
            den,
            chain,
            verify,
        } => {
            let seed = seed_from_env()?;
            with_file(&|f| commands::rn_derive_cmd(f, num, den, chain.as_deref(), *verify, seed))
        }
        Command::Approx { num, den, levels } => with_file(&|f| commands::approx(f, num, den, *levels)),
        Command::Levelset { num, den, at, band } => {
            let at = rational_flag("at", at)?;
            let band = band.as_deref().map(|b| rational_flag("band", b)).transpose()?;
            with_file(&|f| commands::levelset(f, num, den, &at, band.as_ref()))
        }
        Command::Limsup { sequence, measure } => with_file(&|f| commands::limsup(f, sequence, measure.as_deref())),
        Command::HyperDemo {
            demo,
            horizon,
            tolerance,
        } => {
            let tol = rational_flag("tolerance", tolerance)?;
            Ok((demos::run(*demo, *horizon, &tol)?, Value::Null))
        }
        Command::EmitExamples { dir } => {
            let written = examples::emit(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            Ok((Outcome::ok(json!({ "written": written }), json!({})), Value::Null))
        }
    }
}

/// Runs the tool on `args` (including the program name), writing the report
/// to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let started = Instant::now();
    let (outcome, input) = match execute(&cli) {
        Ok(pair) => pair,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let report = Report {
        command: cli.command.echo(),
        input,
        results: outcome.results,
        verification: outcome.verification,
        elapsed_ms: cli.timing.then(|| started.elapsed().as_millis()),
    };
    let _ = out.write_all(report.to_json().as_bytes());
    match outcome.failure {
        Some(message) => {
            let _ = writeln!(err, "verification failed: {message}");
            EXIT_VERIFICATION
        }
        None => EXIT_OK,
    }
}
