//! `llv-lab`: verification reports for LLV Lie algebras of graded Frobenius
//! algebras.

pub mod commands;
pub mod report;
pub mod source;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use llv_core::rep::DEFAULT_SEED;
use llv_core::Execution;

use commands::{Generators, VerbitskyArgs};
use report::Report;
use source::CliError;

/// Environment variable overriding the witness-sampling seed.
pub const SEED_VAR: &str = "LLV_LAB_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "llv-lab",
    version,
    about = "Exact verification of LLV Lie algebras and Verbitsky components"
)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Run batches sequentially instead of on the thread pool.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the graded Frobenius algebra axioms of a JSON algebra.
    Validate { file: PathBuf },
    /// Total Lie algebra of a JSON algebra or built-in model.
    Llv {
        /// JSON file or one of: k3, k3-rank3, quaternion, verbitsky-5-2.
        model: String,
        /// `auto`, or degree-2 classes such as `1,0,0;0,1,1`.
        #[arg(long, default_value = "auto")]
        generators: String,
    },
    /// The quaternionic exterior model and its ten-dimensional Lie algebra.
    Quaternion,
    /// Quotient of Sym V by the harmonic ideal in degree n+1.
    Verbitsky {
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        n: usize,
        /// JSON file `{"gram": [[...], ...]}`; defaults to U ⊕ I_(rank-2).
        #[arg(long)]
        gram: Option<PathBuf>,
        /// Also compute the total Lie algebra of the result.
        #[arg(long)]
        llv: bool,
        /// Raise the symmetric-power size limit.
        #[arg(long)]
        large: bool,
    },
    /// Primitive subspace, generation and irreducibility witness.
    Prim { model: String },
}

fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var(SEED_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_VAR} must be a decimal integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match &cli.command {
        Command::Validate { file } => commands::validate(file),
        Command::Llv { model, generators } => {
            let generators = match generators.as_str() {
                "auto" => Generators::Auto,
                list => Generators::List(list.to_string()),
            };
            commands::llv(model, &generators, exec)
        }
        Command::Quaternion => Ok(commands::quaternion(exec)),
        Command::Verbitsky {
            rank,
            n,
            gram,
            llv,
            large,
        } => {
            let args = VerbitskyArgs {
                rank: *rank,
                n: *n,
                gram: gram.as_deref(),
                llv: *llv,
                large: *large,
            };
            commands::verbitsky(&args, exec)
        }
        Command::Prim { model } => commands::prim(model, seed_from_env()?, exec),
    }
}

/// Parses `args`, runs the command and prints its report; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let text = if cli.json { report.to_json() } else { report.to_text() };
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", text.trim_end());
            if report.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("llv-lab: {e}");
            e.exit_code()
        }
    }
}
