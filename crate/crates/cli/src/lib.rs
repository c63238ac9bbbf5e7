//! `qconstell construct | verify | search | replay`.
//!
//! Every run that gets past argument parsing writes exactly one JSON result
//! file (to `--out`, or content-addressed under `QCONSTELL_CACHE_DIR`) and
//! prints a short summary. Exit codes: 0 success, 1 failed verification or
//! diverged replay, 2 usage, input or I/O error.

mod commands;
mod error;
mod files;
mod result;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;
use qconstell::search::KsMode;
use serde_json::Value;

pub use commands::{best_object, default_tolerance};
pub use error::CliError;
pub use files::{cache_path, sha256_hex, write_atomic, CACHE_DIR_VAR, DEFAULT_CACHE_DIR};
pub use result::{Command, Outcome, Problem, ReplayCheck, ResultFile, RunConfig, Status, RESULT_FORMAT};

fn parse_mode(s: &str) -> Result<KsMode, String> {
    serde_json::from_value(Value::String(s.into()))
        .map_err(|_| format!("unknown mode {s:?} (expected normal, one-arbitrary or general)"))
}

#[derive(Debug, Clone, Parser)]
#[command(name = "qconstell", version, about = "Construct, verify and search for discrete quantum structures")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long, value_enum)]
    pub problem: Option<Problem>,
    /// Dimension: N for sic, mub and hadamard; the order for latin and oqls;
    /// the local dimension otherwise.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Werner parameter in [-1, 1].
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Number of copies for distill.
    #[arg(long)]
    pub copies: Option<usize>,
    /// Number of bases for a mub search (default 3).
    #[arg(long)]
    pub bases: Option<usize>,
    /// Restriction for a ksum search: normal, one-arbitrary or general (default).
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<KsMode>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Iteration cap per restart.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Verification tolerance, or the gradient tolerance of a search.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Worker threads for restarts and sampling.
    #[arg(long)]
    pub threads: Option<usize>,
}

impl Cli {
    fn parameters(&self) -> std::collections::BTreeMap<String, Value> {
        let mut p = std::collections::BTreeMap::new();
        let mut put = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                p.insert(k.to_string(), v);
            }
        };
        put("dim", self.dim.map(Value::from));
        put("alpha", self.alpha.map(Value::from));
        put("copies", self.copies.map(Value::from));
        put("bases", self.bases.map(Value::from));
        put("mode", self.mode.map(|m| serde_json::to_value(m).expect("modes serialize")));
        p
    }

    fn run_config(&self, input_sha256: Option<String>) -> RunConfig {
        RunConfig {
            command: self.command,
            problem: self.problem,
            parameters: self.parameters(),
            input: self.input.as_ref().map(|p| p.display().to_string()),
            input_sha256,
            output: String::new(),
            seed: self.seed,
            restarts: self.restarts,
            budget: self.budget,
            threads: self.threads,
            tolerances: commands::echoed_tolerances(self),
        }
    }
}

/// Runs one command without writing anything; the error, if any, is also
/// recorded in the returned result file.
pub fn execute(cli: &Cli) -> (ResultFile, Option<CliError>) {
    let input = cli.input.as_deref().map(files::read_input);
    let hash = match &input {
        Some(Ok(bytes)) => Some(sha256_hex(bytes)),
        _ => None,
    };
    let mut run = cli.run_config(hash);
    run.output = cli.out.clone().unwrap_or_else(|| cache_path(&run)).display().to_string();
    let outcome = match input.transpose() {
        Err(e) => Err(e),
        Ok(bytes) => match cli.threads {
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(|| commands::execute(cli, bytes.as_deref())),
                Err(e) => Err(CliError::Usage(format!("cannot start {n} threads: {e}"))),
            },
            None => commands::execute(cli, bytes.as_deref()),
        },
    };
    match outcome {
        Ok(o) => (ResultFile::from_outcome(run, o), None),
        Err(e) => (ResultFile::from_error(run, e.to_string()), Some(e)),
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (result, _) = execute(&cli);
    let text = serde_json::to_string_pretty(&result).expect("result files serialize");
    if let Err(e) = write_atomic(std::path::Path::new(&result.run.output), text.as_bytes()) {
        eprintln!("{e}");
        return 2;
    }
    for line in &result.summary {
        if result.status == Status::Error {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    }
    println!("result: {}", result.run.output);
    result.exit_code
}
