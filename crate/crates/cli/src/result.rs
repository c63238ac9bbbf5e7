use std::collections::BTreeMap;

use clap::ValueEnum;
use qconstell::search::SearchCertificate;
use qconstell::CheckReport;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Tag written into every result file.
pub const RESULT_FORMAT: &str = "qconstell-result/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Construct,
    Verify,
    Search,
    Replay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    Sic,
    Mub,
    Hadamard,
    Latin,
    Oqls,
    TwoUnitary,
    Ame,
    Werner,
    Dichotomic,
    Distill,
    Ksum,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Sic => "sic",
            Problem::Mub => "mub",
            Problem::Hadamard => "hadamard",
            Problem::Latin => "latin",
            Problem::Oqls => "oqls",
            Problem::TwoUnitary => "two-unitary",
            Problem::Ame => "ame",
            Problem::Werner => "werner",
            Problem::Dichotomic => "dichotomic",
            Problem::Distill => "distill",
            Problem::Ksum => "ksum",
        }
    }
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Construct => "construct",
            Command::Verify => "verify",
            Command::Search => "search",
            Command::Replay => "replay",
        }
    }
}

/// Everything that determines a run, echoed verbatim into its result file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub problem: Option<Problem>,
    /// Problem parameters that were given on the command line.
    pub parameters: BTreeMap<String, Value>,
    pub input: Option<String>,
    pub input_sha256: Option<String>,
    pub output: String,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub budget: Option<usize>,
    pub threads: Option<usize>,
    /// Tolerance overrides given with `--tol`.
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Constructed,
    Passed,
    Failed,
    Completed,
    Reproduced,
    Diverged,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Constructed | Status::Passed | Status::Completed | Status::Reproduced => 0,
            Status::Failed | Status::Diverged => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayCheck {
    pub original_bits: String,
    pub replayed_bits: String,
    pub identical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub format: String,
    pub run: RunConfig,
    pub status: Status,
    pub exit_code: i32,
    pub summary: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<CheckReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<SearchCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replay: Option<ReplayCheck>,
    /// The constructed object, or the best point of a search decoded into
    /// the matrix/state schema.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<Value>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub figures: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// What a command produced, before it is wrapped into a [`ResultFile`].
#[derive(Debug, Default)]
pub struct Outcome {
    pub status: Option<Status>,
    pub summary: Vec<String>,
    pub report: Option<CheckReport>,
    pub certificate: Option<SearchCertificate>,
    pub replay: Option<ReplayCheck>,
    pub object: Option<Value>,
    pub figures: BTreeMap<String, f64>,
    pub labels: Vec<String>,
}

impl ResultFile {
    pub fn from_outcome(run: RunConfig, o: Outcome) -> Self {
        let status = o.status.unwrap_or(Status::Completed);
        Self {
            format: RESULT_FORMAT.into(),
            run,
            status,
            exit_code: status.exit_code(),
            summary: o.summary,
            report: o.report,
            certificate: o.certificate,
            replay: o.replay,
            object: o.object,
            figures: o.figures,
            labels: o.labels,
            error: None,
        }
    }

    pub fn from_error(run: RunConfig, message: String) -> Self {
        Self {
            format: RESULT_FORMAT.into(),
            run,
            status: Status::Error,
            exit_code: 2,
            summary: vec![format!("error: {message}")],
            report: None,
            certificate: None,
            replay: None,
            object: None,
            figures: BTreeMap::new(),
            labels: Vec::new(),
            error: Some(message),
        }
    }
}
