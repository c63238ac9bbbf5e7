use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::manifold::Manifold;
use super::optimizer::{RestartOutcome, RestartStatus, SearchConfig};
use super::problems::ProblemSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub sub_seed: u64,
    pub best_value: Option<f64>,
    pub iterations: usize,
    pub gradient_norm: Option<f64>,
    #[serde(flatten)]
    pub status: RestartStatus,
}

impl From<&RestartOutcome> for RestartSummary {
    fn from(o: &RestartOutcome) -> Self {
        Self {
            restart: o.restart,
            sub_seed: o.sub_seed,
            best_value: o.best_value,
            iterations: o.iterations,
            gradient_norm: o.gradient_norm.is_finite().then_some(o.gradient_norm),
            status: o.status.clone(),
        }
    }
}

/// Replayable record of one search run.
///
/// `best_value_bits` holds the IEEE-754 bit pattern of `best_value` so that
/// bit-identical replay can be checked independently of decimal printing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchCertificate {
    pub problem: ProblemSpec,
    pub seed: u64,
    pub restarts: usize,
    pub config: SearchConfig,
    pub manifold: Manifold,
    /// NaN (written as `null`) when every restart aborted.
    #[serde(deserialize_with = "null_as_nan")]
    pub best_value: f64,
    pub best_value_bits: String,
    pub best_restart: Option<usize>,
    pub best_point: Vec<f64>,
    /// Best value of each restart, in restart order (`None` for aborted restarts).
    pub value_trace: Vec<Option<f64>>,
    pub restart_summaries: Vec<RestartSummary>,
    /// Tolerances that entered any verdict.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Problem-specific figures derived from the best point.
    #[serde(default)]
    pub reported: BTreeMap<String, f64>,
    #[serde(default)]
    pub verdict: Option<String>,
    pub wall_time_secs: f64,
}

fn null_as_nan<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

pub fn value_bits(v: f64) -> String {
    format!("{:#018x}", v.to_bits())
}

impl SearchCertificate {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        problem: ProblemSpec,
        config: SearchConfig,
        manifold: Manifold,
        best_value: f64,
        best_point: Vec<f64>,
        best_restart: Option<usize>,
        restart_summaries: Vec<RestartSummary>,
        wall_time_secs: f64,
    ) -> Self {
        Self {
            problem,
            seed: config.seed,
            restarts: config.restarts,
            value_trace: restart_summaries.iter().map(|r| r.best_value).collect(),
            config,
            manifold,
            best_value,
            best_value_bits: value_bits(best_value),
            best_restart,
            best_point,
            restart_summaries,
            tolerances: BTreeMap::new(),
            reported: BTreeMap::new(),
            verdict: None,
            wall_time_secs,
        }
    }

    /// Whether `other` reproduces this certificate's best value bit for bit.
    pub fn same_best_value(&self, other: &SearchCertificate) -> bool {
        self.best_value.to_bits() == other.best_value.to_bits() && self.best_value_bits == other.best_value_bits
    }

    pub fn with_tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    pub fn with_reported(mut self, name: &str, value: f64) -> Self {
        self.reported.insert(name.to_string(), value);
        self
    }

    pub fn with_verdict(mut self, verdict: impl Into<String>) -> Self {
        self.verdict = Some(verdict.into());
        self
    }
}
