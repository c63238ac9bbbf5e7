use serde::{Deserialize, Serialize};

use super::certificate::SearchCertificate;
use super::optimizer::SearchConfig;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KsMode {
    Normal,
    OneArbitrary,
    General,
}

/// Identifies a search problem; together with a [`SearchConfig`] it fully
/// determines a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "kebab-case")]
pub enum ProblemSpec {
    Sic { dim: usize },
    Mub { dim: usize, bases: usize },
    TwoUnitary { d: usize },
    Distill { d: usize, alpha: f64, copies: usize },
    Ksum { mode: KsMode },
    Custom { name: String },
}

impl ProblemSpec {
    pub fn custom(name: &str) -> Self {
        ProblemSpec::Custom { name: name.to_string() }
    }
}

/// Runs the search a problem names. Custom problems carry no objective and
/// cannot be run this way.
pub fn run_search(spec: &ProblemSpec, config: &SearchConfig) -> Result<SearchCertificate> {
    match spec {
        ProblemSpec::Sic { dim } => crate::constellations::search_sic(*dim, config),
        ProblemSpec::Mub { dim, bases } => crate::constellations::search_mub(*dim, *bases, config),
        ProblemSpec::TwoUnitary { d } => crate::combinatorics::search_two_unitary(*d, config),
        ProblemSpec::Distill { d, alpha, copies } => {
            crate::entanglement::search_distillable(*d, *alpha, *copies, config)
        }
        ProblemSpec::Ksum { mode } => crate::entanglement::ks_search_violation(*mode, config),
        ProblemSpec::Custom { name } => {
            Err(Error::InvalidArgument(format!("custom problem {name:?} has no registered objective")))
        }
    }
}

/// Reruns the search recorded in a certificate.
pub fn replay(cert: &SearchCertificate) -> Result<SearchCertificate> {
    run_search(&cert.problem, &cert.config)
}
