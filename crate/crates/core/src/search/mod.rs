//! Seeded multi-restart optimization and replayable certificates.

pub mod certificate;
pub mod generators;
pub mod manifold;
pub mod optimizer;
pub mod problems;

pub use certificate::{value_bits, RestartSummary, SearchCertificate};
pub use generators::{hermitian_from_params, unitary_from_params};
pub use manifold::Manifold;
pub use optimizer::{
    merge_best, minimize, minimize_from, run_restart, FnObjective, Objective, RestartOutcome, RestartStatus,
    SearchConfig, StepRule,
};
pub use problems::{replay, run_search, KsMode, ProblemSpec};
