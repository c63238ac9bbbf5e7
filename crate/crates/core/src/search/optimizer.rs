//! Seeded multi-restart local minimization on a [`Manifold`].
//!
//! Each restart starts from a random point drawn with its own sub-seed,
//! follows limited-memory quasi-Newton directions projected onto the tangent
//! space, and accepts steps by Armijo backtracking. Points are retracted
//! after every step, so the objective is only ever evaluated on the manifold.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::certificate::{RestartSummary, SearchCertificate};
use super::manifold::Manifold;
use super::problems::ProblemSpec;
use crate::random::{rng_from_seed, sub_seed};
use crate::{Error, Result};

/// Something to minimize over the points of a manifold.
pub trait Objective: Sync {
    fn value(&self, x: &[f64]) -> f64;

    /// Euclidean gradient in ambient coordinates at an on-manifold point, if
    /// the objective knows it. Otherwise central differences are used.
    fn gradient(&self, _x: &[f64]) -> Option<Vec<f64>> {
        None
    }
}

/// Adapter turning a closure into an [`Objective`] without analytic gradient.
pub struct FnObjective<F>(pub F);

impl<F: Fn(&[f64]) -> f64 + Sync> Objective for FnObjective<F> {
    fn value(&self, x: &[f64]) -> f64 {
        (self.0)(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRule {
    /// Trial step along steepest descent (and right after a memory reset).
    pub initial_step: f64,
    /// Backtracking shrink factor.
    pub shrink: f64,
    /// Sufficient-decrease constant.
    pub armijo: f64,
    /// Number of curvature pairs kept; 0 gives plain gradient descent.
    pub memory: usize,
    pub max_backtracks: usize,
}

impl Default for StepRule {
    fn default() -> Self {
        Self { initial_step: 0.1, shrink: 0.5, armijo: 1e-4, memory: 8, max_backtracks: 60 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop when the Riemannian gradient norm falls to this value.
    pub grad_tol: f64,
    /// Stop a restart as soon as the value is at or below this target.
    #[serde(default)]
    pub value_target: Option<f64>,
    pub step: StepRule,
    /// Relative step for central differences.
    pub fd_step: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 20,
            max_iters: 10_000,
            grad_tol: 1e-8,
            value_target: None,
            step: StepRule::default(),
            fd_step: 1e-6,
        }
    }
}

impl SearchConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_grad_tol(mut self, grad_tol: f64) -> Self {
        self.grad_tol = grad_tol;
        self
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.value_target = Some(target);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("at least one restart is required".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("iteration budget must be positive".into()));
        }
        let s = &self.step;
        if !(s.shrink > 0.0 && s.shrink < 1.0 && s.initial_step > 0.0 && s.armijo > 0.0 && s.armijo < 1.0)
        {
            return Err(Error::InvalidArgument(format!("invalid step rule {s:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RestartStatus {
    Converged,
    TargetReached,
    IterationCap,
    /// No step satisfied the sufficient-decrease condition.
    Stalled,
    Aborted { reason: String },
}

#[derive(Debug, Clone)]
pub struct RestartOutcome {
    pub restart: usize,
    pub sub_seed: u64,
    /// Best value reached; `None` when the restart aborted before any finite value.
    pub best_value: Option<f64>,
    pub best_point: Vec<f64>,
    /// Value after every accepted step, starting with the initial point.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub status: RestartStatus,
}

struct Evaluator<'a> {
    objective: &'a dyn Objective,
    manifold: &'a Manifold,
    fd_step: f64,
}

impl Evaluator<'_> {
    /// `f(R(x))` together with the retracted point; `None` when the
    /// retraction is undefined there.
    fn at(&self, x: &[f64]) -> Option<(f64, Vec<f64>)> {
        let mut y = x.to_vec();
        self.manifold.retract(&mut y).ok()?;
        Some((self.objective.value(&y), y))
    }

    /// Riemannian gradient at an on-manifold point.
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = match self.objective.gradient(x) {
            Some(g) => g,
            None => self.finite_difference(x),
        };
        self.manifold.project_tangent(x, &mut g);
        g
    }

    fn finite_difference(&self, x: &[f64]) -> Vec<f64> {
        let mut probe = x.to_vec();
        let mut g = vec![0.0; x.len()];
        for i in 0..x.len() {
            let h = self.fd_step * x[i].abs().max(1.0);
            probe[i] = x[i] + h;
            let fp = self.at(&probe).map_or(f64::NAN, |v| v.0);
            probe[i] = x[i] - h;
            let fm = self.at(&probe).map_or(f64::NAN, |v| v.0);
            probe[i] = x[i];
            g[i] = (fp - fm) / (2.0 * h);
        }
        g
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Two-loop recursion: `-H g` for the stored curvature pairs.
fn lbfgs_direction(g: &[f64], pairs: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(pairs.len());
    for (s, y, rho) in pairs.iter().rev() {
        let a = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push(a);
    }
    if let Some((s, y, _)) = pairs.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for ((s, y, rho), a) in pairs.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

/// Runs restart `restart` of `config` and returns its outcome. The result
/// depends only on `(config, restart)` and the objective.
pub fn run_restart(
    objective: &dyn Objective,
    manifold: &Manifold,
    config: &SearchConfig,
    restart: usize,
) -> RestartOutcome {
    let seed = sub_seed(config.seed, restart as u64);
    let mut rng = rng_from_seed(seed);
    let start = manifold.random_point(&mut rng);
    minimize_from(objective, manifold, config, start, restart, seed)
}

/// Local minimization from a given starting point.
pub fn minimize_from(
    objective: &dyn Objective,
    manifold: &Manifold,
    config: &SearchConfig,
    start: Vec<f64>,
    restart: usize,
    sub_seed: u64,
) -> RestartOutcome {
    let eval = Evaluator { objective, manifold, fd_step: config.fd_step };
    let rule = config.step;
    let mut outcome = RestartOutcome {
        restart,
        sub_seed,
        best_value: None,
        best_point: start.clone(),
        trace: Vec::new(),
        iterations: 0,
        gradient_norm: f64::NAN,
        status: RestartStatus::IterationCap,
    };

    let (mut f, mut x) = match eval.at(&start) {
        Some(v) => v,
        None => {
            outcome.status = RestartStatus::Aborted { reason: "starting point off the manifold".into() };
            return outcome;
        }
    };
    if !f.is_finite() {
        outcome.status = RestartStatus::Aborted { reason: format!("non-finite value {f} at start") };
        return outcome;
    }
    outcome.trace.push(f);
    let mut g = eval.gradient(&x);
    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();

    let finish = |outcome: &mut RestartOutcome, f: f64, x: Vec<f64>, gnorm: f64, status: RestartStatus| {
        outcome.best_value = Some(f);
        outcome.best_point = x;
        outcome.gradient_norm = gnorm;
        outcome.status = status;
    };

    loop {
        let gnorm = norm2(&g);
        if !gnorm.is_finite() {
            let reason = "non-finite gradient".to_string();
            finish(&mut outcome, f, x, gnorm, RestartStatus::Aborted { reason });
            return outcome;
        }
        if config.value_target.is_some_and(|t| f <= t) {
            finish(&mut outcome, f, x, gnorm, RestartStatus::TargetReached);
            return outcome;
        }
        if gnorm <= config.grad_tol {
            finish(&mut outcome, f, x, gnorm, RestartStatus::Converged);
            return outcome;
        }
        if outcome.iterations >= config.max_iters {
            finish(&mut outcome, f, x, gnorm, RestartStatus::IterationCap);
            return outcome;
        }

        let mut d = if rule.memory > 0 && !pairs.is_empty() {
            let mut d = lbfgs_direction(&g, &pairs);
            manifold.project_tangent(&x, &mut d);
            d
        } else {
            g.iter().map(|v| -v).collect()
        };
        let mut slope = dot(&g, &d);
        let mut t = if pairs.is_empty() { rule.initial_step } else { 1.0 };
        if !(slope < -1e-14 * gnorm * norm2(&d)) {
            pairs.clear();
            d = g.iter().map(|v| -v).collect();
            slope = -gnorm * gnorm;
            t = rule.initial_step;
        }

        let mut accepted = None;
        for _ in 0..=rule.max_backtracks {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + t * b).collect();
            if let Some((ft, xt)) = eval.at(&trial) {
                if ft.is_nan() {
                    let reason = "objective returned NaN".to_string();
                    finish(&mut outcome, f, x, gnorm, RestartStatus::Aborted { reason });
                    return outcome;
                }
                if ft <= f + rule.armijo * t * slope {
                    accepted = Some((ft, xt));
                    break;
                }
            }
            t *= rule.shrink;
        }
        let Some((f_new, x_new)) = accepted else {
            if !pairs.is_empty() {
                // Retry once from steepest descent before giving up.
                pairs.clear();
                continue;
            }
            finish(&mut outcome, f, x, gnorm, RestartStatus::Stalled);
            return outcome;
        };

        let g_new = eval.gradient(&x_new);
        if rule.memory > 0 {
            let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &y);
            if sy > 1e-300 && sy.is_finite() {
                if pairs.len() == rule.memory {
                    pairs.pop_front();
                }
                pairs.push_back((s, y, 1.0 / sy));
            }
        }
        f = f_new;
        x = x_new;
        g = g_new;
        outcome.iterations += 1;
        outcome.trace.push(f);
    }
}

#[cfg(feature = "parallel")]
fn run_all(objective: &dyn Objective, manifold: &Manifold, config: &SearchConfig) -> Vec<RestartOutcome> {
    use rayon::prelude::*;
    (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(objective, manifold, config, r))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn run_all(objective: &dyn Objective, manifold: &Manifold, config: &SearchConfig) -> Vec<RestartOutcome> {
    (0..config.restarts).map(|r| run_restart(objective, manifold, config, r)).collect()
}

/// Index of the best restart: smallest value, earliest restart on ties.
/// `outcomes` must be sorted by restart index.
pub fn merge_best(outcomes: &[RestartOutcome]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, o) in outcomes.iter().enumerate() {
        if let Some(v) = o.best_value {
            if best.is_none_or(|(_, b)| v < b) {
                best = Some((i, v));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Runs every restart and folds them into a certificate in restart order.
pub fn minimize(
    objective: &dyn Objective,
    manifold: &Manifold,
    config: &SearchConfig,
    problem: ProblemSpec,
) -> Result<SearchCertificate> {
    config.validate()?;
    let clock = Clock::start();
    let mut outcomes = run_all(objective, manifold, config);
    outcomes.sort_by_key(|o| o.restart);
    let best = merge_best(&outcomes);
    let (best_value, best_point, best_restart) = match best {
        Some(i) => (outcomes[i].best_value.unwrap(), outcomes[i].best_point.clone(), Some(outcomes[i].restart)),
        None => (f64::NAN, Vec::new(), None),
    };
    Ok(SearchCertificate::new(
        problem,
        config.clone(),
        manifold.clone(),
        best_value,
        best_point,
        best_restart,
        outcomes.iter().map(RestartSummary::from).collect(),
        clock.seconds(),
    ))
}

/// Wall clock for certificates. `wasm32-unknown-unknown` has no time source,
/// so runs there report zero.
struct Clock(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Clock {
    #[cfg(not(target_arch = "wasm32"))]
    fn start() -> Self {
        Clock(std::time::Instant::now())
    }

    #[cfg(target_arch = "wasm32")]
    fn start() -> Self {
        Clock()
    }

    #[cfg(not(target_arch = "wasm32"))]
    fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }

    #[cfg(target_arch = "wasm32")]
    fn seconds(&self) -> f64 {
        0.0
    }
}
