use serde::{Deserialize, Serialize};

/// Outcome of a verifier: `passed` holds exactly when
/// `max_residual <= tolerance_used`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub passed: bool,
    pub max_residual: f64,
    /// Index tuples locating the worst violation.
    pub witness: Vec<Vec<usize>>,
    pub tolerance_used: f64,
    /// Named sub-residuals when a check combines several conditions.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<ResidualPart>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualPart {
    pub name: String,
    pub residual: f64,
}

impl CheckReport {
    pub fn new(max_residual: f64, witness: Vec<Vec<usize>>, tolerance: f64) -> Self {
        Self {
            // NaN residuals never pass.
            passed: max_residual <= tolerance,
            max_residual,
            witness,
            tolerance_used: tolerance,
            parts: Vec::new(),
        }
    }

    /// Combines named parts; the overall residual is their maximum and the
    /// witness is the one attached to the worst part.
    pub fn combine(parts: Vec<(String, f64, Vec<Vec<usize>>)>, tolerance: f64) -> Self {
        let mut worst = Worst::default();
        let mut named = Vec::with_capacity(parts.len());
        for (name, r, w) in parts {
            worst.update(r, || w);
            named.push(ResidualPart { name, residual: r });
        }
        let mut rep = worst.into_report(tolerance);
        rep.parts = named;
        rep
    }

    pub fn part(&self, name: &str) -> Option<f64> {
        self.parts.iter().find(|p| p.name == name).map(|p| p.residual)
    }
}

/// Running maximum with a witness, used by the verifiers. A NaN residual is
/// sticky.
#[derive(Debug, Clone)]
pub(crate) struct Worst {
    pub value: f64,
    pub witness: Vec<Vec<usize>>,
}

impl Default for Worst {
    fn default() -> Self {
        Self { value: f64::NEG_INFINITY, witness: Vec::new() }
    }
}

impl Worst {
    pub fn update(&mut self, value: f64, witness: impl FnOnce() -> Vec<Vec<usize>>) {
        if self.value.is_nan() {
            return;
        }
        if value.is_nan() || value > self.value {
            self.value = value;
            self.witness = witness();
        }
    }

    pub fn into_report(self, tolerance: f64) -> CheckReport {
        let value = if self.value == f64::NEG_INFINITY { 0.0 } else { self.value };
        CheckReport::new(value, self.witness, tolerance)
    }
}
