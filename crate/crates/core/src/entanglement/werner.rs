//! Werner states, their partial-transpose spectra and the dichotomic test.

use serde::{Deserialize, Serialize};

use crate::linalg::{c64, hermitian_eigenvalues, partial_transpose, ComplexMatrix};
use crate::report::CheckReport;
use crate::state::DensityMatrix;
use crate::{Error, Result};

/// `<ij|V|kl> = δ_il δ_jk`.
pub fn swap_operator(d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("local dimension {d} < 2")));
    }
    let mut v = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            v[(i * d + j, j * d + i)] = c64(1.0, 0.0);
        }
    }
    Ok(v)
}

/// `(|00> + |11> + ...)/√d`.
pub fn psi_plus(d: usize) -> Vec<num_complex::Complex64> {
    let s = 1.0 / (d as f64).sqrt();
    (0..d * d).map(|k| if k / d == k % d { c64(s, 0.0) } else { c64(0.0, 0.0) }).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WernerState {
    pub d: usize,
    pub alpha: f64,
    pub rho: DensityMatrix,
}

fn check_params(d: usize, alpha: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("local dimension {d} < 2")));
    }
    if !(-1.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} outside [-1, 1]")));
    }
    Ok(())
}

/// `ρ(d, α) = (I ⊗ I + α V)/(d² + α d)`.
pub fn werner(d: usize, alpha: f64) -> Result<WernerState> {
    check_params(d, alpha)?;
    let norm = (d * d) as f64 + alpha * d as f64;
    let mut m = swap_operator(d)?.scale_real(alpha);
    for k in 0..d * d {
        m[(k, k)] += c64(1.0, 0.0);
    }
    let rho = DensityMatrix::new(vec![d, d], m.scale_real(1.0 / norm))?;
    Ok(WernerState { d, alpha, rho })
}

/// Closed-form spectrum of `ρ(d, α)^Γ` as `(eigenvalue, multiplicity)`
/// pairs, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WernerSpectrum {
    pub lambda_min: f64,
    pub eigenvalues: Vec<(f64, usize)>,
}

impl WernerSpectrum {
    /// All `d²` eigenvalues, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        self.eigenvalues.iter().flat_map(|&(v, m)| std::iter::repeat_n(v, m)).collect()
    }
}

/// `ρ^Γ = (I + α d P₊)/(d² + α d)`: eigenvalue `(1 + α d)/(d² + α d)` once
/// (on `|ψ₊>`) and `1/(d² + α d)` on its complement.
pub fn werner_pt_spectrum(d: usize, alpha: f64) -> Result<WernerSpectrum> {
    check_params(d, alpha)?;
    let df = d as f64;
    let norm = df * df + alpha * df;
    let special = (1.0 + alpha * df) / norm;
    let rest = 1.0 / norm;
    let mut eigenvalues = vec![(special, 1), (rest, d * d - 1)];
    if special > rest {
        eigenvalues.swap(0, 1);
    }
    Ok(WernerSpectrum { lambda_min: special.min(rest), eigenvalues })
}

/// Labels of a Werner state under the one-copy criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WernerClass {
    /// `α ≥ −1/d`.
    Ppt,
    /// `α < −1/d` and `α < −1/2`.
    NptOneCopyDistillable,
    /// `−1/2 ≤ α < −1/d`: NPT, not one-copy distillable, full
    /// distillability unknown.
    NptOneCopyNondistillable,
}

impl WernerClass {
    pub fn labels(&self) -> Vec<&'static str> {
        match self {
            WernerClass::Ppt => vec!["PPT"],
            WernerClass::NptOneCopyDistillable => vec!["NPT", "1-copy-distillable"],
            WernerClass::NptOneCopyNondistillable => {
                vec!["NPT", "1-copy-nondistillable", "distillability-open"]
            }
        }
    }
}

/// NPT iff `α < −1/d`. One-copy distillability asks for a Schmidt-rank-two
/// vector with negative expectation in `ρ^Γ ∝ I + α d P₊`; the largest
/// weight such a vector can have on `|ψ₊>` is `2/d`, so the expectation is
/// `∝ 1 + 2α` and the state is one-copy distillable iff `α < −1/2`.
pub fn classify_werner(d: usize, alpha: f64) -> Result<WernerClass> {
    check_params(d, alpha)?;
    Ok(if alpha >= -1.0 / d as f64 {
        WernerClass::Ppt
    } else if alpha < -0.5 {
        WernerClass::NptOneCopyDistillable
    } else {
        WernerClass::NptOneCopyNondistillable
    })
}

/// `ρ^Γ` proportional to a unitary: all eigenvalue moduli equal, and
/// `ρ^Γ (ρ^Γ)† = c I`. Parts `modulus` (witness: eigenvalue index) and
/// `unitary` (witness: entry).
pub fn dichotomic_check(rho: &DensityMatrix, tol: f64) -> Result<CheckReport> {
    let (da, db) = rho.bipartite_dims()?;
    let pt = partial_transpose(rho.matrix(), da, db)?;
    let ev = hermitian_eigenvalues(&pt)?;
    let mean = ev.iter().map(|v| v.abs()).sum::<f64>() / ev.len() as f64;
    let (k, spread) = ev
        .iter()
        .map(|v| (v.abs() - mean).abs())
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (k, s)| if s > acc.1 || s.is_nan() { (k, s) } else { acc });
    let gram = pt.matmul(&pt.adjoint());
    let n = gram.rows();
    let c = gram.trace().re / n as f64;
    let (dev, i, j) = (&gram - &ComplexMatrix::identity(n).scale_real(c)).argmax_abs();
    Ok(CheckReport::combine(
        vec![("modulus".into(), spread, vec![vec![k]]), ("unitary".into(), dev, vec![vec![i, j]])],
        tol,
    ))
}
