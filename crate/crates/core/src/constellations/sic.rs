//! Weyl–Heisenberg orbits and SIC fiducials.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{c64, ComplexMatrix};
use crate::report::{CheckReport, Worst};
use crate::search::manifold::{complex_to_point, point_to_complex};
use crate::search::{minimize, Manifold, Objective, ProblemSpec, SearchCertificate, SearchConfig};
use crate::state::StateVector;
use crate::{Error, Result};

/// Default tolerance for orbits built from search output.
pub const SEARCH_TOL: f64 = 1e-8;

/// A fiducial together with its (optional) orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SicCandidate {
    pub dim: usize,
    pub fiducial: StateVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit: Option<Vec<StateVector>>,
}

impl SicCandidate {
    pub fn new(fiducial: StateVector) -> Result<Self> {
        if fiducial.dims().len() != 1 {
            return Err(Error::InvalidArgument("a fiducial lives in a single factor".into()));
        }
        Ok(Self { dim: fiducial.dim(), fiducial, orbit: None })
    }

    pub fn with_orbit(mut self) -> Result<Self> {
        self.orbit = Some(sic_orbit(&self.fiducial)?);
        Ok(self)
    }
}

/// `τ^{pq} ω^{qj}` for the phase convention `τ = −exp(iπ/N)`.
fn wh_phase(n: usize, p: i64, q: i64, j: usize) -> Complex64 {
    let two_n = 2 * n as i64;
    // τ = exp(iπ(N+1)/N), so τ^{pq} only depends on pq mod 2N.
    let tau_exp = ((p * q).rem_euclid(two_n) * (n as i64 + 1)).rem_euclid(two_n);
    let omega_exp = (q.rem_euclid(n as i64) * j as i64).rem_euclid(n as i64);
    let angle = PI * tau_exp as f64 / n as f64 + 2.0 * PI * omega_exp as f64 / n as f64;
    c64(angle.cos(), angle.sin())
}

fn shift(n: usize, p: i64, j: usize) -> usize {
    (j as i64 + p).rem_euclid(n as i64) as usize
}

/// `D(p,q) = τ^{pq} X^p Z^q` with `X|j> = |j+1>`, `Z|j> = ω^j |j>`.
pub fn wh_displacement(n: usize, p: i64, q: i64) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension {n} < 2")));
    }
    let mut d = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        d[(shift(n, p, j), j)] = wh_phase(n, p, q, j);
    }
    Ok(d)
}

/// `D(p,q) v` without forming the matrix.
pub fn apply_displacement(p: i64, q: i64, v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    let mut out = vec![c64(0.0, 0.0); n];
    for (j, z) in v.iter().enumerate() {
        out[shift(n, p, j)] = wh_phase(n, p, q, j) * z;
    }
    out
}

/// `D(p,q)† v`.
fn apply_displacement_adjoint(p: i64, q: i64, v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    (0..n).map(|j| wh_phase(n, p, q, j).conj() * v[shift(n, p, j)]).collect()
}

/// The `N²` vectors `D(p,q)|f>`, ordered by `p*N + q`.
pub fn sic_orbit(fiducial: &StateVector) -> Result<Vec<StateVector>> {
    let n = fiducial.dim();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension {n} < 2")));
    }
    let mut out = Vec::with_capacity(n * n);
    for p in 0..n as i64 {
        for q in 0..n as i64 {
            let v = apply_displacement(p, q, fiducial.amplitudes());
            out.push(StateVector::new(fiducial.dims().to_vec(), v)?);
        }
    }
    Ok(out)
}

/// Checks `|<ψ_j|ψ_k>|² = (N δ_jk + 1)/(N + 1)` over all pairs.
/// The witness is the pair `[j, k]` with the worst deviation.
pub fn verify_sic(vectors: &[StateVector], tol: f64) -> Result<CheckReport> {
    let Some(first) = vectors.first() else {
        return Err(Error::InvalidArgument("empty vector list".into()));
    };
    let n = first.dim();
    if vectors.len() != n * n {
        return Err(Error::InvalidArgument(format!(
            "a SIC in dimension {n} has {} vectors, got {}",
            n * n,
            vectors.len()
        )));
    }
    if vectors.iter().any(|v| v.dim() != n) {
        return Err(Error::DimensionMismatch("vectors of different dimensions".into()));
    }
    let off = 1.0 / (n as f64 + 1.0);
    let mut worst = Worst::default();
    for j in 0..vectors.len() {
        for k in j..vectors.len() {
            let target = if j == k { 1.0 } else { off };
            let r = (vectors[j].inner(&vectors[k]).norm_sqr() - target).abs();
            worst.update(r, || vec![vec![j, k]]);
        }
    }
    Ok(worst.into_report(tol))
}

/// `Σ_{(p,q) ≠ (0,0)} (|<f|D(p,q)|f>|² − 1/(N+1))²`.
pub fn sic_residual(fiducial: &[Complex64]) -> f64 {
    sic_terms(fiducial, false).0
}

/// Residual together with its gradient in interleaved real coordinates.
pub fn sic_residual_gradient(fiducial: &[Complex64]) -> (f64, Vec<f64>) {
    let (v, g) = sic_terms(fiducial, true);
    (v, complex_to_point(&g))
}

fn sic_terms(f: &[Complex64], want_grad: bool) -> (f64, Vec<Complex64>) {
    let n = f.len();
    let off = 1.0 / (n as f64 + 1.0);
    let mut value = 0.0;
    let mut grad = vec![c64(0.0, 0.0); if want_grad { n } else { 0 }];
    for p in 0..n as i64 {
        for q in 0..n as i64 {
            if p == 0 && q == 0 {
                continue;
            }
            let df = apply_displacement(p, q, f);
            let c: Complex64 = f.iter().zip(&df).map(|(a, b)| a.conj() * b).sum();
            let g = c.norm_sqr() - off;
            value += g * g;
            if want_grad {
                let dadj = apply_displacement_adjoint(p, q, f);
                // 2 · ∂/∂f̄ of g², i.e. 4 g (c̄ D f + c D† f)
                for k in 0..n {
                    grad[k] += (c.conj() * df[k] + c * dadj[k]) * (4.0 * g);
                }
            }
        }
    }
    (value, grad)
}

/// [`sic_residual`] on the unit sphere of `C^N`, seen as `R^{2N}`.
#[derive(Debug, Clone, Copy)]
pub struct SicObjective {
    pub dim: usize,
}

impl Objective for SicObjective {
    fn value(&self, x: &[f64]) -> f64 {
        sic_residual(&point_to_complex(x))
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        Some(sic_residual_gradient(&point_to_complex(x)).1)
    }
}

/// Seeded fiducial search. The certificate reports the verifier residual of
/// the best orbit and the verdict `sic-found` when it is at most
/// [`SEARCH_TOL`].
pub fn search_sic(n: usize, config: &SearchConfig) -> Result<SearchCertificate> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension {n} < 2")));
    }
    let manifold = Manifold::UnitSphere { dim: 2 * n };
    let cert = minimize(&SicObjective { dim: n }, &manifold, config, ProblemSpec::Sic { dim: n })?;
    if cert.best_restart.is_none() {
        return Ok(cert.with_verdict("aborted"));
    }
    let fid = StateVector::normalized(vec![n], point_to_complex(&cert.best_point))?;
    let rep = verify_sic(&sic_orbit(&fid)?, SEARCH_TOL)?;
    let verdict = if rep.passed { "sic-found" } else { "no-sic-found" };
    Ok(cert
        .with_tolerance("verify", SEARCH_TOL)
        .with_reported("verify_residual", rep.max_residual)
        .with_verdict(verdict))
}

/// Fiducial on the Bloch vector `(1,1,1)/√3`; its orbit is a regular
/// tetrahedron.
pub fn tetrahedron_fiducial() -> StateVector {
    let cos_theta = 1.0 / 3f64.sqrt();
    let (c, s) = (((1.0 + cos_theta) / 2.0).sqrt(), ((1.0 - cos_theta) / 2.0).sqrt());
    let phase = c64((PI / 4.0).cos(), (PI / 4.0).sin());
    StateVector::new(vec![2], vec![c64(c, 0.0), phase * s]).expect("unit by construction")
}

/// The Hesse fiducial `(0, 1, −1)/√2` in dimension three.
pub fn hesse_fiducial() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::new(vec![3], vec![c64(0.0, 0.0), c64(h, 0.0), c64(-h, 0.0)]).expect("unit by construction")
}
