//! Three browser-side operations over `qconstell`, exported through
//! `wasm-bindgen`. Each `*_impl` function is plain Rust so it can be tested
//! natively; the exported wrappers only turn results into JSON strings.

use qconstell::constellations::{search_sic, sic_orbit, verify_sic};
use qconstell::entanglement::{classify_werner, ks_objective, random_normal_instance, werner_pt_spectrum, KsInstance};
use qconstell::linalg::{inner, singular_values};
use qconstell::random::{complex_normal_vec, rng_from_seed};
use qconstell::search::manifold::point_to_complex;
use qconstell::search::SearchConfig;
use qconstell::{ComplexMatrix, StateVector};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest SIC dimension the page will search; the heatmap has `N⁴` cells.
pub const MAX_SIC_DIM: usize = 8;
pub const MAX_CURVE_POINTS: usize = 2001;

#[derive(Debug, Clone, Serialize)]
pub struct WernerCurve {
    pub d: usize,
    pub alpha: Vec<f64>,
    pub lambda_min: Vec<f64>,
    pub labels: Vec<Vec<&'static str>>,
    pub npt_edge: f64,
    pub one_copy_edge: f64,
}

/// `λ_min(ρ(d, α)^Γ)` on an even grid over `α ∈ [−1, 1]`.
pub fn werner_curve_impl(d: usize, points: usize) -> Result<WernerCurve, String> {
    if !(2..=MAX_CURVE_POINTS).contains(&points) {
        return Err(format!("points must lie in 2..={MAX_CURVE_POINTS}"));
    }
    let mut curve = WernerCurve {
        d,
        alpha: Vec::with_capacity(points),
        lambda_min: Vec::with_capacity(points),
        labels: Vec::with_capacity(points),
        npt_edge: -1.0 / d as f64,
        one_copy_edge: -0.5,
    };
    for k in 0..points {
        let alpha = -1.0 + 2.0 * k as f64 / (points - 1) as f64;
        let spectrum = werner_pt_spectrum(d, alpha).map_err(|e| e.to_string())?;
        curve.alpha.push(alpha);
        curve.lambda_min.push(spectrum.lambda_min);
        curve.labels.push(classify_werner(d, alpha).map_err(|e| e.to_string())?.labels());
    }
    Ok(curve)
}

#[derive(Debug, Clone, Serialize)]
pub struct SicHeatmap {
    pub n: usize,
    pub best_value: f64,
    pub residual: f64,
    pub verdict: Option<String>,
    /// `|<ψ_i|ψ_j>|²` over the orbit, row-major `N² × N²`.
    pub overlaps: Vec<f64>,
    pub target: f64,
}

pub fn sic_heatmap_impl(n: usize, seed: u64, restarts: usize) -> Result<SicHeatmap, String> {
    if !(2..=MAX_SIC_DIM).contains(&n) {
        return Err(format!("dimension must lie in 2..={MAX_SIC_DIM}"));
    }
    let cfg = SearchConfig::default().with_seed(seed).with_restarts(restarts.max(1)).with_grad_tol(1e-12);
    let cert = search_sic(n, &cfg).map_err(|e| e.to_string())?;
    let fiducial = StateVector::normalized(vec![n], point_to_complex(&cert.best_point)).map_err(|e| e.to_string())?;
    let orbit = sic_orbit(&fiducial).map_err(|e| e.to_string())?;
    let residual = verify_sic(&orbit, 0.0).map_err(|e| e.to_string())?.max_residual;
    let mut overlaps = Vec::with_capacity(orbit.len() * orbit.len());
    for a in &orbit {
        for b in &orbit {
            overlaps.push(inner(a.amplitudes(), b.amplitudes()).norm_sqr());
        }
    }
    Ok(SicHeatmap {
        n,
        best_value: cert.best_value,
        residual,
        verdict: cert.verdict,
        overlaps,
        target: 1.0 / (n as f64 + 1.0),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct KsSample {
    pub kind: String,
    pub singular_values: Vec<f64>,
    pub objective: f64,
    pub bound: f64,
}

/// Singular values of `A ⊗ I + I ⊗ B` for a `normal` pair, a `general`
/// Gaussian pair, or the `extremal` pair `A = B = diag(1, −1, 0, 0)/4`.
pub fn ks_sample_impl(kind: &str, seed: u64) -> Result<KsSample, String> {
    let mut rng = rng_from_seed(seed);
    let inst = match kind {
        "normal" => random_normal_instance(&mut rng, 4),
        "general" => {
            let a = ComplexMatrix::from_vec(4, 4, complex_normal_vec(&mut rng, 16)).map_err(|e| e.to_string())?;
            let b = ComplexMatrix::from_vec(4, 4, complex_normal_vec(&mut rng, 16)).map_err(|e| e.to_string())?;
            KsInstance::project(&a, &b)
        }
        "extremal" => {
            let q = ComplexMatrix::from_real_diagonal(&[0.25, -0.25, 0.0, 0.0]);
            KsInstance::new(q.clone(), q)
        }
        other => return Err(format!("unknown instance kind {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    Ok(KsSample {
        kind: kind.to_string(),
        singular_values: singular_values(&inst.sum()).map_err(|e| e.to_string())?,
        objective: ks_objective(&inst).map_err(|e| e.to_string())?,
        bound: 0.5,
    })
}

fn to_json<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e)).and_then(|v| serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string())))
}

#[wasm_bindgen]
pub fn werner_curve(d: usize, points: usize) -> Result<String, JsError> {
    to_json(werner_curve_impl(d, points))
}

#[wasm_bindgen]
pub fn sic_heatmap(n: usize, seed: u64, restarts: usize) -> Result<String, JsError> {
    to_json(sic_heatmap_impl(n, seed, restarts))
}

#[wasm_bindgen]
pub fn ks_sample(kind: &str, seed: u64) -> Result<String, JsError> {
    to_json(ks_sample_impl(kind, seed))
}
