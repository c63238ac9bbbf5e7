//! n-copy distillability probes.
//!
//! A probe is a pair of rank-two projectors `P = p†p`, `Q = q†q` on the
//! `A₁…Aₙ` and `B₁…Bₙ` blocks, given by the `2 x dⁿ` row-orthonormal
//! matrices `p` and `q`. The state is n-copy distillable iff for some probe
//! `(P ⊗ Q) Π (ρ^Γ)^{⊗n} Π† (P ⊗ Q)` has a negative eigenvalue, where `Π`
//! regroups `A₁B₁…AₙBₙ` into `(A₁…Aₙ)(B₁…Bₙ)`. Its nonzero block is the
//! `4 x 4` matrix `M = (p ⊗ q) Π (ρ^Γ)^{⊗n} Π† (p ⊗ q)†`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::werner::werner;
use crate::linalg::{
    c64, hermitian_eig, hermitian_eigenvalues, kron, partial_transpose, permute_subsystems, ComplexMatrix,
    HermitianEigen, MAX_SIDE,
};
use crate::search::manifold::{matrix_from_point, write_matrix};
use crate::search::{minimize, Manifold, Objective, ProblemSpec, SearchCertificate, SearchConfig};
use crate::state::DensityMatrix;
use crate::{Error, Result};

/// Row-orthonormality tolerance for probes.
pub const PROBE_TOL: f64 = 1e-10;

/// Hard limits for the distillability search.
pub const MAX_COPIES: usize = 2;
pub const MAX_LOCAL_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistillProbe {
    pub d: usize,
    pub n: usize,
    pub p: ComplexMatrix,
    pub q: ComplexMatrix,
}

impl DistillProbe {
    pub fn new(d: usize, n: usize, p: ComplexMatrix, q: ComplexMatrix) -> Result<Self> {
        let side = block_side(d, n)?;
        for m in [&p, &q] {
            if m.rows() != 2 || m.cols() != side {
                return Err(Error::DimensionMismatch(format!(
                    "probe block is {}x{}, expected 2x{side}",
                    m.rows(),
                    m.cols()
                )));
            }
            let defect = m.matmul(&m.adjoint()).max_abs_diff(&ComplexMatrix::identity(2));
            if !(defect <= PROBE_TOL) {
                return Err(Error::InvalidArgument(format!("probe rows not orthonormal (defect {defect:e})")));
            }
        }
        Ok(Self { d, n, p, q })
    }

    /// Both sides span `{|0…0>, |0…01>}`.
    pub fn computational(d: usize, n: usize) -> Result<Self> {
        let side = block_side(d, n)?;
        let m = ComplexMatrix::from_fn(2, side, |i, j| if i == j { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
        Self::new(d, n, m.clone(), m)
    }

    /// The probe encoded in a point of the search manifold.
    pub fn from_point(d: usize, n: usize, x: &[f64]) -> Result<Self> {
        let side = block_side(d, n)?;
        if x.len() != 8 * side {
            return Err(Error::DimensionMismatch(format!("{} coordinates, expected {}", x.len(), 8 * side)));
        }
        let (a, b) = x.split_at(4 * side);
        Self::new(d, n, matrix_from_point(a, 2, side), matrix_from_point(b, 2, side))
    }
}

fn block_side(d: usize, n: usize) -> Result<usize> {
    if d < 2 || n < 1 {
        return Err(Error::InvalidArgument(format!("need d ≥ 2 and n ≥ 1, got d = {d}, n = {n}")));
    }
    let side = (d as u128).pow(n as u32);
    if side * side > MAX_SIDE as u128 {
        return Err(Error::SizeCap { side: (side * side).min(usize::MAX as u128) as usize, max: MAX_SIDE });
    }
    Ok(side as usize)
}

/// Applies `Π (R^{⊗n}) Π†` to a vector indexed as `(a₁…aₙ, b₁…bₙ)`, one
/// copy at a time, where `R` acts on `C^d ⊗ C^d`.
fn apply_copies(r: &ComplexMatrix, d: usize, n: usize, v: &[Complex64]) -> Vec<Complex64> {
    let total = v.len();
    let stride = |pos: usize| d.pow((2 * n - 1 - pos) as u32);
    let mut cur = v.to_vec();
    for k in 0..n {
        let (sa, sb) = (stride(k), stride(n + k));
        let mut next = vec![c64(0.0, 0.0); total];
        for base in 0..total {
            // visit each fibre once, from its (a_k, b_k) = (0, 0) element
            if (base / sa) % d != 0 || (base / sb) % d != 0 {
                continue;
            }
            for a in 0..d {
                for b in 0..d {
                    let row = r.row(a * d + b);
                    let mut acc = c64(0.0, 0.0);
                    for a2 in 0..d {
                        for b2 in 0..d {
                            acc += row[a2 * d + b2] * cur[base + a2 * sa + b2 * sb];
                        }
                    }
                    next[base + a * sa + b * sb] = acc;
                }
            }
        }
        cur = next;
    }
    cur
}

/// Kets `|p̄_s> ⊗ |q̄_t>` in `(a⃗, b⃗)` order, for `(s, t)` in row-major order.
fn probe_kets(probe: &DistillProbe) -> Vec<Vec<Complex64>> {
    let mut out = Vec::with_capacity(4);
    for s in 0..2 {
        for t in 0..2 {
            let ps = probe.p.row(s);
            let qt = probe.q.row(t);
            out.push(ps.iter().flat_map(|a| qt.iter().map(move |b| (a * b).conj())).collect());
        }
    }
    out
}

fn check_state(rho: &DensityMatrix, probe: &DistillProbe) -> Result<ComplexMatrix> {
    let (da, db) = rho.bipartite_dims()?;
    if da != db || da != probe.d {
        return Err(Error::DimensionMismatch(format!(
            "state on {da}x{db}, probe for local dimension {}",
            probe.d
        )));
    }
    partial_transpose(rho.matrix(), da, db)
}

/// The compressed `4 x 4` matrix `M`.
pub fn compressed_matrix(rho: &DensityMatrix, probe: &DistillProbe) -> Result<ComplexMatrix> {
    let pt = check_state(rho, probe)?;
    Ok(compress(&pt, probe))
}

fn compress(pt: &ComplexMatrix, probe: &DistillProbe) -> ComplexMatrix {
    let kets = probe_kets(probe);
    let images: Vec<Vec<Complex64>> = kets.iter().map(|k| apply_copies(pt, probe.d, probe.n, k)).collect();
    ComplexMatrix::from_fn(4, 4, |i, j| kets[i].iter().zip(&images[j]).map(|(a, b)| a.conj() * b).sum())
        .hermitian_part()
}

/// Minimum eigenvalue of the compressed matrix.
pub fn distill_value(rho: &DensityMatrix, n: usize, probe: &DistillProbe) -> Result<f64> {
    if probe.n != n {
        return Err(Error::DimensionMismatch(format!("probe built for {} copies, asked for {n}", probe.n)));
    }
    Ok(hermitian_eig(&compressed_matrix(rho, probe)?)?.min())
}

/// Eigenvalue-negativity scale `1e-12 · ‖M‖` (spectral norm).
pub fn eig_tolerance(m: &ComplexMatrix) -> Result<f64> {
    let ev = hermitian_eigenvalues(m)?;
    Ok(1e-12 * ev.iter().fold(0.0f64, |a, v| a.max(v.abs())))
}

/// `Π (ρ^Γ)^{⊗n} Π†` assembled explicitly.
fn regrouped_power(pt: &ComplexMatrix, d: usize, n: usize) -> Result<ComplexMatrix> {
    let mut x = pt.clone();
    for _ in 1..n {
        x = kron(&x, pt)?;
    }
    let perm: Vec<usize> = (0..n).map(|k| 2 * k).chain((0..n).map(|k| 2 * k + 1)).collect();
    permute_subsystems(&x, &vec![d; 2 * n], &perm)
}

/// Full spectrum of `(P ⊗ Q) Π (ρ^Γ)^{⊗n} Π† (P ⊗ Q)` on the whole
/// `d^{2n}`-dimensional space, ascending. Slow; meant as an oracle.
pub fn projected_spectrum_full(rho: &DensityMatrix, probe: &DistillProbe) -> Result<Vec<f64>> {
    Ok(projected_full(rho, probe)?.values)
}

fn projected_full(rho: &DensityMatrix, probe: &DistillProbe) -> Result<HermitianEigen> {
    let pt = check_state(rho, probe)?;
    let x = regrouped_power(&pt, probe.d, probe.n)?;
    let proj = kron(&probe.p.adjoint_mul(&probe.p), &probe.q.adjoint_mul(&probe.q))?;
    hermitian_eig(&proj.matmul(&x).matmul(&proj).hermitian_part())
}

/// Smallest eigenvalue of the full projected matrix among eigenvectors that
/// lie in the range of `P ⊗ Q`. Agrees with [`distill_value`] whenever no
/// compressed eigenvalue is degenerate with the zero block.
pub fn distill_value_full(rho: &DensityMatrix, probe: &DistillProbe) -> Result<f64> {
    let e = projected_full(rho, probe)?;
    let proj = kron(&probe.p.adjoint_mul(&probe.p), &probe.q.adjoint_mul(&probe.q))?;
    let mut best = f64::INFINITY;
    for k in 0..e.values.len() {
        let v = e.vector(k);
        let inside: f64 = proj.apply(&v).iter().map(|z| z.norm_sqr()).sum();
        if inside > 0.5 {
            best = best.min(e.values[k]);
        }
    }
    Ok(best)
}

/// `λ_min(M)` over pairs of `2 x dⁿ` row-orthonormal blocks.
pub struct DistillObjective {
    pt: ComplexMatrix,
    d: usize,
    n: usize,
    side: usize,
}

impl DistillObjective {
    pub fn new(rho: &DensityMatrix, n: usize) -> Result<Self> {
        let (d, db) = rho.bipartite_dims()?;
        if d != db {
            return Err(Error::DimensionMismatch(format!("state on {d}x{db}")));
        }
        let side = block_side(d, n)?;
        Ok(Self { pt: partial_transpose(rho.matrix(), d, d)?, d, n, side })
    }

    pub fn manifold(&self) -> Manifold {
        let f = Manifold::Stiefel { rows: 2, cols: self.side };
        Manifold::Product { factors: vec![f.clone(), f] }
    }

    fn probe_unchecked(&self, x: &[f64]) -> DistillProbe {
        let (a, b) = x.split_at(4 * self.side);
        DistillProbe {
            d: self.d,
            n: self.n,
            p: matrix_from_point(a, 2, self.side),
            q: matrix_from_point(b, 2, self.side),
        }
    }
}

impl Objective for DistillObjective {
    fn value(&self, x: &[f64]) -> f64 {
        let m = compress(&self.pt, &self.probe_unchecked(x));
        hermitian_eigenvalues(&m).map_or(f64::NAN, |v| v[0])
    }

    /// With `u` the lowest eigenvector of `M` and `φ = Σ u_st |p̄_s q̄_t>`,
    /// `λ = φ† X φ`; differentiating in `p̄`, `q̄` gives the entries below.
    fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        let probe = self.probe_unchecked(x);
        let e = hermitian_eig(&compress(&self.pt, &probe)).ok()?;
        let u = e.vector(0);
        let side = self.side;
        let kets = probe_kets(&probe);
        let mut phi = vec![c64(0.0, 0.0); side * side];
        for (k, ket) in kets.iter().enumerate() {
            for (f, z) in phi.iter_mut().zip(ket) {
                *f += u[k] * z;
            }
        }
        let y = apply_copies(&self.pt, self.d, self.n, &phi);
        let mut gp = ComplexMatrix::zeros(2, side);
        let mut gq = ComplexMatrix::zeros(2, side);
        for s in 0..2 {
            for t in 0..2 {
                let w = u[2 * s + t];
                let ps = probe.p.row(s);
                let qt = probe.q.row(t);
                for a in 0..side {
                    for b in 0..side {
                        let yc = y[a * side + b].conj();
                        // ∂λ/∂p̄_s[a] and ∂λ/∂q̄_t[b], times 2 for real coordinates
                        gp[(s, a)] += yc * w * qt[b].conj() * 2.0;
                        gq[(t, b)] += yc * w * ps[a].conj() * 2.0;
                    }
                }
            }
        }
        let mut out = vec![0.0; x.len()];
        let (a, b) = out.split_at_mut(4 * side);
        write_matrix(&gp, a);
        write_matrix(&gq, b);
        Some(out)
    }
}

/// Verdict attached to a distillability search.
pub fn distill_verdict(value: f64, tol_eig: f64, n: usize) -> &'static str {
    if value < -10.0 * tol_eig {
        "distillable-witness-found"
    } else if n >= 2 {
        "open"
    } else if value < 0.0 {
        "inconclusive"
    } else {
        "no-witness-found"
    }
}

/// Minimizes [`distill_value`] over probes for `ρ(d, α)` with `n` copies.
pub fn search_distillable(d: usize, alpha: f64, n: usize, config: &SearchConfig) -> Result<SearchCertificate> {
    if !(1..=MAX_COPIES).contains(&n) || !(2..=MAX_LOCAL_DIM).contains(&d) {
        return Err(Error::InvalidArgument(format!(
            "distillability search supports d ≤ {MAX_LOCAL_DIM} and n ≤ {MAX_COPIES}, got d = {d}, n = {n}"
        )));
    }
    let w = werner(d, alpha)?;
    let obj = DistillObjective::new(&w.rho, n)?;
    let cert = minimize(&obj, &obj.manifold(), config, ProblemSpec::Distill { d, alpha, copies: n })?;
    if cert.best_restart.is_none() {
        return Ok(cert.with_verdict("aborted"));
    }
    let probe = obj.probe_unchecked(&cert.best_point);
    let tol = eig_tolerance(&compress(&obj.pt, &probe))?;
    let verdict = distill_verdict(cert.best_value, tol, n);
    Ok(cert.with_tolerance("eig", tol).with_tolerance("witness", 10.0 * tol).with_verdict(verdict))
}
