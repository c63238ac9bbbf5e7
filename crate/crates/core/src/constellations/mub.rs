//! Mutually unbiased bases and complex Hadamard matrices.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::linalg::{c64, ComplexMatrix};
use crate::report::{CheckReport, Worst};
use crate::search::manifold::{matrix_from_point, write_matrix};
use crate::search::{minimize, Manifold, Objective, ProblemSpec, SearchCertificate, SearchConfig};
use crate::{Error, Result};

/// Unitarity tolerance enforced by [`MubSet::new`].
pub const BASIS_TOL: f64 = 1e-10;

/// A list of bases of `C^N`; column `j` of `bases[m]` is vector `j` of basis `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MubSet {
    pub dim: usize,
    pub bases: Vec<ComplexMatrix>,
}

impl MubSet {
    pub fn new(bases: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = check_bases(&bases)?;
        for b in &bases {
            let defect = b.unitarity_defect();
            if !(defect <= BASIS_TOL) {
                return Err(Error::NotUnitary { defect });
            }
        }
        Ok(Self { dim, bases })
    }
}

fn check_bases(bases: &[ComplexMatrix]) -> Result<usize> {
    if bases.len() < 2 {
        return Err(Error::InvalidArgument(format!("need at least two bases, got {}", bases.len())));
    }
    let n = bases[0].require_square()?;
    for b in bases {
        if b.require_square()? != n {
            return Err(Error::DimensionMismatch("bases of different dimensions".into()));
        }
    }
    Ok(n)
}

/// Largest `| |<ψ_i^m|ψ_j^n>|² − 1/N |` over pairs of distinct bases, and the
/// orthonormality defect inside each basis. Witness `[m, n, i, j]`.
pub fn verify_mub(bases: &[ComplexMatrix], tol: f64) -> Result<CheckReport> {
    let n = check_bases(bases)?;
    let flat = 1.0 / n as f64;
    let mut unbiased = Worst::default();
    let mut ortho = Worst::default();
    for a in 0..bases.len() {
        let (d, i, j) = bases[a].unitarity_defect_at();
        ortho.update(d, || vec![vec![a, a, i, j]]);
        for b in a + 1..bases.len() {
            let g = bases[a].adjoint_mul(&bases[b]);
            for i in 0..n {
                for j in 0..n {
                    let r = (g[(i, j)].norm_sqr() - flat).abs();
                    unbiased.update(r, || vec![vec![a, b, i, j]]);
                }
            }
        }
    }
    Ok(CheckReport::combine(
        vec![
            ("unbiasedness".into(), unbiased.value, unbiased.witness),
            ("orthonormality".into(), ortho.value, ortho.witness),
        ],
        tol,
    ))
}

pub fn verify_mub_set(set: &MubSet, tol: f64) -> Result<CheckReport> {
    verify_mub(&set.bases, tol)
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Complete set of `p + 1` MUBs for a prime `p ≤ 97`: the Pauli eigenbases
/// for `p = 2`, otherwise the identity together with the bases
/// `ψ_j^m(k) = ω^{m k² + j k}/√p`.
pub fn mub_prime(p: usize) -> Result<MubSet> {
    if !(2..=97).contains(&p) || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        let h = FRAC_1_SQRT_2;
        let z = ComplexMatrix::identity(2);
        let x = ComplexMatrix::from_vec(2, 2, vec![c64(h, 0.), c64(h, 0.), c64(h, 0.), c64(-h, 0.)])?;
        let y = ComplexMatrix::from_vec(2, 2, vec![c64(h, 0.), c64(h, 0.), c64(0., h), c64(0., -h)])?;
        return MubSet::new(vec![z, x, y]);
    }
    let s = 1.0 / (p as f64).sqrt();
    let mut bases = vec![ComplexMatrix::identity(p)];
    for m in 0..p {
        bases.push(ComplexMatrix::from_fn(p, p, |k, j| {
            let e = (m * k * k + j * k) % p;
            let a = 2.0 * PI * e as f64 / p as f64;
            c64(s * a.cos(), s * a.sin())
        }));
    }
    MubSet::new(bases)
}

/// Fourier matrix `F_N[j][k] = ω^{jk}/√N`.
pub fn fourier(n: usize) -> ComplexMatrix {
    let s = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, n, |j, k| {
        let a = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
        c64(s * a.cos(), s * a.sin())
    })
}

/// Residual `max(‖U†U − I‖_max, max |U_ij|² − 1/N)`.
pub fn verify_complex_hadamard(u: &ComplexMatrix, tol: f64) -> Result<CheckReport> {
    let n = u.require_square()?;
    let flat = 1.0 / n as f64;
    let mut modulus = Worst::default();
    for i in 0..n {
        for j in 0..n {
            modulus.update((u[(i, j)].norm_sqr() - flat).abs(), || vec![vec![i, j]]);
        }
    }
    let (d, i, j) = u.unitarity_defect_at();
    Ok(CheckReport::combine(
        vec![("unitarity".into(), d, vec![vec![i, j]]), ("modulus".into(), modulus.value, modulus.witness)],
        tol,
    ))
}

/// Transition matrix `U_ij = <ψ_i|φ_j>` between two bases.
pub fn hadamard_from_bases(b1: &ComplexMatrix, b2: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = b1.require_square()?;
    if b2.require_square()? != n {
        return Err(Error::DimensionMismatch(format!("{n} vs {}", b2.rows())));
    }
    Ok(b1.adjoint_mul(b2))
}

/// Sum of squared unbiasedness deviations for the identity basis together
/// with `K − 1` searched unitaries.
#[derive(Debug, Clone, Copy)]
pub struct MubObjective {
    pub dim: usize,
    pub bases: usize,
}

impl MubObjective {
    pub fn manifold(&self) -> Manifold {
        Manifold::Product { factors: vec![Manifold::Unitary { k: self.dim }; self.bases - 1] }
    }

    /// Identity followed by the bases encoded in `x`.
    pub fn bases_at(&self, x: &[f64]) -> Vec<ComplexMatrix> {
        let n = self.dim;
        let mut out = vec![ComplexMatrix::identity(n)];
        out.extend(x.chunks_exact(2 * n * n).map(|c| matrix_from_point(c, n, n)));
        out
    }

    fn evaluate(&self, x: &[f64], want_grad: bool) -> (f64, Vec<ComplexMatrix>) {
        let n = self.dim;
        let flat = 1.0 / n as f64;
        let bases = self.bases_at(x);
        let mut grads = vec![ComplexMatrix::zeros(n, n); if want_grad { bases.len() } else { 0 }];
        let mut value = 0.0;
        for a in 0..bases.len() {
            for b in a + 1..bases.len() {
                let g = bases[a].adjoint_mul(&bases[b]);
                let mut w = ComplexMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        let dev = g[(i, j)].norm_sqr() - flat;
                        value += dev * dev;
                        w[(i, j)] = g[(i, j)] * (2.0 * dev);
                    }
                }
                if want_grad {
                    // F = Σ (|G|² − 1/N)², G = A†B: ∇_B = 2 A W, ∇_A = 2 B W†
                    grads[b] = &grads[b] + &bases[a].matmul(&w).scale_real(2.0);
                    grads[a] = &grads[a] + &bases[b].matmul(&w.adjoint()).scale_real(2.0);
                }
            }
        }
        (value, grads)
    }
}

impl Objective for MubObjective {
    fn value(&self, x: &[f64]) -> f64 {
        self.evaluate(x, false).0
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        let (_, grads) = self.evaluate(x, true);
        let block = 2 * self.dim * self.dim;
        let mut out = vec![0.0; x.len()];
        for (k, g) in grads.iter().skip(1).enumerate() {
            write_matrix(g, &mut out[k * block..(k + 1) * block]);
        }
        Some(out)
    }
}

/// Searches for `bases` MUBs in dimension `dim` (the first fixed to the
/// identity). The certificate reports the verifier residual of the best set;
/// no verdict is attached.
pub fn search_mub(dim: usize, bases: usize, config: &SearchConfig) -> Result<SearchCertificate> {
    if dim < 2 || bases < 2 {
        return Err(Error::InvalidArgument(format!("need dim ≥ 2 and at least two bases, got {dim}, {bases}")));
    }
    let obj = MubObjective { dim, bases };
    let cert = minimize(&obj, &obj.manifold(), config, ProblemSpec::Mub { dim, bases })?;
    if cert.best_restart.is_none() {
        return Ok(cert.with_verdict("aborted"));
    }
    let rep = verify_mub(&obj.bases_at(&cert.best_point), 0.0)?;
    Ok(cert.with_reported("verify_residual", rep.max_residual))
}
