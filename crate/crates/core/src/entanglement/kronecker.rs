//! Kronecker sums `A ⊕ B = A ⊗ I + I ⊗ B` and the bound
//! `σ₁² + σ₂² ≤ 1/2` for traceless pairs with `Tr A†A + Tr B†B = 1/4`.

use serde::{Deserialize, Serialize};

use crate::linalg::{c64, hermitian_eig, kron, singular_values, top_two_sq, ComplexMatrix};
use crate::random::{complex_normal_vec, haar_unitary};
use crate::search::{minimize, KsMode, Manifold, Objective, ProblemSpec, SearchCertificate, SearchConfig};
use crate::{Error, Result};

/// Side of the matrices in the bound.
pub const KS_SIDE: usize = 4;
/// Constraint tolerance accepted by [`KsInstance::new`].
pub const CONSTRAINT_TOL: f64 = 1e-10;
/// A search value above `1/2 + VIOLATION_MARGIN` is reported as a violation.
pub const VIOLATION_MARGIN: f64 = 1e-8;

/// `A ⊗ I_m + I_n ⊗ B` for `A` of side `n` and `B` of side `m`.
pub fn kronecker_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    let m = b.require_square()?;
    Ok(&kron(a, &ComplexMatrix::identity(m))? + &kron(&ComplexMatrix::identity(n), b)?)
}

fn frob_sq(m: &ComplexMatrix) -> f64 {
    m.frobenius_norm().powi(2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsInstance {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
}

impl KsInstance {
    /// Rejects pairs whose traces or total weight miss the constraint by
    /// more than [`CONSTRAINT_TOL`].
    pub fn new(a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        a.require_square()?;
        b.require_square()?;
        let tr = a.trace().norm().max(b.trace().norm());
        let w = frob_sq(&a) + frob_sq(&b);
        if !(tr <= CONSTRAINT_TOL) || !((w - 0.25).abs() <= CONSTRAINT_TOL) {
            return Err(Error::InvalidArgument(format!(
                "need traceless A, B with Tr A†A + Tr B†B = 1/4 (traces {tr:e}, weight {w})"
            )));
        }
        Ok(Self { a, b })
    }

    /// Removes the traces, then rescales the pair onto the constraint.
    pub fn project(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        let strip = |m: &ComplexMatrix| -> Result<ComplexMatrix> {
            let n = m.require_square()?;
            Ok(m - &ComplexMatrix::identity(n).scale(m.trace() / n as f64))
        };
        let (a, b) = (strip(a)?, strip(b)?);
        let w = frob_sq(&a) + frob_sq(&b);
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::InvalidArgument("both matrices are multiples of the identity".into()));
        }
        let s = 0.5 / w.sqrt();
        Ok(Self { a: a.scale_real(s), b: b.scale_real(s) })
    }

    pub fn sum(&self) -> ComplexMatrix {
        kronecker_sum(&self.a, &self.b).expect("square by construction")
    }
}

/// `σ₁² + σ₂²` of `A ⊕ B`.
pub fn ks_objective(inst: &KsInstance) -> Result<f64> {
    Ok(top_two_sq(&singular_values(&inst.sum())?))
}

/// Normal pair `A = W D W†`, `B = Y E Y†` with Gaussian complex spectra and
/// Haar `W`, `Y`, projected onto the constraint.
pub fn random_normal_instance<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> Result<KsInstance> {
    let mut one = || {
        let w = haar_unitary(rng, n);
        let d = complex_normal_vec(rng, n);
        let diag = ComplexMatrix::from_fn(n, n, |i, j| if i == j { d[i] } else { c64(0.0, 0.0) });
        w.matmul(&diag).matmul(&w.adjoint())
    };
    let a = one();
    let b = one();
    KsInstance::project(&a, &b)
}

/// Traceless diagonal directions `(1,…,1,−k,0,…)/√(k(k+1))`, each real and
/// imaginary.
fn diagonal_basis(n: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::new();
    for k in 1..n {
        let s = 1.0 / ((k * (k + 1)) as f64).sqrt();
        for unit in [c64(1.0, 0.0), c64(0.0, 1.0)] {
            out.push(ComplexMatrix::from_fn(n, n, |i, j| match (i == j, i.cmp(&k)) {
                (true, std::cmp::Ordering::Less) => unit * s,
                (true, std::cmp::Ordering::Equal) => unit * (-(k as f64) * s),
                _ => c64(0.0, 0.0),
            }));
        }
    }
    out
}

/// Real-orthonormal basis (under `Re Tr X†Y`) of traceless `n x n` complex
/// matrices: the diagonal directions first, then `E_ij` and `i E_ij`.
fn traceless_basis(n: usize) -> Vec<ComplexMatrix> {
    let mut out = diagonal_basis(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for unit in [c64(1.0, 0.0), c64(0.0, 1.0)] {
                    let mut m = ComplexMatrix::zeros(n, n);
                    m[(i, j)] = unit;
                    out.push(m);
                }
            }
        }
    }
    out
}

/// `−(σ₁² + σ₂²)` over the constraint set, parametrized by `x` on a unit
/// sphere: `A = Σ (x_k/2) E_k`, and likewise for `B` with the remaining
/// coordinates. The basis is orthonormal, so `‖x‖ = 1` is exactly the
/// weight constraint. In `Normal` mode both matrices are diagonal, and in
/// `OneArbitrary` mode `A` is; local unitary invariance makes both choices
/// lossless.
pub struct KsObjective {
    pub mode: KsMode,
    basis_a: Vec<ComplexMatrix>,
    basis_b: Vec<ComplexMatrix>,
}

impl KsObjective {
    pub fn new(mode: KsMode) -> Self {
        let (basis_a, basis_b) = match mode {
            KsMode::Normal => (diagonal_basis(KS_SIDE), diagonal_basis(KS_SIDE)),
            KsMode::OneArbitrary => (diagonal_basis(KS_SIDE), traceless_basis(KS_SIDE)),
            KsMode::General => (traceless_basis(KS_SIDE), traceless_basis(KS_SIDE)),
        };
        Self { mode, basis_a, basis_b }
    }

    pub fn manifold(&self) -> Manifold {
        Manifold::UnitSphere { dim: self.basis_a.len() + self.basis_b.len() }
    }

    pub fn instance_at(&self, x: &[f64]) -> KsInstance {
        let (xa, xb) = x.split_at(self.basis_a.len());
        let combine = |basis: &[ComplexMatrix], c: &[f64]| {
            let mut m = ComplexMatrix::zeros(KS_SIDE, KS_SIDE);
            for (e, &ck) in basis.iter().zip(c) {
                m = &m + &e.scale_real(ck / 2.0);
            }
            m
        };
        KsInstance { a: combine(&self.basis_a, xa), b: combine(&self.basis_b, xb) }
    }
}

impl Objective for KsObjective {
    fn value(&self, x: &[f64]) -> f64 {
        ks_objective(&self.instance_at(x)).map_or(f64::NAN, |v| -v)
    }

    /// `∇_K (σ₁² + σ₂²) = 2 Π K` with `Π` the projector onto the top two
    /// left singular vectors, then summed back onto `A` and `B`.
    fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        let inst = self.instance_at(x);
        let k = inst.sum();
        let e = hermitian_eig(&k.matmul(&k.adjoint())).ok()?;
        let n = k.rows();
        let top = [e.vector(n - 1), e.vector(n - 2)];
        let mut proj = ComplexMatrix::zeros(n, n);
        for u in &top {
            proj = &proj + &ComplexMatrix::outer(u, u);
        }
        let g = proj.matmul(&k).scale_real(2.0);
        let s = KS_SIDE;
        let ga = ComplexMatrix::from_fn(s, s, |i, j| (0..s).map(|m| g[(i * s + m, j * s + m)]).sum());
        let gb = ComplexMatrix::from_fn(s, s, |p, q| (0..s).map(|i| g[(i * s + p, i * s + q)]).sum());
        let dot = |e: &ComplexMatrix, g: &ComplexMatrix| -> f64 {
            e.as_slice().iter().zip(g.as_slice()).map(|(a, b)| (a.conj() * b).re).sum()
        };
        let out = self
            .basis_a
            .iter()
            .map(|e| dot(e, &ga))
            .chain(self.basis_b.iter().map(|e| dot(e, &gb)))
            .map(|v| -0.5 * v)
            .collect();
        Some(out)
    }
}

/// Maximizes `σ₁² + σ₂²` in the given mode. The certificate's `best_value`
/// is the minimized `−(σ₁² + σ₂²)`; the maximum is reported as
/// `max_objective`. A maximum above `1/2 + 1e-8` gets the verdict
/// `violation`; otherwise the restricted modes get `no-violation-found` and
/// the general mode gets no verdict.
pub fn ks_search_violation(mode: KsMode, config: &SearchConfig) -> Result<SearchCertificate> {
    let obj = KsObjective::new(mode);
    let cert = minimize(&obj, &obj.manifold(), config, ProblemSpec::Ksum { mode })?;
    if cert.best_restart.is_none() {
        return Ok(cert.with_verdict("aborted"));
    }
    let max = -cert.best_value;
    let cert = cert.with_reported("max_objective", max).with_tolerance("violation_margin", VIOLATION_MARGIN);
    Ok(if max > 0.5 + VIOLATION_MARGIN {
        cert.with_verdict("violation")
    } else if mode == KsMode::General {
        cert
    } else {
        cert.with_verdict("no-violation-found")
    })
}
