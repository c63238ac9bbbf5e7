//! 2-unitary matrices and four-index perfect tensors.

use num_complex::Complex64;

use super::latin::{verify_graeco_latin, LatinSquare};
use crate::linalg::{c64, partial_transpose, reshuffle, ComplexMatrix};
use crate::report::CheckReport;
use crate::search::manifold::{matrix_from_point, write_matrix};
use crate::search::{minimize, Manifold, Objective, ProblemSpec, SearchCertificate, SearchConfig};
use crate::{Error, Result};

fn check_side(u: &ComplexMatrix, d: usize) -> Result<()> {
    let n = u.require_square()?;
    if n != d * d {
        return Err(Error::DimensionMismatch(format!("side {n} is not {d}^2")));
    }
    Ok(())
}

/// Unitarity defects of `U`, `U^Γ` and `U^R`; parts `unitary`,
/// `partial-transpose`, `reshuffle`, witness `[i, j]` of the worst entry of
/// `X†X − I`.
pub fn verify_two_unitary(u: &ComplexMatrix, d: usize, tol: f64) -> Result<CheckReport> {
    check_side(u, d)?;
    let parts = [
        ("unitary", u.clone()),
        ("partial-transpose", partial_transpose(u, d, d)?),
        ("reshuffle", reshuffle(u, d)?),
    ];
    Ok(CheckReport::combine(
        parts
            .into_iter()
            .map(|(name, x)| {
                let (v, i, j) = x.unitarity_defect_at();
                (name.to_string(), v, vec![vec![i, j]])
            })
            .collect(),
        tol,
    ))
}

/// Permutation matrix `U|i,j> = |A_ij, B_ij>` of an orthogonal pair.
pub fn permutation_from_pair(a: &LatinSquare, b: &LatinSquare) -> Result<ComplexMatrix> {
    let rep = verify_graeco_latin(a, b)?;
    if rep.part("pairs") != Some(0.0) {
        return Err(Error::InvalidArgument("the pair repeats a symbol pair; no permutation results".into()));
    }
    let d = a.order();
    let mut u = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            u[(a.get(i, j) * d + b.get(i, j), i * d + j)] = c64(1.0, 0.0);
        }
    }
    Ok(u)
}

/// Entries `T_{ijkl} = U[(ij),(kl)]`, stored with `i` most significant.
pub fn tensor_from_unitary(u: &ComplexMatrix) -> Vec<Complex64> {
    u.as_slice().to_vec()
}

/// Matrix with rows indexed by the index pair `(0, other)` and columns by
/// the remaining two indices in increasing position.
fn flattening(t: &[Complex64], d: usize, other: usize) -> ComplexMatrix {
    let rest: Vec<usize> = (1..4).filter(|&k| k != other).collect();
    let st = [d * d * d, d * d, d, 1];
    ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let idx = [r / d, r % d, c / d, c % d];
        let pos = idx[0] * st[0] + idx[1] * st[other] + idx[2] * st[rest[0]] + idx[3] * st[rest[1]];
        t[pos]
    })
}

/// Unitarity of the three flattenings `(ij|kl)`, `(ik|jl)`, `(il|jk)` of a
/// four-index tensor scaled so that a perfect tensor has unitary
/// flattenings (`Σ|T|² = d²`). Parts are named `ij`, `ik`, `il`.
pub fn verify_perfect_tensor(t: &[Complex64], d: usize, tol: f64) -> Result<CheckReport> {
    if d < 1 || t.len() != d.pow(4) {
        return Err(Error::DimensionMismatch(format!("{} entries for local dimension {d}", t.len())));
    }
    let parts = [("ij", 1), ("ik", 2), ("il", 3)]
        .into_iter()
        .map(|(name, other)| {
            let (v, i, j) = flattening(t, d, other).unitarity_defect_at();
            (name.to_string(), v, vec![vec![i, j]])
        })
        .collect();
    Ok(CheckReport::combine(parts, tol))
}

/// `‖X†X − I‖_F²` summed over `X = U^Γ` and `X = U^R`, on `U(d²)`.
#[derive(Debug, Clone, Copy)]
pub struct TwoUnitaryObjective {
    pub d: usize,
}

/// `(‖X†X − I‖_F², 4 X (X†X − I))`: value and Euclidean gradient.
fn gram_penalty(x: &ComplexMatrix) -> (f64, ComplexMatrix) {
    let n = x.rows();
    let e = &x.adjoint_mul(x) - &ComplexMatrix::identity(n);
    let v = e.frobenius_norm().powi(2);
    (v, x.matmul(&e).scale_real(4.0))
}

impl TwoUnitaryObjective {
    fn evaluate(&self, x: &[f64]) -> (f64, ComplexMatrix) {
        let d = self.d;
        let u = matrix_from_point(x, d * d, d * d);
        let gamma = partial_transpose(&u, d, d).expect("shape fixed by the manifold");
        let r = reshuffle(&u, d).expect("shape fixed by the manifold");
        let (vg, gg) = gram_penalty(&gamma);
        let (vr, gr) = gram_penalty(&r);
        // Both reorderings are involutive index permutations, so the
        // gradient pulls back through the same map.
        let grad = &partial_transpose(&gg, d, d).unwrap() + &reshuffle(&gr, d).unwrap();
        (vg + vr, grad)
    }
}

impl Objective for TwoUnitaryObjective {
    fn value(&self, x: &[f64]) -> f64 {
        self.evaluate(x).0
    }

    fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        let g = self.evaluate(x).1;
        let mut out = vec![0.0; x.len()];
        write_matrix(&g, &mut out);
        Some(out)
    }
}

/// Search over `U(d²)` for a 2-unitary matrix. The certificate reports the
/// verifier residual of the best point; no verdict is attached.
pub fn search_two_unitary(d: usize, config: &SearchConfig) -> Result<SearchCertificate> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("local dimension {d} < 2")));
    }
    let manifold = Manifold::Unitary { k: d * d };
    let cert = minimize(&TwoUnitaryObjective { d }, &manifold, config, ProblemSpec::TwoUnitary { d })?;
    if cert.best_restart.is_none() {
        return Ok(cert.with_verdict("aborted"));
    }
    let u = matrix_from_point(&cert.best_point, d * d, d * d);
    let rep = verify_two_unitary(&u, d, 0.0)?;
    Ok(cert.with_reported("verify_residual", rep.max_residual))
}
