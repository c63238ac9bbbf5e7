//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Jacobi is slow asymptotically but every matrix handled here is at most a
//! few hundred rows, and it delivers eigenvectors that are orthonormal to
//! working precision with small backward error.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::{Error, Result};

/// Inputs farther than this (relative to `max(1, max|H_ij|)`) from Hermitian
/// are rejected instead of symmetrized.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.values.len();
        let fl: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)].conj()).sum()
        })
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = h.require_square()?;
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    jacobi_sweeps(&mut a, &mut v);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].re.total_cmp(&a[(y, y)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eig(h)?.values)
}

fn off_diagonal_sq(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += a[(i, j)].norm_sqr();
        }
    }
    s
}

fn jacobi_sweeps(a: &mut ComplexMatrix, v: &mut ComplexMatrix) {
    let n = a.rows();
    let total = a.frobenius_norm();
    if total == 0.0 {
        return;
    }
    let target = (f64::EPSILON * total).powi(2) * 0.25;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_sq(a) <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(a, v, p, q);
            }
        }
    }
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < f64::MIN_POSITIVE {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Already diagonal to working precision relative to the 2x2 block.
    if r <= 1e-18 * (app.abs() + aqq.abs()) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let e = apq / r;
    let se = e * s;
    let se_bar = se.conj();

    let n = a.rows();
    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - se_bar * akq;
        a[(k, q)] = se * akp + akq * c;
    }
    // A <- G† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - se * aqk;
        a[(q, k)] = se_bar * apk + aqk * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - se_bar * vkq;
        v[(k, q)] = se * vkp + vkq * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn residual(h: &ComplexMatrix, eig: &HermitianEigen) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..eig.values.len() {
            let x = eig.vector(k);
            let hx = h.apply(&x);
            let r: f64 = hx
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b * eig.values[k]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r);
        }
        worst
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let h = ComplexMatrix::from_real_diagonal(&[3.0, 1.0, 2.0]);
        let e = hermitian_eig(&h).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let sx = ComplexMatrix::from_vec(2, 2, vec![c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)])
            .unwrap();
        let e = hermitian_eig(&sx).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_hermitian_residual_and_orthonormality() {
        let n = 7;
        let raw = ComplexMatrix::from_fn(n, n, |i, j| {
            c64(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i * 2 + j * 5) % 7) as f64 - 3.0)
        });
        let h = raw.hermitian_part();
        let e = hermitian_eig(&h).unwrap();
        assert!(residual(&h, &e) <= 1e-10 * h.frobenius_norm());
        assert!(e.vectors.unitarity_defect() < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let m = ComplexMatrix::from_vec(2, 2, vec![c64(0., 0.), c64(1., 0.), c64(0., 0.), c64(0., 0.)])
            .unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            hermitian_eig(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn tiny_asymmetry_is_symmetrized() {
        let mut m = ComplexMatrix::identity(3);
        m[(0, 1)] = c64(1e-13, 0.0);
        assert!(hermitian_eig(&m).is_ok());
    }

    #[test]
    fn reconstruct_roundtrip() {
        let h = ComplexMatrix::from_fn(4, 4, |i, j| c64((i + j) as f64, i as f64 - j as f64));
        let e = hermitian_eig(&h).unwrap();
        let back = e.reconstruct_with(|l| c64(l, 0.0));
        assert!(back.max_abs_diff(&h) < 1e-12);
    }
}
