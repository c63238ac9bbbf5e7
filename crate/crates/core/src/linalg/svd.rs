//! Singular values by one-sided (Hestenes) Jacobi orthogonalization.

use num_complex::Complex64;

use super::matrix::{check_side, ComplexMatrix};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    check_side(a.rows())?;
    check_side(a.cols())?;
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    // Orthogonalize the shorter dimension.
    let work = if a.cols() > a.rows() { a.adjoint() } else { a.clone() };
    let mut cols = work.columns();
    orthogonalize(&mut cols);
    let mut sv: Vec<f64> =
        cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

fn orthogonalize(cols: &mut [Vec<Complex64>]) {
    let n = cols.len();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                rotated |= rotate_pair(cols, i, j);
            }
        }
        if !rotated {
            break;
        }
    }
}

fn rotate_pair(cols: &mut [Vec<Complex64>], i: usize, j: usize) -> bool {
    let (left, right) = cols.split_at_mut(j);
    let ci = &mut left[i];
    let cj = &mut right[0];
    let alpha: f64 = ci.iter().map(|z| z.norm_sqr()).sum();
    let beta: f64 = cj.iter().map(|z| z.norm_sqr()).sum();
    let gamma: Complex64 = ci.iter().zip(cj.iter()).map(|(a, b)| a.conj() * b).sum();
    let g = gamma.norm();
    if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
        return false;
    }
    // Rotate columns i and e^{-i phi} * column j so they become orthogonal.
    let phase = gamma.conj() / g;
    let zeta = (beta - alpha) / (2.0 * g);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    for (a, b) in ci.iter_mut().zip(cj.iter_mut()) {
        let bj = *b * phase;
        let ai = *a;
        *a = ai * c - bj * s;
        *b = ai * s + bj * c;
    }
    true
}

/// Helper for tests and objectives: `σ₁² + σ₂²`, zero-padded for tiny inputs.
pub fn top_two_sq(sv: &[f64]) -> f64 {
    sv.iter().take(2).map(|s| s * s).sum()
}
