use super::eig::hermitian_eig;
use super::matrix::{c64, ComplexMatrix};
use crate::{Error, Result};

/// Polar factor `(X X†)^{-1/2} X` of a full-row-rank matrix: the closest
/// matrix with orthonormal rows. Square inputs give the closest unitary.
///
/// Close to the manifold a Newton–Schulz iteration is used; otherwise the
/// inverse square root is taken through an eigendecomposition.
pub fn orthonormalize_rows(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if x.rows() > x.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows cannot be orthonormal in dimension {}",
            x.rows(),
            x.cols()
        )));
    }
    let r = x.rows();
    if r == 0 {
        return Ok(x.clone());
    }
    let eye = ComplexMatrix::identity(r);
    let mut y = x.clone();
    for _ in 0..30 {
        let gram = y.matmul(&y.adjoint());
        let defect = (&gram - &eye).frobenius_norm();
        if !defect.is_finite() {
            return Err(Error::NonFinite);
        }
        if defect < 1e-15 {
            return Ok(y);
        }
        if defect > 0.5 {
            return eig_polar(&y);
        }
        // Y <- (3I - Y Y†) Y / 2
        let factor = (&eye.scale_real(3.0) - &gram).scale_real(0.5);
        y = factor.matmul(&y);
    }
    Ok(y)
}

fn eig_polar(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let gram = x.matmul(&x.adjoint()).hermitian_part();
    let e = hermitian_eig(&gram)?;
    let top = e.values[e.values.len() - 1];
    if !(e.values[0] > 1e-14 * top) {
        return Err(Error::InvalidArgument("rank-deficient input to orthonormalization".into()));
    }
    let inv_sqrt = e.reconstruct_with(|l| c64(1.0 / l.sqrt(), 0.0));
    let y = inv_sqrt.matmul(x);
    // One polishing pass cleans up the eigensolver rounding.
    let eye = ComplexMatrix::identity(x.rows());
    let gram = y.matmul(&y.adjoint());
    Ok((&eye.scale_real(3.0) - &gram).scale_real(0.5).matmul(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_input_becomes_unitary() {
        let x = ComplexMatrix::from_fn(5, 5, |i, j| c64((i * 3 + j) as f64 % 4.0 - 1.5, (i + 2 * j) as f64 % 3.0));
        let u = orthonormalize_rows(&x).unwrap();
        assert!(u.unitarity_defect() < 1e-13);
    }

    #[test]
    fn idempotent_on_unitaries() {
        let x = ComplexMatrix::from_fn(3, 3, |i, j| c64((i as f64 - j as f64).cos(), (i * j) as f64 * 0.1));
        let u = orthonormalize_rows(&x).unwrap();
        let v = orthonormalize_rows(&u).unwrap();
        assert!(u.max_abs_diff(&v) < 1e-14);
    }

    #[test]
    fn wide_input_gets_orthonormal_rows() {
        let x = ComplexMatrix::from_fn(2, 6, |i, j| c64((i + j * j) as f64, (i * j) as f64 - 1.0));
        let y = orthonormalize_rows(&x).unwrap();
        let g = y.matmul(&y.adjoint());
        assert!(g.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-13);
    }

    #[test]
    fn rank_deficient_input_is_rejected() {
        // second row is (1+i) times the first
        let x = ComplexMatrix::from_fn(2, 6, |i, j| c64((i + j) as f64, (i * j) as f64 - 1.0));
        assert!(orthonormalize_rows(&x).is_err());
    }
}
