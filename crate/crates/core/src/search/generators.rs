use crate::linalg::{c64, hermitian_eig, ComplexMatrix};
use crate::{Error, Result};

/// Hermitian generator from `k²` real coefficients: the first `k` are the
/// diagonal, then `(re, im)` of each strictly upper entry in row-major order.
pub fn hermitian_from_params(params: &[f64], k: usize) -> Result<ComplexMatrix> {
    if params.len() != k * k {
        return Err(Error::DimensionMismatch(format!("{} parameters for k = {k}", params.len())));
    }
    let mut h = ComplexMatrix::zeros(k, k);
    for i in 0..k {
        h[(i, i)] = c64(params[i], 0.0);
    }
    let mut p = k;
    for i in 0..k {
        for j in i + 1..k {
            let z = c64(params[p], params[p + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            p += 2;
        }
    }
    Ok(h)
}

/// `exp(iH)` for the Hermitian generator described by `params`.
pub fn unitary_from_params(params: &[f64], k: usize) -> Result<ComplexMatrix> {
    let h = hermitian_from_params(params, k)?;
    let e = hermitian_eig(&h)?;
    Ok(e.reconstruct_with(|l| c64(l.cos(), l.sin())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn zero_params_give_identity() {
        let u = unitary_from_params(&[0.0; 9], 3).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn half_pi_sigma_x_gives_i_sigma_x() {
        // H = (π/2) σx
        let u = unitary_from_params(&[0.0, 0.0, FRAC_PI_2, 0.0], 2).unwrap();
        let expected =
            ComplexMatrix::from_vec(2, 2, vec![c64(0., 0.), c64(0., 1.), c64(0., 1.), c64(0., 0.)]).unwrap();
        assert!(u.max_abs_diff(&expected) < 1e-14);
        assert!(u.unitarity_defect() <= 1e-14);
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(unitary_from_params(&[0.0; 5], 2).is_err());
    }
}
