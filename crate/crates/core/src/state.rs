//! Pure states and density matrices with declared tensor-factor dimensions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{hermitian_eigenvalues, inner, norm, ComplexMatrix};
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
struct TaggedMatrix {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    im: Vec<f64>,
    dims: Vec<usize>,
}

impl TaggedMatrix {
    fn new(m: &ComplexMatrix, dims: Vec<usize>) -> Self {
        Self { rows: m.rows(), cols: m.cols(), re: m.re_parts(), im: m.im_parts(), dims }
    }
}

impl TryFrom<TaggedMatrix> for StateVector {
    type Error = Error;

    fn try_from(t: TaggedMatrix) -> Result<Self> {
        if t.cols != 1 {
            return Err(Error::DimensionMismatch(format!("a state has one column, got {}", t.cols)));
        }
        let m = ComplexMatrix::from_parts(t.rows, 1, &t.re, &t.im)?;
        StateVector::new(t.dims, m.into_vec())
    }
}

impl From<StateVector> for TaggedMatrix {
    fn from(s: StateVector) -> Self {
        let n = s.dim();
        TaggedMatrix::new(&ComplexMatrix::from_vec(n, 1, s.amplitudes).expect("length n"), s.dims)
    }
}

impl TryFrom<TaggedMatrix> for DensityMatrix {
    type Error = Error;

    fn try_from(t: TaggedMatrix) -> Result<Self> {
        DensityMatrix::new(t.dims, ComplexMatrix::from_parts(t.rows, t.cols, &t.re, &t.im)?)
    }
}

impl From<DensityMatrix> for TaggedMatrix {
    fn from(d: DensityMatrix) -> Self {
        TaggedMatrix::new(&d.matrix, d.dims)
    }
}

/// Norm tolerance for [`StateVector`].
pub const NORM_TOL: f64 = 1e-12;

fn dims_product(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidArgument(format!("invalid factor dimensions {dims:?}")));
    }
    dims.iter()
        .try_fold(1usize, |a, &d| a.checked_mul(d))
        .ok_or_else(|| Error::InvalidArgument("dimension product overflows".into()))
}

/// Unit vector in a (possibly composite) Hilbert space. Serializes as a
/// one-column matrix with an extra `"dims"` field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TaggedMatrix", into = "TaggedMatrix")]
pub struct StateVector {
    dims: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Validates length and unit norm (within [`NORM_TOL`]).
    pub fn new(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = dims_product(&dims)?;
        if amplitudes.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for dims {dims:?}",
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let nrm = norm(&amplitudes);
        if (nrm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm: nrm });
        }
        Ok(Self { dims, amplitudes })
    }

    /// Rescales to unit norm first.
    pub fn normalized(dims: Vec<usize>, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let nrm = norm(&amplitudes);
        if !(nrm > 0.0 && nrm.is_finite()) {
            return Err(Error::NotNormalized { norm: nrm });
        }
        for z in &mut amplitudes {
            *z /= nrm;
        }
        Self::new(dims, amplitudes)
    }

    /// Single-factor state.
    pub fn simple(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = amplitudes.len();
        Self::new(vec![n], amplitudes)
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let n = dims_product(&dims)?;
        if index >= n {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range {n}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(dims, amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }
}

/// Tolerances for [`DensityMatrix`] validation.
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-12;
pub const DENSITY_TRACE_TOL: f64 = 1e-12;
pub const DENSITY_PSD_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive semidefinite matrix on a composite space.
/// Serializes as a matrix with an extra `"dims"` field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TaggedMatrix", into = "TaggedMatrix")]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let n = dims_product(&dims)?;
        let side = matrix.require_square()?;
        if side != n {
            return Err(Error::DimensionMismatch(format!("side {side} does not match dims {dims:?}")));
        }
        let herm = matrix.hermiticity_defect();
        if herm > DENSITY_HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!("Hermiticity defect {herm:.3e}")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TRACE_TOL || tr.im.abs() > DENSITY_TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let min = hermitian_eigenvalues(&matrix)?[0];
        if min < -DENSITY_PSD_TOL {
            return Err(Error::InvalidDensity(format!("minimum eigenvalue {min:.3e}")));
        }
        Ok(Self { dims, matrix })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        Self { dims: state.dims.clone(), matrix: state.projector() }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Factor dimensions `(d_A, d_B)` of a bipartite state.
    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.dims.as_slice() {
            [a, b] => Ok((*a, *b)),
            other => Err(Error::DimensionMismatch(format!("expected two factors, got {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn state_validation() {
        assert!(StateVector::new(vec![2], vec![c64(1.0, 0.0), c64(1.0, 0.0)]).is_err());
        assert!(StateVector::new(vec![2, 2], vec![c64(1.0, 0.0)]).is_err());
        let s = StateVector::normalized(vec![2], vec![c64(1.0, 0.0), c64(0.0, 1.0)]).unwrap();
        assert!((s.inner(&s).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_validation() {
        let mixed = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(DensityMatrix::new(vec![2, 2], mixed.clone()).is_ok());
        assert!(DensityMatrix::new(vec![3], ComplexMatrix::identity(3)).is_err());
        assert!(DensityMatrix::new(vec![2, 3], mixed).is_err());
        let neg = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(vec![2], neg), Err(Error::InvalidDensity(_))));
    }

    #[test]
    fn json_uses_the_matrix_schema() {
        let s = StateVector::normalized(vec![2], vec![c64(1.0, 0.0), c64(0.0, 1.0)]).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["rows"], 2);
        assert_eq!(v["cols"], 1);
        assert_eq!(v["dims"], serde_json::json!([2]));
        assert_eq!(serde_json::from_value::<StateVector>(v).unwrap(), s);

        let bad = serde_json::json!({"rows": 2, "cols": 1, "re": [1.0, 1.0], "im": [0.0, 0.0], "dims": [2]});
        assert!(serde_json::from_value::<StateVector>(bad).is_err());

        let rho = DensityMatrix::new(vec![2, 2], ComplexMatrix::identity(4).scale_real(0.25)).unwrap();
        let text = serde_json::to_string(&rho).unwrap();
        assert_eq!(serde_json::from_str::<DensityMatrix>(&text).unwrap(), rho);
        let not_psd = serde_json::json!({"rows": 2, "cols": 2, "re": [1.5, 0.0, 0.0, -0.5], "im": [0.0, 0.0, 0.0, 0.0], "dims": [2]});
        assert!(serde_json::from_value::<DensityMatrix>(not_psd).is_err());
    }
}
