use serde::{Deserialize, Serialize};

use super::two_unitary::verify_two_unitary;
use crate::linalg::{c64, reduced_state, ComplexMatrix, MAX_SIDE};
use crate::report::{CheckReport, Worst};
use crate::state::StateVector;
use crate::{Error, Result};

/// Tolerance at which [`ame4_from_two_unitary`] accepts its input.
pub const TWO_UNITARY_TOL: f64 = 1e-8;

/// Pure state of `parties` subsystems of dimension `local_dim` each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmeCandidate {
    pub parties: usize,
    pub local_dim: usize,
    pub state: StateVector,
}

impl AmeCandidate {
    pub fn new(state: StateVector) -> Result<Self> {
        let dims = state.dims();
        let n = dims.len();
        if n < 2 || dims.iter().any(|&d| d != dims[0]) {
            return Err(Error::InvalidArgument(format!("expected at least two equal factors, got {dims:?}")));
        }
        Ok(Self { parties: n, local_dim: dims[0], state })
    }
}

/// Subsets of `0..n` with `1 ≤ |S| ≤ k`, in lexicographic order of bitmask.
fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    (1u64..1 << n)
        .filter(|m| m.count_ones() as usize <= k)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

/// Every reduction to at most `⌊n/2⌋` parties must be `I/d^{|S|}`; the
/// witness is the worst subset `S`.
pub fn verify_ame(c: &AmeCandidate, tol: f64) -> Result<CheckReport> {
    let n = c.parties;
    let d = c.local_dim;
    let half = n / 2;
    let side = (d as u128).checked_pow(half as u32).unwrap_or(u128::MAX);
    if n > 63 || side > MAX_SIDE as u128 {
        return Err(Error::SizeCap { side: side.min(usize::MAX as u128) as usize, max: MAX_SIDE });
    }
    let dims = vec![d; n];
    let mut worst = Worst::default();
    for s in subsets_up_to(n, half) {
        let red = reduced_state(c.state.amplitudes(), &dims, &s)?;
        let m = red.rows();
        let flat = ComplexMatrix::identity(m).scale_real(1.0 / m as f64);
        worst.update(red.max_abs_diff(&flat), || vec![s.clone()]);
    }
    Ok(worst.into_report(tol))
}

/// Four-party state `ψ_{ijkl} = U[(ij),(kl)]/d` of a 2-unitary `U`.
pub fn ame4_from_two_unitary(u: &ComplexMatrix, d: usize) -> Result<AmeCandidate> {
    let rep = verify_two_unitary(u, d, TWO_UNITARY_TOL)?;
    if !rep.passed {
        return Err(Error::InvalidArgument(format!(
            "input is not 2-unitary (residual {:e} > {TWO_UNITARY_TOL:e})",
            rep.max_residual
        )));
    }
    let s = 1.0 / d as f64;
    let amps = u.as_slice().iter().map(|z| z * s).collect();
    AmeCandidate::new(StateVector::normalized(vec![d; 4], amps)?)
}

/// `(1/3) Σ_{ij} |i, j, i+j, i+2j>` (mod 3).
pub fn ame_4_3() -> AmeCandidate {
    let mut amps = vec![c64(0.0, 0.0); 81];
    for i in 0..3 {
        for j in 0..3 {
            amps[27 * i + 9 * j + 3 * ((i + j) % 3) + (i + 2 * j) % 3] = c64(1.0 / 3.0, 0.0);
        }
    }
    AmeCandidate::new(StateVector::new(vec![3; 4], amps).unwrap()).unwrap()
}
