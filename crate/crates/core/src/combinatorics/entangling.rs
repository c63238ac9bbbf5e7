use serde::{Deserialize, Serialize};

use crate::linalg::{kron_vec, ComplexMatrix};
use crate::random::{haar_state, rng_from_seed, sub_seed};
use crate::{Error, Result};

/// Samples drawn per shard; shards use independent sub-seeds and are summed
/// in shard order, so the estimate does not depend on how shards are run.
pub const SHARD_SIZE: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglingEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Linear entropy `1 − Tr ρ_A²` of a pure state on `C^d ⊗ C^d`.
pub fn linear_entropy(psi: &[num_complex::Complex64], d: usize) -> f64 {
    let m = ComplexMatrix::from_fn(d, d, |i, j| psi[i * d + j]);
    let rho = m.matmul(&m.adjoint());
    1.0 - rho.frobenius_norm().powi(2)
}

fn shard(u: &ComplexMatrix, d: usize, seed: u64, count: usize) -> (f64, f64) {
    let mut rng = rng_from_seed(seed);
    let mut s = 0.0;
    let mut s2 = 0.0;
    for _ in 0..count {
        let a = haar_state(&mut rng, d);
        let b = haar_state(&mut rng, d);
        let e = linear_entropy(&u.apply(&kron_vec(&a, &b)), d);
        s += e;
        s2 += e * e;
    }
    (s, s2)
}

/// Monte-Carlo average of the linear entropy of `U(|a> ⊗ |b>)` over
/// Haar-random `|a>`, `|b>`.
pub fn entangling_power_mc(u: &ComplexMatrix, d: usize, samples: usize, seed: u64) -> Result<EntanglingEstimate> {
    let n = u.require_square()?;
    if n != d * d {
        return Err(Error::DimensionMismatch(format!("side {n} is not {d}^2")));
    }
    let defect = u.unitarity_defect();
    if !(defect <= 1e-10) {
        return Err(Error::NotUnitary { defect });
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let shards: Vec<(u64, usize)> = (0..samples.div_ceil(SHARD_SIZE))
        .map(|k| (sub_seed(seed, k as u64), SHARD_SIZE.min(samples - k * SHARD_SIZE)))
        .collect();
    #[cfg(feature = "parallel")]
    let sums: Vec<(f64, f64)> = {
        use rayon::prelude::*;
        shards.par_iter().map(|&(s, c)| shard(u, d, s, c)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let sums: Vec<(f64, f64)> = shards.iter().map(|&(s, c)| shard(u, d, s, c)).collect();
    let (s, s2) = sums.iter().fold((0.0, 0.0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
    let m = samples as f64;
    let mean = s / m;
    let var = if samples > 1 { ((s2 - m * mean * mean) / (m - 1.0)).max(0.0) } else { 0.0 };
    Ok(EntanglingEstimate { estimate: mean, stderr: (var / m).sqrt(), samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::latin::graeco_latin;
    use crate::combinatorics::two_unitary::permutation_from_pair;
    use crate::entanglement::swap_operator;
    use crate::linalg::c64;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn cnot() -> ComplexMatrix {
        let mut u = ComplexMatrix::zeros(4, 4);
        for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            u[(r, c)] = c64(1.0, 0.0);
        }
        u
    }

    /// Midpoint rule in `cos θ` and `φ` for each qubit: uniform in these
    /// coordinates is the Haar (area) measure on the Bloch sphere.
    fn grid_average(u: &ComplexMatrix, m: usize) -> f64 {
        let mut pts: Vec<Vec<Complex64>> = Vec::new();
        for a in 0..m {
            let ct = -1.0 + (2.0 * a as f64 + 1.0) / m as f64;
            for b in 0..m {
                let phi = 2.0 * PI * (b as f64 + 0.5) / m as f64;
                let c = ((1.0 + ct) / 2.0).sqrt();
                let s = ((1.0 - ct) / 2.0).sqrt();
                pts.push(vec![c64(c, 0.0), c64(s * phi.cos(), s * phi.sin())]);
            }
        }
        let mut total = 0.0;
        for a in &pts {
            for b in &pts {
                total += linear_entropy(&u.apply(&kron_vec(a, b)), 2);
            }
        }
        total / (pts.len() * pts.len()) as f64
    }

    #[test]
    fn identity_and_swap_create_nothing() {
        for u in [ComplexMatrix::identity(9), swap_operator(3).unwrap()] {
            let e = entangling_power_mc(&u, 3, 500, 1).unwrap();
            assert!(e.estimate.abs() < 1e-14);
        }
    }

    #[test]
    fn cnot_matches_quadrature() {
        let oracle = grid_average(&cnot(), 24);
        assert!((oracle - 2.0 / 9.0).abs() < 1e-3, "{oracle}");
        let e = entangling_power_mc(&cnot(), 2, 20_000, 7).unwrap();
        assert!((e.estimate - oracle).abs() < 4.0 * e.stderr + 1e-3, "{e:?} vs {oracle}");
        assert!(e.stderr > 0.0 && e.stderr < 0.01);
    }

    #[test]
    fn same_seed_same_bits() {
        let a = entangling_power_mc(&cnot(), 2, 3000, 42).unwrap();
        let b = entangling_power_mc(&cnot(), 2, 3000, 42).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn non_unitary_rejected() {
        let m = ComplexMatrix::identity(4).scale_real(2.0);
        assert!(matches!(entangling_power_mc(&m, 2, 10, 0), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn two_unitary_beats_other_permutations() {
        let (a, b) = graeco_latin(3).unwrap();
        let u = permutation_from_pair(&a, &b).unwrap();
        let best = entangling_power_mc(&u, 3, 4000, 3).unwrap();
        // a few permutations of the nine basis states that are not 2-unitary
        let perms: [[usize; 9]; 3] =
            [[0, 1, 2, 3, 4, 5, 6, 7, 8], [0, 4, 8, 3, 7, 2, 6, 1, 5], [1, 0, 2, 4, 3, 5, 7, 6, 8]];
        for p in perms {
            let mut m = ComplexMatrix::zeros(9, 9);
            for (c, &r) in p.iter().enumerate() {
                m[(r, c)] = c64(1.0, 0.0);
            }
            assert!(!crate::combinatorics::verify_two_unitary(&m, 3, 1e-10).unwrap().passed);
            let e = entangling_power_mc(&m, 3, 4000, 4).unwrap();
            let gap = best.estimate - e.estimate;
            assert!(gap > 3.0 * (best.stderr.powi(2) + e.stderr.powi(2)).sqrt(), "{best:?} vs {e:?}");
        }
    }
}
