//! Seeded randomness: sub-seed mixing and Haar-distributed states and
//! unitaries.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{c64, norm, ComplexMatrix};

pub type SeededRng = ChaCha8Rng;

/// One round of the splitmix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for restart (or shard) `index` of a run seeded with `seed`.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0xD1B5_4A32_D192_ED03)))
}

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn standard_normal<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Vector of i.i.d. standard complex normals (unit variance per component).
pub fn complex_normal_vec<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| c64(standard_normal(rng), standard_normal(rng))).collect()
}

/// Haar-random unit vector in `C^n`.
pub fn haar_state<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    loop {
        let mut v = complex_normal_vec(rng, n);
        let nrm = norm(&v);
        if nrm > 1e-12 {
            v.iter_mut().for_each(|z| *z /= nrm);
            return v;
        }
    }
}

/// Haar-random unitary: Gram–Schmidt on the columns of a Ginibre matrix,
/// which fixes the phases of the implicit `R` factor to be positive.
pub fn haar_unitary<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|_| complex_normal_vec(rng, n)).collect();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = cols[k].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                let (head, tail) = cols.split_at_mut(j);
                for (x, q) in tail[0].iter_mut().zip(&head[k]) {
                    *x -= proj * q;
                }
            }
        }
        let nrm = norm(&cols[j]);
        cols[j].iter_mut().for_each(|z| *z /= nrm);
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}
