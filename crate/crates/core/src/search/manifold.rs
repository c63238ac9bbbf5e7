use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{c64, orthonormalize_rows, ComplexMatrix};
use crate::random::{haar_unitary, standard_normal, SeededRng};
use crate::{Error, Result};

/// Search domain. Points are flat real vectors; matrix factors are stored
/// row-major with interleaved real and imaginary parts.
///
/// Retractions are metric projections (normalization, polar factor), so
/// their differential at a point of the manifold is the orthogonal tangent
/// projection. That makes finite differences of `f ∘ retract` in ambient
/// coordinates agree with the projected Euclidean gradient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Manifold {
    /// Unit sphere in `R^dim`.
    UnitSphere { dim: usize },
    /// The unitary group `U(k)`.
    Unitary { k: usize },
    /// `rows x cols` complex matrices with orthonormal rows.
    Stiefel { rows: usize, cols: usize },
    Product { factors: Vec<Manifold> },
}

/// Reads a `rows x cols` complex matrix from interleaved storage.
pub fn matrix_from_point(x: &[f64], rows: usize, cols: usize) -> ComplexMatrix {
    debug_assert_eq!(x.len(), 2 * rows * cols);
    ComplexMatrix::from_fn(rows, cols, |i, j| {
        let k = 2 * (i * cols + j);
        c64(x[k], x[k + 1])
    })
}

/// Writes a complex matrix into interleaved storage.
pub fn write_matrix(m: &ComplexMatrix, out: &mut [f64]) {
    debug_assert_eq!(out.len(), 2 * m.rows() * m.cols());
    for (k, z) in m.as_slice().iter().enumerate() {
        out[2 * k] = z.re;
        out[2 * k + 1] = z.im;
    }
}

/// Interleaved storage of a complex slice.
pub fn complex_to_point(v: &[Complex64]) -> Vec<f64> {
    v.iter().flat_map(|z| [z.re, z.im]).collect()
}

pub fn point_to_complex(x: &[f64]) -> Vec<Complex64> {
    x.chunks_exact(2).map(|p| c64(p[0], p[1])).collect()
}

impl Manifold {
    pub fn ambient_dim(&self) -> usize {
        match self {
            Manifold::UnitSphere { dim } => *dim,
            Manifold::Unitary { k } => 2 * k * k,
            Manifold::Stiefel { rows, cols } => 2 * rows * cols,
            Manifold::Product { factors } => factors.iter().map(Manifold::ambient_dim).sum(),
        }
    }

    fn matrix_shape(&self) -> Option<(usize, usize)> {
        match self {
            Manifold::Unitary { k } => Some((*k, *k)),
            Manifold::Stiefel { rows, cols } => Some((*rows, *cols)),
            _ => None,
        }
    }

    /// Splits a point (or tangent vector) into the slices of each factor.
    pub fn split<'a>(&self, x: &'a [f64]) -> Vec<&'a [f64]> {
        match self {
            Manifold::Product { factors } => {
                let mut out = Vec::with_capacity(factors.len());
                let mut rest = x;
                for f in factors {
                    let (head, tail) = rest.split_at(f.ambient_dim());
                    out.push(head);
                    rest = tail;
                }
                out
            }
            _ => vec![x],
        }
    }

    /// Maps an ambient point onto the manifold in place.
    pub fn retract(&self, x: &mut [f64]) -> Result<()> {
        match self {
            Manifold::UnitSphere { .. } => {
                let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if !(n > 0.0 && n.is_finite()) {
                    return Err(Error::InvalidArgument("cannot normalize a zero vector".into()));
                }
                x.iter_mut().for_each(|v| *v /= n);
                Ok(())
            }
            Manifold::Unitary { .. } | Manifold::Stiefel { .. } => {
                let (r, c) = self.matrix_shape().unwrap();
                let m = orthonormalize_rows(&matrix_from_point(x, r, c))?;
                write_matrix(&m, x);
                Ok(())
            }
            Manifold::Product { factors } => {
                let mut rest = &mut x[..];
                for f in factors {
                    let (head, tail) = rest.split_at_mut(f.ambient_dim());
                    f.retract(head)?;
                    rest = tail;
                }
                Ok(())
            }
        }
    }

    /// Orthogonal projection of an ambient vector onto the tangent space at `x`.
    pub fn project_tangent(&self, x: &[f64], v: &mut [f64]) {
        match self {
            Manifold::UnitSphere { .. } => {
                let dot: f64 = x.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(x).for_each(|(vi, xi)| *vi -= dot * xi);
            }
            Manifold::Unitary { .. } | Manifold::Stiefel { .. } => {
                // V - sym(V X†) X
                let (r, c) = self.matrix_shape().unwrap();
                let xm = matrix_from_point(x, r, c);
                let vm = matrix_from_point(v, r, c);
                let vx = vm.matmul(&xm.adjoint()).hermitian_part();
                let p = &vm - &vx.matmul(&xm);
                write_matrix(&p, v);
            }
            Manifold::Product { factors } => {
                let mut off = 0;
                for f in factors {
                    let n = f.ambient_dim();
                    f.project_tangent(&x[off..off + n], &mut v[off..off + n]);
                    off += n;
                }
            }
        }
    }

    /// Distance from the manifold: norm defect or `max |X X† - I|`.
    pub fn defect(&self, x: &[f64]) -> f64 {
        match self {
            Manifold::UnitSphere { .. } => (x.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs(),
            Manifold::Unitary { .. } | Manifold::Stiefel { .. } => {
                let (r, c) = self.matrix_shape().unwrap();
                let m = matrix_from_point(x, r, c);
                m.matmul(&m.adjoint()).max_abs_diff(&ComplexMatrix::identity(r))
            }
            Manifold::Product { .. } => self
                .split(x)
                .into_iter()
                .zip(self.factors())
                .map(|(p, f)| f.defect(p))
                .fold(0.0, f64::max),
        }
    }

    fn factors(&self) -> Vec<&Manifold> {
        match self {
            Manifold::Product { factors } => factors.iter().collect(),
            other => vec![other],
        }
    }

    /// Random starting point: uniform on spheres, Haar on unitary groups, and
    /// the first rows of a Haar unitary on Stiefel manifolds.
    pub fn random_point(&self, rng: &mut SeededRng) -> Vec<f64> {
        match self {
            Manifold::UnitSphere { dim } => {
                let mut x: Vec<f64> = (0..*dim).map(|_| standard_normal(rng)).collect();
                if self.retract(&mut x).is_err() {
                    x = vec![0.0; *dim];
                    x[0] = 1.0;
                }
                x
            }
            Manifold::Unitary { k } => {
                let mut x = vec![0.0; 2 * k * k];
                write_matrix(&haar_unitary(rng, *k), &mut x);
                x
            }
            Manifold::Stiefel { rows, cols } => {
                let u = haar_unitary(rng, *cols);
                let top = ComplexMatrix::from_fn(*rows, *cols, |i, j| u[(i, j)]);
                let mut x = vec![0.0; 2 * rows * cols];
                write_matrix(&top, &mut x);
                x
            }
            Manifold::Product { factors } => factors.iter().flat_map(|f| f.random_point(rng)).collect(),
        }
    }
}
