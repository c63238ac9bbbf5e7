//! Dense complex linear algebra and tensor reorderings.

mod eig;
mod matrix;
mod polar;
mod reorder;
mod svd;

pub use eig::{hermitian_eig, hermitian_eigenvalues, HermitianEigen, HERMITIAN_TOL};
pub use matrix::{c64, inner, kron, kron_vec, norm, ComplexMatrix, MAX_SIDE};
pub use polar::orthonormalize_rows;
pub use reorder::{
    partial_trace, partial_transpose, permute_subsystems, permute_vector, reduced_state, reshuffle,
};
pub use svd::{singular_values, top_two_sq};

pub use num_complex::Complex64;
