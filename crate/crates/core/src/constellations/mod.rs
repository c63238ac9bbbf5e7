//! SIC fiducials, mutually unbiased bases and complex Hadamard matrices.

pub mod mub;
pub mod sic;

pub use mub::{
    fourier, hadamard_from_bases, is_prime, mub_prime, search_mub, verify_complex_hadamard, verify_mub,
    verify_mub_set, MubObjective, MubSet,
};
pub use sic::{
    apply_displacement, hesse_fiducial, search_sic, sic_orbit, sic_residual, sic_residual_gradient,
    tetrahedron_fiducial, verify_sic, wh_displacement, SicCandidate, SicObjective,
};
