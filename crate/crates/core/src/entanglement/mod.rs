//! Werner states, partial-transpose spectra, n-copy distillability probes
//! and the Kronecker-sum singular-value bound.

pub mod distill;
pub mod kronecker;
pub mod werner;

pub use distill::{
    compressed_matrix, distill_value, distill_value_full, distill_verdict, eig_tolerance, projected_spectrum_full,
    search_distillable, DistillObjective, DistillProbe,
};
pub use kronecker::{
    kronecker_sum, ks_objective, ks_search_violation, random_normal_instance, KsInstance, KsObjective,
};
pub use werner::{
    classify_werner, dichotomic_check, psi_plus, swap_operator, werner, werner_pt_spectrum, WernerClass,
    WernerSpectrum, WernerState,
};
