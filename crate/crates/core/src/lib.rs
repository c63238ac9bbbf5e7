//! Construction, verification and seeded numerical search for discrete
//! structures in finite-dimensional Hilbert spaces.
//!
//! The crate is organised around five families of objects:
//!
//! * SIC fiducials and Weyl–Heisenberg orbits ([`constellations::sic`]),
//! * mutually unbiased bases and complex Hadamard matrices ([`constellations::mub`]),
//! * Latin squares, quantum Latin squares, 2-unitary matrices and AME states
//!   ([`combinatorics`]),
//! * Werner states, partial-transpose spectra and n-copy distillability
//!   probes ([`entanglement`]),
//! * Kronecker sums and the two-largest-singular-value bound
//!   ([`entanglement::kronecker`]).
//!
//! All of them sit on top of a small dense complex linear algebra layer
//! ([`linalg`]) and share one seeded multi-restart optimizer ([`search`]).
//!
//! Composite indices are always leftmost-factor-most-significant: for factor
//! dimensions `[d1, d2, d3]` the basis label `(i1, i2, i3)` sits at
//! `i1*d2*d3 + i2*d3 + i3`.

pub mod combinatorics;
pub mod constellations;
pub mod entanglement;
mod error;
pub mod linalg;
pub mod random;
pub mod report;
pub mod search;
pub mod state;

pub use error::{Error, Result};
pub use linalg::{c64, ComplexMatrix};
pub use report::CheckReport;
pub use state::{DensityMatrix, StateVector};
