//! Latin squares and their quantum relatives: orthogonal quantum Latin
//! squares, 2-unitary matrices, perfect tensors and AME states.

pub mod ame;
pub mod entangling;
pub mod latin;
pub mod quantum_latin;
pub mod two_unitary;

pub use ame::{ame4_from_two_unitary, ame_4_3, verify_ame, AmeCandidate};
pub use entangling::{entangling_power_mc, linear_entropy, EntanglingEstimate};
pub use latin::{card_square, graeco_latin, verify_graeco_latin, verify_latin, LatinSquare};
pub use quantum_latin::{bell_states, product_state, verify_oqls, verify_quantum_latin, QuantumLatinTable, TableMode};
pub use two_unitary::{
    permutation_from_pair, search_two_unitary, tensor_from_unitary, verify_perfect_tensor, verify_two_unitary,
    TwoUnitaryObjective,
};
