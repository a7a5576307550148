//! Storage codes on triangle-free Cayley graphs over `F_2^n`.
//!
//! The code of a connection set `S'` (containing 0) is the null space of its
//! coset matrix, which is the annihilator of `f_S = sum_{w in S'} x^w` in the
//! group algebra `P_n`. This crate provides the group algebra, dense GF(2)
//! elimination, the explicit families, and an ideal calculator used to check
//! rate identities exactly.

pub mod algebra;
pub mod bits;
pub mod code;
pub mod error;
pub mod families;
pub mod ideal;
pub mod limits;
pub mod matrix;
pub mod rational;
pub mod verify;

pub use algebra::{disjoint_variables, parse_polynomial, AlgebraElement, B2Coordinates, Monomial};
pub use bits::BitVector;
pub use code::{
    check_storage_property, code_rate, coset_matrix, graph_stats, is_triangle_free,
    necessary_conditions, repair_coordinate, CodeReport, ConnectionSet, GraphStats, StorageCode,
};
pub use error::{Error, Result};
pub use families::{
    family_bounds, generalized_element, hamming_element, seven_eighths_element, sparsity_check,
    FamilyInstance, FamilyKind,
};
pub use ideal::{annihilator_contains, annihilator_dim, ideal_dim, verify_ideal_identities, IdealHandle};
pub use matrix::{
    mult_operator_matrix, BitMatrix, EchelonForm, EliminationOptions, PivotOrder, SubspaceBasis,
};
pub use rational::Rational;
