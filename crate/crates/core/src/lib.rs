//! Character-sum algebra for modular-counting circuits: quadratic forms over
//! Z2, characters `2^q` over Z3, Witt decomposition, and the search and
//! sampling experiments around the 2-weight of `AND_n`.

pub mod characters;
pub mod circuits;
pub mod error;
pub mod forms;
pub mod groups;
pub mod search;
pub mod table;

pub use characters::{
    and_product_construction, character_table, check_tradeoff, expand_character,
    expand_to_full_rank, interpolate, poly_degree, shift_sum, sum_table, CharacterSum,
    MultilinearPoly,
};
pub use circuits::{
    characters_to_depth2, characters_to_depth3, depth2_to_characters, depth3_to_characters,
    Circuit, Gate,
};
pub use error::{Error, Result};
pub use forms::{
    family_support_profile, normal_form_list, random_form, witt_decompose, witt_normal_form,
    witt_rank, FamilyProfile, LinearForm, QuadraticForm, WittDecomposition,
};
pub use groups::{
    check_g72_relations, closure, eval_program, g72_generators, s3_generators, Group, Instruction,
    Permutation, Program,
};
pub use table::{and_table, FunctionTable, Z3Word};
