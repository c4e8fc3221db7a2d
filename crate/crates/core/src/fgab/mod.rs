//! Finitely generated abelian groups, homomorphisms and Frobenius modules.

mod character;
mod group;
mod hom;
mod module;

pub use character::{
    add_characters, all_characters, character_at, check_character, eval, extend_character,
    is_character, pullback, trivial_character, Character,
};
pub use group::{from_presentation, Element, FgAbGroup, Presentation};
pub use hom::{subgroup, subgroup_of_elements, GroupHom};
pub use module::{
    dual_of_coinvariants, dual_structure, exterior_square_presentation,
    presentation_with_endomorphism, DirectSum, DualStructure, ExteriorSquare, FixedAlternating,
    FrobModule,
};
