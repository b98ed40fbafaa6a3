//! Chevalley group elements as matrices over finite rings.

mod closure;
mod element;
mod relations;
mod rep;

pub use closure::{subgroup_closure, Closure};
pub use element::{torus_and_weyl, weyl_word, ElementaryWord, GroupElement, Letter, LetterJson};
pub use relations::{
    commutator_word, elementary_commutator, verify_steinberg_relations, weyl_conjugation_check, weyl_lift_inverse_word,
    weyl_lift_word, RelationFailure, RelationMode, RelationReport, EXHAUSTIVE_LIMIT, SAMPLE_COUNT,
};
pub use rep::{GroupError, Invariant, RepKind, Representation};
