//! Characters, staged equivalence structures, staged group presentations,
//! and the constructions between them.

pub mod character;
pub mod equivalence;
pub mod iso_type;
pub mod staged;

pub use character::{Character, CharacterError, Count, Mult, UnboundedTail};
pub use equivalence::{ClassEvent, EquivalenceError, EquivalenceStructure, InfClassCount, InfMode};
pub use iso_type::{IsoTypeError, IsoTypeSpec};
pub use staged::{
    CompFate, Coord, Decoder, GrowthSchedule, OpaqueGroup, PresentationError, StagedPresentation,
    StageView,
};
