//! Staged computable presentations of Abelian p-groups of length at most ω:
//! construction from equivalence structures, invariant extraction with honest
//! stage semantics, Scott-family generation and verification, and
//! limit-computable isomorphism assembly.
//!
//! The crate is organized as:
//!
//! - [`finite`] — exact arithmetic and exhaustive searches on finite direct
//!   sums of cyclic p-groups; the ground-truth oracle layer.
//! - [`presentation`] — characters, staged equivalence structures, staged
//!   group presentations, and the builders connecting them.
//! - [`invariants`] — order/height/divisibility/character extraction from
//!   opaque presentations, Ulm data, and the categoricity classifier.
//! - [`scott`] — Scott formulas for the categorical and Δ₂-categorical
//!   classes, their evaluation, and the brute-force family check.
//! - [`limitwise`] — s-functions, the divisible-part complement chain, and
//!   limit-computable isomorphism construction with mind-change accounting.
//! - [`specfile`] — the line-based spec grammar shared with the CLI.

pub mod finite;
pub mod invariants;
pub mod limitwise;
pub mod presentation;
pub mod scott;
pub mod specfile;

pub use finite::{Element, FiniteGroupSpec, SearchBounds, Subgroup};
pub use invariants::{CategoricityLevel, Classification, StageVerdict, UlmData, Verdict};
pub use limitwise::{LimitMap, SFunction};
pub use presentation::{
    Character, EquivalenceStructure, GrowthSchedule, InfClassCount, InfMode, IsoTypeSpec,
    OpaqueGroup, StagedPresentation,
};
pub use scott::{Pi1Formula, ScottFormula};
