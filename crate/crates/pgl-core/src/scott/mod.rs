//! Scott formulas for the computably categorical and relatively
//! Δ₂-categorical classes: generation, evaluation on presentations, and
//! brute-force verification of the family property on finite truncations.

mod canon;
mod formula;
mod generate;
mod pi1;
mod verify;

pub use formula::{CombFact, ScottFormula, ScottShape};
pub use generate::{generate_scott_formula, satisfies, ScottError};
pub use pi1::{pi1_holds_in_all_finite_subgroups, Clause, Literal, Pi1Formula, Term};
pub use verify::{verify_scott_family, FamilyReport, FamilyViolation};

