//! Categoricity classification for length-≤ω types.

use crate::presentation::{Count, IsoTypeSpec};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CategoricityLevel {
    /// ⊕_α Z(p^∞) ⊕ F with α ≤ ω and F finite, or
    /// ⊕_r Z(p^∞) ⊕ ⊕_ω Z(p^m) ⊕ F with r, m finite.
    ComputablyCategorical,
    /// Relatively Δ₂ categorical (and not computably categorical):
    /// bounded reduced part, or no divisible part.
    Delta2Relatively,
    /// Not relatively Δ₂ categorical: nonzero divisible rank and unbounded
    /// reduced part of finite heights.
    NotDelta2Relatively,
    /// Finer advisory label for the open case: finite nonzero rank with
    /// unbounded reduced part, where plain Δ₂ categoricity is undecided.
    Delta2Open,
}

impl fmt::Display for CategoricityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CategoricityLevel::ComputablyCategorical => "computably_categorical",
            CategoricityLevel::Delta2Relatively => "delta2_relatively",
            CategoricityLevel::NotDelta2Relatively => "not_delta2_relatively",
            CategoricityLevel::Delta2Open => "delta2_open",
        };
        write!(f, "{s}")
    }
}

/// Full classification: the relative level, plus advisory flags for the
/// questions the classification leaves open rather than guessing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub level: CategoricityLevel,
    /// Finite nonzero rank with unbounded reduced part: plain Δ₂
    /// categoricity is an open problem; the classifier only flags it.
    pub problem1_open: bool,
    /// Rank ω with unbounded reduced part: not plain Δ₂ categorical,
    /// provided the reduced part has a computable copy. The hypothesis is
    /// recorded, not checked; our builders always satisfy it.
    pub not_plain_delta2_given_computable_copy: bool,
}

impl Classification {
    /// The level with the advisory flag folded in: open cases report
    /// `Delta2Open` instead of the bare relative verdict.
    pub fn fine_level(&self) -> CategoricityLevel {
        if self.problem1_open {
            CategoricityLevel::Delta2Open
        } else {
            self.level
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("type has length > omega")]
    LengthBeyondOmega,
}

/// Classify per the case split: computably categorical forms, bounded
/// reduced part, reduced groups, and the remaining non-Δ₂-relative case.
pub fn classify_categoricity(t: &IsoTypeSpec) -> Result<Classification, ClassifyError> {
    let bounded = t.cyclic.is_bounded();
    let infinite_exponents: Vec<u32> = t.cyclic.infinite_sizes();
    let reduced_is_finite = bounded && infinite_exponents.is_empty();

    let form1 = reduced_is_finite; // ⊕_α Z(p^∞) ⊕ F, any α ≤ ω
    let form2 = t.divisible_rank.is_finite()
        && bounded
        && infinite_exponents.len() == 1; // ⊕_r Z(p^∞) ⊕ ⊕_ω Z(p^m) ⊕ F

    let level = if form1 || form2 {
        CategoricityLevel::ComputablyCategorical
    } else if bounded {
        // reduced part of finite period
        CategoricityLevel::Delta2Relatively
    } else if t.divisible_rank.is_zero() {
        // reduced: all elements of finite height
        CategoricityLevel::Delta2Relatively
    } else {
        CategoricityLevel::NotDelta2Relatively
    };

    let unbounded_with_rank = !bounded && !t.divisible_rank.is_zero();
    let problem1_open = unbounded_with_rank && t.divisible_rank.is_finite();
    let not_plain = unbounded_with_rank && t.divisible_rank == Count::Omega;

    Ok(Classification {
        level,
        problem1_open,
        not_plain_delta2_given_computable_copy: not_plain,
    })
}
