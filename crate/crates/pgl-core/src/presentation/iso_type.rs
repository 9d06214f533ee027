//! Isomorphism types of p-groups of length at most ω.

use super::character::{Character, Count, Mult};
use crate::finite::FiniteGroupSpec;
use std::fmt;

/// The isomorphism type of a group ⊕_α Z(p^∞) ⊕ H where H is a direct sum
/// of cyclic p-groups with the given character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoTypeSpec {
    pub p: u64,
    pub divisible_rank: Count,
    pub cyclic: Character,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum IsoTypeError {
    #[error("{0} is not prime")]
    NotPrime(u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl IsoTypeSpec {
    pub fn new(p: u64, divisible_rank: Count, cyclic: Character) -> Result<Self, IsoTypeError> {
        if !is_prime(p) {
            return Err(IsoTypeError::NotPrime(p));
        }
        Ok(IsoTypeSpec {
            p,
            divisible_rank,
            cyclic,
        })
    }

    /// The group is reduced: no quasicyclic summands.
    pub fn is_reduced(&self) -> bool {
        self.divisible_rank.is_zero()
    }

    /// Period of the reduced part: max cyclic exponent, None when unbounded.
    pub fn reduced_period(&self) -> Option<u32> {
        if !self.cyclic.is_bounded() {
            return None;
        }
        Some(self.cyclic.max_size().unwrap_or(0))
    }

    /// The whole group is finite.
    pub fn is_finite(&self) -> bool {
        self.divisible_rank.is_zero() && self.cyclic.is_finite_group()
    }

    /// The finite truncation for exhaustive checks: every quasicyclic summand
    /// cut at depth `divisible_depth`, every infinite multiplicity cut at
    /// `width`, and an unbounded tail cut after `width` summands.
    pub fn truncate(&self, divisible_depth: u32, width: u32) -> FiniteGroupSpec {
        let mut exps: Vec<u32> = Vec::new();
        if let Count::Finite(r) = self.divisible_rank {
            exps.extend(std::iter::repeat(divisible_depth).take(r as usize));
        } else {
            exps.extend(std::iter::repeat(divisible_depth).take(width as usize));
        }
        for (&n, &m) in self.cyclic.explicit_mults() {
            let count = match m {
                Mult::Finite(k) => k,
                Mult::Infinite => width,
            };
            exps.extend(std::iter::repeat(n).take(count as usize));
        }
        if let Some(t) = self.cyclic.tail() {
            for i in 0..width as u64 {
                exps.push(t.value(i));
            }
        }
        FiniteGroupSpec::new(self.p, exps).expect("valid truncation")
    }
}

impl fmt::Display for IsoTypeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={} rank={} cyclic={}",
            self.p, self.divisible_rank, self.cyclic
        )
    }
}
