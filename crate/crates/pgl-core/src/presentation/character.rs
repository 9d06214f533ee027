//! Characters: which cyclic summand sizes occur, and how often.

use std::collections::BTreeMap;
use std::fmt;

/// A multiplicity in ω ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mult {
    Finite(u32),
    Infinite,
}

impl Mult {
    pub fn at_least(&self, k: u32) -> bool {
        match self {
            Mult::Finite(m) => *m >= k,
            Mult::Infinite => true,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Mult::Infinite)
    }
}

impl fmt::Display for Mult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mult::Finite(m) => write!(f, "{m}"),
            Mult::Infinite => write!(f, "inf"),
        }
    }
}

/// A count in ω ∪ {ω}: divisible ranks and numbers of infinite classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Count {
    Finite(u32),
    Omega,
}

impl Count {
    pub fn is_zero(&self) -> bool {
        matches!(self, Count::Finite(0))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Count::Finite(_))
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Omega => write!(f, "omega"),
        }
    }
}

/// An unbounded tail of sizes: one summand/class of size start + i·step
/// for every i ≥ 0. Produced by s-function descriptors with a closed-form
/// selector; keeps unbounded characters finitely presented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnboundedTail {
    pub start: u32,
    pub step: u32,
}

impl UnboundedTail {
    pub fn hits(&self, n: u32) -> bool {
        n >= self.start && (n - self.start) % self.step == 0
    }

    pub fn value(&self, i: u64) -> u32 {
        self.start + (i as u32) * self.step
    }
}

/// The character: a set of pairs (n,k) with (n,k+1) ∈ χ ⇒ (n,k) ∈ χ,
/// stored as the multiplicity function n ↦ card{summands of size n}.
/// Downward closure in k is automatic in this representation; the parser
/// enforces it when reading the pair form.
///
/// `mults` and `tail` are kept disjoint: every tail value is strictly above
/// every explicit key, so equality of characters is structural equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    mults: BTreeMap<u32, Mult>,
    tail: Option<UnboundedTail>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CharacterError {
    #[error("summand size 0 is not allowed")]
    ZeroSize,
    #[error("multiplicity 0 for size {0}; omit the entry instead")]
    ZeroMult(u32),
    #[error("tail step must be >= 1")]
    ZeroStep,
}

impl Character {
    pub fn empty() -> Self {
        Character {
            mults: BTreeMap::new(),
            tail: None,
        }
    }

    pub fn new(
        mults: BTreeMap<u32, Mult>,
        tail: Option<UnboundedTail>,
    ) -> Result<Self, CharacterError> {
        if mults.contains_key(&0) {
            return Err(CharacterError::ZeroSize);
        }
        for (&n, &m) in &mults {
            if m == Mult::Finite(0) {
                return Err(CharacterError::ZeroMult(n));
            }
        }
        let mut mults = mults;
        let tail = match tail {
            None => None,
            Some(t) => {
                if t.step == 0 {
                    return Err(CharacterError::ZeroStep);
                }
                if t.start == 0 {
                    return Err(CharacterError::ZeroSize);
                }
                // Fold tail values that do not clear the explicit keys into
                // the explicit map, so the representation is canonical.
                let max_key = mults.keys().max().copied().unwrap_or(0);
                let mut start = t.start;
                while start <= max_key {
                    let e = mults.entry(start).or_insert(Mult::Finite(0));
                    *e = match *e {
                        Mult::Finite(m) => Mult::Finite(m + 1),
                        Mult::Infinite => Mult::Infinite,
                    };
                    start += t.step;
                }
                Some(UnboundedTail {
                    start,
                    step: t.step,
                })
            }
        };
        Ok(Character { mults, tail })
    }

    pub fn from_finite_mults(pairs: &[(u32, u32)]) -> Result<Self, CharacterError> {
        let mut mults = BTreeMap::new();
        for &(n, m) in pairs {
            if m == 0 {
                return Err(CharacterError::ZeroMult(n));
            }
            let e = mults.entry(n).or_insert(Mult::Finite(0));
            if let Mult::Finite(cur) = *e {
                *e = Mult::Finite(cur + m);
            }
        }
        Character::new(mults, None)
    }

    /// All sizes 1..=bound, each with infinitely many summands.
    pub fn bounded_all_infinite(bound: u32) -> Result<Self, CharacterError> {
        if bound == 0 {
            return Err(CharacterError::ZeroSize);
        }
        let mults = (1..=bound).map(|n| (n, Mult::Infinite)).collect();
        Character::new(mults, None)
    }

    pub fn multiplicity(&self, n: u32) -> Mult {
        let explicit = match self.mults.get(&n) {
            Some(&m) => m,
            None => Mult::Finite(0),
        };
        let tail_hit = self.tail.map(|t| t.hits(n)).unwrap_or(false);
        match (explicit, tail_hit) {
            (m, false) => m,
            (Mult::Finite(m), true) => Mult::Finite(m + 1),
            (Mult::Infinite, true) => Mult::Infinite,
        }
    }

    /// Membership of the pair (n, k), k ≥ 1.
    pub fn contains(&self, n: u32, k: u32) -> bool {
        k >= 1 && self.multiplicity(n).at_least(k)
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty() && self.tail.is_none()
    }

    /// Bounded: some finite b has all sizes ≤ b.
    pub fn is_bounded(&self) -> bool {
        self.tail.is_none()
    }

    /// Largest size, when bounded.
    pub fn max_size(&self) -> Option<u32> {
        if self.tail.is_some() {
            return None;
        }
        self.mults.keys().max().copied()
    }

    pub fn explicit_mults(&self) -> &BTreeMap<u32, Mult> {
        &self.mults
    }

    pub fn tail(&self) -> Option<UnboundedTail> {
        self.tail
    }

    /// Sizes with infinitely many summands (explicit part only; tail sizes
    /// each occur once).
    pub fn infinite_sizes(&self) -> Vec<u32> {
        self.mults
            .iter()
            .filter(|(_, m)| m.is_infinite())
            .map(|(&n, _)| n)
            .collect()
    }

    /// True when the total number of summands is finite, i.e. the group
    /// described by this character is finite.
    pub fn is_finite_group(&self) -> bool {
        self.tail.is_none() && self.mults.values().all(|m| !m.is_infinite())
    }

    /// Entries (n,k) up to a multiplicity cap, for reports and tests.
    pub fn entries_capped(&self, cap: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        let mut sizes: Vec<u32> = self.mults.keys().copied().collect();
        if let Some(t) = self.tail {
            let mut v = t.start;
            while v <= t.start + t.step * cap {
                sizes.push(v);
                v += t.step;
            }
        }
        sizes.sort_unstable();
        sizes.dedup();
        for n in sizes {
            let m = self.multiplicity(n);
            let k_max = match m {
                Mult::Finite(k) => k.min(cap),
                Mult::Infinite => cap,
            };
            for k in 1..=k_max {
                out.push((n, k));
            }
        }
        out
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .mults
            .iter()
            .map(|(n, m)| format!("{n}:{m}"))
            .collect();
        if let Some(t) = self.tail {
            parts.push(format!("tail {}+{}i", t.start, t.step));
        }
        if parts.is_empty() {
            write!(f, "(empty)")
        } else {
            write!(f, "{}", parts.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn downward_closure_is_structural() {
        let c = Character::from_finite_mults(&[(1, 1), (2, 3)]).unwrap();
        for n in 1..4 {
            for k in 1..5 {
                if c.contains(n, k + 1) {
                    assert!(c.contains(n, k));
                }
            }
        }
        assert!(c.contains(2, 3));
        assert!(!c.contains(2, 4));
        assert!(!c.contains(3, 1));
    }

    #[test]
    fn tail_folding_keeps_representation_canonical() {
        // Tail starting below the largest explicit key gets folded in.
        let mut mults = BTreeMap::new();
        mults.insert(4u32, Mult::Finite(1));
        let c = Character::new(mults, Some(UnboundedTail { start: 2, step: 2 })).unwrap();
        assert_eq!(c.multiplicity(2), Mult::Finite(1));
        assert_eq!(c.multiplicity(4), Mult::Finite(2));
        assert_eq!(c.multiplicity(6), Mult::Finite(1));
        assert_eq!(c.tail().unwrap().start, 6);
        assert!(!c.is_bounded());
    }

    #[test]
    fn bounded_all_infinite_contains_every_k() {
        let c = Character::bounded_all_infinite(3).unwrap();
        assert!(c.contains(3, 1_000_000));
        assert!(!c.contains(4, 1));
        assert!(c.is_bounded());
        assert_eq!(c.max_size(), Some(3));
    }
}
