//! Ulm data for groups of length at most ω.

use crate::finite::{self, FiniteGroupSpec};
use crate::presentation::{Character, Count, IsoTypeSpec, Mult};
use std::collections::BTreeMap;
use std::collections::HashSet;

/// u(n) = dim of the n-th socle quotient = number of Z(p^{n+1}) summands,
/// plus the divisible rank. Complete invariants at length ≤ ω.
///
/// The counts are carried as a [`Character`] over the summand exponents
/// (u(n) is the multiplicity of exponent n+1), so unbounded types compare
/// structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UlmData {
    summand_counts: Character,
    pub divisible_rank: Count,
}

impl UlmData {
    pub fn new(summand_counts: Character, divisible_rank: Count) -> Self {
        UlmData {
            summand_counts,
            divisible_rank,
        }
    }

    /// u(n): summands of exponent n+1.
    pub fn u(&self, n: u32) -> Mult {
        self.summand_counts.multiplicity(n + 1)
    }

    pub fn is_trivial(&self) -> bool {
        self.summand_counts.is_empty() && self.divisible_rank.is_zero()
    }

    pub fn summand_counts(&self) -> &Character {
        &self.summand_counts
    }
}

/// Exact Ulm data read off an isomorphism type.
pub fn ulm_invariants(t: &IsoTypeSpec) -> UlmData {
    UlmData {
        summand_counts: t.cyclic.clone(),
        divisible_rank: t.divisible_rank,
    }
}

/// Brute-force Ulm data of a finite group: dimensions of the socle quotients
/// P_n/P_{n+1} where P_n = p^n G ∩ {x : px = 0}, computed by enumerating
/// elements, never by reading exponents off the spec. This is the
/// independent oracle side.
pub fn ulm_of_finite(spec: &FiniteGroupSpec) -> UlmData {
    let p = spec.prime();
    let elements = spec.elements();
    let socle: Vec<_> = elements
        .iter()
        .filter(|x| finite::scale(p, x, spec).is_zero())
        .cloned()
        .collect();
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    let mut n = 0u32;
    loop {
        let pn_g: HashSet<_> = elements
            .iter()
            .map(|x| finite::scale(p.pow(n), x, spec))
            .collect();
        let pn1_g: HashSet<_> = elements
            .iter()
            .map(|x| finite::scale(p.pow(n + 1), x, spec))
            .collect();
        let pn_size = socle.iter().filter(|x| pn_g.contains(*x)).count();
        let pn1_size = socle.iter().filter(|x| pn1_g.contains(*x)).count();
        if pn_size == 1 {
            break;
        }
        let ratio = pn_size / pn1_size;
        let mut dim = 0u32;
        let mut r = ratio as u64;
        while r > 1 {
            r /= p;
            dim += 1;
        }
        if dim > 0 {
            counts.insert(n + 1, dim);
        }
        n += 1;
    }
    let mults: BTreeMap<u32, Mult> = counts
        .into_iter()
        .map(|(e, d)| (e, Mult::Finite(d)))
        .collect();
    UlmData {
        summand_counts: Character::new(mults, None).expect("positive dims"),
        divisible_rank: Count::Finite(0),
    }
}

/// Isomorphism of length-≤ω types by Ulm data equality.
pub fn isomorphic_by_ulm(a: &IsoTypeSpec, b: &IsoTypeSpec) -> bool {
    a.p == b.p && ulm_invariants(a) == ulm_invariants(b)
}

/// The finite-spec version used against the brute-force search oracle.
pub fn isomorphic_by_ulm_finite(a: &FiniteGroupSpec, b: &FiniteGroupSpec) -> bool {
    a.prime() == b.prime() && ulm_of_finite(a) == ulm_of_finite(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::UnboundedTail;

    fn z(p: u64, exps: &[u32]) -> FiniteGroupSpec {
        FiniteGroupSpec::new(p, exps.to_vec()).unwrap()
    }

    #[test]
    fn trivial_group_has_zero_ulm_data() {
        let u = ulm_of_finite(&FiniteGroupSpec::trivial(2));
        assert!(u.is_trivial());
    }

    #[test]
    fn z_p2_cubed_has_u1_equal_3() {
        // computed by socle-quotient dimension counting, not exponent reading
        let u = ulm_of_finite(&z(2, &[2, 2, 2]));
        assert_eq!(u.u(1), Mult::Finite(3));
        assert_eq!(u.u(0), Mult::Finite(0));
        assert_eq!(u.u(2), Mult::Finite(0));
        assert_eq!(u.divisible_rank, Count::Finite(0));
    }

    #[test]
    fn finite_ulm_matches_spec_exponent_multiset() {
        for exps in [
            vec![1u32],
            vec![1, 1],
            vec![2],
            vec![3, 1, 1],
            vec![2, 2, 1],
        ] {
            let spec = z(2, &exps);
            let u = ulm_of_finite(&spec);
            let mut expected: BTreeMap<u32, u32> = BTreeMap::new();
            for &e in &exps {
                *expected.entry(e).or_insert(0) += 1;
            }
            for (e, m) in expected {
                assert_eq!(u.summand_counts().multiplicity(e), Mult::Finite(m));
            }
        }
    }

    #[test]
    fn ulm_separates_z8_from_z2_cubed() {
        assert!(!isomorphic_by_ulm_finite(&z(2, &[3]), &z(2, &[1, 1, 1])));
        assert!(isomorphic_by_ulm_finite(&z(2, &[2, 1]), &z(2, &[1, 2])));
    }

    #[test]
    fn unbounded_type_ulm() {
        // rank ω with one summand of each exponent
        let t = IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Omega,
            cyclic: Character::new(
                BTreeMap::new(),
                Some(UnboundedTail { start: 1, step: 1 }),
            )
            .unwrap(),
        };
        let u = ulm_invariants(&t);
        assert_eq!(u.u(0), Mult::Finite(1));
        assert_eq!(u.u(5), Mult::Finite(1));
        assert_eq!(u.divisible_rank, Count::Omega);
    }

    #[test]
    fn type_with_infinitely_repeated_summand() {
        let t = IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Omega,
            cyclic: Character::new(
                [(3u32, Mult::Infinite)].into_iter().collect(),
                None,
            )
            .unwrap(),
        };
        let u = ulm_invariants(&t);
        assert_eq!(u.u(2), Mult::Infinite);
        assert_eq!(u.u(1), Mult::Finite(0));
    }

    #[test]
    fn same_type_different_presentation_is_isomorphic() {
        let c = Character::from_finite_mults(&[(2, 1), (1, 1)]).unwrap();
        let a = IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Finite(1),
            cyclic: c.clone(),
        };
        let b = IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Finite(1),
            cyclic: c,
        };
        assert!(isomorphic_by_ulm(&a, &b));
    }
}
