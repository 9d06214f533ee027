//! Brute-force verification of the Scott-family property on finite
//! truncations: tuples assigned equal formulas must be automorphic.

use super::canon::{canonical_tuple_form, SpecView};
use super::formula::{coefficient_vectors, CombFact, ScottFormula, ScottShape};
use super::generate::{shape_for, ScottError, ShapeChoice};
use crate::finite::{
    self, extend_to_automorphism_in, Element, FiniteGroupSpec, SearchBounds, Subgroup,
};
use crate::presentation::{Count, IsoTypeSpec, Mult};
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct FamilyViolation {
    pub tuple_a: Vec<Element>,
    pub tuple_b: Vec<Element>,
    pub formula: String,
}

#[derive(Debug, Clone)]
pub struct FamilyReport {
    pub tuple_len: usize,
    pub tuples_checked: u64,
    pub classes: u64,
    pub pairs_checked: u64,
    pub violations: Vec<FamilyViolation>,
}

impl FamilyReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the truncation against the policy: quasicyclic summands truncated
/// uniformly at depth M ≥ 3 + max cyclic exponent, the rest matching the
/// cyclic character.
fn check_policy(t: &IsoTypeSpec, truncation: &FiniteGroupSpec) -> Result<(), ScottError> {
    if t.p != truncation.prime() {
        return Err(ScottError::TruncationPolicy(
            "prime mismatch".to_string(),
        ));
    }
    let maxexp = t.cyclic.max_size().unwrap_or(0);
    let threshold = 3 + maxexp;
    let divisible: Vec<u32> = truncation
        .exponents()
        .iter()
        .copied()
        .filter(|&e| e >= threshold)
        .collect();
    let cyclic: Vec<u32> = truncation
        .exponents()
        .iter()
        .copied()
        .filter(|&e| e < threshold)
        .collect();
    match t.divisible_rank {
        Count::Finite(r) => {
            if divisible.len() != r as usize {
                return Err(ScottError::TruncationPolicy(format!(
                    "expected {r} truncated quasicyclic summands at depth >= {threshold}, found {}",
                    divisible.len()
                )));
            }
        }
        Count::Omega => {
            if divisible.is_empty() {
                return Err(ScottError::TruncationPolicy(format!(
                    "rank omega needs at least one truncated quasicyclic summand at depth >= {threshold}"
                )));
            }
        }
    }
    if let Some(&first) = divisible.first() {
        if divisible.iter().any(|&e| e != first) {
            return Err(ScottError::TruncationPolicy(
                "quasicyclic summands must be truncated uniformly".to_string(),
            ));
        }
    }
    for &e in &cyclic {
        let mult = t.cyclic.multiplicity(e);
        let have = cyclic.iter().filter(|&&x| x == e).count() as u32;
        match mult {
            Mult::Finite(m) if have > m => {
                return Err(ScottError::TruncationPolicy(format!(
                    "{} summands of exponent {e} but the character allows {m}",
                    have
                )));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Exact ground-truth formula of a tuple in the truncation: heights are
/// coordinate valuations, no budgets involved.
fn formula_on_truncation(
    choice: &ShapeChoice,
    spec: &FiniteGroupSpec,
    tuple: &[Element],
    bounds: SearchBounds,
) -> ScottFormula {
    let p = spec.prime();
    let orders: Vec<u32> = tuple
        .iter()
        .map(|e| finite::order_exponent(e, spec))
        .collect();
    match choice {
        ShapeChoice::OrdersRelations => {
            let coeff_bounds: Vec<u64> = orders.iter().map(|&o| p.pow(o)).collect();
            let vanishing = coefficient_vectors(&coeff_bounds)
                .into_iter()
                .filter(|c| combo(spec, tuple, c).is_zero())
                .collect();
            ScottFormula {
                tuple_len: tuple.len(),
                shape: ScottShape::OrdersRelations { orders, vanishing },
            }
        }
        ShapeChoice::WithDivisibility { period } => {
            let coeff_bounds: Vec<u64> = orders.iter().map(|&o| p.pow(o)).collect();
            let mut profile = Vec::new();
            for c in coefficient_vectors(&coeff_bounds) {
                let v = combo(spec, tuple, &c);
                let fact = if v.is_zero() {
                    CombFact::Zero
                } else {
                    match finite::height_in_group(&v, spec) {
                        Some(h) if h >= *period => CombFact::Divisible,
                        Some(h) => CombFact::Level(h),
                        None => CombFact::Divisible,
                    }
                };
                profile.push((c, fact));
            }
            ScottFormula {
                tuple_len: tuple.len(),
                shape: ScottShape::OrdersRelationsDivisibility {
                    orders,
                    period: *period,
                    profile,
                },
            }
        }
        ShapeChoice::PureDiagram => {
            let f = minimal_pure_subgroup(spec, tuple, bounds);
            let view = SpecView(spec);
            let (exponents, tuple_coords) =
                canonical_tuple_form(&view, f.elements(), tuple, p);
            ScottFormula {
                tuple_len: tuple.len(),
                shape: ScottShape::PureDiagram {
                    exponents,
                    tuple_coords,
                },
            }
        }
    }
}

fn combo(spec: &FiniteGroupSpec, tuple: &[Element], coeffs: &[u64]) -> Element {
    let mut acc = spec.zero();
    for (e, &c) in tuple.iter().zip(coeffs) {
        acc = finite::add(&acc, &finite::scale(c, e, spec), spec).expect("same spec");
    }
    acc
}

/// Height of a nonzero element within a subgroup's element list.
fn height_within_subgroup(spec: &FiniteGroupSpec, elements: &[Element], a: &Element) -> u32 {
    let p = spec.prime();
    let mut layer: Vec<Element> = elements.to_vec();
    let mut h = 0u32;
    loop {
        let mut next: Vec<Element> = layer.iter().map(|x| finite::scale(p, x, spec)).collect();
        next.sort();
        next.dedup();
        if next.binary_search(a).is_err() || next.len() == 1 {
            return h;
        }
        layer = next;
        h += 1;
    }
}

/// The pure hull of the tuple: grow the generated subgroup with division
/// witnesses until every member's ambient height matches its inner height,
/// then minimize over the hull's subgroups containing the tuple.
fn minimal_pure_subgroup(
    spec: &FiniteGroupSpec,
    tuple: &[Element],
    _bounds: SearchBounds,
) -> Subgroup {
    let p = spec.prime();
    let mut gens: Vec<Element> = tuple.iter().filter(|e| !e.is_zero()).cloned().collect();
    let mut hull = Subgroup::generated(&gens, spec).expect("tuple in group");
    loop {
        let mut witness: Option<Element> = None;
        for a in hull.elements() {
            if a.is_zero() {
                continue;
            }
            let inner = height_within_subgroup(spec, hull.elements(), a);
            let ambient = finite::height_in_group(a, spec).unwrap_or(u32::MAX);
            if ambient > inner {
                // least division witness one level deeper
                let target = inner + 1;
                witness = spec
                    .elements()
                    .into_iter()
                    .find(|h| finite::scale(p.pow(target), h, spec) == *a);
                break;
            }
        }
        match witness {
            None => break,
            Some(h) => {
                gens.push(h);
                hull = Subgroup::generated(&gens, spec).expect("closure in group");
            }
        }
    }
    // minimality: the least pure subgroup of the hull containing the tuple
    let base = Subgroup::generated(
        &tuple.iter().filter(|e| !e.is_zero()).cloned().collect::<Vec<_>>(),
        spec,
    )
    .expect("tuple in group");
    let mut seen: std::collections::HashSet<Vec<Element>> = Default::default();
    seen.insert(base.elements().to_vec());
    let mut queue = vec![base.clone()];
    let mut candidates = vec![base];
    while let Some(current) = queue.pop() {
        for g in hull.elements() {
            if current.contains(g) {
                continue;
            }
            let mut gens = current.generators().to_vec();
            gens.push(g.clone());
            let next = Subgroup::generated(&gens, spec).expect("closure");
            if next.len() <= hull.len() && seen.insert(next.elements().to_vec()) {
                queue.push(next.clone());
                candidates.push(next);
            }
        }
    }
    candidates.sort_by(|a, b| a.len().cmp(&b.len()).then(a.elements().cmp(b.elements())));
    for c in candidates {
        if is_pure_quick(spec, &c) {
            return c;
        }
    }
    hull
}

fn is_pure_quick(spec: &FiniteGroupSpec, sub: &Subgroup) -> bool {
    sub.elements().iter().all(|a| {
        a.is_zero() || {
            let inner = height_within_subgroup(spec, sub.elements(), a);
            finite::height_in_group(a, spec) == Some(inner)
        }
    })
}

/// Verify the family property at the given tuple length: group all tuples
/// by their exact formulas, then check that every class is one orbit by
/// extending representative-to-member pairings to automorphisms.
pub fn verify_scott_family(
    t: &IsoTypeSpec,
    truncation: &FiniteGroupSpec,
    tuple_len: usize,
    bounds: SearchBounds,
) -> Result<FamilyReport, ScottError> {
    check_policy(t, truncation)?;
    let choice = shape_for(t)?;
    truncation
        .check_bounds(bounds)
        .map_err(|e| ScottError::TruncationPolicy(e.to_string()))?;

    let elements = truncation.elements();
    let mut tuples: Vec<Vec<Element>> = vec![vec![]];
    for _ in 0..tuple_len {
        let mut next = Vec::with_capacity(tuples.len() * elements.len());
        for t in &tuples {
            for e in &elements {
                let mut t2 = t.clone();
                t2.push(e.clone());
                next.push(t2);
            }
        }
        tuples = next;
    }

    let mut classes: HashMap<String, Vec<Vec<Element>>> = HashMap::new();
    for tuple in &tuples {
        let f = formula_on_truncation(&choice, truncation, tuple, bounds);
        classes.entry(f.serialize()).or_default().push(tuple.clone());
    }

    let mut pairs_checked = 0u64;
    let mut violations = Vec::new();
    for (serialized, members) in &classes {
        let rep = &members[0];
        for other in members.iter().skip(1) {
            pairs_checked += 1;
            let pairs: Vec<(Element, Element)> = rep
                .iter()
                .cloned()
                .zip(other.iter().cloned())
                .collect();
            if extend_to_automorphism_in(&pairs, truncation, &elements).is_err() {
                violations.push(FamilyViolation {
                    tuple_a: rep.clone(),
                    tuple_b: other.clone(),
                    formula: serialized.clone(),
                });
            }
        }
    }

    Ok(FamilyReport {
        tuple_len,
        tuples_checked: tuples.len() as u64,
        classes: classes.len() as u64,
        pairs_checked,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Character;

    fn spec(p: u64, exps: &[u32]) -> FiniteGroupSpec {
        FiniteGroupSpec::new(p, exps.to_vec()).unwrap()
    }

    fn divisible_type(rank: u32) -> IsoTypeSpec {
        IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Finite(rank),
            cyclic: Character::empty(),
        }
    }

    fn form2_type(rank: u32, m: u32) -> IsoTypeSpec {
        IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Finite(rank),
            cyclic: Character::new([(m, Mult::Infinite)].into_iter().collect(), None)
                .unwrap(),
        }
    }

    #[test]
    fn length_zero_is_vacuously_clean() {
        let t = form2_type(1, 1);
        let g = spec(2, &[4, 1, 1]);
        let report = verify_scott_family(&t, &g, 0, SearchBounds::default()).unwrap();
        assert!(report.clean());
        assert_eq!(report.tuples_checked, 1);
        assert_eq!(report.pairs_checked, 0);
    }

    #[test]
    fn divisible_truncation_single_elements_are_one_orbit_per_order() {
        // ⊕_ω Z(2^∞) truncated to Z(16)^3: all order-2 divisible elements
        // share a formula and are pairwise automorphic
        let t = divisible_type(3);
        let g = spec(2, &[4, 4, 4]);
        let report = verify_scott_family(&t, &g, 1, SearchBounds::default()).unwrap();
        assert!(report.clean(), "violations: {:?}", report.violations.len());
    }

    #[test]
    fn form2_truncation_pairs_are_clean() {
        let t = form2_type(1, 2);
        // Z(2^5) ⊕ Z(4)^3: policy M = 5 ≥ 3 + 2
        let g = spec(2, &[5, 2, 2, 2]);
        let report = verify_scott_family(&t, &g, 2, SearchBounds::default()).unwrap();
        assert!(report.clean(), "{} violations", report.violations.len());
        assert!(report.classes > 1);
    }

    #[test]
    fn reduced_truncation_is_clean_via_pure_diagrams() {
        let t = IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Finite(0),
            cyclic: Character::new(
                [(1, Mult::Infinite), (2, Mult::Infinite)].into_iter().collect(),
                None,
            )
            .unwrap(),
        };
        let g = spec(2, &[2, 2, 1, 1]);
        let report = verify_scott_family(&t, &g, 1, SearchBounds::default()).unwrap();
        assert!(report.clean());
        let report2 = verify_scott_family(&t, &g, 2, SearchBounds::default()).unwrap();
        assert!(report2.clean(), "{} violations", report2.violations.len());
    }

    #[test]
    fn policy_violations_are_rejected() {
        // missing the truncated quasicyclic summand entirely
        let t = form2_type(1, 1);
        let g = spec(2, &[1, 1]);
        assert!(matches!(
            verify_scott_family(&t, &g, 1, SearchBounds::default()),
            Err(ScottError::TruncationPolicy(_))
        ));
        // non-uniform divisible truncation depths
        let g2 = spec(2, &[6, 5, 1]);
        let t2 = form2_type(2, 1);
        assert!(matches!(
            verify_scott_family(&t2, &g2, 1, SearchBounds::default()),
            Err(ScottError::TruncationPolicy(_))
        ));
    }
}
