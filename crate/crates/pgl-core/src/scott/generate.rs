//! Scott formula generation and evaluation.

use super::canon::{canonical_tuple_form, PairIso, PresView, SpecView};
use super::formula::{coefficient_vectors, CombFact, ScottFormula, ScottShape};
use crate::finite::FiniteGroupSpec;
use crate::invariants::{
    apparent_height, classify_categoricity, order_of, scale, CategoricityLevel, StageVerdict,
    Verdict,
};
use crate::presentation::{IsoTypeSpec, OpaqueGroup};
use std::collections::BTreeSet;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ScottError {
    #[error("isomorphism type outside the covered classification rows")]
    ClassNotCovered,
    #[error("no pure enclosing subgroup found within budget; retry with a larger budget")]
    NoPureSubgroup,
    #[error("tuple length {got} does not match formula arity {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("truncation violates the policy: {0}")]
    TruncationPolicy(String),
    #[error("the two evaluation routes disagree; internal error")]
    CrossCheckMismatch,
}

/// Which formula shape serves the type's classification row.
pub(crate) enum ShapeChoice {
    OrdersRelations,
    WithDivisibility { period: u32 },
    PureDiagram,
}

pub(crate) fn shape_for(t: &IsoTypeSpec) -> Result<ShapeChoice, ScottError> {
    let class = classify_categoricity(t).map_err(|_| ScottError::ClassNotCovered)?;
    match class.level {
        CategoricityLevel::ComputablyCategorical | CategoricityLevel::Delta2Relatively => {}
        _ => return Err(ScottError::ClassNotCovered),
    }
    if t.cyclic.is_empty() {
        return Ok(ShapeChoice::OrdersRelations);
    }
    if t.is_reduced() {
        return Ok(ShapeChoice::PureDiagram);
    }
    let period = t
        .cyclic
        .max_size()
        .expect("covered non-reduced types have bounded cyclic part");
    Ok(ShapeChoice::WithDivisibility { period })
}

/// Generate the Scott formula of a tuple over an opaque presentation, at
/// the given probing budget. Divisibility facts carry the budget's
/// apparent heights and are revisable exactly as heights are.
pub fn generate_scott_formula(
    t: &IsoTypeSpec,
    group: &impl OpaqueGroup,
    tuple: &[u64],
    budget: u64,
) -> Result<ScottFormula, ScottError> {
    let shape = shape_for(t)?;
    let p = group.prime();
    let orders: Vec<u32> = tuple.iter().map(|&g| order_of(group, g)).collect();
    match shape {
        ShapeChoice::OrdersRelations => {
            let vanishing = vanishing_combos(group, tuple, &orders, p);
            Ok(ScottFormula {
                p,
                tuple_len: tuple.len(),
                shape: ScottShape::OrdersRelations { orders, vanishing },
            })
        }
        ShapeChoice::WithDivisibility { period } => {
            let bounds: Vec<u64> = orders.iter().map(|&o| p.pow(o)).collect();
            let mut facts = Vec::new();
            for c in coefficient_vectors(&bounds) {
                let v = combo_value(group, tuple, &c);
                let fact = if v == 0 {
                    CombFact::Zero
                } else {
                    let h = apparent_height(group, v, period, budget);
                    if h >= period {
                        CombFact::Divisible
                    } else {
                        CombFact::Level(h)
                    }
                };
                facts.push(fact);
            }
            Ok(ScottFormula {
                p,
                tuple_len: tuple.len(),
                shape: ScottShape::OrdersRelationsDivisibility {
                    orders,
                    period,
                    facts,
                },
            })
        }
        ShapeChoice::PureDiagram => {
            let f = apparent_pure_hull(group, tuple, budget).ok_or(ScottError::NoPureSubgroup)?;
            let f = minimize_pure(group, &f, tuple, budget);
            let view = PresView(group);
            let (exponents, tuple_coords) = canonical_tuple_form(&view, &f, tuple, p);
            Ok(ScottFormula {
                p,
                tuple_len: tuple.len(),
                shape: ScottShape::PureDiagram {
                    exponents,
                    tuple_coords,
                },
            })
        }
    }
}

pub(crate) fn combo_value(group: &impl OpaqueGroup, tuple: &[u64], coeffs: &[u64]) -> u64 {
    let mut acc = 0u64;
    for (&g, &c) in tuple.iter().zip(coeffs) {
        acc = group.add(acc, scale(group, c, g));
    }
    acc
}

fn vanishing_combos(
    group: &impl OpaqueGroup,
    tuple: &[u64],
    orders: &[u32],
    p: u64,
) -> Vec<Vec<u64>> {
    let bounds: Vec<u64> = orders.iter().map(|&o| p.pow(o)).collect();
    coefficient_vectors(&bounds)
        .into_iter()
        .filter(|c| combo_value(group, tuple, c) == 0)
        .collect()
}

/// Subgroup of materialized ids generated by the tuple.
pub(crate) fn closure_ids(group: &impl OpaqueGroup, gens: &[u64]) -> Vec<u64> {
    let mut set: BTreeSet<u64> = [0].into_iter().collect();
    let mut queue: Vec<u64> = Vec::new();
    for &g in gens {
        if set.insert(g) {
            queue.push(g);
        }
    }
    while let Some(x) = queue.pop() {
        for &g in gens {
            let y = group.add(x, g);
            if set.insert(y) {
                queue.push(y);
            }
        }
    }
    set.into_iter().collect()
}

/// Height of a nonzero element within the closed id set f: the largest h
/// with a ∈ p^h·f. Exact, since f is a finite group.
fn height_within(group: &impl OpaqueGroup, f: &[u64], a: u64) -> u32 {
    debug_assert_ne!(a, 0);
    let p = group.prime();
    let mut layer: Vec<u64> = f.to_vec();
    let mut h = 0u32;
    loop {
        let mut next: Vec<u64> = layer.iter().map(|&x| scale(group, p, x)).collect();
        next.sort_unstable();
        next.dedup();
        if next.binary_search(&a).is_err() || next.len() == 1 {
            return h;
        }
        layer = next;
        h += 1;
        debug_assert!(h <= 64, "height within a finite p-group is bounded");
    }
}

/// Grow the tuple closure until it looks pure at this budget: every member's
/// apparent ambient height matches its height inside. Returns None when the
/// budget is exhausted before that happens.
fn apparent_pure_hull(group: &impl OpaqueGroup, tuple: &[u64], budget: u64) -> Option<Vec<u64>> {
    let mut gens: Vec<u64> = tuple.to_vec();
    let mut f = closure_ids(group, &gens);
    for _ in 0..64 {
        let mut witness: Option<u64> = None;
        'scan: for &a in &f {
            if a == 0 {
                continue;
            }
            let hf = height_within(group, &f, a);
            // impure at a when the ambient group divides one step deeper
            let limit = budget.min(group.universe_size());
            for h in 0..limit {
                let mut x = h;
                for _ in 0..hf + 1 {
                    x = scale(group, group.prime(), x);
                }
                if x == a {
                    witness = Some(h);
                    break 'scan;
                }
            }
        }
        match witness {
            None => return Some(f),
            Some(h) => {
                gens.push(h);
                f = closure_ids(group, &gens);
            }
        }
    }
    None
}

/// Among subgroups of f containing the tuple, pick the least apparently-pure
/// one; this certifies the minimality side condition at generation time.
fn minimize_pure(
    group: &impl OpaqueGroup,
    f: &[u64],
    tuple: &[u64],
    budget: u64,
) -> Vec<u64> {
    let base = closure_ids(group, tuple);
    let mut all: Vec<Vec<u64>> = Vec::new();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    seen.insert(base.clone());
    let mut queue = vec![base];
    while let Some(current) = queue.pop() {
        all.push(current.clone());
        for &g in f {
            if current.binary_search(&g).is_ok() {
                continue;
            }
            let mut gens = current.clone();
            gens.push(g);
            let next = closure_ids(group, &gens);
            if next.len() <= f.len() && seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    all.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    for candidate in &all {
        if candidate.len() < f.len() && is_apparently_pure(group, candidate, budget) {
            return candidate.clone();
        }
    }
    f.to_vec()
}

fn is_apparently_pure(group: &impl OpaqueGroup, f: &[u64], budget: u64) -> bool {
    for &a in f {
        if a == 0 {
            continue;
        }
        let hf = height_within(group, f, a);
        let ha = apparent_height(group, a, hf + 1, budget);
        if ha > hf {
            return false;
        }
    }
    true
}

/// Evaluate a formula on a tuple at the given budget. Existential content
/// is witness-searched (a yes from it is permanent); divisibility facts are
/// compared against apparent heights and give revisable verdicts.
pub fn satisfies(
    group: &impl OpaqueGroup,
    tuple: &[u64],
    formula: &ScottFormula,
    budget: u64,
) -> Result<StageVerdict, ScottError> {
    if tuple.len() != formula.tuple_len {
        return Err(ScottError::ArityMismatch {
            expected: formula.tuple_len,
            got: tuple.len(),
        });
    }
    let p = group.prime();
    let stage = budget;
    let verdict = |value| StageVerdict { value, stage };
    match &formula.shape {
        ScottShape::OrdersRelations { orders, vanishing } => {
            let actual: Vec<u32> = tuple.iter().map(|&g| order_of(group, g)).collect();
            if actual != *orders {
                return Ok(verdict(Verdict::No));
            }
            let bounds: Vec<u64> = orders.iter().map(|&o| p.pow(o)).collect();
            let claimed: BTreeSet<&Vec<u64>> = vanishing.iter().collect();
            for c in coefficient_vectors(&bounds) {
                let vanishes = combo_value(group, tuple, &c) == 0;
                if vanishes != claimed.contains(&c) {
                    return Ok(verdict(Verdict::No));
                }
            }
            Ok(verdict(Verdict::Yes))
        }
        ScottShape::OrdersRelationsDivisibility {
            orders,
            period,
            facts,
        } => {
            let actual: Vec<u32> = tuple.iter().map(|&g| order_of(group, g)).collect();
            if actual != *orders {
                return Ok(verdict(Verdict::No));
            }
            let bounds: Vec<u64> = orders.iter().map(|&o| p.pow(o)).collect();
            let mut pending = false;
            for (c, fact) in coefficient_vectors(&bounds).iter().zip(facts) {
                let v = combo_value(group, tuple, c);
                match fact {
                    CombFact::Zero => {
                        if v != 0 {
                            return Ok(verdict(Verdict::No));
                        }
                    }
                    CombFact::Level(k) => {
                        if v == 0 {
                            return Ok(verdict(Verdict::No));
                        }
                        let h = apparent_height(group, v, *period, budget);
                        if h > *k {
                            return Ok(verdict(Verdict::No));
                        }
                        if h < *k {
                            pending = true;
                        }
                    }
                    CombFact::Divisible => {
                        if v == 0 {
                            return Ok(verdict(Verdict::No));
                        }
                        let h = apparent_height(group, v, *period, budget);
                        if h < *period {
                            // stagewise guess trends to no on non-divisible
                            // elements and flips once witnesses materialize
                            return Ok(verdict(Verdict::No));
                        }
                    }
                }
            }
            Ok(verdict(if pending {
                Verdict::Unknown
            } else {
                Verdict::Yes
            }))
        }
        ScottShape::PureDiagram {
            exponents,
            tuple_coords,
        } => {
            let spec = FiniteGroupSpec::new(p, exponents.clone()).expect("valid diagram");
            // quick reject: tuple orders must match the diagram tuple orders
            for (i, &g) in tuple.iter().enumerate() {
                let e = spec
                    .element(tuple_coords[i].clone())
                    .expect("diagram coords fit");
                if order_of(group, g) != crate::finite::order_exponent(&e, &spec) {
                    return Ok(verdict(Verdict::No));
                }
            }
            // existential content: find a copy of the diagram around the tuple
            let dom_view = SpecView(&spec);
            let cod_view = PresView(group);
            let mut iso = PairIso::new(&dom_view, &cod_view);
            for (i, &g) in tuple.iter().enumerate() {
                let e = spec.element(tuple_coords[i].clone()).unwrap();
                match iso.extend(&e, &g, &dom_view, &cod_view, p) {
                    Some(ext) => iso = ext,
                    None => return Ok(verdict(Verdict::No)),
                }
            }
            let domain = spec.elements();
            let window = budget.min(group.universe_size());
            let codomain: Vec<u64> = (0..window).collect();
            match iso.complete(&domain, &codomain, &dom_view, &cod_view, p) {
                Some(_) => Ok(verdict(Verdict::Yes)),
                None => Ok(verdict(Verdict::Unknown)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{
        Character, Count, GrowthSchedule, IsoTypeSpec, Mult, StagedPresentation,
    };

    fn infinite_cyclic_type(p: u64, m: u32, rank: u32) -> IsoTypeSpec {
        IsoTypeSpec {
            p,
            divisible_rank: Count::Finite(rank),
            cyclic: Character::new([(m, Mult::Infinite)].into_iter().collect(), None).unwrap(),
        }
    }

    fn built(t: &IsoTypeSpec, stages: u64) -> StagedPresentation {
        let mut g = StagedPresentation::build_from_iso_type(t, GrowthSchedule::default());
        g.advance_by(stages);
        g
    }

    #[test]
    fn zero_tuple_formula_is_satisfied_only_by_zero() {
        let t = infinite_cyclic_type(2, 1, 1);
        let g = built(&t, 300);
        let f = generate_scott_formula(&t, &g, &[0], 200).unwrap();
        assert_eq!(
            satisfies(&g, &[0], &f, 200).unwrap().value,
            Verdict::Yes
        );
        for id in 1..16 {
            assert_ne!(
                satisfies(&g, &[id], &f, 200).unwrap().value,
                Verdict::Yes,
                "id {id} must not satisfy the zero formula"
            );
        }
    }

    #[test]
    fn formula_records_non_divisibility_of_cyclic_part_elements() {
        let t = infinite_cyclic_type(2, 2, 1);
        let g = built(&t, 600);
        // find an order-2 element of apparent height 0 outside the divisible
        // part, via the decoder ground truth
        let d = g.decoder();
        let h0 = (1..g.universe_size().min(64))
            .find(|&id| {
                order_of(&g, id) == 1 && d.limit_height(id) == Some(0)
            })
            .expect("height-0 socle element materialized");
        let f = generate_scott_formula(&t, &g, &[h0], 400).unwrap();
        match &f.shape {
            ScottShape::OrdersRelationsDivisibility { facts, .. } => {
                // facts[0] corresponds to the coefficient vector [1]
                assert_eq!(facts[0], CombFact::Level(0));
            }
            other => panic!("expected divisibility shape, got {other:?}"),
        }
        assert_eq!(satisfies(&g, &[h0], &f, 400).unwrap().value, Verdict::Yes);
    }

    #[test]
    fn divisible_elements_formula_rejects_height_zero_elements() {
        let t = infinite_cyclic_type(2, 1, 1);
        let g = built(&t, 800);
        let d = g.decoder();
        let div = (1..g.universe_size().min(64))
            .find(|&id| order_of(&g, id) == 1 && d.in_divisible_part(id))
            .expect("divisible order-2 element");
        let h0 = (1..g.universe_size().min(64))
            .find(|&id| order_of(&g, id) == 1 && d.limit_height(id) == Some(0))
            .expect("height-0 order-2 element");
        let f = generate_scott_formula(&t, &g, &[div], 600).unwrap();
        assert_eq!(satisfies(&g, &[div], &f, 600).unwrap().value, Verdict::Yes);
        // converges to no on the divisibility conjunct
        assert_eq!(satisfies(&g, &[h0], &f, 600).unwrap().value, Verdict::No);
    }

    #[test]
    fn order_mismatch_is_refuted_outright() {
        let t = infinite_cyclic_type(2, 2, 0);
        let g = built(&t, 300);
        let a = (1..64).find(|&id| order_of(&g, id) == 1).unwrap();
        let b = (1..64).find(|&id| order_of(&g, id) == 2).unwrap();
        let f = generate_scott_formula(&t, &g, &[a], 200).unwrap();
        assert_eq!(satisfies(&g, &[b], &f, 200).unwrap().value, Verdict::No);
    }

    #[test]
    fn reduced_case_emits_a_pure_diagram_and_self_satisfies() {
        // reduced type: cyclic part with two exponents, rank 0
        let t = IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Finite(0),
            cyclic: Character::new(
                [(1, Mult::Infinite), (2, Mult::Infinite)].into_iter().collect(),
                None,
            )
            .unwrap(),
        };
        let g = built(&t, 400);
        let a = (1..g.universe_size().min(64))
            .find(|&id| order_of(&g, id) == 2)
            .unwrap();
        let f = generate_scott_formula(&t, &g, &[a], 300).unwrap();
        match &f.shape {
            ScottShape::PureDiagram { exponents, .. } => {
                assert!(!exponents.is_empty());
            }
            other => panic!("expected pure diagram, got {other:?}"),
        }
        assert_eq!(
            satisfies(&g, &[a], &f, 300).unwrap().value,
            Verdict::Yes,
            "generation-budget self-satisfaction"
        );
    }

    #[test]
    fn uncovered_class_is_refused() {
        use crate::presentation::UnboundedTail;
        let t = IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Finite(1),
            cyclic: Character::new(
                Default::default(),
                Some(UnboundedTail { start: 1, step: 1 }),
            )
            .unwrap(),
        };
        let g = built(&t, 50);
        assert_eq!(
            generate_scott_formula(&t, &g, &[0], 50).unwrap_err(),
            ScottError::ClassNotCovered
        );
    }
}
