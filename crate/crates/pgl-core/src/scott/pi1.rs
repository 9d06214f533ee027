//! Universally quantified formulas over the group language, evaluated by
//! brute force on finite groups and their subgroups.

use super::generate::ScottError;
use crate::finite::{self, Element, FiniteGroupSpec, Subgroup};
use std::collections::{HashSet, VecDeque};

/// A linear term Σ c_v·x_v + Σ c_p·param_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub var_coeffs: Vec<u64>,
    pub param_coeffs: Vec<u64>,
}

impl Term {
    fn eval(&self, assignment: &[Element], params: &[Element], spec: &FiniteGroupSpec) -> Element {
        let mut acc = spec.zero();
        for (&c, x) in self.var_coeffs.iter().zip(assignment) {
            acc = finite::add(&acc, &finite::scale(c, x, spec), spec).expect("same spec");
        }
        for (&c, g) in self.param_coeffs.iter().zip(params) {
            acc = finite::add(&acc, &finite::scale(c, g, spec), spec).expect("same spec");
        }
        acc
    }
}

/// lhs = rhs, or its negation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal {
    pub negated: bool,
    pub lhs: Term,
    pub rhs: Term,
}

/// A disjunction of literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

/// ∀x₀…x_{q−1} ⋀ clauses, with parameters substituted at evaluation time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi1Formula {
    pub universals: usize,
    pub clauses: Vec<Clause>,
}

impl Pi1Formula {
    /// ∀x: x + 0 = x (a tautology exercising the evaluator).
    pub fn forall_identity() -> Self {
        Pi1Formula {
            universals: 1,
            clauses: vec![Clause {
                literals: vec![Literal {
                    negated: false,
                    lhs: Term {
                        var_coeffs: vec![1],
                        param_coeffs: vec![],
                    },
                    rhs: Term {
                        var_coeffs: vec![1],
                        param_coeffs: vec![],
                    },
                }],
            }],
        }
    }

    /// ∀x: c·x ≠ g, with g the first parameter.
    pub fn forall_scaled_ne(c: u64) -> Self {
        Pi1Formula {
            universals: 1,
            clauses: vec![Clause {
                literals: vec![Literal {
                    negated: true,
                    lhs: Term {
                        var_coeffs: vec![c],
                        param_coeffs: vec![0],
                    },
                    rhs: Term {
                        var_coeffs: vec![0],
                        param_coeffs: vec![1],
                    },
                }],
            }],
        }
    }

    fn matrix_holds(
        &self,
        assignment: &[Element],
        params: &[Element],
        spec: &FiniteGroupSpec,
    ) -> bool {
        self.clauses.iter().all(|clause| {
            clause.literals.iter().any(|lit| {
                let l = lit.lhs.eval(assignment, params, spec);
                let r = lit.rhs.eval(assignment, params, spec);
                (l == r) != lit.negated
            })
        })
    }

    /// Truth with universals ranging over the given element set.
    pub fn holds_over(
        &self,
        elements: &[Element],
        params: &[Element],
        spec: &FiniteGroupSpec,
    ) -> bool {
        let mut assignment = vec![spec.zero(); self.universals];
        self.holds_rec(0, &mut assignment, elements, params, spec)
    }

    fn holds_rec(
        &self,
        pos: usize,
        assignment: &mut Vec<Element>,
        elements: &[Element],
        params: &[Element],
        spec: &FiniteGroupSpec,
    ) -> bool {
        if pos == self.universals {
            return self.matrix_holds(assignment, params, spec);
        }
        for e in elements {
            assignment[pos] = e.clone();
            if !self.holds_rec(pos + 1, assignment, elements, params, spec) {
                return false;
            }
        }
        true
    }
}

/// All subgroups of the group that contain the given elements, enumerated
/// by closure extension.
fn subgroups_containing(
    spec: &FiniteGroupSpec,
    params: &[Element],
) -> Vec<Subgroup> {
    let base = Subgroup::generated(params, spec).expect("params in group");
    let elements = spec.elements();
    let mut seen: HashSet<Vec<Element>> = HashSet::new();
    seen.insert(base.elements().to_vec());
    let mut queue: VecDeque<Subgroup> = VecDeque::new();
    queue.push_back(base.clone());
    let mut out = vec![base];
    while let Some(current) = queue.pop_front() {
        for g in &elements {
            if current.contains(g) {
                continue;
            }
            let mut gens = current.generators().to_vec();
            gens.push(g.clone());
            let next = Subgroup::generated(&gens, spec).expect("closure in group");
            if seen.insert(next.elements().to_vec()) {
                out.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    out
}

/// Truth of a universal formula in every finite subgroup containing the
/// parameters. By downward persistence this coincides with truth in the
/// full finite group; both routes are computed and cross-checked.
pub fn pi1_holds_in_all_finite_subgroups(
    spec: &FiniteGroupSpec,
    formula: &Pi1Formula,
    params: &[Element],
) -> Result<bool, ScottError> {
    let all = spec.elements();
    let direct = formula.holds_over(&all, params, spec);
    let per_subgroup = subgroups_containing(spec, params)
        .iter()
        .all(|sub| formula.holds_over(sub.elements(), params, spec));
    if direct != per_subgroup {
        return Err(ScottError::CrossCheckMismatch);
    }
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u64, exps: &[u32]) -> FiniteGroupSpec {
        FiniteGroupSpec::new(p, exps.to_vec()).unwrap()
    }

    #[test]
    fn identity_law_holds_everywhere() {
        let spec = z(2, &[2, 1]);
        let f = Pi1Formula::forall_identity();
        assert!(pi1_holds_in_all_finite_subgroups(&spec, &f, &[]).unwrap());
    }

    #[test]
    fn px_ne_g_fails_for_positive_height() {
        let spec = z(2, &[2]);
        // g = (2) has height 1: some x with 2x = g exists
        let g = spec.element(vec![2]).unwrap();
        let f = Pi1Formula::forall_scaled_ne(2);
        assert!(!pi1_holds_in_all_finite_subgroups(&spec, &f, &[g]).unwrap());
    }

    #[test]
    fn p2x_ne_g_for_height_one_element() {
        // g a height-1 element of Z(4)⊕Z(2): 4·x ≠ g for all x
        let spec = z(2, &[2, 1]);
        let g = spec.element(vec![2, 0]).unwrap();
        let f = Pi1Formula::forall_scaled_ne(4);
        assert!(pi1_holds_in_all_finite_subgroups(&spec, &f, &[g.clone()]).unwrap());
        // while 2·x = g has a witness
        let f2 = Pi1Formula::forall_scaled_ne(2);
        assert!(!pi1_holds_in_all_finite_subgroups(&spec, &f2, &[g]).unwrap());
    }

    #[test]
    fn downward_persistence_cross_check_on_samples() {
        let spec = z(3, &[1, 1]);
        let g = spec.element(vec![1, 2]).unwrap();
        for c in 1..6 {
            let f = Pi1Formula::forall_scaled_ne(c);
            // both routes agree (the call errs otherwise)
            let _ = pi1_holds_in_all_finite_subgroups(&spec, &f, &[g.clone()]).unwrap();
        }
    }
}
