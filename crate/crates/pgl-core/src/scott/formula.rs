//! Scott formula representation and its deterministic serialized form.

use std::fmt;

/// What the formula asserts about one linear combination of the tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CombFact {
    /// The combination vanishes.
    Zero,
    /// Divisible by p^k exactly (not by p^{k+1}), k below the period bound.
    Level(u32),
    /// Lies in the divisible part: divisible by p^period and beyond.
    Divisible,
}

impl fmt::Display for CombFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CombFact::Zero => write!(f, "zero"),
            CombFact::Level(k) => write!(f, "level {k}"),
            CombFact::Divisible => write!(f, "divisible"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ScottShape {
    /// Orders of the tuple entries plus the set of vanishing combinations;
    /// the family for purely divisible groups.
    OrdersRelations {
        orders: Vec<u32>,
        vanishing: Vec<Vec<u64>>,
    },
    /// Additionally a divisibility fact per nonzero combination, with
    /// levels capped at the period of the reduced part. Facts are aligned
    /// with the lexicographic enumeration of nonzero coefficient vectors
    /// below the orders, so the vectors themselves need not be stored.
    OrdersRelationsDivisibility {
        orders: Vec<u32>,
        period: u32,
        facts: Vec<CombFact>,
    },
    /// The atomic diagram of a finite pure subgroup containing the tuple,
    /// in canonical form: exponent multiset plus canonical coordinates of
    /// the distinguished tuple. The purity and minimality side conditions
    /// are certified at generation time.
    PureDiagram {
        exponents: Vec<u32>,
        tuple_coords: Vec<Vec<u64>>,
    },
}

/// An existential formula with parameters from the tuple, evaluable on any
/// presentation over the same prime. Syntactic equality of serialized forms
/// is the collision test for the family property.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScottFormula {
    pub p: u64,
    pub tuple_len: usize,
    pub shape: ScottShape,
}

impl ScottFormula {
    /// Deterministic line-based form, diffable across runs.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        match &self.shape {
            ScottShape::OrdersRelations { orders, vanishing } => {
                out.push_str(&format!(
                    "scott p={} len={} shape=orders_relations\n",
                    self.p, self.tuple_len
                ));
                out.push_str(&format!("orders {}\n", join(orders)));
                for v in vanishing {
                    out.push_str(&format!("vanish {}\n", join_commas(v)));
                }
            }
            ScottShape::OrdersRelationsDivisibility {
                orders,
                period,
                facts,
            } => {
                out.push_str(&format!(
                    "scott p={} len={} shape=orders_relations_divisibility period={}\n",
                    self.p, self.tuple_len, period
                ));
                out.push_str(&format!("orders {}\n", join(orders)));
                let bounds: Vec<u64> = orders.iter().map(|&o| self.p.pow(o)).collect();
                for (i, c) in CoeffVectors::new(&bounds).enumerate() {
                    out.push_str(&format!("combo {} {}\n", join_commas(&c), facts[i]));
                }
            }
            ScottShape::PureDiagram {
                exponents,
                tuple_coords,
            } => {
                out.push_str(&format!(
                    "scott p={} len={} shape=pure_diagram\n",
                    self.p, self.tuple_len
                ));
                out.push_str(&format!("exponents {}\n", join(exponents)));
                for t in tuple_coords {
                    out.push_str(&format!("tuple {}\n", join_commas(t)));
                }
            }
        }
        out
    }
}

impl fmt::Display for ScottFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn join_commas<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Lexicographic enumeration of the nonzero coefficient vectors
/// 0 ≤ c_i < bound_i, without materializing the whole box.
pub(crate) struct CoeffVectors<'a> {
    bounds: &'a [u64],
    current: Vec<u64>,
    done: bool,
}

impl<'a> CoeffVectors<'a> {
    pub fn new(bounds: &'a [u64]) -> Self {
        let done = bounds.iter().any(|&b| b == 0);
        CoeffVectors {
            bounds,
            current: vec![0; bounds.len()],
            done: done || bounds.is_empty(),
        }
    }
}

impl Iterator for CoeffVectors<'_> {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        // advance lexicographically (last coordinate fastest)
        for i in (0..self.current.len()).rev() {
            self.current[i] += 1;
            if self.current[i] < self.bounds[i] {
                return Some(self.current.clone());
            }
            self.current[i] = 0;
            if i == 0 {
                self.done = true;
                return None;
            }
        }
        None
    }
}

/// Materialized form, for call sites that index into the enumeration.
pub(crate) fn coefficient_vectors(bounds: &[u64]) -> Vec<Vec<u64>> {
    CoeffVectors::new(bounds).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialization_is_deterministic() {
        let f = ScottFormula {
            p: 2,
            tuple_len: 1,
            shape: ScottShape::OrdersRelationsDivisibility {
                orders: vec![2],
                period: 3,
                facts: vec![CombFact::Level(0), CombFact::Divisible, CombFact::Zero],
            },
        };
        assert_eq!(f.serialize(), f.serialize());
        assert!(f.serialize().contains("combo 2 divisible"));
        assert!(f.serialize().contains("combo 3 zero"));
    }

    #[test]
    fn coefficient_vectors_cover_the_box_in_lex_order() {
        let cs = coefficient_vectors(&[2, 3]);
        assert_eq!(
            cs,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![1, 2]
            ]
        );
        assert_eq!(coefficient_vectors(&[4]).len(), 3);
        assert!(coefficient_vectors(&[]).is_empty());
    }
}
