//! Two-argument monotone-in-stage functions with settled limits.

use crate::presentation::character::{Character, CharacterError, UnboundedTail};
use std::fmt;

/// f(i,s), nondecreasing in s with an existing limit m_i per row, presented
/// finitely: explicit rows whose last value is the settled limit, plus an
/// optional closed-form staircase tail m_i = start + step·(i − rows).
///
/// Tail rows are staged as f(i,s) = min(m_i, s), so every value is reached
/// at a finite stage and monotonicity is built in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SFunction {
    rows: Vec<Vec<u32>>,
    tail: Option<UnboundedTail>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SFunctionError {
    #[error("row {row} is not monotone: f({row},{stage}) = {prev} > {next} = f({row},{next_stage})", next_stage = stage + 1)]
    NonMonotoneRow {
        row: usize,
        stage: usize,
        prev: u32,
        next: u32,
    },
    #[error("row {0} is empty")]
    EmptyRow(usize),
    #[error("tail step must be >= 1")]
    ZeroStep,
}

impl SFunction {
    pub fn new(rows: Vec<Vec<u32>>, tail: Option<UnboundedTail>) -> Result<Self, SFunctionError> {
        for (i, row) in rows.iter().enumerate() {
            if row.is_empty() {
                return Err(SFunctionError::EmptyRow(i));
            }
            for s in 0..row.len() - 1 {
                if row[s] > row[s + 1] {
                    return Err(SFunctionError::NonMonotoneRow {
                        row: i,
                        stage: s,
                        prev: row[s],
                        next: row[s + 1],
                    });
                }
            }
        }
        if let Some(t) = tail {
            if t.step == 0 {
                return Err(SFunctionError::ZeroStep);
            }
        }
        Ok(SFunction { rows, tail })
    }

    /// The paper-shaped staircase with limits m_i = i + 1.
    pub fn staircase() -> Self {
        SFunction {
            rows: vec![],
            tail: Some(UnboundedTail { start: 1, step: 1 }),
        }
    }

    pub fn value(&self, i: u64, s: u64) -> u32 {
        if (i as usize) < self.rows.len() {
            let row = &self.rows[i as usize];
            row[(s as usize).min(row.len() - 1)]
        } else if let Some(t) = self.tail {
            let target = t.value(i - self.rows.len() as u64);
            target.min(s.min(u32::MAX as u64) as u32)
        } else {
            0
        }
    }

    /// Settled limit of row i, None when the row does not exist.
    pub fn limit(&self, i: u64) -> Option<u32> {
        if (i as usize) < self.rows.len() {
            Some(*self.rows[i as usize].last().unwrap())
        } else {
            self.tail.map(|t| t.value(i - self.rows.len() as u64))
        }
    }

    /// Number of rows; None when the tail makes it infinite.
    pub fn row_count(&self) -> Option<u64> {
        if self.tail.is_some() {
            None
        } else {
            Some(self.rows.len() as u64)
        }
    }

    pub fn explicit_rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn tail(&self) -> Option<UnboundedTail> {
        self.tail
    }

    /// Strictly increasing limits.
    pub fn is_s1(&self) -> bool {
        let limits: Vec<u32> = self
            .rows
            .iter()
            .map(|r| *r.last().unwrap())
            .collect();
        for w in limits.windows(2) {
            if w[0] >= w[1] {
                return false;
            }
        }
        if let Some(t) = self.tail {
            if let Some(&last) = limits.last() {
                if t.start <= last {
                    return false;
                }
            }
            if t.start == 0 {
                return false;
            }
        }
        true
    }

    /// The generated character: multiplicity of n is card{i : m_i = n}.
    /// Rows with limit 0 contribute nothing.
    pub fn character(&self) -> Result<Character, CharacterError> {
        let mut mults = std::collections::BTreeMap::new();
        for row in &self.rows {
            let m = *row.last().unwrap();
            if m == 0 {
                continue;
            }
            let e = mults
                .entry(m)
                .or_insert(crate::presentation::character::Mult::Finite(0));
            if let crate::presentation::character::Mult::Finite(c) = *e {
                *e = crate::presentation::character::Mult::Finite(c + 1);
            }
        }
        Character::new(mults, self.tail)
    }
}

impl fmt::Display for SFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            let vals: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "sfunction: {}:{}", i, vals.join(","))?;
        }
        if let Some(t) = self.tail {
            writeln!(f, "sfunction_tail: {}:{}", t.start, t.step)?;
        }
        Ok(())
    }
}

/// Exact limits read from the settled presentation; errors on malformed
/// tables are caught at construction, so this is total.
pub fn sfunction_limits(f: &SFunction, count: u64) -> Vec<u32> {
    (0..count).map(|i| f.limit(i).unwrap_or(0)).collect()
}

/// The character {(n,k) : card{i : m_i = n} ≥ k}.
pub fn character_from_sfunction(f: &SFunction) -> Result<Character, CharacterError> {
    f.character()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::character::Mult;

    #[test]
    fn limits_of_min_table() {
        // f(i,s) = min(i, s): explicit 4-row table
        let rows: Vec<Vec<u32>> = (0..4u32)
            .map(|i| (0..=i).map(|s| s.min(i)).collect::<Vec<u32>>())
            .collect();
        let f = SFunction::new(rows, None).unwrap();
        assert_eq!(sfunction_limits(&f, 4), vec![0, 1, 2, 3]);
    }

    #[test]
    fn constant_rows_settle_at_constants() {
        let f = SFunction::new(vec![vec![2], vec![2], vec![5, 5]], None).unwrap();
        assert_eq!(sfunction_limits(&f, 3), vec![2, 2, 5]);
        assert!(!f.is_s1());
    }

    #[test]
    fn staircase_is_s1_with_limits_i_plus_one() {
        let f = SFunction::staircase();
        assert!(f.is_s1());
        assert_eq!(sfunction_limits(&f, 5), vec![1, 2, 3, 4, 5]);
        // staging: f(i,s) = min(i+1, s)
        assert_eq!(f.value(3, 2), 2);
        assert_eq!(f.value(3, 100), 4);
    }

    #[test]
    fn character_counts_limits() {
        let f = SFunction::new(vec![vec![1], vec![0, 1], vec![2]], None).unwrap();
        let c = character_from_sfunction(&f).unwrap();
        assert_eq!(c.multiplicity(1), Mult::Finite(2));
        assert_eq!(c.multiplicity(2), Mult::Finite(1));
        assert!(c.contains(1, 1) && c.contains(1, 2) && c.contains(2, 1));
        assert!(!c.contains(1, 3) && !c.contains(3, 1));
    }

    #[test]
    fn staircase_character_has_every_size_once() {
        let c = character_from_sfunction(&SFunction::staircase()).unwrap();
        for n in 1..20 {
            assert!(c.contains(n, 1));
            assert!(!c.contains(n, 2));
        }
        assert!(!c.is_bounded());
    }

    #[test]
    fn empty_table_gives_empty_character() {
        let f = SFunction::new(vec![], None).unwrap();
        assert!(character_from_sfunction(&f).unwrap().is_empty());
    }

    #[test]
    fn non_monotone_row_rejected() {
        let err = SFunction::new(vec![vec![2, 1]], None).unwrap_err();
        assert!(matches!(err, SFunctionError::NonMonotoneRow { row: 0, .. }));
    }
}
