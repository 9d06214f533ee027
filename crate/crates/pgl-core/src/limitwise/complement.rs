//! The divisible-part complement: a growing chain of finite pure subgroups.
//!
//! A₀ = {0}; given A_s, the least materialized g ∉ A_s with
//! ⟨A_s ∪ {g}⟩ ∩ D = {0} joins, and A_{s+1} is the generated subgroup.
//! The union H is a complement of the divisible part, with membership
//! decided at stage s+1: s ∈ H iff s ∈ A_{s+1}.

use crate::invariants::scale_by_p;
use crate::presentation::{OpaqueGroup, StagedPresentation};
use std::collections::{BTreeSet, HashMap};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ComplementError {
    #[error("divisible part is not stage-decidable on this presentation")]
    OracleUnavailable,
}

#[derive(Debug, Clone)]
pub struct ComplementChain {
    /// Current A_s as a sorted id set.
    current: BTreeSet<u64>,
    /// Chain step at which each member entered (0 for the identity).
    entered_at: HashMap<u64, usize>,
    /// Generator chosen at each step; None when the step stalled.
    generators: Vec<Option<u64>>,
    /// Candidates rejected permanently: their closure meets D.
    rejected: BTreeSet<u64>,
    /// Scan cursor: every id below it is decided (member or rejected).
    cursor: u64,
}

impl ComplementChain {
    fn new() -> Self {
        let mut entered_at = HashMap::new();
        entered_at.insert(0, 0);
        ComplementChain {
            current: [0].into_iter().collect(),
            entered_at,
            generators: Vec::new(),
            rejected: BTreeSet::new(),
            cursor: 1,
        }
    }

    pub fn steps(&self) -> usize {
        self.generators.len()
    }

    /// A_s: members that had entered by step s.
    pub fn set_at(&self, s: usize) -> BTreeSet<u64> {
        self.entered_at
            .iter()
            .filter(|&(_, &at)| at <= s)
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn current_set(&self) -> &BTreeSet<u64> {
        &self.current
    }

    pub fn generators(&self) -> &[Option<u64>] {
        &self.generators
    }

    /// Membership in H, decided by the displayed rule: id ∈ H iff
    /// id ∈ A_{id+1}. Requires the chain to have run at least id+1 steps.
    pub fn is_member(&self, id: u64) -> Option<bool> {
        if self.steps() as u64 <= id {
            return None;
        }
        Some(
            self.entered_at
                .get(&id)
                .map(|&at| at as u64 <= id + 1)
                .unwrap_or(false),
        )
    }

    fn extend_by(&mut self, pres: &StagedPresentation, g: u64, step: usize) {
        // e = least exponent with p^e·g inside A_s
        let mut e = 0u32;
        let mut x = g;
        while !self.current.contains(&x) {
            x = scale_by_p(pres, x);
            e += 1;
        }
        let pe = pres.prime().pow(e);
        let old: Vec<u64> = self.current.iter().copied().collect();
        let mut multiple = 0u64;
        for j in 1..pe {
            multiple = pres.add(multiple, g);
            let _ = j;
            for &a in &old {
                let v = pres.add(a, multiple);
                if self.current.insert(v) {
                    self.entered_at.insert(v, step);
                }
            }
        }
    }

    /// Closure of A_s ∪ {g} meets D nontrivially?
    fn closure_meets_divisible(
        &self,
        pres: &StagedPresentation,
        g: u64,
    ) -> Result<bool, ComplementError> {
        let mut e = 0u32;
        let mut x = g;
        while !self.current.contains(&x) {
            x = scale_by_p(pres, x);
            e += 1;
        }
        let pe = pres.prime().pow(e);
        let mut multiple = 0u64;
        for _ in 1..pe {
            multiple = pres.add(multiple, g);
            for &a in self.current.iter() {
                let v = pres.add(a, multiple);
                if v != 0
                    && pres
                        .divisible_membership(v)
                        .ok_or(ComplementError::OracleUnavailable)?
                {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// One chain step: admit the least viable materialized candidate.
    fn step(&mut self, pres: &StagedPresentation) -> Result<(), ComplementError> {
        let step = self.generators.len() + 1;
        let universe = pres.universe_size();
        let mut g = self.cursor;
        while g < universe {
            if self.current.contains(&g) || self.rejected.contains(&g) {
                g += 1;
                continue;
            }
            if self.closure_meets_divisible(pres, g)? {
                // permanent: closures only grow
                self.rejected.insert(g);
                g += 1;
                continue;
            }
            self.extend_by(pres, g, step);
            self.generators.push(Some(g));
            self.advance_cursor();
            return Ok(());
        }
        self.generators.push(None);
        self.advance_cursor();
        Ok(())
    }

    fn advance_cursor(&mut self) {
        while self.current.contains(&self.cursor) || self.rejected.contains(&self.cursor) {
            self.cursor += 1;
        }
    }
}

/// Run the chain for `steps` steps against the presentation's current
/// materialized universe. Requires a stage-decidable divisible part.
pub fn decompose_complement(
    pres: &StagedPresentation,
    steps: u64,
) -> Result<ComplementChain, ComplementError> {
    // fail early when no oracle is carried
    if pres.divisible_membership(0).is_none() {
        return Err(ComplementError::OracleUnavailable);
    }
    let mut chain = ComplementChain::new();
    for _ in 0..steps {
        chain.step(pres)?;
    }
    Ok(chain)
}
