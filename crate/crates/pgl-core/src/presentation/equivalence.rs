//! Staged equivalence structures with planned class growth.
//!
//! The universe is a prefix of ω growing one element per stage. A class plan
//! (finite targets, infinite targets, and limitwise rows driven by an
//! s-function) decides which class each new element joins. The relation is
//! stage-decidable by construction; what varies is how much the *interface*
//! reveals about infinite classes, per the requested mode.

use super::character::{Character, Count, Mult};
use crate::invariants::{StageVerdict, Verdict};
use crate::limitwise::SFunction;
use std::collections::VecDeque;

/// How membership in an infinite class is exposed.
///
/// `Computable`: queries about infinite-class membership answer yes/no at
/// once. `Sigma1`: a yes is eventually confirmed, a no is never issued.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfMode {
    Computable,
    Sigma1,
}

/// Number of infinite classes requested from a builder.
pub type InfClassCount = Count;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ClassTarget {
    Finite(u32),
    Infinite,
    /// Size follows s-function row `row`; settles at the row limit.
    Limitwise { row: u64 },
}

#[derive(Debug, Clone)]
pub(crate) struct ClassState {
    pub first: u64,
    pub size: u64,
    pub target: ClassTarget,
}

/// One step of planned growth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Demand {
    SpawnFinite { size: u32 },
    SpawnInfinite,
    SpawnLimitwise { row: u64 },
    Grow { class: usize },
}

/// A growth event visible to consumers (the group transform).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassEvent {
    Spawned { class: usize },
    Grew { class: usize },
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EquivalenceError {
    #[error("unbounded character with computable infinite-class membership and finitely many infinite classes requires an s1-function witness")]
    S1WitnessRequired,
}

#[derive(Debug, Clone)]
pub struct EquivalenceStructure {
    stage: u64,
    class_of: Vec<usize>,
    classes: Vec<ClassState>,
    demands: VecDeque<Demand>,
    sfun: Option<SFunction>,
    /// Limitwise rows spawned so far; rows activate as stages pass.
    limitwise_spawned: u64,
    /// Class index per limitwise row, filled once the spawn demand runs.
    limitwise_class: Vec<Option<usize>>,
    /// Rows with a growth demand already in the queue.
    limitwise_pending: Vec<bool>,
    inf_mode: InfMode,
    character: Character,
    infinite_classes: InfClassCount,
}

impl EquivalenceStructure {
    /// Build a staged structure realizing the character, with the requested
    /// number of infinite classes.
    pub fn build(
        character: Character,
        infinite_classes: InfClassCount,
        inf_mode: InfMode,
    ) -> Result<Self, EquivalenceError> {
        Self::build_scheduled(character, infinite_classes, inf_mode, 0)
    }

    /// Like [`build`], but with a seeded permutation of the initial growth
    /// plan, so the same character can be realized under visibly different
    /// construction schedules. Seed 0 keeps the plan order.
    ///
    /// [`build`]: EquivalenceStructure::build
    pub fn build_scheduled(
        character: Character,
        infinite_classes: InfClassCount,
        inf_mode: InfMode,
        seed: u64,
    ) -> Result<Self, EquivalenceError> {
        let sfun = character.tail().map(|t| {
            // Reconstruct the generating rows: explicit limits for the
            // explicit multiplicities, then the tail.
            let mut rows: Vec<Vec<u32>> = Vec::new();
            for (&n, &m) in character.explicit_mults() {
                let count = match m {
                    Mult::Finite(k) => k,
                    Mult::Infinite => 0, // handled by spawn demands, not rows
                };
                for _ in 0..count {
                    rows.push(vec![n]);
                }
            }
            SFunction::new(rows, Some(t)).expect("settled rows are monotone")
        });
        if !character.is_bounded()
            && inf_mode == InfMode::Computable
            && infinite_classes.is_finite()
        {
            let witness_ok = sfun.as_ref().map(|f| f.is_s1()).unwrap_or(false);
            if !witness_ok {
                return Err(EquivalenceError::S1WitnessRequired);
            }
        }

        let mut demands = VecDeque::new();
        // Finite and infinitely-repeated sizes, unless the s-function rows
        // already carry them.
        if sfun.is_none() {
            for (&n, &m) in character.explicit_mults() {
                match m {
                    Mult::Finite(k) => {
                        for _ in 0..k {
                            demands.push_back(Demand::SpawnFinite { size: n });
                        }
                    }
                    Mult::Infinite => demands.push_back(Demand::SpawnFinite { size: n }),
                }
            }
        } else {
            // Explicit infinite multiplicities still need spawn cycles.
            for (&n, &m) in character.explicit_mults() {
                if m == Mult::Infinite {
                    demands.push_back(Demand::SpawnFinite { size: n });
                }
            }
        }
        match infinite_classes {
            Count::Finite(r) => {
                for _ in 0..r {
                    demands.push_back(Demand::SpawnInfinite);
                }
            }
            Count::Omega => demands.push_back(Demand::SpawnInfinite),
        }
        if seed != 0 {
            let mut items: Vec<Demand> = demands.into_iter().collect();
            super::staged::shuffle_demands(&mut items, seed);
            demands = items.into_iter().collect();
        }

        Ok(EquivalenceStructure {
            stage: 0,
            class_of: Vec::new(),
            classes: Vec::new(),
            demands,
            sfun,
            limitwise_spawned: 0,
            limitwise_class: Vec::new(),
            limitwise_pending: Vec::new(),
            inf_mode,
            character,
            infinite_classes,
        })
    }

    /// A structure with explicitly listed finite class sizes plus some
    /// infinite classes; convenience for tests.
    pub fn from_sizes(
        sizes: &[u32],
        infinite_classes: u32,
        inf_mode: InfMode,
    ) -> Result<Self, EquivalenceError> {
        let pairs: Vec<(u32, u32)> = sizes.iter().map(|&n| (n, 1)).collect();
        let character = Character::from_finite_mults(&pairs).expect("valid sizes");
        EquivalenceStructure::build(character, Count::Finite(infinite_classes), inf_mode)
    }

    pub fn stage(&self) -> u64 {
        self.stage
    }

    /// Universe prefix size (elements 0..len).
    pub fn universe_len(&self) -> u64 {
        self.class_of.len() as u64
    }

    pub fn inf_mode(&self) -> InfMode {
        self.inf_mode
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    pub fn planned_infinite_classes(&self) -> InfClassCount {
        self.infinite_classes
    }

    /// Advance one stage. Returns the class event, if any growth was planned.
    pub fn advance(&mut self) -> Option<ClassEvent> {
        self.stage += 1;
        self.refresh_limitwise();
        let demand = self.demands.pop_front()?;
        let element = self.class_of.len() as u64;
        let event = match demand {
            Demand::SpawnFinite { size } => {
                let class = self.spawn(element, ClassTarget::Finite(size));
                // Infinitely repeated sizes respawn forever.
                if self.character.multiplicity(size) == Mult::Infinite {
                    self.demands.push_back(Demand::SpawnFinite { size });
                }
                if size > 1 {
                    self.demands.push_back(Demand::Grow { class });
                }
                ClassEvent::Spawned { class }
            }
            Demand::SpawnInfinite => {
                let class = self.spawn(element, ClassTarget::Infinite);
                if self.infinite_classes == Count::Omega {
                    self.demands.push_back(Demand::SpawnInfinite);
                }
                self.demands.push_back(Demand::Grow { class });
                ClassEvent::Spawned { class }
            }
            Demand::SpawnLimitwise { row } => {
                let class = self.spawn(element, ClassTarget::Limitwise { row });
                self.limitwise_class[row as usize] = Some(class);
                ClassEvent::Spawned { class }
            }
            Demand::Grow { class } => {
                self.classes[class].size += 1;
                self.class_of.push(class);
                match self.classes[class].target {
                    ClassTarget::Finite(n) => {
                        if self.classes[class].size < n as u64 {
                            self.demands.push_back(Demand::Grow { class });
                        }
                    }
                    ClassTarget::Infinite => self.demands.push_back(Demand::Grow { class }),
                    ClassTarget::Limitwise { row } => {
                        let f = self.sfun.as_ref().expect("limitwise class has sfunction");
                        if (f.value(row, self.stage) as u64) > self.classes[class].size {
                            self.demands.push_back(Demand::Grow { class });
                        } else {
                            self.limitwise_pending[row as usize] = false;
                        }
                    }
                }
                ClassEvent::Grew { class }
            }
        };
        Some(event)
    }

    fn spawn(&mut self, element: u64, target: ClassTarget) -> usize {
        let class = self.classes.len();
        self.classes.push(ClassState {
            first: element,
            size: 1,
            target,
        });
        self.class_of.push(class);
        class
    }

    /// Activate s-function rows and demand growth as row values increase.
    fn refresh_limitwise(&mut self) {
        let Some(f) = self.sfun.clone() else {
            return;
        };
        // Rows activate one per stage, in order, once their value is ≥ 1.
        if f.limit(self.limitwise_spawned).is_some() && self.limitwise_spawned < self.stage {
            let row = self.limitwise_spawned;
            if f.value(row, self.stage) >= 1 {
                self.demands.push_back(Demand::SpawnLimitwise { row });
                self.limitwise_spawned += 1;
                self.limitwise_class.push(None);
                self.limitwise_pending.push(false);
            }
        }
        // Existing rows: one in-flight growth demand per row with a deficit.
        for row in 0..self.limitwise_spawned as usize {
            if self.limitwise_pending[row] {
                continue;
            }
            let Some(class) = self.limitwise_class[row] else {
                continue;
            };
            let size = self.classes[class].size;
            if let Some(lim) = f.limit(row as u64) {
                if size >= lim as u64 {
                    continue; // settled, skip the f evaluation
                }
            }
            if (f.value(row as u64, self.stage) as u64) > size {
                self.demands.push_back(Demand::Grow { class });
                self.limitwise_pending[row] = true;
            }
        }
    }

    /// The stage-decidable relation: both elements materialized and in the
    /// same class.
    pub fn related(&self, a: u64, b: u64) -> bool {
        let n = self.class_of.len() as u64;
        a < n && b < n && self.class_of[a as usize] == self.class_of[b as usize]
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, a: u64) -> Option<usize> {
        self.class_of.get(a as usize).copied()
    }

    pub(crate) fn class_state(&self, class: usize) -> &ClassState {
        &self.classes[class]
    }

    /// Settled limit of an s-function row, when the plan carries one.
    pub(crate) fn sfunction_limit(&self, row: u64) -> Option<u32> {
        self.sfun.as_ref().and_then(|f| f.limit(row))
    }

    /// Whether the class is planned to be infinite (plan knowledge; the
    /// honest query surface is [`inf_status`]).
    ///
    /// [`inf_status`]: EquivalenceStructure::inf_status
    pub fn class_planned_infinite(&self, class: usize) -> bool {
        matches!(self.classes[class].target, ClassTarget::Infinite)
    }

    /// Membership of a's class in Inf(A), with the interface semantics of
    /// the requested mode: Computable answers at once; Sigma1 confirms a
    /// yes only after the class has visibly outgrown a threshold, and never
    /// answers no.
    pub fn inf_status(&self, a: u64) -> StageVerdict {
        let Some(class) = self.class_of(a) else {
            return StageVerdict {
                value: Verdict::Unknown,
                stage: self.stage,
            };
        };
        let planned = self.class_planned_infinite(class);
        let value = match self.inf_mode {
            InfMode::Computable => {
                if planned {
                    Verdict::Yes
                } else {
                    Verdict::No
                }
            }
            InfMode::Sigma1 => {
                if planned && self.classes[class].size >= 3 + class as u64 {
                    Verdict::Yes
                } else {
                    Verdict::Unknown
                }
            }
        };
        StageVerdict {
            value,
            stage: self.stage,
        }
    }

    /// Census of current class sizes: (size, count) pairs plus the number of
    /// classes planned infinite. Ground truth for tests.
    pub fn census(&self) -> (Vec<(u64, u64)>, u64) {
        let mut sizes: std::collections::BTreeMap<u64, u64> = std::collections::BTreeMap::new();
        let mut infinite = 0;
        for c in &self.classes {
            if self.class_planned_infinite_state(c) {
                infinite += 1;
            } else {
                *sizes.entry(c.size).or_insert(0) += 1;
            }
        }
        (sizes.into_iter().collect(), infinite)
    }

    fn class_planned_infinite_state(&self, c: &ClassState) -> bool {
        matches!(c.target, ClassTarget::Infinite)
    }

    /// Character of the settled part at the current stage: class sizes that
    /// can no longer change (finite targets met, limitwise rows settled).
    pub fn settled_character(&self) -> Character {
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        let f = self.sfun.as_ref();
        for c in &self.classes {
            let settled_size = match c.target {
                ClassTarget::Finite(n) => (c.size == n as u64).then_some(n),
                ClassTarget::Infinite => None,
                ClassTarget::Limitwise { row } => {
                    let lim = f.and_then(|f| f.limit(row)).unwrap_or(0);
                    (c.size == lim as u64).then_some(lim)
                }
            };
            if let Some(n) = settled_size {
                if n > 0 {
                    pairs.push((n, 1));
                }
            }
        }
        Character::from_finite_mults(&pairs).expect("sizes are positive")
    }
}
