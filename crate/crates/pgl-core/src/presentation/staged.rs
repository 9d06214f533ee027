//! Staged group presentations.
//!
//! A presentation is a direct sum of component groups, each a copy of
//! Z(p^d) for its current depth d, deepened one step per growth action.
//! A component of a class that keeps growing becomes quasicyclic in the
//! limit; coordinates live in Q/Z localized at p, written num/p^den.
//!
//! Element ids enumerate the union of the finite stage groups: ids of the
//! group after t actions are exactly 0..p^t, new elements appended in
//! canonical order of their decoded coordinates. Ids are never stored;
//! both directions of the id ↔ coordinate correspondence are computed
//! arithmetically from the growth history, so presentations support
//! thousands of stages while only the ids actually touched cost anything.
//!
//! Algorithms under test see presentations through [`OpaqueGroup`]:
//! prime, universe size, addition. The decoder behind [`Decoder`] is the
//! test-and-report surface and must not leak into the algorithms.

use super::equivalence::{ClassEvent, EquivalenceStructure, InfMode};
use super::iso_type::IsoTypeSpec;
use crate::finite::{Element, FiniteGroupSpec};
use crate::invariants::{StageVerdict, Verdict};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What algorithms may touch: the computable presentation itself.
pub trait OpaqueGroup {
    fn prime(&self) -> u64;
    /// Number of materialized element ids (saturating at u64::MAX).
    fn universe_size(&self) -> u64;
    /// Sum of two materialized elements. The materialized prefix is closed
    /// under addition, so this is total on ids below `universe_size`.
    fn add(&self, a: u64, b: u64) -> u64;
}

/// One coordinate of a decoded element: the value num/p^den (mod 1) in
/// component `comp`, with p ∤ num.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub comp: u32,
    pub den: u32,
    pub num: u64,
}

/// Eventual shape of a component under the plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompFate {
    /// Settles as Z(p^n).
    Settles(u32),
    /// Grows forever: quasicyclic in the limit.
    Divisible,
}

#[derive(Debug, Clone, Copy)]
struct GrowthAction {
    comp: u32,
    depth: u32,
}

#[derive(Debug, Clone)]
enum GrowthSource {
    Equivalence(EquivalenceStructure),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("stage {requested} not materialized (current stage {current})")]
    StageNotMaterialized { requested: u64, current: u64 },
    #[error("stage snapshot order {order} exceeds bound {bound}")]
    SnapshotTooLarge { order: u128, bound: u64 },
}

/// Deterministic construction schedule: the seed permutes the plan's
/// initial growth demands, giving differently scheduled presentations of
/// the same isomorphism type. Seed 0 keeps the plan order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthSchedule {
    pub seed: u64,
}

impl Default for GrowthSchedule {
    fn default() -> Self {
        GrowthSchedule { seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct StagedPresentation {
    p: u64,
    actions: Vec<GrowthAction>,
    /// Per component, the 1-based action indices of its deepenings;
    /// comp_events[c][d-1] is the action that took component c to depth d.
    comp_events: Vec<Vec<u32>>,
    comp_fate: Vec<CompFate>,
    /// Cumulative action count per materialized stage.
    stage_actions: Vec<u32>,
    source: GrowthSource,
}

impl StagedPresentation {
    /// The transform from a staged equivalence structure: one component per
    /// class, deepened once per class growth, so χ of the limit group equals
    /// χ(A) and quasicyclic components correspond to infinite classes.
    pub fn transform(p: u64, equiv: EquivalenceStructure) -> Self {
        let mut pres = StagedPresentation {
            p,
            actions: Vec::new(),
            comp_events: Vec::new(),
            comp_fate: Vec::new(),
            stage_actions: Vec::new(),
            source: GrowthSource::Equivalence(equiv),
        };
        // Stage 0 already carries the first component, a copy of Z(p),
        // when the plan has anything to build at all.
        pres.step();
        pres.stage_actions.push(pres.actions.len() as u32);
        pres
    }

    /// Direct builder: a presentation whose decoded limit has the given
    /// isomorphism type, under the given growth schedule.
    pub fn build_from_iso_type(t: &IsoTypeSpec, schedule: GrowthSchedule) -> Self {
        let equiv = EquivalenceStructure::build_scheduled(
            t.cyclic.clone(),
            t.divisible_rank,
            InfMode::Computable,
            schedule.seed,
        )
        .expect("computable mode with explicit descriptors");
        StagedPresentation::transform(t.p, equiv)
    }

    /// Advance by one stage: at most one growth action executes.
    pub fn advance(&mut self) {
        self.step();
        self.stage_actions.push(self.actions.len() as u32);
    }

    pub fn advance_by(&mut self, stages: u64) {
        for _ in 0..stages {
            self.advance();
        }
    }

    fn step(&mut self) {
        let event = match &mut self.source {
            GrowthSource::Equivalence(equiv) => equiv.advance(),
        };
        let Some(event) = event else {
            return;
        };
        let t = self.actions.len() as u32 + 1;
        match event {
            ClassEvent::Spawned { class } => {
                debug_assert_eq!(class, self.comp_events.len());
                self.actions.push(GrowthAction {
                    comp: class as u32,
                    depth: 1,
                });
                self.comp_events.push(vec![t]);
                let fate = match &self.source {
                    GrowthSource::Equivalence(e) => comp_fate_of(e, class),
                };
                self.comp_fate.push(fate);
            }
            ClassEvent::Grew { class } => {
                let depth = self.comp_events[class].len() as u32 + 1;
                self.actions.push(GrowthAction {
                    comp: class as u32,
                    depth,
                });
                self.comp_events[class].push(t);
            }
        }
    }

    /// Stages materialized so far (stage 0 exists from construction).
    pub fn stage(&self) -> u64 {
        self.stage_actions.len() as u64 - 1
    }

    fn action_count(&self) -> usize {
        self.actions.len()
    }

    fn pow_sat(&self, e: u32) -> u64 {
        let mut acc: u64 = 1;
        for _ in 0..e {
            acc = acc.saturating_mul(self.p);
        }
        acc
    }

    fn depth_at(&self, comp: usize, t: u32) -> u32 {
        self.comp_events[comp].partition_point(|&a| a <= t) as u32
    }

    fn comps_at(&self, t: u32) -> usize {
        self.comp_events.partition_point(|ev| ev[0] <= t)
    }

    /// Smallest t with id < p^t, for id ≥ 1.
    fn batch_of(&self, id: u64) -> u32 {
        let mut t = 1;
        let mut size = self.p;
        while id >= size {
            size = size.saturating_mul(self.p);
            t += 1;
        }
        t
    }

    /// Rank of a coordinate value in the canonical per-component order
    /// (zero first, then by denominator exponent, then by numerator).
    fn value_index(&self, den: u32, num: u64) -> u64 {
        if den == 0 {
            return 0;
        }
        self.pow_sat(den - 1) + (num - 1) - (num - 1) / self.p
    }

    fn value_unrank(&self, idx: u64) -> (u32, u64) {
        if idx == 0 {
            return (0, 0);
        }
        let mut den = 1;
        let mut base: u64 = 1; // p^{den-1}
        while base.saturating_mul(self.p) <= idx {
            base *= self.p;
            den += 1;
        }
        let j = idx - base;
        let num = (j / (self.p - 1)) * self.p + j % (self.p - 1) + 1;
        (den, num)
    }

    /// Rank among the fresh values of a deepening batch: numerators coprime
    /// to p at the new depth, in increasing order.
    fn fresh_rank(&self, num: u64) -> u64 {
        (num / self.p) * (self.p - 1) + num % self.p - 1
    }

    fn fresh_unrank(&self, j: u64) -> u64 {
        (j / (self.p - 1)) * self.p + j % (self.p - 1) + 1
    }

    pub(crate) fn decode(&self, id: u64) -> Vec<Coord> {
        assert!(
            id < self.universe_size(),
            "id {id} not materialized (universe {})",
            self.universe_size()
        );
        if id == 0 {
            return Vec::new();
        }
        let t = self.batch_of(id);
        let mut r = id - self.pow_sat(t - 1);
        let action = self.actions[(t - 1) as usize];
        let ncomps = self.comps_at(t);
        let mut digits = vec![0u64; ncomps];
        for i in (0..ncomps).rev() {
            let radix = if i as u32 == action.comp {
                (self.p - 1) * self.pow_sat(action.depth - 1)
            } else {
                self.pow_sat(self.depth_at(i, t))
            };
            digits[i] = r % radix;
            r /= radix;
        }
        debug_assert_eq!(r, 0);
        let mut coords = Vec::new();
        for (i, &digit) in digits.iter().enumerate() {
            let (den, num) = if i as u32 == action.comp {
                (action.depth, self.fresh_unrank(digit))
            } else {
                if digit == 0 {
                    continue;
                }
                self.value_unrank(digit)
            };
            if num != 0 {
                coords.push(Coord {
                    comp: i as u32,
                    den,
                    num,
                });
            }
        }
        coords
    }

    pub(crate) fn encode(&self, coords: &[Coord]) -> u64 {
        if coords.is_empty() {
            return 0;
        }
        // The batch is decided by the latest-materialized coordinate.
        let t = coords
            .iter()
            .map(|c| self.comp_events[c.comp as usize][(c.den - 1) as usize])
            .max()
            .unwrap();
        let action = self.actions[(t - 1) as usize];
        let ncomps = self.comps_at(t);
        let mut id: u64 = 0;
        let mut it = coords.iter().peekable();
        for i in 0..ncomps {
            let coord = match it.peek() {
                Some(c) if c.comp as usize == i => Some(*it.next().unwrap()),
                _ => None,
            };
            let (radix, digit) = if i as u32 == action.comp {
                let c = coord.expect("batch component carries a fresh coordinate");
                debug_assert_eq!(c.den, action.depth);
                (
                    (self.p - 1) * self.pow_sat(action.depth - 1),
                    self.fresh_rank(c.num),
                )
            } else {
                let digit = match coord {
                    Some(c) => self.value_index(c.den, c.num),
                    None => 0,
                };
                (self.pow_sat(self.depth_at(i, t)), digit)
            };
            id = id * radix + digit;
        }
        self.pow_sat(t - 1) + id
    }

    fn add_coords(&self, a: &[Coord], b: &[Coord]) -> Vec<Coord> {
        let mut out: Vec<Coord> = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let next = if j >= b.len() || (i < a.len() && a[i].comp < b[j].comp) {
                i += 1;
                a[i - 1]
            } else if i >= a.len() || b[j].comp < a[i].comp {
                j += 1;
                b[j - 1]
            } else {
                // same component: num_a/p^da + num_b/p^db mod 1
                let (ca, cb) = (a[i], b[j]);
                i += 1;
                j += 1;
                let den = ca.den.max(cb.den);
                let scale_a = self.pow_sat(den - ca.den) as u128;
                let scale_b = self.pow_sat(den - cb.den) as u128;
                let modulus = self.pow_sat(den) as u128;
                let mut num =
                    ((ca.num as u128 * scale_a + cb.num as u128 * scale_b) % modulus) as u64;
                let mut den = den;
                while num != 0 && num % self.p == 0 {
                    num /= self.p;
                    den -= 1;
                }
                if num == 0 {
                    continue;
                }
                Coord {
                    comp: ca.comp,
                    den,
                    num,
                }
            };
            out.push(next);
        }
        out
    }

    /// The decoder: ground truth for tests and reports. Algorithms under
    /// test must stick to the [`OpaqueGroup`] surface.
    pub fn decoder(&self) -> Decoder<'_> {
        Decoder { pres: self }
    }

    /// Stage-decidable membership in the divisible part, when the plan makes
    /// it decidable: an element is in D(G) iff every component in its
    /// support belongs to an infinite class. Returns `None` when the
    /// presentation was built in Σ₁ mode and carries no such decision
    /// procedure.
    pub fn divisible_membership(&self, id: u64) -> Option<bool> {
        match &self.source {
            GrowthSource::Equivalence(e) if e.inf_mode() == InfMode::Computable => {
                let coords = self.decode(id);
                Some(
                    coords
                        .iter()
                        .all(|c| self.comp_fate[c.comp as usize] == CompFate::Divisible),
                )
            }
            GrowthSource::Equivalence(_) => None,
        }
    }

    /// Σ₁-style divisible-part evidence: a permanent yes once every support
    /// class has been confirmed infinite; never a no.
    pub fn divisible_enumerated(&self, id: u64) -> StageVerdict {
        let stage = self.stage();
        let coords = self.decode(id);
        let value = match &self.source {
            GrowthSource::Equivalence(e) => {
                let all_confirmed = coords.iter().all(|c| {
                    let class = c.comp as usize;
                    let first = e.class_state(class).first;
                    e.inf_status(first).value == Verdict::Yes
                });
                if all_confirmed {
                    Verdict::Yes
                } else {
                    Verdict::Unknown
                }
            }
        };
        StageVerdict { value, stage }
    }
}

impl OpaqueGroup for StagedPresentation {
    fn prime(&self) -> u64 {
        self.p
    }

    fn universe_size(&self) -> u64 {
        self.pow_sat(self.action_count() as u32)
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let sum = self.add_coords(&self.decode(a), &self.decode(b));
        self.encode(&sum)
    }
}

impl<G: OpaqueGroup + ?Sized> OpaqueGroup for &G {
    fn prime(&self) -> u64 {
        (**self).prime()
    }
    fn universe_size(&self) -> u64 {
        (**self).universe_size()
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        (**self).add(a, b)
    }
}

fn comp_fate_of(e: &EquivalenceStructure, class: usize) -> CompFate {
    if e.class_planned_infinite(class) {
        CompFate::Divisible
    } else {
        CompFate::Settles(u32::MAX) // refined lazily by the decoder
    }
}

/// A finite stage snapshot: the direct-sum group after some prefix of the
/// growth actions, with the id embedding.
pub struct StageView {
    pub spec: FiniteGroupSpec,
    /// summand slot per component alive at the snapshot
    slot_of_comp: Vec<usize>,
    exponents: Vec<u32>,
    t: u32,
}

impl StageView {
    /// Ids materialized in this snapshot: 0..universe.
    pub fn universe(&self) -> u128 {
        self.spec.order()
    }

    pub fn action_index(&self) -> u32 {
        self.t
    }

    /// The embedding: snapshot id to coordinates of the snapshot group.
    pub fn element_of(&self, pres: &StagedPresentation, id: u64) -> Element {
        let coords = pres.decode(id);
        let mut residues = vec![0u64; self.exponents.len()];
        for c in coords {
            let slot = self.slot_of_comp[c.comp as usize];
            let e = self.exponents[slot];
            debug_assert!(c.den <= e);
            let modulus = (pres.p as u128).pow(e);
            let v = (c.num as u128 * (pres.p as u128).pow(e - c.den)) % modulus;
            residues[slot] = v as u64;
        }
        self.spec.element(residues).expect("decoded residues fit")
    }
}

/// Ground-truth access for tests and reports.
pub struct Decoder<'a> {
    pres: &'a StagedPresentation,
}

impl<'a> Decoder<'a> {
    pub fn coords(&self, id: u64) -> Vec<Coord> {
        self.pres.decode(id)
    }

    pub fn encode(&self, coords: &[Coord]) -> u64 {
        self.pres.encode(coords)
    }

    pub fn component_count(&self) -> usize {
        self.pres.comp_events.len()
    }

    pub fn component_depth(&self, comp: usize) -> u32 {
        self.pres.comp_events[comp].len() as u32
    }

    /// The component's planned eventual shape.
    pub fn component_fate(&self, comp: usize) -> CompFate {
        match self.pres.comp_fate[comp] {
            CompFate::Divisible => CompFate::Divisible,
            CompFate::Settles(_) => CompFate::Settles(self.settled_exponent(comp)),
        }
    }

    fn settled_exponent(&self, comp: usize) -> u32 {
        match &self.pres.source {
            GrowthSource::Equivalence(e) => {
                use super::equivalence::ClassTarget;
                match e.class_state(comp).target {
                    ClassTarget::Finite(n) => n,
                    ClassTarget::Infinite => u32::MAX,
                    ClassTarget::Limitwise { row } => e.sfunction_limit(row).unwrap_or(0),
                }
            }
        }
    }

    /// True order exponent of the decoded element: max denominator exponent.
    pub fn order_exponent(&self, id: u64) -> u32 {
        self.coords(id).iter().map(|c| c.den).max().unwrap_or(0)
    }

    /// Height in the limit group; `None` means infinite (divisible part).
    pub fn limit_height(&self, id: u64) -> Option<u32> {
        let coords = self.coords(id);
        if coords.is_empty() {
            return None;
        }
        let mut h = u32::MAX;
        for c in &coords {
            match self.component_fate(c.comp as usize) {
                CompFate::Divisible => continue,
                CompFate::Settles(n) => {
                    debug_assert!(n >= c.den);
                    h = h.min(n - c.den);
                }
            }
        }
        if h == u32::MAX {
            None
        } else {
            Some(h)
        }
    }

    /// Membership in the divisible part of the limit group (plan truth).
    pub fn in_divisible_part(&self, id: u64) -> bool {
        self.coords(id)
            .iter()
            .all(|c| matches!(self.pres.comp_fate[c.comp as usize], CompFate::Divisible))
    }

    /// The isomorphism type the plan is building.
    pub fn iso_type(&self) -> Option<IsoTypeSpec> {
        match &self.pres.source {
            GrowthSource::Equivalence(e) => Some(IsoTypeSpec {
                p: self.pres.p,
                divisible_rank: e.planned_infinite_classes(),
                cyclic: e.character().clone(),
            }),
        }
    }

    /// The underlying equivalence structure, when the presentation is a
    /// transform of one.
    pub fn equivalence(&self) -> Option<&EquivalenceStructure> {
        match &self.pres.source {
            GrowthSource::Equivalence(e) => Some(e),
        }
    }

    /// Snapshot after the actions materialized by stage s.
    pub fn stage_view(&self, s: u64) -> Result<StageView, PresentationError> {
        let current = self.pres.stage();
        if s > current {
            return Err(PresentationError::StageNotMaterialized {
                requested: s,
                current,
            });
        }
        let t = self.pres.stage_actions[s as usize];
        Ok(self.view_at_action(t))
    }

    /// Snapshot after the first t actions (t ≤ actions so far).
    pub fn view_at_action(&self, t: u32) -> StageView {
        let ncomps = self.pres.comps_at(t);
        let depths: Vec<u32> = (0..ncomps).map(|c| self.pres.depth_at(c, t)).collect();
        // canonical order: exponents descending, ties by component index
        let mut order: Vec<usize> = (0..ncomps).collect();
        order.sort_by(|&a, &b| depths[b].cmp(&depths[a]).then(a.cmp(&b)));
        let mut slot_of_comp = vec![0usize; ncomps];
        for (slot, &comp) in order.iter().enumerate() {
            slot_of_comp[comp] = slot;
        }
        let mut exponents = vec![0u32; ncomps];
        for (slot, &comp) in order.iter().enumerate() {
            exponents[slot] = depths[comp];
        }
        let spec = FiniteGroupSpec::new(self.pres.p, exponents.clone())
            .expect("snapshot exponents valid");
        StageView {
            spec,
            slot_of_comp,
            exponents,
            t,
        }
    }

    pub fn action_count(&self) -> u32 {
        self.pres.action_count() as u32
    }
}

/// Seeded permutation used by [`EquivalenceStructure::build_scheduled`].
pub(crate) fn shuffle_demands<T>(items: &mut Vec<T>, seed: u64) {
    if seed == 0 {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    items.shuffle(&mut rng);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::character::{Character, Count};

    fn transform_of_sizes(sizes: &[u32], infinite: u32, stages: u64) -> StagedPresentation {
        let equiv =
            EquivalenceStructure::from_sizes(sizes, infinite, InfMode::Computable).unwrap();
        let mut pres = StagedPresentation::transform(2, equiv);
        pres.advance_by(stages);
        pres
    }

    #[test]
    fn stage_zero_of_transform_is_z_p() {
        let pres = transform_of_sizes(&[2], 0, 0);
        let view = pres.decoder().stage_view(0).unwrap();
        assert_eq!(view.spec.exponents(), &[1]);
        assert_eq!(pres.universe_size(), 2);
    }

    #[test]
    fn size_two_class_gives_z4() {
        let pres = transform_of_sizes(&[2], 0, 20);
        assert_eq!(pres.universe_size(), 4);
        let d = pres.decoder();
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.component_depth(0), 2);
    }

    #[test]
    fn size_three_class_reaches_z8_by_stage_three() {
        let pres = transform_of_sizes(&[3], 0, 3);
        assert_eq!(pres.universe_size(), 8);
        // and it stays Z(8)
        let pres = transform_of_sizes(&[3], 0, 50);
        assert_eq!(pres.universe_size(), 8);
        assert_eq!(pres.decoder().component_depth(0), 3);
    }

    #[test]
    fn empty_relation_on_one_point_gives_z_p() {
        let pres = transform_of_sizes(&[1], 0, 10);
        assert_eq!(pres.universe_size(), 2);
    }

    #[test]
    fn ids_are_closed_under_add_and_match_decoded_sums() {
        let pres = transform_of_sizes(&[1, 2, 3], 1, 40);
        let n = pres.universe_size().min(512);
        for a in 0..n {
            for b in 0..n.min(64) {
                let s = pres.add(a, b);
                assert!(s < pres.universe_size());
                // decoded addition agrees
                let dec = pres.decoder();
                let sum = pres.add_coords(&dec.coords(a), &dec.coords(b));
                assert_eq!(dec.coords(s), sum);
            }
        }
    }

    #[test]
    fn codec_roundtrip() {
        let pres = transform_of_sizes(&[2, 2, 1], 2, 60);
        for id in 0..pres.universe_size().min(4096) {
            let coords = pres.decode(id);
            assert_eq!(pres.encode(&coords), id, "id {id} roundtrip");
        }
    }

    #[test]
    fn add_is_group_law_on_prefix() {
        let pres = transform_of_sizes(&[2, 1], 1, 30);
        let n = pres.universe_size().min(64);
        for a in 0..n {
            assert_eq!(pres.add(a, 0), a);
            for b in 0..n {
                assert_eq!(pres.add(a, b), pres.add(b, a));
                for c in (0..n).step_by(7) {
                    assert_eq!(
                        pres.add(pres.add(a, b), c),
                        pres.add(a, pres.add(b, c))
                    );
                }
            }
        }
    }

    #[test]
    fn stage_views_embed_monotonically() {
        let pres = transform_of_sizes(&[2, 3], 1, 12);
        let d = pres.decoder();
        for s in 0..pres.stage() {
            let v1 = d.stage_view(s).unwrap();
            let v2 = d.stage_view(s + 1).unwrap();
            assert!(v1.universe() <= v2.universe());
            // the embedding preserves sums on the smaller snapshot
            let n = (v1.universe() as u64).min(32);
            for a in 0..n {
                for b in 0..n {
                    let s_id = pres.add(a, b);
                    let ea = v2.element_of(&pres, a);
                    let eb = v2.element_of(&pres, b);
                    let es = v2.element_of(&pres, s_id);
                    let sum = crate::finite::add(&ea, &eb, &v2.spec).unwrap();
                    assert_eq!(sum, es);
                }
            }
        }
    }

    #[test]
    fn quasicyclic_component_keeps_deepening() {
        let pres = transform_of_sizes(&[], 1, 40);
        let d = pres.decoder();
        assert_eq!(d.component_count(), 1);
        assert!(d.component_depth(0) > 5);
        assert_eq!(d.component_fate(0), CompFate::Divisible);
    }

    #[test]
    fn divisible_membership_follows_the_plan() {
        let pres = transform_of_sizes(&[2], 1, 60);
        let d = pres.decoder();
        for id in 0..pres.universe_size().min(256) {
            let expected = d.in_divisible_part(id);
            assert_eq!(pres.divisible_membership(id), Some(expected));
        }
        // 0 is always divisible
        assert_eq!(pres.divisible_membership(0), Some(true));
    }

    #[test]
    fn sigma1_mode_presentations_have_no_divisibility_oracle() {
        let equiv = EquivalenceStructure::from_sizes(&[2], 1, InfMode::Sigma1).unwrap();
        let mut pres = StagedPresentation::transform(2, equiv);
        pres.advance_by(30);
        assert_eq!(pres.divisible_membership(1), None);
        // the Σ₁ surface still enumerates: never a No
        for id in 0..pres.universe_size().min(64) {
            assert_ne!(pres.divisible_enumerated(id).value, Verdict::No);
        }
    }

    #[test]
    fn build_from_iso_type_respects_prime_and_rank() {
        let t = IsoTypeSpec {
            p: 3,
            divisible_rank: Count::Finite(1),
            cyclic: Character::from_finite_mults(&[(2, 2)]).unwrap(),
        };
        let mut pres = StagedPresentation::build_from_iso_type(&t, GrowthSchedule::default());
        pres.advance_by(200);
        assert_eq!(pres.prime(), 3);
        let d = pres.decoder();
        let divisible: Vec<usize> = (0..d.component_count())
            .filter(|&c| matches!(d.component_fate(c), CompFate::Divisible))
            .collect();
        assert_eq!(divisible.len(), 1);
        let settled: Vec<u32> = (0..d.component_count())
            .filter_map(|c| match d.component_fate(c) {
                CompFate::Settles(n) => Some(n),
                CompFate::Divisible => None,
            })
            .collect();
        assert_eq!(settled, vec![2, 2]);
    }

    #[test]
    fn different_schedules_same_type() {
        let t = IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Finite(1),
            cyclic: Character::from_finite_mults(&[(1, 1), (2, 1)]).unwrap(),
        };
        let mut a = StagedPresentation::build_from_iso_type(&t, GrowthSchedule { seed: 0 });
        let mut b = StagedPresentation::build_from_iso_type(&t, GrowthSchedule { seed: 7 });
        a.advance_by(100);
        b.advance_by(100);
        let (da, db) = (a.decoder(), b.decoder());
        assert_eq!(da.iso_type(), db.iso_type());
        // determinism: same seed, same growth
        let mut b2 = StagedPresentation::build_from_iso_type(&t, GrowthSchedule { seed: 7 });
        b2.advance_by(100);
        for id in 0..b.universe_size().min(128) {
            assert_eq!(b.decoder().coords(id), b2.decoder().coords(id));
        }
    }
}
