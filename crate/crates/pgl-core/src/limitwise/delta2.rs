//! Limit-computable isomorphism assembly.
//!
//! Given two presentations of the same type with stage-decidable divisible
//! parts, a stagewise map is grown by back-and-forth extension over finite
//! subgroups, alternating sides, trying candidate images in id order, and
//! retracting the most recent tentative assignment on a dead end. Each
//! retraction is one mind change on the affected argument; on settled
//! prefixes the map stabilizes to an isomorphism.

use crate::invariants::{order_of, scale_by_p};
use crate::presentation::{OpaqueGroup, StagedPresentation};
use std::collections::HashMap;
use std::fmt::Write as _;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum Delta2Error {
    #[error("divisible part is not stage-decidable on presentation {0}")]
    OracleUnavailable(u8),
    #[error("inconclusive at budget {budget}: {obstruction}")]
    Inconclusive { budget: u64, obstruction: String },
}

#[derive(Debug, Clone, Copy)]
pub struct Delta2Options {
    /// Ids the map should cover and stabilize on.
    pub target_prefix: u64,
    /// Work stages; also caps the candidate window.
    pub budget: u64,
}

impl Default for Delta2Options {
    fn default() -> Self {
        Delta2Options {
            target_prefix: 50,
            budget: 2000,
        }
    }
}

/// A stage-indexed approximation to an isomorphism, with per-argument
/// revision counts and a replayable log.
#[derive(Debug, Clone)]
pub struct LimitMap {
    /// Snapshot per work stage: images of the contiguous decided prefix.
    snapshots: Vec<Vec<u64>>,
    mind_changes: HashMap<u64, u32>,
    log: Vec<String>,
    final_map: HashMap<u64, u64>,
}

impl LimitMap {
    pub fn snapshots(&self) -> &[Vec<u64>] {
        &self.snapshots
    }

    /// The final stagewise map on ids 0..prefix, if fully decided.
    pub fn prefix_map(&self, prefix: u64) -> Option<Vec<u64>> {
        (0..prefix)
            .map(|id| self.final_map.get(&id).copied())
            .collect()
    }

    pub fn image_of(&self, id: u64) -> Option<u64> {
        self.final_map.get(&id).copied()
    }

    pub fn mind_changes_of(&self, id: u64) -> u32 {
        self.mind_changes.get(&id).copied().unwrap_or(0)
    }

    /// Longest prefix on which the last `window` snapshots agree.
    pub fn stabilized_prefix(&self, window: usize) -> u64 {
        if self.snapshots.len() < window || window == 0 {
            return 0;
        }
        let tail = &self.snapshots[self.snapshots.len() - window..];
        let min_len = tail.iter().map(|s| s.len()).min().unwrap_or(0);
        let mut l = 0;
        'outer: while l < min_len {
            let v = tail[0][l];
            for s in tail.iter().skip(1) {
                if s[l] != v {
                    break 'outer;
                }
            }
            l += 1;
        }
        l as u64
    }

    /// Deterministic dump: per stage, `h <id> -> <id>` lines with `retract`
    /// markers on revisions.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for line in &self.log {
            let _ = writeln!(out, "{line}");
        }
        out
    }
}

/// Exact per-argument revision counts over a prefix; counts are frozen with
/// the map, so the census is idempotent.
pub fn mind_change_census(map: &LimitMap, prefix: u64) -> Vec<(u64, u32)> {
    (0..prefix).map(|id| (id, map.mind_changes_of(id))).collect()
}

/// Partial isomorphism on element ids, grown one generator at a time and
/// closed under addition. Cloned before each tentative extension so dead
/// ends can retract.
#[derive(Debug, Clone, Default)]
struct IdIso {
    fwd: HashMap<u64, u64>,
    bwd: HashMap<u64, u64>,
}

impl IdIso {
    fn new() -> Self {
        let mut iso = IdIso::default();
        iso.fwd.insert(0, 0);
        iso.bwd.insert(0, 0);
        iso
    }

    /// Order of g over the current domain: least e with p^e·g mapped.
    fn order_over_domain(&self, g1: &StagedPresentation, g: u64) -> (u32, u64) {
        let mut e = 0;
        let mut x = g;
        while !self.fwd.contains_key(&x) {
            x = scale_by_p(g1, x);
            e += 1;
        }
        (e, x)
    }

    fn order_over_image(&self, g2: &StagedPresentation, c: u64) -> (u32, u64) {
        let mut e = 0;
        let mut x = c;
        while !self.bwd.contains_key(&x) {
            x = scale_by_p(g2, x);
            e += 1;
        }
        (e, x)
    }

    /// Try extending by g ↦ c; returns the closed extension when it stays a
    /// well-defined injective homomorphism.
    fn extend(
        &self,
        g1: &StagedPresentation,
        g2: &StagedPresentation,
        g: u64,
        c: u64,
    ) -> Option<IdIso> {
        if let Some(&img) = self.fwd.get(&g) {
            return (img == c).then(|| self.clone());
        }
        if self.bwd.contains_key(&c) {
            return None;
        }
        let p = g1.prime();
        let (e, anchor) = self.order_over_domain(g1, g);
        debug_assert!(e > 0);
        // well-defined: p^e·c must map back onto the image of p^e·g
        let mut ce = c;
        for _ in 0..e {
            ce = scale_by_p(g2, ce);
        }
        if self.fwd[&anchor] != ce {
            return None;
        }
        // injective: c must have order exactly p^e over the image subgroup
        let (e2, _) = self.order_over_image(g2, c);
        if e2 != e {
            return None;
        }
        let mut next = self.clone();
        let entries: Vec<(u64, u64)> = next.fwd.iter().map(|(&a, &b)| (a, b)).collect();
        let pe = p.pow(e);
        let mut jg = 0u64;
        let mut jc = 0u64;
        for _ in 1..pe {
            jg = g1.add(jg, g);
            jc = g2.add(jc, c);
            for &(a, b) in &entries {
                let key = g1.add(a, jg);
                let val = g2.add(b, jc);
                next.fwd.insert(key, val);
                next.bwd.insert(val, key);
            }
        }
        Some(next)
    }
}

/// Compatibility screen: order equal, divisible-part membership equal.
fn compatible(
    g1: &StagedPresentation,
    g2: &StagedPresentation,
    g: u64,
    c: u64,
) -> bool {
    if order_of(g1, g) != order_of(g2, c) {
        return false;
    }
    match (g1.divisible_membership(g), g2.divisible_membership(c)) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    }
}

/// One extension goal: map the least missing id on one side. Goals arrive
/// in stage order and form the frames of a backtracking search; `cursor`
/// records the candidate chosen so a retraction resumes past it.
struct Goal {
    /// true: arg lives in G1 and we pick its image; false: arg lives in G2
    /// and we pick its preimage.
    forth: bool,
    arg: u64,
    cursor: u64,
    /// Iso state before this goal's assignment.
    saved: IdIso,
}

/// Build a limit map between two isomorphic presentations with computable
/// divisible parts. Non-isomorphic or underfed inputs surface as
/// `Inconclusive` with the obstruction named; divisible parts exposed only
/// in Σ₁ mode are declined.
pub fn delta2_isomorphism(
    g1: &StagedPresentation,
    g2: &StagedPresentation,
    opts: Delta2Options,
) -> Result<LimitMap, Delta2Error> {
    if g1.divisible_membership(0).is_none() {
        return Err(Delta2Error::OracleUnavailable(1));
    }
    if g2.divisible_membership(0).is_none() {
        return Err(Delta2Error::OracleUnavailable(2));
    }
    let mut iso = IdIso::new();
    let mut goals: Vec<Goal> = Vec::new();
    let mut mind_changes: HashMap<u64, u32> = HashMap::new();
    let mut log: Vec<String> = Vec::new();
    let mut snapshots: Vec<Vec<u64>> = Vec::new();

    let window1 = opts.budget.min(g1.universe_size());
    let window2 = opts.budget.min(g2.universe_size());
    // goals cover the target prefixes; candidate images may come from the
    // whole budget window
    let goal_window1 = opts.target_prefix.min(g1.universe_size());
    let goal_window2 = opts.target_prefix.min(g2.universe_size());

    for stage in 0..opts.budget {
        log.push(format!("stage {stage}"));
        // alternate sides; fall back to the other side when done
        let prefer_forth = stage % 2 == 0;
        let next = next_goal(&iso, prefer_forth, goal_window1, goal_window2)
            .or_else(|| next_goal(&iso, !prefer_forth, goal_window1, goal_window2));
        if let Some((forth, arg)) = next {
            goals.push(Goal {
                forth,
                arg,
                cursor: 0,
                saved: iso.clone(),
            });
            // satisfy every goal from the newest one; retraction walks back
            let mut k = goals.len() - 1;
            loop {
                let found = {
                    let goal = &goals[k];
                    try_assign(
                        g1,
                        g2,
                        &goal.saved,
                        goal.forth,
                        goal.arg,
                        goal.cursor,
                        window1,
                        window2,
                    )
                };
                match found {
                    Some((image, ext, used_cursor)) => {
                        let goal = &mut goals[k];
                        goal.cursor = used_cursor;
                        let (a, b) = if goal.forth {
                            (goal.arg, image)
                        } else {
                            (image, goal.arg)
                        };
                        log.push(format!("h {a} -> {b}"));
                        iso = ext;
                        if k + 1 == goals.len() {
                            break;
                        }
                        k += 1;
                        goals[k].saved = iso.clone();
                        goals[k].cursor = 0;
                    }
                    None => {
                        if k == 0 {
                            let goal = &goals[k];
                            let order = if goal.forth {
                                order_of(g1, goal.arg)
                            } else {
                                order_of(g2, goal.arg)
                            };
                            return Err(Delta2Error::Inconclusive {
                                budget: opts.budget,
                                obstruction: format!(
                                    "no image for id {} (order exponent {order}) within the candidate window",
                                    goal.arg
                                ),
                            });
                        }
                        // retract the most recent assignment below this goal
                        k -= 1;
                        let goal = &mut goals[k];
                        let retracted = if goal.forth {
                            goal.arg
                        } else {
                            // preimage chosen for a back goal: revision counts
                            // against the G1-side argument
                            goal.cursor
                        };
                        *mind_changes.entry(retracted).or_insert(0) += 1;
                        log.push(format!("retract {retracted}"));
                        goal.cursor += 1;
                    }
                }
            }
        }
        snapshots.push(snapshot(&iso, opts.target_prefix));
    }

    let final_map = iso.fwd.clone();
    Ok(LimitMap {
        snapshots,
        mind_changes,
        log,
        final_map,
    })
}

fn next_goal(iso: &IdIso, forth: bool, window1: u64, window2: u64) -> Option<(bool, u64)> {
    if forth {
        (0..window1)
            .find(|id| !iso.fwd.contains_key(id))
            .map(|id| (true, id))
    } else {
        (0..window2)
            .find(|id| !iso.bwd.contains_key(id))
            .map(|id| (false, id))
    }
}

/// Search a candidate image for `arg` starting at `cursor`; returns the
/// candidate, the extended iso, and the cursor position used.
#[allow(clippy::too_many_arguments)]
fn try_assign(
    g1: &StagedPresentation,
    g2: &StagedPresentation,
    iso: &IdIso,
    forth: bool,
    arg: u64,
    cursor: u64,
    window1: u64,
    window2: u64,
) -> Option<(u64, IdIso, u64)> {
    let window = if forth { window2 } else { window1 };
    for c in cursor..window {
        let (g, img) = if forth { (arg, c) } else { (c, arg) };
        let pair_ok = if forth {
            compatible(g1, g2, arg, c)
        } else {
            compatible(g1, g2, c, arg)
        };
        if !pair_ok {
            continue;
        }
        if let Some(ext) = iso.extend(g1, g2, g, img) {
            return Some((c, ext, c));
        }
    }
    None
}

fn snapshot(iso: &IdIso, prefix: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for id in 0..prefix {
        match iso.fwd.get(&id) {
            Some(&img) => out.push(img),
            None => break,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{
        Character, Count, GrowthSchedule, IsoTypeSpec,
    };

    fn built(t: &IsoTypeSpec, seed: u64, stages: u64) -> StagedPresentation {
        let mut p = StagedPresentation::build_from_iso_type(t, GrowthSchedule { seed });
        p.advance_by(stages);
        p
    }

    #[test]
    fn identity_on_same_presentation() {
        let t = IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Finite(1),
            cyclic: Character::from_finite_mults(&[(1, 1), (2, 1)]).unwrap(),
        };
        let g = built(&t, 0, 120);
        let map = delta2_isomorphism(
            &g,
            &g,
            Delta2Options {
                target_prefix: 16,
                budget: 120,
            },
        )
        .unwrap();
        let prefix = map.prefix_map(16).expect("prefix decided");
        for (id, img) in prefix.iter().enumerate() {
            assert_eq!(*img, id as u64, "identity stabilizes");
        }
        assert!(mind_change_census(&map, 16).iter().all(|&(_, c)| c == 0));
    }

    #[test]
    fn census_is_idempotent() {
        let t = IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Finite(0),
            cyclic: Character::from_finite_mults(&[(2, 2)]).unwrap(),
        };
        let g = built(&t, 0, 60);
        let map = delta2_isomorphism(
            &g,
            &g,
            Delta2Options {
                target_prefix: 8,
                budget: 60,
            },
        )
        .unwrap();
        assert_eq!(mind_change_census(&map, 8), mind_change_census(&map, 8));
    }

    #[test]
    fn different_schedules_stabilize_to_additive_injection() {
        let t = IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Finite(1),
            cyclic: Character::from_finite_mults(&[(1, 2), (2, 1)]).unwrap(),
        };
        let a = built(&t, 0, 400);
        let b = built(&t, 5, 400);
        let map = delta2_isomorphism(
            &a,
            &b,
            Delta2Options {
                target_prefix: 24,
                budget: 600,
            },
        )
        .unwrap();
        let prefix = map.prefix_map(24).expect("prefix decided");
        // injective
        let mut seen = std::collections::HashSet::new();
        for &img in &prefix {
            assert!(seen.insert(img));
        }
        // additive on the prefix
        for x in 0..24u64 {
            for y in 0..24u64 {
                let s = a.add(x, y);
                if s < 24 {
                    assert_eq!(
                        b.add(prefix[x as usize], prefix[y as usize]),
                        prefix[s as usize]
                    );
                }
            }
        }
        // decoded check: same coordinates up to component relabeling is not
        // guaranteed, but orders and divisibility must transfer
        for x in 0..24u64 {
            assert_eq!(order_of(&a, x), order_of(&b, prefix[x as usize]));
            assert_eq!(
                a.divisible_membership(x),
                b.divisible_membership(prefix[x as usize])
            );
        }
    }

    #[test]
    fn non_isomorphic_pairs_report_the_obstruction() {
        // Z(4) vs Z(2)^2
        let t1 = IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Finite(0),
            cyclic: Character::from_finite_mults(&[(2, 1)]).unwrap(),
        };
        let t2 = IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Finite(0),
            cyclic: Character::from_finite_mults(&[(1, 2)]).unwrap(),
        };
        let a = built(&t1, 0, 60);
        let b = built(&t2, 0, 60);
        let err = delta2_isomorphism(
            &a,
            &b,
            Delta2Options {
                target_prefix: 4,
                budget: 200,
            },
        )
        .unwrap_err();
        match err {
            Delta2Error::Inconclusive { obstruction, .. } => {
                assert!(obstruction.contains("order"), "{obstruction}");
            }
            other => panic!("unexpected: {other}"),
        }
    }

    #[test]
    fn sigma1_oracle_is_declined() {
        use crate::presentation::{EquivalenceStructure, InfMode};
        let e1 = EquivalenceStructure::from_sizes(&[1], 1, InfMode::Sigma1).unwrap();
        let mut a = StagedPresentation::transform(2, e1);
        a.advance_by(40);
        let err = delta2_isomorphism(&a, &a, Delta2Options::default()).unwrap_err();
        assert_eq!(err, Delta2Error::OracleUnavailable(1));
    }

    #[test]
    fn dump_is_deterministic_and_carries_retract_markers() {
        let t = IsoTypeSpec {
            p: 2,
            divisible_rank: Count::Finite(1),
            cyclic: Character::from_finite_mults(&[(1, 1)]).unwrap(),
        };
        let a = built(&t, 0, 200);
        let b = built(&t, 3, 200);
        let opts = Delta2Options {
            target_prefix: 12,
            budget: 300,
        };
        let m1 = delta2_isomorphism(&a, &b, opts).unwrap();
        let m2 = delta2_isomorphism(&a, &b, opts).unwrap();
        assert_eq!(m1.dump(), m2.dump());
        for line in m1.dump().lines() {
            assert!(
                line.starts_with("stage ")
                    || line.starts_with("h ")
                    || line.starts_with("retract "),
                "{line}"
            );
        }
    }
}
