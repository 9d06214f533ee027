//! A partial-isomorphism engine generic over how group elements are
//! represented: opaque presentation ids on one side, explicit coordinate
//! elements on the other, or any mix. Used to canonicalize tuples inside
//! finite subgroups and to search diagram embeddings.

use crate::finite::{self, Element, FiniteGroupSpec};
use crate::presentation::OpaqueGroup;
use std::collections::HashMap;
use std::hash::Hash;

/// The group operations the engine needs.
pub(crate) trait GroupView {
    type El: Clone + Eq + Hash + Ord;
    fn zero(&self) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn scale_p(&self, a: &Self::El) -> Self::El;
}

/// View of a finite group given by its spec.
pub(crate) struct SpecView<'a>(pub &'a FiniteGroupSpec);

impl GroupView for SpecView<'_> {
    type El = Element;
    fn zero(&self) -> Element {
        self.0.zero()
    }
    fn add(&self, a: &Element, b: &Element) -> Element {
        finite::add(a, b, self.0).expect("same spec")
    }
    fn scale_p(&self, a: &Element) -> Element {
        finite::scale(self.0.prime(), a, self.0)
    }
}

/// View of (a finite subset of) an opaque presentation.
pub(crate) struct PresView<'a, G: OpaqueGroup>(pub &'a G);

impl<G: OpaqueGroup> GroupView for PresView<'_, G> {
    type El = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.0.add(*a, *b)
    }
    fn scale_p(&self, a: &u64) -> u64 {
        let mut acc = 0;
        for _ in 0..self.0.prime() {
            acc = self.0.add(acc, *a);
        }
        acc
    }
}

/// A partial isomorphism between subgroups of two groups, kept closed under
/// addition. Extension checks the p-power order over the current domain, so
/// well-definedness and injectivity are O(order) per step.
pub(crate) struct PairIso<A: GroupView, B: GroupView> {
    pub fwd: HashMap<A::El, B::El>,
    pub bwd: HashMap<B::El, A::El>,
}

impl<A: GroupView, B: GroupView> Clone for PairIso<A, B> {
    fn clone(&self) -> Self {
        PairIso {
            fwd: self.fwd.clone(),
            bwd: self.bwd.clone(),
        }
    }
}

impl<A: GroupView, B: GroupView> PairIso<A, B> {
    pub fn new(da: &A, db: &B) -> Self {
        let mut fwd = HashMap::new();
        let mut bwd = HashMap::new();
        fwd.insert(da.zero(), db.zero());
        bwd.insert(db.zero(), da.zero());
        PairIso { fwd, bwd }
    }

    pub fn extend(&self, g: &A::El, c: &B::El, da: &A, db: &B, p: u64) -> Option<Self> {
        if let Some(existing) = self.fwd.get(g) {
            return (existing == c).then(|| self.clone());
        }
        if self.bwd.contains_key(c) {
            return None;
        }
        // least e with p^e·g in the domain
        let mut e = 0u32;
        let mut x = g.clone();
        while !self.fwd.contains_key(&x) {
            x = da.scale_p(&x);
            e += 1;
        }
        // well-defined: p^e·c = image of p^e·g
        let mut ce = c.clone();
        for _ in 0..e {
            ce = db.scale_p(&ce);
        }
        if self.fwd[&x] != ce {
            return None;
        }
        // injective: order of c over the image is also p^e
        let mut e2 = 0u32;
        let mut y = c.clone();
        while !self.bwd.contains_key(&y) {
            y = db.scale_p(&y);
            e2 += 1;
        }
        if e2 != e {
            return None;
        }
        let mut next = self.clone();
        let entries: Vec<(A::El, B::El)> = next
            .fwd
            .iter()
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect();
        let pe = p.pow(e);
        let mut jg = da.zero();
        let mut jc = db.zero();
        for _ in 1..pe {
            jg = da.add(&jg, g);
            jc = db.add(&jc, c);
            for (a, b) in &entries {
                let key = da.add(a, &jg);
                let val = db.add(b, &jc);
                next.fwd.insert(key.clone(), val.clone());
                next.bwd.insert(val, key);
            }
        }
        Some(next)
    }

    /// Backtracking completion to a full isomorphism between the listed
    /// element sets (both sorted canonically). Candidates are tried in
    /// order, so the completed map is deterministic.
    pub fn complete(
        &self,
        domain: &[A::El],
        codomain: &[B::El],
        da: &A,
        db: &B,
        p: u64,
    ) -> Option<Self> {
        if self.fwd.len() == domain.len() {
            return Some(self.clone());
        }
        let g = domain.iter().find(|g| !self.fwd.contains_key(*g))?;
        for c in codomain {
            if let Some(ext) = self.extend(g, c, da, db, p) {
                if let Some(done) = ext.complete(domain, codomain, da, db, p) {
                    return Some(done);
                }
            }
        }
        None
    }
}

/// Exponent multiset of a finite abelian p-group given as a closed element
/// list with a view, via socle-quotient dimension counting.
pub(crate) fn exponents_of_closed_set<V: GroupView>(
    view: &V,
    elements: &[V::El],
    p: u64,
) -> Vec<u32> {
    use std::collections::HashSet;
    let socle: Vec<&V::El> = elements
        .iter()
        .filter(|x| view.scale_p(x) == view.zero())
        .collect();
    let mut counts: Vec<u32> = Vec::new();
    let mut current: Vec<V::El> = elements.to_vec();
    let mut n = 0u32;
    loop {
        let set: HashSet<&V::El> = current.iter().collect();
        let pn_socle = socle.iter().filter(|x| set.contains(**x)).count();
        if pn_socle == 1 {
            break;
        }
        // dimension of P_n = log_p |socle ∩ p^n G|
        let mut dim = 0u32;
        let mut r = pn_socle as u64;
        while r > 1 {
            r /= p;
            dim += 1;
        }
        counts.push(dim);
        current = current.iter().map(|x| view.scale_p(x)).collect();
        current.sort();
        current.dedup();
        n += 1;
        debug_assert!(n < 64);
    }
    // counts[n] = dim(socle ∩ p^n G); u_n = counts[n] - counts[n+1];
    // exponent multiset: u_n summands of exponent n+1
    let mut exps = Vec::new();
    for i in 0..counts.len() {
        let next = counts.get(i + 1).copied().unwrap_or(0);
        for _ in 0..counts[i].saturating_sub(next) {
            exps.push(i as u32 + 1);
        }
    }
    exps.sort_unstable_by(|a, b| b.cmp(a));
    exps
}

/// The canonical form of a tuple inside a finite group F: the exponent
/// multiset of F together with the lexicographically least coordinate
/// matrix of an image of the tuple under some isomorphism F → canonical
/// spec. Two tuples get equal forms iff some isomorphism of their ambient
/// groups carries one tuple to the other.
pub(crate) fn canonical_tuple_form<V: GroupView>(
    view: &V,
    f_elements: &[V::El],
    tuple: &[V::El],
    p: u64,
) -> (Vec<u32>, Vec<Vec<u64>>) {
    let exps = exponents_of_closed_set(view, f_elements, p);
    let spec = FiniteGroupSpec::new(p, exps.clone()).expect("valid exponents");
    let cod_elements = spec.elements();
    let cod_view = SpecView(&spec);
    let base = PairIso::new(view, &cod_view);
    let image = search_min_image(
        view,
        &cod_view,
        &base,
        f_elements,
        &cod_elements,
        tuple,
        0,
        p,
    )
    .expect("isomorphic by construction");
    (exps, image.iter().map(|e| e.coords().to_vec()).collect())
}

#[allow(clippy::too_many_arguments)]
fn search_min_image<'s, V: GroupView>(
    da: &V,
    db: &SpecView<'s>,
    iso: &PairIso<V, SpecView<'s>>,
    domain: &[V::El],
    codomain: &[Element],
    tuple: &[V::El],
    pos: usize,
    p: u64,
) -> Option<Vec<Element>> {
    if pos == tuple.len() {
        // the tuple assignment must extend to a full isomorphism
        return iso
            .complete(domain, codomain, da, db, p)
            .map(|_| Vec::new());
    }
    for c in codomain {
        if let Some(ext) = iso.extend(&tuple[pos], c, da, db, p) {
            if let Some(mut rest) =
                search_min_image(da, db, &ext, domain, codomain, tuple, pos + 1, p)
            {
                let mut out = vec![c.clone()];
                out.append(&mut rest);
                return Some(out);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u64, exps: &[u32]) -> FiniteGroupSpec {
        FiniteGroupSpec::new(p, exps.to_vec()).unwrap()
    }

    #[test]
    fn exponents_recovered_from_element_list() {
        let spec = z(2, &[3, 1]);
        let view = SpecView(&spec);
        let all = spec.elements();
        assert_eq!(exponents_of_closed_set(&view, &all, 2), vec![3, 1]);
    }

    #[test]
    fn canonical_form_is_isomorphism_invariant() {
        let spec = z(2, &[2, 1]);
        let view = SpecView(&spec);
        let all = spec.elements();
        // two automorphic elements of order 2, height 0: (0,1) and (2,1)
        let a = spec.element(vec![0, 1]).unwrap();
        let b = spec.element(vec![2, 1]).unwrap();
        let fa = canonical_tuple_form(&view, &all, &[a], 2);
        let fb = canonical_tuple_form(&view, &all, &[b], 2);
        assert_eq!(fa, fb);
        // (2,0) has height 1: different canonical form
        let c = spec.element(vec![2, 0]).unwrap();
        let fc = canonical_tuple_form(&view, &all, &[c], 2);
        assert_ne!(fa, fc);
    }

    #[test]
    fn canonical_form_separates_relation_patterns() {
        let spec = z(2, &[1, 1]);
        let view = SpecView(&spec);
        let all = spec.elements();
        let e1 = spec.element(vec![1, 0]).unwrap();
        let e2 = spec.element(vec![0, 1]).unwrap();
        let dependent = canonical_tuple_form(&view, &all, &[e1.clone(), e1.clone()], 2);
        let independent = canonical_tuple_form(&view, &all, &[e1, e2], 2);
        assert_ne!(dependent, independent);
    }
}
