//! Exact arithmetic and brute-force search over finite Abelian p-groups
//! given as direct sums of cyclic groups.
//!
//! Everything here is ground truth for the rest of the crate: the searches
//! are exhaustive and never consult the invariants they are used to check.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

/// Default cap on group order for the brute-force searches.
/// Override per call site via [`SearchBounds`] or the `PGL_MAX_ORDER`
/// environment variable in the CLI.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_order: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_order: DEFAULT_MAX_ORDER,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FiniteGroupError {
    #[error("coordinate length mismatch: element has {got} coordinates, group has {expected} summands")]
    CoordLengthMismatch { expected: usize, got: usize },
    #[error("coordinate {index} out of range: {value} >= {modulus}")]
    CoordOutOfRange {
        index: usize,
        value: u64,
        modulus: u64,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("summand exponent must be >= 1")]
    ZeroExponent,
    #[error("group order {order} exceeds search bound {bound}")]
    BoundExceeded { order: u64, bound: u64 },
    #[error("set of elements is not closed under the group operation")]
    NotASubgroup,
    #[error("pairing is not a well-defined injective partial homomorphism")]
    InconsistentPairing,
    #[error("no automorphism extends the pairing")]
    NoAutomorphism,
    #[error("no complement found (precondition violation or internal error)")]
    NoComplement,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A finite Abelian p-group presented as ⊕_i Z(p^{n_i}).
///
/// Exponents are kept sorted in decreasing order so that equal groups have
/// equal specs and element encodings are canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroupSpec {
    p: u64,
    exponents: Vec<u32>,
}

impl fmt::Display for FiniteGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|e| format!("Z({}^{})", self.p, e))
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl FiniteGroupSpec {
    pub fn new(p: u64, mut exponents: Vec<u32>) -> Result<Self, FiniteGroupError> {
        if !is_prime(p) {
            return Err(FiniteGroupError::NotPrime(p));
        }
        if exponents.iter().any(|&e| e == 0) {
            return Err(FiniteGroupError::ZeroExponent);
        }
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        Ok(FiniteGroupSpec { p, exponents })
    }

    pub fn trivial(p: u64) -> Self {
        FiniteGroupSpec::new(p, vec![]).expect("trivial spec")
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Exponents in canonical (decreasing) order.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn summands(&self) -> usize {
        self.exponents.len()
    }

    /// p^{n_i} for each summand.
    pub fn moduli(&self) -> Vec<u64> {
        self.exponents.iter().map(|&e| self.p.pow(e)).collect()
    }

    /// Group order as u128 (never overflows at sane exponents).
    pub fn order(&self) -> u128 {
        self.exponents
            .iter()
            .map(|&e| (self.p as u128).pow(e))
            .product()
    }

    pub fn check_bounds(&self, bounds: SearchBounds) -> Result<(), FiniteGroupError> {
        let order = self.order();
        if order > bounds.max_order as u128 {
            return Err(FiniteGroupError::BoundExceeded {
                order: order.min(u64::MAX as u128) as u64,
                bound: bounds.max_order,
            });
        }
        Ok(())
    }

    pub fn zero(&self) -> Element {
        Element {
            coords: vec![0; self.exponents.len()],
        }
    }

    pub fn element(&self, coords: Vec<u64>) -> Result<Element, FiniteGroupError> {
        if coords.len() != self.exponents.len() {
            return Err(FiniteGroupError::CoordLengthMismatch {
                expected: self.exponents.len(),
                got: coords.len(),
            });
        }
        for (i, (&c, m)) in coords.iter().zip(self.moduli()).enumerate() {
            if c >= m {
                return Err(FiniteGroupError::CoordOutOfRange {
                    index: i,
                    value: c,
                    modulus: m,
                });
            }
        }
        Ok(Element { coords })
    }

    /// All group elements in canonical (lexicographic) order.
    pub fn elements(&self) -> Vec<Element> {
        let moduli = self.moduli();
        let mut out = vec![self.zero()];
        for (i, &m) in moduli.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * m as usize);
            for prefix in &out {
                for c in 0..m {
                    let mut coords = prefix.coords.clone();
                    coords[i] = c;
                    next.push(Element { coords });
                }
            }
            out = next;
        }
        // Lexicographic order over coords with coordinate 0 most significant.
        out.sort();
        out
    }

    /// Canonical generators: e_i = (0,..,1,..,0), one per summand.
    pub fn basis(&self) -> Vec<Element> {
        (0..self.exponents.len())
            .map(|i| {
                let mut coords = vec![0; self.exponents.len()];
                coords[i] = 1;
                Element { coords }
            })
            .collect()
    }
}

/// An element of a [`FiniteGroupSpec`] group: one residue per summand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    coords: Vec<u64>,
}

impl Element {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})",
            self.coords
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Coordinatewise sum mod p^{n_i}.
pub fn add(a: &Element, b: &Element, spec: &FiniteGroupSpec) -> Result<Element, FiniteGroupError> {
    if a.coords.len() != spec.summands() || b.coords.len() != spec.summands() {
        return Err(FiniteGroupError::CoordLengthMismatch {
            expected: spec.summands(),
            got: if a.coords.len() != spec.summands() {
                a.coords.len()
            } else {
                b.coords.len()
            },
        });
    }
    let moduli = spec.moduli();
    let coords = a
        .coords
        .iter()
        .zip(&b.coords)
        .zip(&moduli)
        .map(|((&x, &y), &m)| (x + y) % m)
        .collect();
    Ok(Element { coords })
}

pub fn neg(a: &Element, spec: &FiniteGroupSpec) -> Element {
    let moduli = spec.moduli();
    let coords = a
        .coords
        .iter()
        .zip(&moduli)
        .map(|(&x, &m)| if x == 0 { 0 } else { m - x })
        .collect();
    Element { coords }
}

/// c·a for a nonnegative integer c.
pub fn scale(c: u64, a: &Element, spec: &FiniteGroupSpec) -> Element {
    let moduli = spec.moduli();
    let coords = a
        .coords
        .iter()
        .zip(&moduli)
        .map(|(&x, &m)| ((c as u128 * x as u128) % m as u128) as u64)
        .collect();
    Element { coords }
}

/// The least n with p^n·g = 0, so o(g) = p^n.
pub fn order_exponent(g: &Element, spec: &FiniteGroupSpec) -> u32 {
    let mut x = g.clone();
    let mut n = 0;
    while !x.is_zero() {
        x = scale(spec.prime(), &x, spec);
        n += 1;
    }
    n
}

/// Largest n with g ∈ p^n G, coordinatewise; `None` encodes infinite height (g = 0).
pub fn height_in_group(g: &Element, spec: &FiniteGroupSpec) -> Option<u32> {
    if g.is_zero() {
        return None;
    }
    let p = spec.prime();
    let mut h = u32::MAX;
    for (&c, &e) in g.coords.iter().zip(spec.exponents()) {
        if c == 0 {
            continue;
        }
        let mut v = 0;
        let mut x = c;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        // In Z(p^e) a nonzero residue of valuation v has height exactly v < e.
        debug_assert!(v < e);
        h = h.min(v);
    }
    Some(h)
}

/// A subgroup held with its full element closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    generators: Vec<Element>,
    elements: Vec<Element>,
}

impl Subgroup {
    /// Closure of the generators under addition.
    pub fn generated(
        generators: &[Element],
        spec: &FiniteGroupSpec,
    ) -> Result<Subgroup, FiniteGroupError> {
        let mut seen: HashSet<Element> = HashSet::new();
        seen.insert(spec.zero());
        let mut queue: VecDeque<Element> = VecDeque::new();
        for g in generators {
            if g.coords.len() != spec.summands() {
                return Err(FiniteGroupError::CoordLengthMismatch {
                    expected: spec.summands(),
                    got: g.coords.len(),
                });
            }
            if seen.insert(g.clone()) {
                queue.push_back(g.clone());
            }
        }
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = add(&x, g, spec)?;
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Element> = seen.into_iter().collect();
        elements.sort();
        Ok(Subgroup {
            generators: generators.to_vec(),
            elements,
        })
    }

    pub fn trivial(spec: &FiniteGroupSpec) -> Subgroup {
        Subgroup {
            generators: vec![],
            elements: vec![spec.zero()],
        }
    }

    /// Wrap an explicit element list, verifying closure.
    pub fn from_elements(
        elements: Vec<Element>,
        spec: &FiniteGroupSpec,
    ) -> Result<Subgroup, FiniteGroupError> {
        let set: HashSet<&Element> = elements.iter().collect();
        if !set.contains(&spec.zero()) {
            return Err(FiniteGroupError::NotASubgroup);
        }
        for a in &elements {
            for b in &elements {
                if !set.contains(&add(a, b, spec)?) {
                    return Err(FiniteGroupError::NotASubgroup);
                }
            }
        }
        let mut elements = elements;
        elements.sort();
        elements.dedup();
        Ok(Subgroup {
            generators: elements.clone(),
            elements,
        })
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a subgroup always contains 0
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    pub fn is_whole_group(&self, spec: &FiniteGroupSpec) -> bool {
        self.elements.len() as u128 == spec.order()
    }
}

/// Purity test: A ∩ p^n G = p^n A for every n.
///
/// Checked directly from the definition: for each n up to the period of G,
/// every element of the subgroup that is p^n-divisible in G must be
/// p^n-divisible within the subgroup.
pub fn is_pure(sub: &Subgroup, spec: &FiniteGroupSpec) -> Result<bool, FiniteGroupError> {
    // Validate closure so callers cannot hand us a non-subgroup.
    let set: HashSet<&Element> = sub.elements.iter().collect();
    for a in &sub.elements {
        for b in &sub.elements {
            if !set.contains(&add(a, b, spec)?) {
                return Err(FiniteGroupError::NotASubgroup);
            }
        }
    }
    let max_n = spec.exponents().iter().copied().max().unwrap_or(0);
    for n in 1..=max_n {
        // p^n A
        let pn_a: HashSet<Element> = sub
            .elements
            .iter()
            .map(|x| scale(spec.prime().pow(n), x, spec))
            .collect();
        // Every a in A ∩ p^n G must lie in p^n A.
        for a in &sub.elements {
            let in_png = match height_in_group(a, spec) {
                None => true,
                Some(h) => h >= n,
            };
            if in_png && !pn_a.contains(a) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Enumerate all subgroups C with C ∩ sub = {0}, in canonical order, keeping
/// only those of exactly `target` elements. Used by the complement search.
fn complements_disjoint_from(
    sub: &Subgroup,
    spec: &FiniteGroupSpec,
    target: u128,
) -> Vec<Subgroup> {
    let elements = spec.elements();
    // BFS over subgroups that intersect `sub` trivially; adding generators
    // only grows the intersection, so pruning is sound.
    let mut found: Vec<Subgroup> = Vec::new();
    let mut seen: HashSet<Vec<Element>> = HashSet::new();
    let trivial = Subgroup::trivial(spec);
    seen.insert(trivial.elements.clone());
    let mut queue: VecDeque<Subgroup> = VecDeque::new();
    queue.push_back(trivial.clone());
    if target == 1 {
        return vec![trivial];
    }
    while let Some(current) = queue.pop_front() {
        for g in &elements {
            if current.contains(g) {
                continue;
            }
            let mut gens = current.generators.clone();
            gens.push(g.clone());
            let candidate = Subgroup::generated(&gens, spec).expect("closure within group");
            if candidate.len() as u128 > target {
                continue;
            }
            if candidate
                .elements
                .iter()
                .any(|e| !e.is_zero() && sub.contains(e))
            {
                continue;
            }
            if !seen.insert(candidate.elements.clone()) {
                continue;
            }
            if candidate.len() as u128 == target {
                found.push(candidate);
            } else {
                queue.push_back(candidate);
            }
        }
    }
    found
}

/// Find a direct complement of a pure subgroup: C with sub ∩ C = {0} and
/// sub + C = G. Returns the complement whose sorted element list is
/// lexicographically least, so results are deterministic.
pub fn find_pure_complement(
    sub: &Subgroup,
    spec: &FiniteGroupSpec,
    bounds: SearchBounds,
) -> Result<Subgroup, FiniteGroupError> {
    spec.check_bounds(bounds)?;
    let order = spec.order();
    let target = order / sub.len() as u128;
    let mut candidates = complements_disjoint_from(sub, spec, target);
    // |sub|·|C| = |G| and sub ∩ C = {0} already force sub + C = G.
    candidates.sort_by(|a, b| a.elements.cmp(&b.elements));
    candidates
        .into_iter()
        .next()
        .ok_or(FiniteGroupError::NoComplement)
}

/// A full automorphism of a finite group, stored as an element map.
#[derive(Debug, Clone)]
pub struct Automorphism {
    map: HashMap<Element, Element>,
}

impl Automorphism {
    pub fn apply(&self, e: &Element) -> &Element {
        &self.map[e]
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn verify(&self, spec: &FiniteGroupSpec) -> bool {
        let mut image: HashSet<&Element> = HashSet::new();
        for (a, fa) in &self.map {
            if !image.insert(fa) {
                return false;
            }
            for (b, fb) in &self.map {
                let ab = add(a, b, spec).expect("same spec");
                let fab = add(fa, fb, spec).expect("same spec");
                if self.map[&ab] != fab {
                    return false;
                }
            }
        }
        self.map.len() as u128 == spec.order()
    }
}

/// Partial isomorphism between subgroups of two (possibly equal) groups,
/// extended one generator at a time.
#[derive(Debug, Clone)]
struct PartialIso {
    map: HashMap<Element, Element>,
    image: HashSet<Element>,
}

impl PartialIso {
    fn identity_on_zero(dom: &FiniteGroupSpec, cod: &FiniteGroupSpec) -> PartialIso {
        let mut map = HashMap::new();
        let mut image = HashSet::new();
        map.insert(dom.zero(), cod.zero());
        image.insert(cod.zero());
        PartialIso { map, image }
    }

    /// Extend the domain subgroup by g with prescribed image c. Returns the
    /// extended iso if the extension is a well-defined injective homomorphism.
    fn extend(
        &self,
        g: &Element,
        c: &Element,
        dom: &FiniteGroupSpec,
        cod: &FiniteGroupSpec,
    ) -> Option<PartialIso> {
        if let Some(existing) = self.map.get(g) {
            return if existing == c { Some(self.clone()) } else { None };
        }
        let p = dom.prime();
        // Order of g over the current domain subgroup: least e with p^e·g inside.
        let mut e = 0;
        let mut x = g.clone();
        while !self.map.contains_key(&x) {
            x = scale(p, &x, dom);
            e += 1;
        }
        let pe = p.pow(e);
        // Well-defined: p^e·c must equal the known image of p^e·g.
        if scale(pe, c, cod) != self.map[&x] {
            return None;
        }
        // Injective: c must have order exactly p^e over the image subgroup.
        if e > 0 {
            let boundary = scale(p.pow(e - 1), c, cod);
            if self.image.contains(&boundary) {
                return None;
            }
        }
        let mut next = self.clone();
        let entries: Vec<(Element, Element)> = next.map.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
        for j in 1..pe {
            let jg = scale(j, g, dom);
            let jc = scale(j, c, cod);
            for (a, b) in &entries {
                let key = add(a, &jg, dom).expect("same spec");
                let val = add(b, &jc, cod).expect("same spec");
                next.image.insert(val.clone());
                next.map.insert(key, val);
            }
        }
        Some(next)
    }

    fn domain_len(&self) -> usize {
        self.map.len()
    }
}

/// Extend a pairing of elements to a full automorphism, by backtracking
/// search over images of the canonical basis. Candidate images are tried in
/// canonical element order; basis generators are processed largest order
/// first (that is already the canonical exponent order).
pub fn extend_to_automorphism(
    pairs: &[(Element, Element)],
    spec: &FiniteGroupSpec,
    bounds: SearchBounds,
) -> Result<Automorphism, FiniteGroupError> {
    spec.check_bounds(bounds)?;
    extend_to_automorphism_in(pairs, spec, &spec.elements())
}

/// Same search with the element list precomputed; callers looping over many
/// pairings avoid re-enumerating the group.
pub(crate) fn extend_to_automorphism_in(
    pairs: &[(Element, Element)],
    spec: &FiniteGroupSpec,
    elements: &[Element],
) -> Result<Automorphism, FiniteGroupError> {
    let mut iso = PartialIso::identity_on_zero(spec, spec);
    for (a, b) in pairs {
        iso = iso
            .extend(a, b, spec, spec)
            .ok_or(FiniteGroupError::InconsistentPairing)?;
    }
    let basis = spec.basis();
    match extend_over_basis(&iso, &basis, 0, spec, spec, elements) {
        Some(done) => Ok(Automorphism { map: done.map }),
        None => Err(FiniteGroupError::NoAutomorphism),
    }
}

fn extend_over_basis(
    iso: &PartialIso,
    basis: &[Element],
    next: usize,
    dom: &FiniteGroupSpec,
    cod: &FiniteGroupSpec,
    cod_elements: &[Element],
) -> Option<PartialIso> {
    if next == basis.len() {
        debug_assert_eq!(iso.domain_len() as u128, dom.order());
        return Some(iso.clone());
    }
    let g = &basis[next];
    if iso.map.contains_key(g) {
        return extend_over_basis(iso, basis, next + 1, dom, cod, cod_elements);
    }
    for c in cod_elements {
        if let Some(ext) = iso.extend(g, c, dom, cod) {
            if let Some(done) = extend_over_basis(&ext, basis, next + 1, dom, cod, cod_elements) {
                return Some(done);
            }
        }
    }
    None
}

/// Additive-bijection test by generator-image backtracking. This is the
/// independent oracle for isomorphism questions: it never compares
/// invariants, it searches for the map.
pub fn brute_force_isomorphic(
    a: &FiniteGroupSpec,
    b: &FiniteGroupSpec,
    bounds: SearchBounds,
) -> Result<bool, FiniteGroupError> {
    a.check_bounds(bounds)?;
    b.check_bounds(bounds)?;
    if a.order() != b.order() {
        return Ok(false);
    }
    if a.prime() != b.prime() {
        return Ok(a.order() == 1);
    }
    let iso = PartialIso::identity_on_zero(a, b);
    let basis = a.basis();
    let b_elements = b.elements();
    Ok(extend_over_basis(&iso, &basis, 0, a, b, &b_elements).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u64, exps: &[u32]) -> FiniteGroupSpec {
        FiniteGroupSpec::new(p, exps.to_vec()).unwrap()
    }

    fn el(spec: &FiniteGroupSpec, coords: &[u64]) -> Element {
        spec.element(coords.to_vec()).unwrap()
    }

    /// Independent oracle: order exponent by repeated addition only.
    fn order_exponent_oracle(g: &Element, spec: &FiniteGroupSpec) -> u32 {
        let mut n = 0;
        let mut x = g.clone();
        while !x.is_zero() {
            // multiply by p via p-fold addition
            let mut acc = spec.zero();
            for _ in 0..spec.prime() {
                acc = add(&acc, &x, spec).unwrap();
            }
            x = acc;
            n += 1;
        }
        n
    }

    #[test]
    fn add_examples() {
        // exponents sorted descending: Z(2)+Z(4) stored as [4-part, 2-part]
        let g = z(2, &[1, 2]);
        assert_eq!(g.exponents(), &[2, 1]);
        let zero = g.zero();
        assert_eq!(add(&zero, &zero, &g).unwrap(), zero);
        // (1,3)+(1,2) in Z(2)⊕Z(4) is (0,1): in canonical order the Z(4)
        // coordinate comes first, so (3,1)+(2,1) = (1,0).
        let a = el(&g, &[3, 1]);
        let b = el(&g, &[2, 1]);
        assert_eq!(add(&a, &b, &g).unwrap(), el(&g, &[1, 0]));
        let c8 = z(2, &[3]);
        assert_eq!(
            add(&el(&c8, &[2]), &el(&c8, &[2]), &c8).unwrap(),
            el(&c8, &[4])
        );
    }

    #[test]
    fn add_rejects_mismatched_coords() {
        let g = z(2, &[1, 2]);
        let h = z(2, &[1]);
        let a = h.element(vec![1]).unwrap();
        assert!(matches!(
            add(&a, &g.zero(), &g),
            Err(FiniteGroupError::CoordLengthMismatch { .. })
        ));
    }

    #[test]
    fn order_exponent_examples() {
        let c8 = z(2, &[3]);
        assert_eq!(order_exponent(&c8.zero(), &c8), 0);
        let four = el(&c8, &[4]);
        assert_eq!(order_exponent(&four, &c8), order_exponent_oracle(&four, &c8));
        assert_eq!(order_exponent(&four, &c8), 1);
        let g = z(2, &[1, 2]);
        let both = el(&g, &[1, 1]);
        assert_eq!(order_exponent(&both, &g), order_exponent_oracle(&both, &g));
        assert_eq!(order_exponent(&both, &g), 2);
    }

    #[test]
    fn order_exponent_of_scaled_drops_by_one() {
        let g = z(3, &[2, 1]);
        for e in g.elements() {
            let n = order_exponent(&e, &g);
            let pe = scale(3, &e, &g);
            assert_eq!(order_exponent(&pe, &g), n.saturating_sub(1));
        }
    }

    #[test]
    fn purity_examples() {
        // Whole group is pure.
        let g = z(2, &[2, 1]);
        let whole = Subgroup::generated(&g.basis(), &g).unwrap();
        assert!(whole.is_whole_group(&g));
        assert!(is_pure(&whole, &g).unwrap());

        // <(2)> in Z(4): (2) has height 1 in G but height 0 in the subgroup.
        let c4 = z(2, &[2]);
        let sub = Subgroup::generated(&[el(&c4, &[2])], &c4).unwrap();
        assert!(!is_pure(&sub, &c4).unwrap());

        // <(1,0)> in canonical Z(4)⊕Z(2): generated by the Z(2) part, i.e.
        // spec [2,1] element (0,1).
        let sub2 = Subgroup::generated(&[el(&g, &[0, 1])], &g).unwrap();
        assert!(is_pure(&sub2, &g).unwrap());
    }

    #[test]
    fn pure_complement_examples() {
        let bounds = SearchBounds::default();
        let g = z(2, &[2, 1]);
        // Trivial subgroup: complement is the whole group.
        let c = find_pure_complement(&Subgroup::trivial(&g), &g, bounds).unwrap();
        assert!(c.is_whole_group(&g));

        // <(0,1)> (the Z(2) summand): complement <(1,0)> (the Z(4) summand).
        let sub = Subgroup::generated(&[el(&g, &[0, 1])], &g).unwrap();
        let c = find_pure_complement(&sub, &g, bounds).unwrap();
        assert_eq!(c.len() * sub.len(), 8);
        assert!(c.elements().iter().all(|e| e.is_zero() || !sub.contains(e)));
        let expected = Subgroup::generated(&[el(&g, &[1, 0])], &g).unwrap();
        assert_eq!(c.elements(), expected.elements());

        // Diagonal in Z(2)⊕Z(2): any complementary line is fine; check laws.
        let v = z(2, &[1, 1]);
        let diag = Subgroup::generated(&[el(&v, &[1, 1])], &v).unwrap();
        let c = find_pure_complement(&diag, &v, bounds).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.elements().iter().all(|e| e.is_zero() || !diag.contains(e)));
    }

    #[test]
    fn kulikov_on_all_pure_subgroups_of_a_sample() {
        let bounds = SearchBounds::default();
        let g = z(2, &[2, 1]);
        let all = enumerate_all_subgroups(&g);
        for sub in &all {
            if is_pure(sub, &g).unwrap() {
                let c = find_pure_complement(sub, &g, bounds).unwrap();
                assert_eq!((sub.len() * c.len()) as u128, g.order());
                assert!(c
                    .elements()
                    .iter()
                    .all(|e| e.is_zero() || !sub.contains(e)));
            }
        }
    }

    pub(crate) fn enumerate_all_subgroups(spec: &FiniteGroupSpec) -> Vec<Subgroup> {
        let elements = spec.elements();
        let mut seen: HashSet<Vec<Element>> = HashSet::new();
        let trivial = Subgroup::trivial(spec);
        seen.insert(trivial.elements().to_vec());
        let mut queue = VecDeque::new();
        queue.push_back(trivial.clone());
        let mut out = vec![trivial];
        while let Some(current) = queue.pop_front() {
            for g in &elements {
                if current.contains(g) {
                    continue;
                }
                let mut gens = current.generators().to_vec();
                gens.push(g.clone());
                let next = Subgroup::generated(&gens, spec).unwrap();
                if seen.insert(next.elements().to_vec()) {
                    out.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        out
    }

    #[test]
    fn automorphism_examples() {
        let bounds = SearchBounds::default();
        // Empty pairing: identity exists; check it is an automorphism.
        let g = z(2, &[2, 1]);
        let auto = extend_to_automorphism(&[], &g, bounds).unwrap();
        assert!(auto.verify(&g));

        // Zero maps to zero: still fine.
        let auto = extend_to_automorphism(&[(g.zero(), g.zero())], &g, bounds).unwrap();
        assert!(auto.verify(&g));

        // Coordinate swap in Z(2)⊕Z(2).
        let v = z(2, &[1, 1]);
        let auto =
            extend_to_automorphism(&[(el(&v, &[1, 0]), el(&v, &[0, 1]))], &v, bounds).unwrap();
        assert!(auto.verify(&v));
        assert_eq!(auto.apply(&el(&v, &[1, 0])), &el(&v, &[0, 1]));

        // Order mismatch (2) -> (1) in Z(4): no extension exists.
        let c4 = z(2, &[2]);
        let err = extend_to_automorphism(&[(el(&c4, &[2]), el(&c4, &[1]))], &c4, bounds)
            .unwrap_err();
        assert!(matches!(
            err,
            FiniteGroupError::InconsistentPairing | FiniteGroupError::NoAutomorphism
        ));
    }

    #[test]
    fn automorphisms_preserve_order_and_height() {
        let bounds = SearchBounds::default();
        let g = z(2, &[3, 1]);
        for a in g.elements() {
            for b in g.elements() {
                let ok = extend_to_automorphism(&[(a.clone(), b.clone())], &g, bounds).is_ok();
                let same_order = order_exponent(&a, &g) == order_exponent(&b, &g);
                let same_height = height_in_group(&a, &g) == height_in_group(&b, &g);
                if ok {
                    assert!(same_order && same_height, "{a} -> {b}");
                }
                // In Z(8)⊕Z(2), order and height determine the orbit.
                if same_order && same_height {
                    assert!(ok, "{a} -> {b} should extend");
                }
            }
        }
    }

    #[test]
    fn brute_force_isomorphism_examples() {
        let bounds = SearchBounds::default();
        assert!(!brute_force_isomorphic(&z(2, &[2]), &z(2, &[1, 1]), bounds).unwrap());
        assert!(brute_force_isomorphic(&z(2, &[1, 2]), &z(2, &[2, 1]), bounds).unwrap());
        assert!(!brute_force_isomorphic(&z(2, &[3, 1]), &z(2, &[2, 2]), bounds).unwrap());
        assert!(brute_force_isomorphic(&z(3, &[2, 1]), &z(3, &[1, 2]), bounds).unwrap());
        assert!(!brute_force_isomorphic(&z(2, &[3]), &z(2, &[1, 1, 1]), bounds).unwrap());
    }

    #[test]
    fn bound_is_enforced() {
        let bounds = SearchBounds { max_order: 16 };
        let g = z(2, &[5]);
        assert!(matches!(
            brute_force_isomorphic(&g, &g, bounds),
            Err(FiniteGroupError::BoundExceeded { .. })
        ));
    }

    #[test]
    fn group_axioms_exhaustive_small() {
        let g = z(2, &[2, 1]);
        let elems = g.elements();
        for a in &elems {
            assert_eq!(add(a, &g.zero(), &g).unwrap(), *a);
            assert_eq!(add(a, &neg(a, &g), &g).unwrap(), g.zero());
            for b in &elems {
                assert_eq!(add(a, b, &g).unwrap(), add(b, a, &g).unwrap());
                for c in &elems {
                    let ab_c = add(&add(a, b, &g).unwrap(), c, &g).unwrap();
                    let a_bc = add(a, &add(b, c, &g).unwrap(), &g).unwrap();
                    assert_eq!(ab_c, a_bc);
                }
            }
        }
    }
}
