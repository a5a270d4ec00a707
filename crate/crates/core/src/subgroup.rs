//! Subgroups with materialized element sets.
//!
//! Every [`Subgroup`] keeps its sorted element list, a membership mask over
//! the ambient group and a short generating list (each generator enlarged the
//! subgroup when it was added). Equality is element-set equality.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use bitvec::vec::BitVec;
use thiserror::Error;

use crate::pc::{Element, PcGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubgroupError {
    #[error("the lower section subgroup is not contained in the upper one")]
    NotContained,
    #[error("the acting subgroup does not normalize the target subgroup")]
    NotNormalized,
}

/// A sorted set of elements of one ambient group.
#[derive(Clone, Debug)]
pub struct ElementSet {
    elements: Vec<Element>,
    mask: BitVec,
}

impl PartialEq for ElementSet {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for ElementSet {}

impl ElementSet {
    pub fn empty(group: &PcGroup) -> Self {
        ElementSet { elements: Vec::new(), mask: BitVec::repeat(false, group.order() as usize) }
    }

    pub fn from_elements(group: &PcGroup, items: impl IntoIterator<Item = Element>) -> Self {
        let mut set = Self::empty(group);
        for x in items {
            set.insert(x);
        }
        set.finish();
        set
    }

    /// Set of the elements whose mask bit is on.
    pub(crate) fn from_mask(mask: BitVec) -> Self {
        let elements = mask.iter_ones().map(|i| Element::from_code(i as u32)).collect();
        ElementSet { elements, mask }
    }

    // Unsorted insertion; call `finish` before handing the set out.
    fn insert(&mut self, x: Element) -> bool {
        if self.mask[x.index()] {
            return false;
        }
        self.mask.set(x.index(), true);
        self.elements.push(x);
        true
    }

    fn finish(&mut self) {
        self.elements.sort_unstable();
    }

    pub fn contains(&self, x: Element) -> bool {
        self.mask[x.index()]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Element> + '_ {
        self.elements.iter().copied()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.len() <= other.len() && self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let mut mask = self.mask.clone();
        mask &= &other.mask;
        ElementSet::from_mask(mask)
    }

    /// The subgroup if this set is closed under multiplication.
    pub fn to_subgroup(&self, group: &PcGroup) -> Option<Subgroup> {
        if self.is_empty() || !self.contains(Element::IDENTITY) {
            return None;
        }
        let h = group.closure_of_set(self);
        (h.order() == self.len()).then_some(h)
    }
}

/// A subgroup of a [`PcGroup`].
#[derive(Clone, Debug)]
pub struct Subgroup {
    set: ElementSet,
    gens: Vec<Element>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.set == other.set
    }
}

impl Eq for Subgroup {}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Report order: size first, then lexicographic on element lists.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order().cmp(&other.order()).then_with(|| self.set.elements.cmp(&other.set.elements))
    }
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.set.len()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.set.contains(x)
    }

    pub fn elements(&self) -> &[Element] {
        self.set.elements()
    }

    pub fn generators(&self) -> &[Element] {
        &self.gens
    }

    pub fn as_set(&self) -> &ElementSet {
        &self.set
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.set.is_subset(&other.set)
    }
}

impl PcGroup {
    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { set: ElementSet::from_elements(self, [Element::IDENTITY]), gens: Vec::new() }
    }

    pub fn whole_group(&self) -> Subgroup {
        let mask = BitVec::repeat(true, self.order() as usize);
        Subgroup { set: ElementSet::from_mask(mask), gens: self.generators() }
    }

    /// `<gens>`.
    pub fn closure(&self, gens: &[Element]) -> Subgroup {
        self.extend(&self.trivial_subgroup(), gens)
    }

    /// `<h, gens>`.
    pub fn extend(&self, h: &Subgroup, gens: &[Element]) -> Subgroup {
        let mut set = h.set.clone();
        let mut all_gens = h.gens.clone();
        let mut queue = Vec::new();
        for &g in gens {
            if set.contains(g) {
                continue;
            }
            all_gens.push(g);
            // old elements are closed under old generators; only products with
            // g and everything new needs expanding
            let old_len = set.elements.len();
            for i in 0..old_len {
                let y = self.multiply(set.elements[i], g);
                if set.insert(y) {
                    queue.push(y);
                }
            }
            while let Some(x) = queue.pop() {
                for &t in &all_gens {
                    let y = self.multiply(x, t);
                    if set.insert(y) {
                        queue.push(y);
                    }
                }
            }
        }
        set.finish();
        Subgroup { set, gens: all_gens }
    }

    /// `<a, b>`.
    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        if a.order() >= b.order() {
            self.extend(a, &b.gens)
        } else {
            self.extend(b, &a.gens)
        }
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        self.closure_of_set(&a.set.intersection(&b.set))
    }

    /// Subgroup generated by a set, with a short generating list.
    pub fn closure_of_set(&self, set: &ElementSet) -> Subgroup {
        let mut h = self.trivial_subgroup();
        for x in set.iter() {
            if !h.contains(x) {
                h = self.extend(&h, &[x]);
            }
        }
        h
    }

    /// Smallest subgroup containing `gens` and closed under conjugation by
    /// every element of `conjugators`.
    pub fn invariant_closure(&self, base: &Subgroup, gens: &[Element], conjugators: &[Element]) -> Subgroup {
        let mut h = self.extend(base, gens);
        let mut i = 0;
        while i < h.gens.len() {
            let t = h.gens[i];
            for &c in conjugators {
                let u = self.conjugate(t, c);
                if !h.contains(u) {
                    h = self.extend(&h, &[u]);
                }
            }
            i += 1;
        }
        h
    }

    /// `<gens>^G`.
    pub fn normal_closure(&self, gens: &[Element]) -> Subgroup {
        self.invariant_closure(&self.trivial_subgroup(), gens, &self.generators())
    }

    /// Whether conjugation by each of `by` maps `h` into itself.
    pub fn normalizes(&self, by: &[Element], h: &Subgroup) -> bool {
        by.iter().all(|&c| h.gens.iter().all(|&t| h.contains(self.conjugate(t, c))))
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.normalizes(&self.generators(), h)
    }

    /// `[a, b]`, as the normal closure in `<a, b>` of the commutators of
    /// generators.
    pub fn commutator_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut comms = Vec::new();
        for &x in &a.gens {
            for &y in &b.gens {
                let c = self.commutator(x, y);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        let mut conj = a.gens.clone();
        conj.extend_from_slice(&b.gens);
        self.invariant_closure(&self.trivial_subgroup(), &comms, &conj)
    }

    /// `[L, G, ..., G]` with `n` copies of `G`.
    pub fn iterated_commutator(&self, l: &Subgroup, n: usize) -> Subgroup {
        let g = self.whole_group();
        let mut cur = l.clone();
        for _ in 0..n {
            if cur.is_trivial() {
                break;
            }
            cur = self.commutator_subgroup(&cur, &g);
        }
        cur
    }

    /// `gamma_1 = G, gamma_2, ...` ending with the first trivial term.
    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        let g = self.whole_group();
        let mut series = vec![g.clone()];
        while !series.last().unwrap().is_trivial() {
            let next = self.commutator_subgroup(series.last().unwrap(), &g);
            series.push(next);
        }
        series
    }

    /// `gamma_i(G)` for `i >= 1`.
    pub fn gamma(&self, i: usize) -> Subgroup {
        let series = self.lower_central_series();
        series.get(i.max(1) - 1).cloned().unwrap_or_else(|| self.trivial_subgroup())
    }

    pub fn nilpotency_class(&self) -> usize {
        self.lower_central_series().len() - 1
    }

    /// `H^(p^k) = <h^(p^k) : h in H>`.
    pub fn power_subgroup(&self, h: &Subgroup, k: u32) -> Subgroup {
        if k == 0 {
            return h.clone();
        }
        let exp = (self.p() as i64).pow(k);
        let mut out = self.trivial_subgroup();
        for &x in h.elements() {
            let y = self.power(x, exp);
            if !out.contains(y) {
                out = self.extend(&out, &[y]);
            }
        }
        out
    }

    /// `Phi(H) = H^p [H, H]`.
    pub fn frattini(&self, h: &Subgroup) -> Subgroup {
        let pw = self.power_subgroup(h, 1);
        let d = self.commutator_subgroup(h, h);
        self.join(&pw, &d)
    }

    /// Minimum number of generators, `log_p |H : Phi(H)|`.
    pub fn rank(&self, h: &Subgroup) -> u32 {
        let index = h.order() / self.frattini(h).order();
        let mut d = 0;
        let mut m = 1;
        while m < index {
            m *= self.p() as usize;
            d += 1;
        }
        d
    }

    /// `C_G(A/B) = {g : [a, g] in B for all a in A}`. Returned as a set since
    /// it need not be a subgroup when `B` is not normal.
    pub fn centralizer_section(&self, a: &Subgroup, b: &Subgroup) -> Result<ElementSet, SubgroupError> {
        if !b.is_subgroup_of(a) {
            return Err(SubgroupError::NotContained);
        }
        // [aa', g] = [a, g]^a' [a', g]: generators of A suffice once A
        // normalizes B.
        let tests: &[Element] = if self.normalizes(&a.gens, b) { &a.gens } else { a.elements() };
        let mask = self
            .elements()
            .map(|g| tests.iter().all(|&x| b.contains(self.commutator(x, g))))
            .collect::<BitVec>();
        Ok(ElementSet::from_mask(mask))
    }

    pub fn center(&self) -> Subgroup {
        let gens = self.generators();
        let set = self.elements().filter(|&x| gens.iter().all(|&g| self.commutator(x, g).is_identity()));
        self.closure_of_set(&ElementSet::from_elements(self, set))
    }

    /// Powerful: `[H, H] <= H^p` for odd `p`, `[H, H] <= H^4` for `p = 2`.
    pub fn is_powerful(&self, h: &Subgroup) -> bool {
        let d = self.commutator_subgroup(h, h);
        let k = if self.p() == 2 { 2 } else { 1 };
        d.is_subgroup_of(&self.power_subgroup(h, k))
    }

    /// All `U` maximal among the proper subgroups of `k` normalized by `h`.
    ///
    /// Such `U` are exactly the maximal subgroups of `k` containing
    /// `Phi(k)[k, h]`, which requires `h` to normalize `k`.
    pub fn maximal_normalized_subgroups(&self, k: &Subgroup, h: &Subgroup) -> Result<Vec<Subgroup>, SubgroupError> {
        if !self.normalizes(&h.gens, k) {
            return Err(SubgroupError::NotNormalized);
        }
        let base = self.join(&self.frattini(k), &self.commutator_subgroup(k, h));
        let mut basis = Vec::new();
        let mut span = base.clone();
        for &x in k.elements() {
            if !span.contains(x) {
                basis.push(x);
                span = self.extend(&span, &[x]);
            }
        }
        let p = self.p();
        let d = basis.len();
        let mut out = Vec::new();
        // hyperplanes <-> functionals whose first non-zero coordinate is 1
        for t in 0..d {
            let free = d - 1 - t;
            let count = (p as u64).pow(free as u32);
            for idx in 0..count {
                let mut coeffs = vec![0u32; d];
                let mut c = idx;
                for slot in coeffs[t + 1..].iter_mut() {
                    *slot = (c % p as u64) as u32;
                    c /= p as u64;
                }
                let mut gens: Vec<Element> = basis[..t].to_vec();
                for i in t + 1..d {
                    let f = coeffs[i];
                    let g = if f == 0 {
                        basis[i]
                    } else {
                        self.multiply(basis[i], self.power(basis[t], -(f as i64)))
                    };
                    gens.push(g);
                }
                out.push(self.extend(&base, &gens));
            }
        }
        out.sort();
        Ok(out)
    }

    /// Lexicographically least representatives of the cosets `xN`.
    pub fn transversal(&self, n: &Subgroup) -> Vec<Element> {
        let mut covered: BitVec = BitVec::repeat(false, self.order() as usize);
        let mut reps = Vec::new();
        for x in self.elements() {
            if covered[x.index()] {
                continue;
            }
            reps.push(x);
            for &m in n.elements() {
                covered.set(self.multiply(x, m).index(), true);
            }
        }
        reps
    }

    pub fn conjugacy_class(&self, x: Element) -> ElementSet {
        let gens = self.generators();
        let mut set = ElementSet::empty(self);
        set.insert(x);
        let mut queue = vec![x];
        while let Some(y) = queue.pop() {
            for &g in &gens {
                let z = self.conjugate(y, g);
                if set.insert(z) {
                    queue.push(z);
                }
            }
        }
        set.finish();
        set
    }

    /// Least element of each conjugacy class.
    pub fn class_representatives(&self) -> Vec<Element> {
        let mut covered: BitVec = BitVec::repeat(false, self.order() as usize);
        let mut reps = Vec::new();
        for x in self.elements() {
            if covered[x.index()] {
                continue;
            }
            reps.push(x);
            for y in self.conjugacy_class(x).iter() {
                covered.set(y.index(), true);
            }
        }
        reps
    }

    /// Every subgroup `M` with `bottom <= M <= top` that is normalized by all
    /// of `conjugators`, sorted. `bottom` must itself be normalized by them.
    /// Returns `None` once more than `limit` subgroups turn up.
    ///
    /// Works upwards through steps of index `p`: over an invariant `N`, the
    /// minimal invariant overgroups are `N<x>` with `x` normalizing `N`,
    /// `x^p in N` and `[x, c] in N` for every conjugator `c`.
    pub fn invariant_subgroups_between(
        &self,
        bottom: &Subgroup,
        top: &Subgroup,
        conjugators: &[Element],
        limit: usize,
    ) -> Option<Vec<Subgroup>> {
        let mut found: BTreeMap<Vec<Element>, Subgroup> = BTreeMap::new();
        found.insert(bottom.elements().to_vec(), bottom.clone());
        let mut queue = vec![bottom.clone()];
        let p = self.p() as i64;
        while let Some(n) = queue.pop() {
            let mut covered = n.set.mask.clone();
            for &x in top.elements() {
                if covered[x.index()] {
                    continue;
                }
                if !n.contains(self.power(x, p))
                    || !conjugators.iter().all(|&c| n.contains(self.commutator(x, c)))
                    || !n.gens.iter().all(|&t| n.contains(self.conjugate(t, x)))
                {
                    continue;
                }
                let m = self.extend(&n, &[x]);
                for &y in m.elements() {
                    covered.set(y.index(), true);
                }
                if !found.contains_key(m.elements()) {
                    if found.len() >= limit {
                        return None;
                    }
                    found.insert(m.elements().to_vec(), m.clone());
                    queue.push(m);
                }
            }
        }
        let mut out: Vec<Subgroup> = found.into_values().collect();
        out.sort();
        Some(out)
    }

    /// All normal subgroups of the group, if there are at most `limit`.
    pub fn normal_subgroups(&self, limit: usize) -> Option<Vec<Subgroup>> {
        self.invariant_subgroups_between(&self.trivial_subgroup(), &self.whole_group(), &self.generators(), limit)
    }

    /// All subgroups of `k`, if there are at most `limit`.
    pub fn subgroups_of(&self, k: &Subgroup, limit: usize) -> Option<Vec<Subgroup>> {
        self.invariant_subgroups_between(&self.trivial_subgroup(), k, &[], limit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::pc::PcGroup;

    fn group(name: &str) -> PcGroup {
        PcGroup::new(families::from_name(name).unwrap()).unwrap()
    }

    fn sizes(series: &[Subgroup]) -> Vec<usize> {
        series.iter().map(Subgroup::order).collect()
    }

    // all-pairs commutator subgroup, straight from the definition
    fn brute_commutator(g: &PcGroup, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut comms = Vec::new();
        for &x in a.elements() {
            for &y in b.elements() {
                comms.push(g.commutator(x, y));
            }
        }
        g.closure_of_set(&ElementSet::from_elements(g, comms))
    }

    #[test]
    fn closures() {
        let g = group("heis(3)");
        let e = |v: &[u32]| g.element(v).unwrap();
        assert_eq!(g.closure(&[]).order(), 1);
        assert_eq!(g.closure(&[e(&[0, 0, 1])]).order(), 3);
        assert_eq!(g.closure(&[e(&[1, 0, 0]), e(&[0, 1, 0])]).order(), 27);
        assert_eq!(g.normal_closure(&[e(&[0, 0, 1])]).order(), 3);
        assert_eq!(g.normal_closure(&[e(&[1, 0, 0])]).order(), 9);
        assert!(g.normal_closure(&[g.identity()]).is_trivial());
    }

    #[test]
    fn commutator_subgroups_match_brute_force() {
        for name in ["heis(3)", "wreath(3)", "dihedral(16)", "quaternion(16)", "espm(3)xelab(3,1)"] {
            let g = group(name);
            let whole = g.whole_group();
            let normals = g.normal_subgroups(500).unwrap();
            for a in normals.iter().step_by(3) {
                assert_eq!(g.commutator_subgroup(a, &whole), brute_commutator(&g, a, &whole), "{name}");
                for b in normals.iter().step_by(5) {
                    assert_eq!(g.commutator_subgroup(a, b), brute_commutator(&g, a, b), "{name}");
                }
            }
            // non-normal pair
            let a = g.closure(&[g.generator(0)]);
            let b = g.closure(&[g.generator(1)]);
            assert_eq!(g.commutator_subgroup(&a, &b), brute_commutator(&g, &a, &b), "{name}");
        }
    }

    #[test]
    fn commutator_subgroup_examples() {
        let h = group("heis(3)");
        let w = h.whole_group();
        assert_eq!(h.commutator_subgroup(&w, &w).order(), 3);
        let e = group("elab(3,2)");
        assert!(e.commutator_subgroup(&e.whole_group(), &e.whole_group()).is_trivial());
        let wr = group("wreath(3)");
        let d = wr.commutator_subgroup(&wr.whole_group(), &wr.whole_group());
        assert_eq!(d.order(), 9);
        assert!(wr.commutator_subgroup(&d, &d).is_trivial());
        assert_eq!(wr.rank(&d), 2);
    }

    #[test]
    fn iterated_commutators() {
        let g = group("heis(3)");
        let w = g.whole_group();
        assert_eq!(g.iterated_commutator(&w, 1).order(), 3);
        assert!(g.iterated_commutator(&w, 2).is_trivial());
        assert_eq!(g.iterated_commutator(&w, 0), w);
    }

    #[test]
    fn lower_central_series_sizes() {
        assert_eq!(sizes(&group("heis(3)").lower_central_series()), [27, 3, 1]);
        assert_eq!(sizes(&group("wreath(3)").lower_central_series()), [81, 9, 3, 1]);
        assert_eq!(sizes(&group("elab(3,2)").lower_central_series()), [9, 1]);
        assert_eq!(sizes(&group("dihedral(16)").lower_central_series()), [16, 4, 2, 1]);
        assert_eq!(sizes(&group("freenilp(3,3)").lower_central_series()), [243, 27, 9, 1]);
        assert_eq!(group("wreath(3)").nilpotency_class(), 3);
        assert!(group("heis(3)").gamma(7).is_trivial());
    }

    #[test]
    fn power_subgroups_and_frattini() {
        let h = group("heis(3)");
        assert!(h.power_subgroup(&h.whole_group(), 1).is_trivial());
        assert_eq!(h.power_subgroup(&h.whole_group(), 0), h.whole_group());
        let m = group("espm(3)");
        assert_eq!(m.power_subgroup(&m.whole_group(), 1).order(), 3);
        assert!(group("elab(3,2)").frattini(&group("elab(3,2)").whole_group()).is_trivial());
        assert_eq!(h.frattini(&h.whole_group()).order(), 3);
        let cyc = m.closure(&[m.generator(1)]);
        assert_eq!(cyc.order(), 9);
        assert_eq!(m.frattini(&cyc).order(), 3);
    }

    #[test]
    fn rank_matches_minimum_generating_set() {
        // brute force over subsets of size 0, 1, 2, 3
        for name in ["heis(3)", "elab(3,2)", "espm(3)", "elab(2,3)", "dihedral(8)"] {
            let g = group(name);
            for h in g.subgroups_of(&g.whole_group(), 1000).unwrap() {
                let els = h.elements();
                let gen_by = |xs: &[Element]| g.closure(xs).order() == h.order();
                let mut best = None;
                'search: for d in 0..=3usize {
                    let mut idx = vec![0usize; d];
                    loop {
                        let xs: Vec<Element> = idx.iter().map(|&i| els[i]).collect();
                        if gen_by(&xs) {
                            best = Some(d as u32);
                            break 'search;
                        }
                        let mut pos = d;
                        loop {
                            if pos == 0 {
                                continue 'search;
                            }
                            pos -= 1;
                            idx[pos] += 1;
                            if idx[pos] < els.len() {
                                break;
                            }
                            idx[pos] = 0;
                        }
                    }
                }
                assert_eq!(Some(g.rank(&h)), best, "{name}");
            }
        }
        assert_eq!(group("heis(3)").rank(&group("heis(3)").trivial_subgroup()), 0);
    }

    #[test]
    fn centralizer_sections() {
        let h = group("heis(3)");
        let w = h.whole_group();
        assert_eq!(h.centralizer_section(&w, &w).unwrap().len(), 27);
        let d = h.gamma(2);
        assert_eq!(h.centralizer_section(&d, &h.trivial_subgroup()).unwrap().len(), 27);
        assert_eq!(h.centralizer_section(&h.trivial_subgroup(), &d), Err(SubgroupError::NotContained));
        let wr = group("wreath(3)");
        let g2 = wr.gamma(2);
        let c = wr.centralizer_section(&g2, &wr.power_subgroup(&g2, 1)).unwrap();
        assert!(wr.order() as usize / c.len() <= 3);
        assert!(c.to_subgroup(&wr).is_some());
        assert_eq!(h.center().order(), 3);
    }

    #[test]
    fn centralizer_section_of_non_normal_lower_term() {
        // brute-force cross-check, including a B that is not normalized by A
        let g = group("dihedral(16)");
        let a = g.whole_group();
        let b = g.closure(&[g.generator(0)]);
        let fast = g.centralizer_section(&a, &g.trivial_subgroup()).unwrap();
        assert_eq!(fast.len(), 2);
        let c = g.centralizer_section(&g.closure(&[g.generator(0), g.generator(2)]), &b).unwrap();
        let brute: Vec<Element> = g
            .elements()
            .filter(|&x| {
                g.closure(&[g.generator(0), g.generator(2)]).elements().iter().all(|&y| b.contains(g.commutator(y, x)))
            })
            .collect();
        assert_eq!(c.elements(), &brute[..]);
    }

    #[test]
    fn powerful() {
        assert!(group("elab(3,2)").is_powerful(&group("elab(3,2)").whole_group()));
        let h = group("heis(3)");
        assert!(!h.is_powerful(&h.whole_group()));
        let wr = group("wreath(3)");
        assert!(wr.is_powerful(&wr.gamma(2)));
        let m = group("espm(3)");
        assert!(m.is_powerful(&m.whole_group()));
    }

    #[test]
    fn maximal_normalized() {
        let e = group("elab(3,2)");
        let w = e.whole_group();
        assert_eq!(e.maximal_normalized_subgroups(&w, &w).unwrap().len(), 4);
        let h = group("heis(3)");
        let z = h.gamma(2);
        let ms = h.maximal_normalized_subgroups(&z, &h.whole_group()).unwrap();
        assert_eq!(ms.len(), 1);
        assert!(ms[0].is_trivial());
        let wr = group("wreath(3)");
        let g2 = wr.gamma(2);
        let ms = wr.maximal_normalized_subgroups(&g2, &wr.whole_group()).unwrap();
        assert_eq!(ms, vec![wr.gamma(3)]);
        assert_eq!(wr.maximal_normalized_subgroups(&g2, &g2).unwrap().len(), 4);
        let not_normal = wr.closure(&[wr.generator(1)]);
        assert_eq!(
            wr.maximal_normalized_subgroups(&not_normal, &wr.whole_group()),
            Err(SubgroupError::NotNormalized)
        );
    }

    #[test]
    fn maximal_normalized_matches_brute_force() {
        for name in ["wreath(3)", "dihedral(16)", "heis(3)xheis(3)", "freenilp(3,3)"] {
            let g = group(name);
            for (k, h) in [(g.gamma(2), g.whole_group()), (g.whole_group(), g.whole_group()), (g.gamma(2), g.gamma(2))] {
                let invariant = g.invariant_subgroups_between(&g.trivial_subgroup(), &k, h.generators(), 5000).unwrap();
                let proper: Vec<&Subgroup> = invariant.iter().filter(|u| u.order() < k.order()).collect();
                let mut brute: Vec<Subgroup> = proper
                    .iter()
                    .filter(|u| !proper.iter().any(|v| v.order() > u.order() && u.is_subgroup_of(v)))
                    .map(|u| (*u).clone())
                    .collect();
                brute.sort();
                assert_eq!(g.maximal_normalized_subgroups(&k, &h).unwrap(), brute, "{name}");
            }
        }
    }

    #[test]
    fn subgroup_counts() {
        // C3 x C3 has 6 subgroups, D8 has 10, Q8 has 6
        let e = group("elab(3,2)");
        assert_eq!(e.subgroups_of(&e.whole_group(), 100).unwrap().len(), 6);
        let d = group("dihedral(8)");
        assert_eq!(d.subgroups_of(&d.whole_group(), 100).unwrap().len(), 10);
        assert_eq!(d.normal_subgroups(100).unwrap().len(), 6);
        let q = group("quaternion(8)");
        assert_eq!(q.subgroups_of(&q.whole_group(), 100).unwrap().len(), 6);
        assert_eq!(q.normal_subgroups(100).unwrap().len(), 6);
        assert!(e.subgroups_of(&e.whole_group(), 3).is_none());
        for n in group("wreath(3)").normal_subgroups(500).unwrap() {
            assert!(group("wreath(3)").is_normal(&n));
        }
    }

    #[test]
    fn transversal_and_classes() {
        let g = group("heis(3)");
        let t = g.transversal(&g.gamma(2));
        assert_eq!(t.len(), 9);
        assert_eq!(t[0], g.identity());
        // heis(3): 3 central classes plus 8 classes of size 3
        assert_eq!(g.class_representatives().len(), 11);
        assert_eq!(g.conjugacy_class(g.generator(0)).len(), 3);
    }
}
