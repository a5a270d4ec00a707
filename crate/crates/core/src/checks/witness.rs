//! Single-slot witnesses for `gamma_r`.
//!
//! Search order: the trivial witness when `gamma_r(G) = 1`; then candidates
//! suggested by the branch (see [`find_witness`]); then an exhaustive sweep
//! over slots `j = 1..=r` with the fixed entries drawn from the least coset
//! representatives of `G'`, of `Z(G)`, and finally from all of `G`. Tuples
//! are visited in lexicographic order of element codes.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use bitvec::vec::BitVec;

use super::{Branch, CheckError, GroupContext, Hypotheses};
use crate::pc::{Element, PcGroup};
use crate::sample::{derive_seed, Plan};
use crate::subgroup::{ElementSet, Subgroup, SubgroupError};
use crate::words::{slot_value_set, OuterWord, SlotMap, WitnessTuple};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Which stage produced the witness.
    pub strategy: &'static str,
    /// Candidate tuples tried.
    pub candidates: u64,
}

/// `C_r(G) != G` form: a witness whose slot only ranges over `C_r(G)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedCheck {
    pub witness: Option<WitnessTuple>,
    pub covers: bool,
}

/// Whether `G_{gamma_r}` (all values) fills `gamma_r(G)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueSetReport {
    pub value_count: usize,
    pub gamma_order: usize,
    pub values_in_gamma: bool,
    pub values_equal_gamma: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremVerdict {
    pub hypotheses: Hypotheses,
    pub witness: Option<WitnessTuple>,
    /// The witness's slot values are exactly `gamma_r(G)`.
    pub equality_holds: bool,
    /// Present for the two-generator branch with `C_r(G) != G`.
    pub restricted: Option<RestrictedCheck>,
    pub stats: SearchStats,
    /// Recomputed slot set compared with `gamma_r(G)` as sets
    /// (`check_theorem_a` only).
    pub reverified: Option<bool>,
    pub values: Option<ValueSetReport>,
}

impl TheoremVerdict {
    /// Whether the verdict meets the claim for its branch. No claim is made
    /// for [`Branch::NotApplicable`].
    pub fn claim_holds(&self) -> bool {
        if self.hypotheses.branch == Branch::NotApplicable {
            return true;
        }
        self.witness.is_some()
            && self.equality_holds
            && self.reverified != Some(false)
            && self.restricted.as_ref().is_none_or(|c| c.covers)
            && self.values.as_ref().is_none_or(|v| v.values_in_gamma)
    }
}

struct Search<'c, 'a> {
    ctx: &'c GroupContext<'a>,
    r: usize,
    target: usize,
    candidates: u64,
}

impl<'c, 'a> Search<'c, 'a> {
    fn new(ctx: &'c GroupContext<'a>, r: usize) -> Self {
        Search { ctx, r, target: ctx.gamma(r).order(), candidates: 0 }
    }

    fn group(&self) -> &'a PcGroup {
        self.ctx.group()
    }

    // slot values lie in gamma_r, so reaching |gamma_r| distinct values means
    // equality
    fn covers(&mut self, wt: &WitnessTuple, range: &[Element]) -> bool {
        self.candidates += 1;
        let g = self.group();
        let map = SlotMap::new(g, wt);
        let mut seen: BitVec = BitVec::repeat(false, g.order() as usize);
        let mut count = 0;
        for &x in range {
            let v = map.eval(x);
            if !seen[v.index()] {
                seen.set(v.index(), true);
                count += 1;
                if count == self.target {
                    return true;
                }
            }
        }
        false
    }

    /// Tries slots `js` with fixed entries from `pools[i]` for position `i`
    /// of the fixed list; `range` is where the slot runs.
    fn sweep(&mut self, js: &[usize], pool_for: impl Fn(usize, usize) -> Vec<Element>, range: &[Element], cap: u64) -> Option<WitnessTuple> {
        let start = self.candidates;
        for &j in js {
            let pools: Vec<Vec<Element>> = (0..self.r - 1).map(|i| pool_for(j, i)).collect();
            if pools.iter().any(Vec::is_empty) {
                continue;
            }
            let mut idx = vec![0usize; self.r - 1];
            loop {
                if self.candidates - start >= cap {
                    return None;
                }
                let fixed: Vec<Element> = idx.iter().zip(&pools).map(|(&i, p)| p[i]).collect();
                let wt = WitnessTuple::new(j, fixed).expect("slot in range");
                if self.covers(&wt, range) {
                    return Some(wt);
                }
                let mut pos = idx.len();
                let done = loop {
                    if pos == 0 {
                        break true;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < pools[pos].len() {
                        break false;
                    }
                    idx[pos] = 0;
                };
                if done {
                    break;
                }
            }
        }
        None
    }

    fn fallback(&mut self, range: &[Element]) -> Option<(WitnessTuple, &'static str)> {
        let g = self.group();
        let js: Vec<usize> = (1..=self.r).collect();
        let cap = (50_000_000 / g.order() as u64).max(1000);
        let levels: [(&'static str, Vec<Element>); 3] = [
            ("fallback_derived", self.ctx.derived_transversal().to_vec()),
            ("fallback_center", g.transversal(self.ctx.center())),
            ("fallback_all", g.elements().collect()),
        ];
        for (name, pool) in levels {
            if let Some(wt) = self.sweep(&js, |_, _| pool.clone(), range, cap) {
                return Some((wt, name));
            }
        }
        None
    }

    fn each_tuple(&self, pool: &[Element], len: usize, cap: u64, mut f: impl FnMut(&[Element]) -> bool) {
        if pool.is_empty() {
            return;
        }
        let mut idx = vec![0usize; len];
        let mut buf = vec![Element::IDENTITY; len];
        let mut seen = 0u64;
        loop {
            for (b, &i) in buf.iter_mut().zip(&idx) {
                *b = pool[i];
            }
            seen += 1;
            if !f(&buf) || seen >= cap {
                return;
            }
            let mut pos = len;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < pool.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    // p odd, gamma_r cyclic: a generating value [x_1, ..., x_r], slot r;
    // tuples of pc generators first, then tuples from the G' transversal
    fn cyclic_odd(&mut self, all: &[Element]) -> Option<WitnessTuple> {
        let g = self.group();
        let frat = g.power_subgroup(self.ctx.gamma(self.r), 1);
        let mut gens = Vec::new();
        for pool in [&g.generators()[..], self.ctx.derived_transversal()] {
            self.each_tuple(pool, self.r, 100_000, |x| {
                if !frat.contains(g.commutator_of(x)) {
                    gens.push(x.to_vec());
                }
                gens.len() < 16
            });
        }
        for x in gens {
            let wt = WitnessTuple::new(self.r, x[..self.r - 1].to_vec()).unwrap();
            if self.covers(&wt, all) {
                return Some(wt);
            }
        }
        None
    }

    // p = 2, gamma_r cyclic: among generating values pick the tuple with the
    // largest j such that x_j lies in C = C_G(gamma_r / gamma_r^4); ties go
    // to the lexicographically least tuple
    fn cyclic_two(&mut self, all: &[Element]) -> Option<WitnessTuple> {
        let g = self.group();
        let gr = self.ctx.gamma(self.r);
        let c = g.centralizer_section(gr, &g.power_subgroup(gr, 2)).expect("gamma_r^4 lies in gamma_r");
        let frat = g.power_subgroup(gr, 1);
        let mut best: Option<(usize, Vec<Element>)> = None;
        self.each_tuple(self.ctx.derived_transversal(), self.r, 1_000_000, |x| {
            if !frat.contains(g.commutator_of(x)) {
                let j = (1..=x.len()).rev().find(|&i| c.contains(x[i - 1])).unwrap_or(0);
                if best.as_ref().is_none_or(|(bj, _)| j > *bj) {
                    best = Some((j, x.to_vec()));
                }
            }
            true
        });
        let (j, x) = best?;
        if j == 0 {
            return None;
        }
        let mut fixed = x;
        fixed.remove(j - 1);
        let wt = WitnessTuple::new(j, fixed).unwrap();
        self.covers(&wt, all).then_some(wt)
    }

    // d = 2, C_r(G) = G: slots from r down to 1, fixed entries over G'
    // representatives, keeping tuples whose slot values generate gamma_r
    fn two_gen_full(&mut self, all: &[Element]) -> Option<WitnessTuple> {
        let js: Vec<usize> = (1..=self.r).rev().collect();
        let t = self.ctx.derived_transversal().to_vec();
        let cap = (50_000_000 / self.group().order() as u64).max(1000);
        self.sweep(&js, |_, _| t.clone(), all, cap)
    }

    // d = 2, C_r(G) != G: j >= 2, x_1..x_{j-1} over G' representatives,
    // x_{j+1}..x_r over representatives outside C_r(G), slot over C_r(G)
    fn two_gen_restricted(&mut self, c: &Subgroup) -> Option<WitnessTuple> {
        let t = self.ctx.derived_transversal().to_vec();
        let outside: Vec<Element> = t.iter().copied().filter(|&x| !c.contains(x)).collect();
        let js: Vec<usize> = (2..=self.r).rev().collect();
        let cap = (50_000_000 / self.group().order() as u64).max(1000);
        self.sweep(&js, |j, i| if i + 1 < j { t.clone() } else { outside.clone() }, c.elements(), cap)
    }
}

/// Classifies the branch and, when it applies, searches for a witness whose
/// slot values are exactly `gamma_r(G)`.
///
/// Guided candidates by branch:
/// * cyclic, `p` odd: tuples over the `G'` representatives whose value
///   generates `gamma_r(G)`, slot `r`;
/// * cyclic, `p = 2`: the generating tuple maximizing the last position `j`
///   with `x_j` in `C_G(gamma_r / gamma_r^4)`, slot `j`;
/// * two generators, `C_r(G) = G`: slots `r` down to `1` with fixed entries
///   over the `G'` representatives;
/// * two generators, `C_r(G) != G`: first a witness whose slot runs over
///   `C_r(G)` only (slots `j >= 2`, trailing entries outside `C_r(G)`).
///
/// Every stage falls through to the exhaustive sweep described in the module
/// docs.
pub fn find_witness(ctx: &GroupContext<'_>, r: usize) -> Result<TheoremVerdict, CheckError> {
    let hypotheses = ctx.hypotheses(r)?;
    let g = ctx.group();
    let mut verdict = TheoremVerdict {
        hypotheses: hypotheses.clone(),
        witness: None,
        equality_holds: false,
        restricted: None,
        stats: SearchStats::default(),
        reverified: None,
        values: None,
    };
    if hypotheses.branch == Branch::NotApplicable {
        verdict.stats.strategy = "none";
        return Ok(verdict);
    }
    if ctx.gamma(r).is_trivial() {
        verdict.witness = Some(WitnessTuple::new(1, vec![Element::IDENTITY; r - 1])?);
        verdict.equality_holds = true;
        verdict.stats.strategy = "trivial";
        return Ok(verdict);
    }
    let all: Vec<Element> = g.elements().collect();
    let mut search = Search::new(ctx, r);
    let mut found: Option<(WitnessTuple, &'static str)> = match hypotheses.branch {
        Branch::CyclicAnyP if g.p() == 2 => search.cyclic_two(&all).map(|w| (w, "guided_cyclic_two")),
        Branch::CyclicAnyP => search.cyclic_odd(&all).map(|w| (w, "guided_cyclic_odd")),
        Branch::TwoGenOddP if hypotheses.c_equals_g => search.two_gen_full(&all).map(|w| (w, "guided_two_gen")),
        Branch::TwoGenOddP => {
            let c = ctx.c_r(r)?;
            let restricted = match search.two_gen_restricted(&c) {
                Some(w) => Some((w, "guided_restricted")),
                None => search.fallback(c.elements()).map(|(w, _)| (w, "restricted_fallback")),
            };
            verdict.restricted =
                Some(RestrictedCheck { covers: restricted.is_some(), witness: restricted.as_ref().map(|(w, _)| w.clone()) });
            restricted
        }
        Branch::NotApplicable => unreachable!(),
    };
    if found.is_none() {
        found = search.fallback(&all);
    }
    verdict.stats.candidates = search.candidates;
    if let Some((wt, strategy)) = found {
        verdict.witness = Some(wt);
        verdict.equality_holds = true;
        verdict.stats.strategy = strategy;
    } else {
        verdict.stats.strategy = "exhausted";
    }
    Ok(verdict)
}

/// [`find_witness`] plus an independent recomputation of the slot set, and a
/// report on whether all `gamma_r`-values fill `gamma_r(G)`.
pub fn check_theorem_a(ctx: &GroupContext<'_>, r: usize) -> Result<TheoremVerdict, CheckError> {
    let mut verdict = find_witness(ctx, r)?;
    let g = ctx.group();
    let gamma = ctx.gamma(r);
    if let Some(wt) = &verdict.witness {
        let set = slot_value_set(g, r, wt)?;
        verdict.reverified = Some(set == *gamma.as_set());
    }
    let values = OuterWord::gamma(r)?.value_set(g)?;
    verdict.values = Some(ValueSetReport {
        value_count: values.len(),
        gamma_order: gamma.order(),
        values_in_gamma: values.is_subset(gamma.as_set()),
        values_equal_gamma: values == *gamma.as_set(),
    });
    Ok(verdict)
}

/// Result of testing the two conditions of the linking step over the
/// conjugate tuples `y_i in x_i^G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingOutcome {
    /// `L` lies in the union of the cosets `N w(y_1, ..., g, ..., y_r)`.
    pub condition_i: bool,
    /// `N` lies in the slot value set.
    pub condition_ii: bool,
    /// `L` lies in the slot value set.
    pub conclusion: bool,
    pub tuples: u64,
    pub exhaustive: bool,
    /// First tuple breaking a condition or the conclusion.
    pub failure: Option<String>,
}

impl LinkingOutcome {
    /// Both conditions hold.
    pub fn holds(&self) -> bool {
        self.condition_i && self.condition_ii
    }

    /// The implication (conditions imply conclusion) was not violated.
    pub fn consistent(&self) -> bool {
        !self.holds() || self.conclusion
    }
}

const LINKING_TUPLE_BUDGET: u64 = 1 << 20;

/// Tests both conditions for `w`, `N <= L` and the fixed entries of
/// `witness`, over all tuples of conjugates (seeded sample beyond a budget of
/// about `2^20 / |G|` tuples). The conclusion is checked directly as well.
pub fn linking_step(
    ctx: &GroupContext<'_>,
    w: &OuterWord,
    n: &Subgroup,
    l: &Subgroup,
    witness: &WitnessTuple,
) -> Result<LinkingOutcome, CheckError> {
    if !n.is_subgroup_of(l) {
        return Err(SubgroupError::NotContained.into());
    }
    w.check()?;
    let g = ctx.group();
    if witness.r() != w.arity() {
        return Err(crate::words::WordError::WitnessLength { expected: w.arity() - 1, got: witness.fixed().len() }.into());
    }
    let classes: Vec<Vec<Element>> = witness.fixed().iter().map(|&x| g.conjugacy_class(x).elements().to_vec()).collect();
    let dims: Vec<usize> = classes.iter().map(Vec::len).collect();
    let budget = (LINKING_TUPLE_BUDGET / g.order() as u64).max(1);
    let plan = Plan::with_limits(&dims, derive_seed(0, "linking", w.arity()), budget as u128, budget as usize);
    let exhaustive = plan.is_exhaustive();
    let mut out =
        LinkingOutcome { condition_i: true, condition_ii: true, conclusion: true, tuples: 0, exhaustive, failure: None };
    let order = g.order() as usize;
    let mut args = vec![Element::IDENTITY; w.arity()];
    plan.run(|idx| {
        let ys: Vec<Element> = idx.iter().zip(&classes).map(|(&i, c)| c[i]).collect();
        let tuple = WitnessTuple::new(witness.slot(), ys).expect("slot in range");
        let mut values: BitVec = BitVec::repeat(false, order);
        for x in g.elements() {
            for (a, v) in args.iter_mut().zip(tuple.with_slot(x)) {
                *a = v;
            }
            values.set(w.eval_raw(g, &args).index(), true);
        }
        let value_set = ElementSet::from_mask(values.clone());
        let mut cosets: BitVec = BitVec::repeat(false, order);
        for s in value_set.iter() {
            for &m in n.elements() {
                cosets.set(g.multiply(m, s).index(), true);
            }
        }
        let cond_i = l.elements().iter().all(|x| cosets[x.index()]);
        let cond_ii = n.elements().iter().all(|x| values[x.index()]);
        let concl = l.elements().iter().all(|x| values[x.index()]);
        out.tuples += 1;
        if (!cond_i || !cond_ii || !concl) && out.failure.is_none() {
            let ys: Vec<String> = tuple.fixed().iter().map(|&y| g.format_element(y)).collect();
            out.failure = Some(format!(
                "y = ({}) condition_i={} condition_ii={} conclusion={}",
                ys.join(" "),
                cond_i,
                cond_ii,
                concl
            ));
        }
        out.condition_i &= cond_i;
        out.condition_ii &= cond_ii;
        out.conclusion &= concl;
        true
    });
    Ok(out)
}
