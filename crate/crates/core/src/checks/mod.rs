//! Lower-central-word checks: the centralizer-type subgroups `C_r(G)`,
//! `C_i^r(G)`, `D_r(U)` and `E_r(R)`, a suite of lemma checks, and the search
//! for a tuple `x_1, ..., x_{j-1}, x_{j+1}, ..., x_r` whose single free slot
//! sweeps out all of `gamma_r(G)`.

mod lemmas;
mod witness;

use alloc::string::String;
use alloc::vec::Vec;
use core::cell::OnceCell;
use core::time::Duration;

use thiserror::Error;

use crate::pc::{Element, PcGroup};
use crate::subgroup::{ElementSet, Subgroup, SubgroupError};
use crate::words::WordError;

pub use lemmas::{lemma_suite, run_lemma, GROUP_LEMMAS, R_LEMMAS};
pub use witness::{
    check_theorem_a, find_witness, linking_step, LinkingOutcome, RestrictedCheck, SearchStats, TheoremVerdict, ValueSetReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("r must be at least 2, got {0}")]
    RTooSmall(usize),
    #[error("j must satisfy 2 <= j <= r = {r}, got {j}")]
    JOutOfRange { j: usize, r: usize },
    #[error("subgroup is not maximal among proper subgroups of gamma_{r} normalized by {by}")]
    NotMaximal { r: usize, by: &'static str },
    #[error("unknown lemma id `{0}`")]
    UnknownLemma(String),
    #[error(transparent)]
    Subgroup(#[from] SubgroupError),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Base seed for sampled lemma instances.
    pub seed: u64,
    /// Counterexamples kept per lemma report.
    pub max_failures: usize,
    /// Normal subgroups are enumerated completely when there are at most
    /// this many; otherwise a fixed family of characteristic subgroups and
    /// normal closures is used.
    pub normal_limit: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { seed: 1, max_failures: 20, normal_limit: 128 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `gamma_r(G)` cyclic (or trivial), any prime.
    CyclicAnyP,
    /// `d(gamma_r(G)) = 2` and `p` odd.
    TwoGenOddP,
    NotApplicable,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::CyclicAnyP => "cyclic",
            Branch::TwoGenOddP => "two_generator_odd",
            Branch::NotApplicable => "not_applicable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypotheses {
    pub r: usize,
    pub p: u32,
    pub d_gamma_r: u32,
    pub branch: Branch,
    pub c_equals_g: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaStatus {
    Pass,
    Fail,
    /// No instance satisfied the hypotheses.
    Vacuous,
    /// Not run on this group (size bound).
    Skipped,
}

impl LemmaStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            LemmaStatus::Pass => "pass",
            LemmaStatus::Fail => "fail",
            LemmaStatus::Vacuous => "vacuous",
            LemmaStatus::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub id: &'static str,
    /// `None` for checks that do not depend on `r`.
    pub r: Option<usize>,
    pub status: LemmaStatus,
    pub instances: u64,
    pub failure_count: u64,
    /// Counterexample descriptors, at most `max_failures` of them.
    pub failures: Vec<String>,
    /// Whether every instance family was enumerated completely.
    pub exhaustive: bool,
    /// Seed of the sampled families, if any were sampled.
    pub seed: Option<u64>,
    pub notes: Vec<String>,
    /// Filled in by callers that can read a clock.
    pub elapsed: Option<Duration>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

/// `E_r(R)` with its subgroup flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralizerSet {
    pub set: ElementSet,
    pub is_subgroup: bool,
}

/// Normal subgroups used as lemma instances.
#[derive(Debug, Clone)]
pub struct NormalFamily {
    pub subgroups: Vec<Subgroup>,
    /// All normal subgroups, as opposed to the fallback family.
    pub complete: bool,
}

/// A group with cached derived data shared by the checks.
pub struct GroupContext<'a> {
    group: &'a PcGroup,
    series: Vec<Subgroup>,
    center: OnceCell<Subgroup>,
    derived_transversal: OnceCell<Vec<Element>>,
    normals: OnceCell<NormalFamily>,
    normal_limit: usize,
}

impl<'a> GroupContext<'a> {
    pub fn new(group: &'a PcGroup) -> Self {
        Self::with_options(group, &CheckOptions::default())
    }

    pub fn with_options(group: &'a PcGroup, opts: &CheckOptions) -> Self {
        GroupContext {
            group,
            series: group.lower_central_series(),
            center: OnceCell::new(),
            derived_transversal: OnceCell::new(),
            normals: OnceCell::new(),
            normal_limit: opts.normal_limit,
        }
    }

    pub fn group(&self) -> &'a PcGroup {
        self.group
    }

    /// `gamma_i(G)`; `i = 0` is read as `G`.
    pub fn gamma(&self, i: usize) -> &Subgroup {
        let idx = i.max(1) - 1;
        self.series.get(idx).unwrap_or_else(|| self.series.last().unwrap())
    }

    pub fn class(&self) -> usize {
        self.series.len() - 1
    }

    pub fn center(&self) -> &Subgroup {
        self.center.get_or_init(|| self.group.center())
    }

    /// Lexicographically least representatives of the cosets of `G'`.
    pub fn derived_transversal(&self) -> &[Element] {
        self.derived_transversal.get_or_init(|| self.group.transversal(self.gamma(2)))
    }

    pub fn normal_family(&self) -> &NormalFamily {
        self.normals.get_or_init(|| match self.group.normal_subgroups(self.normal_limit) {
            Some(subgroups) => NormalFamily { subgroups, complete: true },
            None => NormalFamily { subgroups: self.fallback_normals(), complete: false },
        })
    }

    // lower and upper central series, their power subgroups, the Frattini
    // subgroup and the normal closures of the pc generators and their tails
    fn fallback_normals(&self) -> Vec<Subgroup> {
        let g = self.group;
        let mut out: Vec<Subgroup> = Vec::new();
        let push = |s: Subgroup, out: &mut Vec<Subgroup>| {
            if !out.contains(&s) {
                out.push(s);
            }
        };
        let mut upper = Vec::new();
        let mut z = g.trivial_subgroup();
        loop {
            upper.push(z.clone());
            let gens = g.generators();
            let set = g
                .elements()
                .filter(|&x| gens.iter().all(|&t| z.contains(g.commutator(x, t))));
            let next = g.closure_of_set(&ElementSet::from_elements(g, set));
            if next == z {
                break;
            }
            z = next;
        }
        let mut bases: Vec<Subgroup> = self.series.clone();
        bases.extend(upper);
        bases.push(g.frattini(&g.whole_group()));
        for b in bases {
            let mut cur = b;
            loop {
                let trivial = cur.is_trivial();
                push(cur.clone(), &mut out);
                if trivial {
                    break;
                }
                cur = g.power_subgroup(&cur, 1);
            }
        }
        for k in 0..g.n() {
            push(g.normal_closure(&[g.generator(k)]), &mut out);
            push(g.normal_closure(&g.generators()[k..]), &mut out);
        }
        out.sort();
        out
    }

    /// `C_r(G) = C_G(gamma_r(G) / gamma_r(G)^p)`.
    pub fn c_r(&self, r: usize) -> Result<Subgroup, CheckError> {
        if r < 2 {
            return Err(CheckError::RTooSmall(r));
        }
        let g = self.group;
        let gr = self.gamma(r);
        let set = g.centralizer_section(gr, &g.power_subgroup(gr, 1))?;
        Ok(g.closure_of_set(&set))
    }

    /// `C_i^r(G)` for `i = j, ..., r`, returned in ascending `i`. The top term
    /// is `gamma_r(G)^p` and each `C_i^r = C_{gamma_i(G)}(G / C_{i+1}^r)`.
    pub fn c_tower(&self, r: usize, j: usize) -> Result<Vec<Subgroup>, CheckError> {
        if r < 2 {
            return Err(CheckError::RTooSmall(r));
        }
        if j < 2 || j > r {
            return Err(CheckError::JOutOfRange { j, r });
        }
        let g = self.group;
        let whole = g.whole_group();
        let mut tower = alloc::vec![g.power_subgroup(self.gamma(r), 1)];
        for i in (j..r).rev() {
            let above = tower.last().unwrap();
            let cent = g.centralizer_section(&whole, above)?;
            let set = cent.intersection(self.gamma(i).as_set());
            tower.push(g.closure_of_set(&set));
        }
        tower.reverse();
        Ok(tower)
    }

    /// The `U` with `U max_G gamma_r(G)`.
    pub fn maximal_normal_in_gamma(&self, r: usize) -> Vec<Subgroup> {
        self.group
            .maximal_normalized_subgroups(self.gamma(r), &self.group.whole_group())
            .expect("gamma_r is normal")
    }

    /// The `R` with `R max_{gamma_{r-1}(G)} gamma_r(G)`.
    pub fn maximal_in_gamma_under(&self, r: usize) -> Vec<Subgroup> {
        self.group
            .maximal_normalized_subgroups(self.gamma(r), self.gamma(r - 1))
            .expect("gamma_r is normal")
    }

    /// `D_r(U) = C_{gamma_{r-1}(G)}(G / U)` for `U max_G gamma_r(G)`.
    pub fn d_r(&self, r: usize, u: &Subgroup) -> Result<Subgroup, CheckError> {
        if r < 2 {
            return Err(CheckError::RTooSmall(r));
        }
        if !self.maximal_normal_in_gamma(r).contains(u) {
            return Err(CheckError::NotMaximal { r, by: "G" });
        }
        Ok(self.d_r_unchecked(r, u))
    }

    pub(crate) fn d_r_unchecked(&self, r: usize, u: &Subgroup) -> Subgroup {
        let g = self.group;
        let cent = g.centralizer_section(&g.whole_group(), u).expect("U lies in G");
        g.closure_of_set(&cent.intersection(self.gamma(r - 1).as_set()))
    }

    /// `E_r(R) = C_G(gamma_{r-1}(G) / R)` for `R max_{gamma_{r-1}(G)} gamma_r(G)`.
    pub fn e_r(&self, r: usize, rr: &Subgroup) -> Result<CentralizerSet, CheckError> {
        if r < 2 {
            return Err(CheckError::RTooSmall(r));
        }
        if !self.maximal_in_gamma_under(r).contains(rr) {
            return Err(CheckError::NotMaximal { r, by: "gamma_{r-1}" });
        }
        Ok(self.e_r_unchecked(r, rr))
    }

    pub(crate) fn e_r_unchecked(&self, r: usize, rr: &Subgroup) -> CentralizerSet {
        let set = self.group.centralizer_section(self.gamma(r - 1), rr).expect("R lies in gamma_{r-1}");
        let is_subgroup = set.to_subgroup(self.group).is_some();
        CentralizerSet { set, is_subgroup }
    }

    pub fn hypotheses(&self, r: usize) -> Result<Hypotheses, CheckError> {
        let c = self.c_r(r)?;
        let g = self.group;
        let d = g.rank(self.gamma(r));
        let branch = if d <= 1 {
            Branch::CyclicAnyP
        } else if d == 2 && g.p() != 2 {
            Branch::TwoGenOddP
        } else {
            Branch::NotApplicable
        };
        Ok(Hypotheses { r, p: g.p(), d_gamma_r: d, branch, c_equals_g: c.order() == g.order() as usize })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn group(name: &str) -> PcGroup {
        PcGroup::new(families::from_name(name).unwrap()).unwrap()
    }

    #[test]
    fn c_r_examples() {
        let h = group("heis(3)");
        let ctx = GroupContext::new(&h);
        assert_eq!(ctx.c_r(2).unwrap(), h.whole_group());
        assert_eq!(ctx.c_r(1), Err(CheckError::RTooSmall(1)));
        let e = group("elab(3,2)");
        assert_eq!(GroupContext::new(&e).c_r(2).unwrap(), e.whole_group());
        let w = group("wreath(3)");
        let ctx = GroupContext::new(&w);
        let c = ctx.c_r(2).unwrap();
        assert!(w.order() as usize / c.order() <= 3);
    }

    #[test]
    fn c_tower_examples() {
        let w = group("wreath(3)");
        let ctx = GroupContext::new(&w);
        let tower = ctx.c_tower(3, 2).unwrap();
        assert_eq!(tower.len(), 2);
        assert!(tower[1].is_trivial());
        let expect = w.intersection(ctx.gamma(2), &w.center());
        assert_eq!(tower[0], expect);
        let h = group("heis(3)");
        let ctx = GroupContext::new(&h);
        assert!(ctx.c_tower(2, 2).unwrap()[0].is_trivial());
        assert_eq!(ctx.c_tower(3, 1), Err(CheckError::JOutOfRange { j: 1, r: 3 }));
        assert_eq!(ctx.c_tower(3, 4), Err(CheckError::JOutOfRange { j: 4, r: 3 }));
    }

    #[test]
    fn d_and_e_examples() {
        let h = group("heis(3)");
        let ctx = GroupContext::new(&h);
        let one = h.trivial_subgroup();
        // gamma_2 has order p, so D_2(1) = G ∩ Z(G)
        assert_eq!(ctx.d_r(2, &one).unwrap(), h.center());
        let e = ctx.e_r(2, &one).unwrap();
        assert_eq!(e.set.len(), 3);
        assert!(e.is_subgroup);
        assert!(matches!(ctx.d_r(2, ctx.gamma(2)), Err(CheckError::NotMaximal { .. })));

        let w = group("wreath(3)");
        let ctx = GroupContext::new(&w);
        for u in ctx.maximal_normal_in_gamma(2) {
            assert_ne!(ctx.d_r(2, &u).unwrap(), w.whole_group());
        }
        for rr in ctx.maximal_in_gamma_under(2) {
            assert_ne!(ctx.e_r(2, &rr).unwrap().set.len(), w.order() as usize);
        }
    }

    #[test]
    fn hypotheses_branches() {
        let cases = [
            ("heis(3)", 2, 1, Branch::CyclicAnyP),
            ("wreath(3)", 2, 2, Branch::TwoGenOddP),
            ("wreath(3)", 3, 1, Branch::CyclicAnyP),
            ("dihedral(16)", 2, 1, Branch::CyclicAnyP),
            ("dihedral(8)xdihedral(8)", 2, 2, Branch::NotApplicable),
            ("elab(3,2)", 2, 0, Branch::CyclicAnyP),
        ];
        for (name, r, d, branch) in cases {
            let g = group(name);
            let hyp = GroupContext::new(&g).hypotheses(r).unwrap();
            assert_eq!((hyp.d_gamma_r, hyp.branch), (d, branch), "{name} r={r}");
        }
    }

    #[test]
    fn normal_families() {
        let g = group("dihedral(8)");
        let ctx = GroupContext::new(&g);
        assert!(ctx.normal_family().complete);
        assert_eq!(ctx.normal_family().subgroups.len(), 6);
        let opts = CheckOptions { normal_limit: 3, ..CheckOptions::default() };
        let ctx = GroupContext::with_options(&g, &opts);
        let fam = ctx.normal_family();
        assert!(!fam.complete);
        assert!(fam.subgroups.iter().all(|n| g.is_normal(n)));
        assert!(fam.subgroups.contains(&g.whole_group()));
        assert!(fam.subgroups.contains(&g.trivial_subgroup()));
    }
}
