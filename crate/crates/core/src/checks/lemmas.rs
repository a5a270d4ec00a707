//! Lemma checks. Each check first detects its hypotheses, then counts an
//! instance only when they hold; a report with no instance is vacuous.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::witness::{find_witness, linking_step};
use super::{CheckError, CheckOptions, GroupContext, LemmaReport, LemmaStatus};
use crate::pc::{Element, PcGroup};
use crate::sample::{derive_seed, Plan};
use crate::subgroup::Subgroup;
use crate::words::{OuterWord, WitnessTuple};

/// Checks that do not depend on `r`.
pub const GROUP_LEMMAS: &[&str] =
    &["comm_id", "hall_petrescu", "prelim", "inclusion", "separation", "separation_corollary", "c2"];

/// Checks run for each `r`.
pub const R_LEMMAS: &[&str] = &[
    "powerful",
    "powerful_subgroups",
    "index",
    "linking",
    "petresco_easy",
    "petresco_out",
    "petresco_hard",
    "de",
    "de2",
    "c",
];

/// Groups up to this order get the separation checks.
const SEPARATION_MAX_ORDER: u32 = 81;
const SUBGROUP_LIMIT: usize = 5000;

struct Tally {
    id: &'static str,
    r: Option<usize>,
    instances: u64,
    failure_count: u64,
    failures: Vec<String>,
    cap: usize,
    exhaustive: bool,
    seed: u64,
    sampled: bool,
    plans: u64,
    notes: Vec<String>,
    skipped: bool,
}

impl Tally {
    fn new(id: &'static str, r: Option<usize>, opts: &CheckOptions) -> Self {
        Tally {
            id,
            r,
            instances: 0,
            failure_count: 0,
            failures: Vec::new(),
            cap: opts.max_failures,
            exhaustive: true,
            seed: derive_seed(opts.seed, id, r.unwrap_or(0)),
            sampled: false,
            plans: 0,
            notes: Vec::new(),
            skipped: false,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.fail(describe());
        }
    }

    fn fail(&mut self, what: String) {
        self.failure_count += 1;
        if self.failures.len() < self.cap {
            self.failures.push(what);
        }
    }

    fn plan(&mut self, dims: &[usize]) -> Plan {
        let plan = Plan::new(dims, derive_seed(self.seed, "plan", self.plans as usize));
        self.plans += 1;
        if !plan.is_exhaustive() {
            self.exhaustive = false;
            self.sampled = true;
        }
        plan
    }

    fn note(&mut self, text: String) {
        if !self.notes.contains(&text) {
            self.notes.push(text);
        }
    }

    fn finish(self) -> LemmaReport {
        let status = if self.skipped {
            LemmaStatus::Skipped
        } else if self.failure_count > 0 {
            LemmaStatus::Fail
        } else if self.instances == 0 {
            LemmaStatus::Vacuous
        } else {
            LemmaStatus::Pass
        };
        LemmaReport {
            id: self.id,
            r: self.r,
            status,
            instances: self.instances,
            failure_count: self.failure_count,
            failures: self.failures,
            exhaustive: self.exhaustive,
            seed: self.sampled.then_some(self.seed),
            notes: self.notes,
            elapsed: None,
        }
    }
}

fn el(i: usize) -> Element {
    Element::from_code(i as u32)
}

fn show(g: &PcGroup, xs: &[Element]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| g.format_element(x)).collect();
    parts.join(" ")
}

fn describe_subgroup(s: &Subgroup) -> String {
    format!("order {} first {:?}", s.order(), s.elements().iter().take(4).map(|e| e.code()).collect::<Vec<_>>())
}

fn pow_p(p: u32, k: u32) -> i64 {
    (p as i64).pow(k)
}

/// Smallest `e` with `H^(p^e) = 1`.
fn exponent_log(g: &PcGroup, h: &Subgroup) -> u32 {
    let mut e = 0;
    let mut cur = h.clone();
    while !cur.is_trivial() {
        cur = g.power_subgroup(&cur, 1);
        e += 1;
    }
    e
}

/// `H, [H,H], [H,H,H], ...` ending with the trivial term.
fn series_of(g: &PcGroup, h: &Subgroup) -> Vec<Subgroup> {
    let mut out = vec![h.clone()];
    while !out.last().unwrap().is_trivial() {
        let next = g.commutator_subgroup(out.last().unwrap(), h);
        out.push(next);
    }
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn valuation(mut m: u64, p: u64) -> u32 {
    let mut v = 0;
    while m.is_multiple_of(p) {
        m /= p;
        v += 1;
    }
    v
}

fn note_family(ctx: &GroupContext<'_>, t: &mut Tally) {
    let fam = ctx.normal_family();
    if !fam.complete {
        t.note(format!(
            "normal subgroups: more than {} in this group, using a family of {} characteristic subgroups and normal closures",
            ctx.normal_limit,
            fam.subgroups.len()
        ));
    }
}

fn petresco_hypothesis(ctx: &GroupContext<'_>, r: usize) -> bool {
    let g = ctx.group();
    let d = g.rank(ctx.gamma(r));
    if g.p() == 2 {
        d == 1
    } else {
        d <= 2
    }
}

// commutator identities (i)-(iv) on element triples
fn comm_id(ctx: &GroupContext<'_>, t: &mut Tally) {
    let g = ctx.group();
    let n = g.order() as usize;
    let c = |a, b| g.commutator(a, b);
    let inv = |a| g.inverse(a);
    let cj = |a, b| g.conjugate(a, b);
    let m = |a, b| g.multiply(a, b);
    t.plan(&[n, n, n]).run(|i| {
        let (x, y, z) = (el(i[0]), el(i[1]), el(i[2]));
        let one = c(x, y) == inv(c(y, x));
        let two = c(m(x, y), z) == m(cj(c(x, z), y), c(y, z)) && c(x, m(y, z)) == m(c(x, z), cj(c(x, y), z));
        let three = c(x, inv(y)) == cj(c(y, x), inv(y)) && c(inv(x), y) == cj(c(y, x), inv(x));
        let hw = m(m(cj(c(c(x, inv(y)), z), y), cj(c(c(y, inv(z)), x), z)), cj(c(c(z, inv(x)), y), x));
        let four = hw.is_identity();
        t.check(one && two && three && four, || {
            format!("x y z = {}: (i) {one} (ii) {two} (iii) {three} (iv) {four}", show(g, &[x, y, z]))
        });
        true
    });
}

// [x,y^n]^-1 [x,y]^n lies in the product of gamma_i(H)^binom(n,i), H = <y, [x,y]>
fn hall_petrescu(ctx: &GroupContext<'_>, t: &mut Tally) {
    let g = ctx.group();
    let p = g.p() as u64;
    let mut ns = vec![2u64, 3, p, p * p];
    ns.sort_unstable();
    ns.dedup();
    let size = g.order() as usize;
    t.plan(&[size, size, ns.len()]).run(|i| {
        let (x, y, n) = (el(i[0]), el(i[1]), ns[i[2]]);
        let xy = g.commutator(x, y);
        let d = g.left_quotient(g.commutator(x, g.power(y, n as i64)), g.power(xy, n as i64));
        let ok = d.is_identity() || {
            let h = g.closure(&[y, xy]);
            let series = series_of(g, &h);
            let mut m = g.trivial_subgroup();
            for k in 2..=n as usize {
                match series.get(k - 1) {
                    Some(gk) if !gk.is_trivial() => {
                        let v = valuation(binomial(n, k as u64), p);
                        m = g.join(&m, &g.power_subgroup(gk, v));
                    }
                    _ => break,
                }
            }
            m.contains(d)
        };
        t.check(ok, || format!("x y = {} n = {n}", show(g, &[x, y])));
        true
    });
}

// (i) [L^n, N] <= [L,N]^n [L,N,L] for normal L, N and n in {p, p^2};
// (ii) [L, gamma_i(G)] <= [L, _i G]
fn prelim(ctx: &GroupContext<'_>, t: &mut Tally) {
    let g = ctx.group();
    note_family(ctx, t);
    let fam = &ctx.normal_family().subgroups;
    let powers: Vec<[Subgroup; 2]> = fam.iter().map(|l| [g.power_subgroup(l, 1), g.power_subgroup(l, 2)]).collect();
    t.plan(&[fam.len(), fam.len()]).run(|i| {
        let (l, n) = (&fam[i[0]], &fam[i[1]]);
        let ln = g.commutator_subgroup(l, n);
        let lnl = g.commutator_subgroup(&ln, l);
        for k in 1..=2u32 {
            let lhs = g.commutator_subgroup(&powers[i[0]][k as usize - 1], n);
            let ok = lhs.is_trivial() || lhs.is_subgroup_of(&g.join(&g.power_subgroup(&ln, k), &lnl));
            t.check(ok, || format!("(i) L {} N {} n = p^{k}", describe_subgroup(l), describe_subgroup(n)));
        }
        true
    });
    for l in fam {
        for i in 1..=ctx.class() + 1 {
            let lhs = g.commutator_subgroup(l, ctx.gamma(i));
            let rhs = g.iterated_commutator(l, i);
            t.check(lhs.is_subgroup_of(&rhs), || format!("(ii) L {} i = {i}", describe_subgroup(l)));
        }
    }
}

// N <= K N^p [N, G] implies N <= K
fn inclusion(ctx: &GroupContext<'_>, t: &mut Tally) {
    let g = ctx.group();
    note_family(ctx, t);
    let fam = &ctx.normal_family().subgroups;
    let whole = g.whole_group();
    let lower: Vec<Subgroup> =
        fam.iter().map(|n| g.join(&g.power_subgroup(n, 1), &g.commutator_subgroup(n, &whole))).collect();
    t.plan(&[fam.len(), fam.len()]).run(|i| {
        let (n, k) = (&fam[i[0]], &fam[i[1]]);
        if n.is_subgroup_of(&g.join(k, &lower[i[0]])) {
            t.check(n.is_subgroup_of(k), || format!("N {} K {}", describe_subgroup(n), describe_subgroup(k)));
        }
        true
    });
}

fn separation(ctx: &GroupContext<'_>, t: &mut Tally) -> Result<(), CheckError> {
    let g = ctx.group();
    if g.order() > SEPARATION_MAX_ORDER {
        t.skipped = true;
        t.note(format!("run on groups of order at most {SEPARATION_MAX_ORDER}"));
        return Ok(());
    }
    let size = g.order() as usize;
    let mut closures: BTreeMap<u32, Subgroup> = BTreeMap::new();
    for r in 2..=3 {
        let w = OuterWord::gamma(r)?;
        for j in 1..=r {
            t.plan(&vec![size; r]).run(|i| {
                let args: Vec<Element> = i.iter().map(|&k| el(k)).collect();
                let h = args[j - 1];
                let ncl = closures.entry(h.code()).or_insert_with(|| g.normal_closure(&[h])).clone();
                let base = w.eval_raw(g, &args);
                let works = |hs: &[Element]| {
                    let mut lhs_args = args.clone();
                    let mut rhs_args: Vec<Element> = args.iter().zip(hs).map(|(&y, &c)| g.conjugate(y, c)).collect();
                    g.elements().all(|x| {
                        lhs_args[j - 1] = g.multiply(x, h);
                        rhs_args[j - 1] = g.conjugate(x, hs[j - 1]);
                        w.eval_raw(g, &lhs_args) == g.multiply(w.eval_raw(g, &rhs_args), base)
                    })
                };
                let hs = w.separation_conjugators(g, &args, j);
                let mut ok = hs.iter().all(|&c| ncl.contains(c)) && works(&hs);
                if !ok {
                    ok = search_conjugators(ncl.elements(), r, 20_000, &works);
                }
                t.check(ok, || format!("gamma_{r} slot {j} args {}", show(g, &args)));
                true
            });
        }
    }
    Ok(())
}

// bounded search over tuples from `pool`
fn search_conjugators(pool: &[Element], len: usize, cap: usize, works: &impl Fn(&[Element]) -> bool) -> bool {
    let mut idx = vec![0usize; len];
    for _ in 0..cap {
        let hs: Vec<Element> = idx.iter().map(|&i| pool[i]).collect();
        if works(&hs) {
            return true;
        }
        let mut pos = len;
        loop {
            if pos == 0 {
                return false;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < pool.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
    false
}

// [.., g h, ..] = [.., g, ..][.., h, ..] mod gamma_{n+s} for h in gamma_s
fn separation_corollary(ctx: &GroupContext<'_>, t: &mut Tally) {
    let g = ctx.group();
    if g.order() > SEPARATION_MAX_ORDER {
        t.skipped = true;
        t.note(format!("run on groups of order at most {SEPARATION_MAX_ORDER}"));
        return;
    }
    let size = g.order() as usize;
    for n in 2..=3usize {
        for s in 1..=2usize {
            let hs = ctx.gamma(s).elements().to_vec();
            let modulus = ctx.gamma(n + s).clone();
            for slot in 1..=n {
                let mut dims = vec![size; n];
                dims.push(hs.len());
                t.plan(&dims).run(|i| {
                    let mut xs: Vec<Element> = i[..n].iter().map(|&k| el(k)).collect();
                    let h = hs[i[n]];
                    let gx = xs[slot - 1];
                    let plain = g.commutator_of(&xs);
                    xs[slot - 1] = h;
                    let with_h = g.commutator_of(&xs);
                    xs[slot - 1] = g.multiply(gx, h);
                    let lhs = g.commutator_of(&xs);
                    let rhs = g.multiply(plain, with_h);
                    xs[slot - 1] = gx;
                    t.check(modulus.contains(g.left_quotient(rhs, lhs)), || {
                        format!("n = {n} s = {s} slot {slot} g_i = {} h = {}", show(g, &xs), g.format_element(h))
                    });
                    true
                });
            }
        }
    }
}

// D_2(U) <= C_2(G) for U max_G G', G non-abelian with d(G') <= 2
fn c2(ctx: &GroupContext<'_>, t: &mut Tally) -> Result<(), CheckError> {
    let g = ctx.group();
    let d = ctx.gamma(2);
    if d.is_trivial() || g.rank(d) > 2 {
        return Ok(());
    }
    let c = ctx.c_r(2)?;
    for u in ctx.maximal_normal_in_gamma(2) {
        let du = ctx.d_r_unchecked(2, &u);
        t.check(du.is_subgroup_of(&c), || format!("U {}", describe_subgroup(&u)));
    }
    Ok(())
}

// d(w(G)) = 2 implies w(G)' <= w(G)^(p^2)
fn powerful(ctx: &GroupContext<'_>, r: usize, t: &mut Tally) -> Result<(), CheckError> {
    let g = ctx.group();
    let mut words = vec![(OuterWord::gamma(r)?, ctx.gamma(r).clone())];
    if r == 4 {
        let w = OuterWord::parse("[[1,2],[3,4]]")?;
        let v = w.verbal_subgroup(g)?;
        words.push((w, v));
    }
    for (w, v) in words {
        if g.rank(&v) != 2 {
            continue;
        }
        let derived = g.commutator_subgroup(&v, &v);
        let ok = derived.is_subgroup_of(&g.power_subgroup(&v, 2)) && g.is_powerful(&v);
        t.check(ok, || format!("w = {w}"));
    }
    Ok(())
}

fn powerful_targets(ctx: &GroupContext<'_>, r: usize) -> Vec<(usize, Subgroup)> {
    let mut out: Vec<(usize, Subgroup)> = Vec::new();
    for i in [r - 1, r] {
        let x = ctx.gamma(i).clone();
        if !out.iter().any(|(_, y)| *y == x) {
            out.push((i, x));
        }
    }
    out
}

// every subgroup of a 2-generator powerful group is powerful
fn powerful_subgroups(ctx: &GroupContext<'_>, r: usize, t: &mut Tally) {
    let g = ctx.group();
    for (i, x) in powerful_targets(ctx, r) {
        if g.rank(&x) != 2 || !g.is_powerful(&x) {
            continue;
        }
        match g.subgroups_of(&x, SUBGROUP_LIMIT) {
            Some(subs) => {
                for h in subs {
                    t.check(g.is_powerful(&h), || format!("gamma_{i} subgroup {}", describe_subgroup(&h)));
                }
            }
            None => t.note(format!("gamma_{i}: more than {SUBGROUP_LIMIT} subgroups, not enumerated")),
        }
    }
}

// powerful, p odd, N <= L normal: |N : N^(p^i)| <= |L : L^(p^i)|
fn index(ctx: &GroupContext<'_>, r: usize, t: &mut Tally) {
    let g = ctx.group();
    if g.p() == 2 {
        return;
    }
    for (gi, x) in powerful_targets(ctx, r) {
        if !g.is_powerful(&x) {
            continue;
        }
        let Some(normals) = g.invariant_subgroups_between(&g.trivial_subgroup(), &x, x.generators(), SUBGROUP_LIMIT)
        else {
            t.note(format!("gamma_{gi}: more than {SUBGROUP_LIMIT} normal subgroups, not enumerated"));
            continue;
        };
        let e = exponent_log(g, &x);
        let powers: Vec<Vec<Subgroup>> =
            normals.iter().map(|n| (0..=e).map(|i| g.power_subgroup(n, i)).collect()).collect();
        for (a, n) in normals.iter().enumerate() {
            for (b, l) in normals.iter().enumerate() {
                if !n.is_subgroup_of(l) {
                    continue;
                }
                for (i, (np, lp)) in powers[a].iter().zip(&powers[b]).enumerate() {
                    let ok = n.order() / np.order() <= l.order() / lp.order() && np.is_subgroup_of(lp);
                    t.check(ok, || {
                        format!("gamma_{gi}: N {} L {} i = {i}", describe_subgroup(n), describe_subgroup(l))
                    });
                }
            }
        }
    }
}

// conditions (i) and (ii) imply the conclusion, along gamma_r^(p^k)
fn linking(ctx: &GroupContext<'_>, r: usize, t: &mut Tally) -> Result<(), CheckError> {
    let g = ctx.group();
    let w = OuterWord::gamma(r)?;
    let mut witnesses = Vec::new();
    if let Some(wt) = find_witness(ctx, r)?.witness {
        witnesses.push(wt);
    }
    let gens: Vec<Element> = (0..r - 1).map(|i| g.generator(i % g.n())).collect();
    witnesses.push(WitnessTuple::new(r, gens)?);
    let gr = ctx.gamma(r);
    let mut pairs = vec![(g.trivial_subgroup(), gr.clone()), (gr.clone(), gr.clone())];
    let mut cur = gr.clone();
    while !cur.is_trivial() {
        let next = g.power_subgroup(&cur, 1);
        pairs.push((next.clone(), cur));
        cur = next;
    }
    let mut premises = 0;
    for wt in &witnesses {
        for (n, l) in &pairs {
            let out = linking_step(ctx, &w, n, l, wt)?;
            if !out.exhaustive {
                t.exhaustive = false;
            }
            premises += out.holds() as u64;
            t.check(out.consistent(), || format!("N {} L {}: {:?}", describe_subgroup(n), describe_subgroup(l), out.failure));
        }
    }
    t.note(format!("conditions held in {premises} of {} instances", t.instances));
    Ok(())
}

// [x_1..x_r]^(p^k) = [[x_1..x_j]^(p^k), x_{j+1}..x_r] modulo gamma_r^(p^(k+1)),
// and modulo [R, _{r-i} G]^(p^(k+1)) with R the normal closure of [x_1..x_i]
fn petresco_easy(ctx: &GroupContext<'_>, r: usize, t: &mut Tally) {
    if !petresco_hypothesis(ctx, r) {
        return;
    }
    let g = ctx.group();
    let p = g.p();
    let gamma_pow: Vec<Subgroup> = (0..=3).map(|k| g.power_subgroup(ctx.gamma(r), k)).collect();
    let mut moduli: BTreeMap<(u32, usize, u32), Subgroup> = BTreeMap::new();
    let size = g.order() as usize;
    t.plan(&vec![size; r]).run(|i| {
        let xs: Vec<Element> = i.iter().map(|&k| el(k)).collect();
        let full = g.commutator_of(&xs);
        let mut bad: Option<String> = None;
        for k in 0..=2u32 {
            let lhs = g.power(full, pow_p(p, k));
            for j in 2..=r {
                let mut inner = vec![g.power(g.commutator_of(&xs[..j]), pow_p(p, k))];
                inner.extend_from_slice(&xs[j..]);
                let rhs = g.commutator_of(&inner);
                if lhs == rhs {
                    continue;
                }
                let q = g.left_quotient(rhs, lhs);
                if !gamma_pow[k as usize + 1].contains(q) {
                    bad.get_or_insert(format!("k = {k} j = {j} modulo gamma_r"));
                }
                for i in 1..=j {
                    let c = g.commutator_of(&xs[..i]);
                    let m = moduli.entry((c.code(), r - i, k + 1)).or_insert_with(|| {
                        g.power_subgroup(&g.iterated_commutator(&g.normal_closure(&[c]), r - i), k + 1)
                    });
                    if !m.contains(q) {
                        bad.get_or_insert(format!("k = {k} j = {j} i = {i} modulo [R, G..]"));
                    }
                }
            }
        }
        t.check(bad.is_none(), || format!("x = {}: {}", show(g, &xs), bad.clone().unwrap_or_default()));
        true
    });
}

// [K, H^(p^k), _{r-j} G] <= [K, H, _{r-j} G]^(p^k), K generated by
// gamma_{j-1}-values
fn petresco_out(ctx: &GroupContext<'_>, r: usize, t: &mut Tally) -> Result<(), CheckError> {
    if !petresco_hypothesis(ctx, r) {
        return Ok(());
    }
    let g = ctx.group();
    note_family(ctx, t);
    let fam = &ctx.normal_family().subgroups;
    let powers: Vec<[Subgroup; 3]> =
        fam.iter().map(|h| [h.clone(), g.power_subgroup(h, 1), g.power_subgroup(h, 2)]).collect();
    for j in 2..=r {
        let mut ks = vec![ctx.gamma(j - 1).clone()];
        let values = OuterWord::gamma(j - 1)?.value_set(g)?;
        let vals = values.elements();
        let step = (vals.len() / 12).max(1);
        for &v in vals.iter().step_by(step) {
            if ks.len() >= 7 {
                break;
            }
            let k = g.normal_closure(&[v]);
            if !ks.contains(&k) {
                ks.push(k);
            }
        }
        for k in &ks {
            for (hi, h) in fam.iter().enumerate() {
                let base = g.iterated_commutator(&g.commutator_subgroup(k, h), r - j);
                for e in 0..=2u32 {
                    let lhs = g.iterated_commutator(&g.commutator_subgroup(k, &powers[hi][e as usize]), r - j);
                    let ok = lhs.is_subgroup_of(&g.power_subgroup(&base, e));
                    t.check(ok, || {
                        format!("j = {j} K {} H {} k = {e}", describe_subgroup(k), describe_subgroup(h))
                    });
                }
            }
        }
    }
    Ok(())
}

// gamma_r^p <= N < L <= gamma_r normal, |L:N| = p, L = <v> N with
// v = [x_1, .., h, .., x_r]; under the detected hypotheses
// v^(p^k) = [x_1, .., h^(p^k), .., x_r] modulo N^(p^k) and
// L^(p^k) = <[x_1, .., h^(p^k), .., x_r]> N^(p^k)
fn petresco_hard(ctx: &GroupContext<'_>, r: usize, t: &mut Tally) {
    let g = ctx.group();
    let p = g.p();
    let gr = ctx.gamma(r);
    if gr.is_trivial() {
        return;
    }
    let d = g.rank(gr);
    let odd = p != 2 && d <= 2;
    let two = p == 2 && d == 1;
    if !odd && !two {
        return;
    }
    let grp = g.power_subgroup(gr, 1);
    let Some(between) = g.invariant_subgroups_between(&grp, gr, &g.generators(), SUBGROUP_LIMIT) else {
        t.note(format!("more than {SUBGROUP_LIMIT} normal subgroups between gamma_r^p and gamma_r"));
        return;
    };
    let pairs: Vec<(usize, usize)> = (0..between.len())
        .flat_map(|a| (0..between.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| {
            between[b].order() == between[a].order() * p as usize && between[a].is_subgroup_of(&between[b])
        })
        .collect();
    let kmax = exponent_log(g, gr);
    let powers: Vec<Vec<Subgroup>> =
        between.iter().map(|s| (0..=kmax).map(|k| g.power_subgroup(s, k)).collect()).collect();
    let whole = g.whole_group();
    let mut central: BTreeMap<(u32, usize), Subgroup> = BTreeMap::new();
    let size = g.order() as usize;
    t.plan(&vec![size; r]).run(|i| {
        let xs: Vec<Element> = i.iter().map(|&k| el(k)).collect();
        let v = g.commutator_of(&xs);
        for &(a, b) in &pairs {
            let (n, l) = (&between[a], &between[b]);
            if !l.contains(v) || n.contains(v) {
                continue;
            }
            for j in 1..=r {
                let h = xs[j - 1];
                let with_power = |e: i64| {
                    let mut ys = xs.clone();
                    ys[j - 1] = g.power(h, e);
                    g.commutator_of(&ys)
                };
                let holds = if odd {
                    let m = central.entry((h.code(), j)).or_insert_with(|| {
                        let hh = g.normal_closure(&[h]);
                        let inner = g.commutator_subgroup(&g.commutator_subgroup(ctx.gamma(j), &hh), &hh);
                        g.iterated_commutator(&inner, r - j)
                    });
                    let np = &powers[a][1];
                    g.commutator_subgroup(m, &whole).is_subgroup_of(np) && g.power_subgroup(m, 1).is_subgroup_of(np)
                } else {
                    let q = g.left_quotient(with_power(2), g.power(v, 2));
                    powers[a][1].contains(q)
                };
                if !holds {
                    continue;
                }
                let mut bad = None;
                for k in 0..=kmax {
                    let e = pow_p(p, k);
                    let b_k = with_power(e);
                    let q = g.left_quotient(b_k, g.power(v, e));
                    if !powers[a][k as usize].contains(q) {
                        bad.get_or_insert(format!("congruence fails at k = {k}"));
                    }
                    let gen = g.join(&g.closure(&[b_k]), &powers[a][k as usize]);
                    if gen != powers[b][k as usize] {
                        bad.get_or_insert(format!("L^(p^{k}) not generated at k = {k}"));
                    }
                }
                t.check(bad.is_none(), || {
                    format!("x = {} slot {j} N {}: {}", show(g, &xs), describe_subgroup(n), bad.clone().unwrap_or_default())
                });
            }
        }
        true
    });
}

// [x, G] = gamma_r iff x avoids every D_r(U); [gamma_{r-1}, y] = gamma_r iff
// y avoids every E_r(R)
fn de(ctx: &GroupContext<'_>, r: usize, t: &mut Tally) {
    let g = ctx.group();
    let gr = ctx.gamma(r);
    if gr.is_trivial() {
        return;
    }
    let below = ctx.gamma(r - 1);
    let gens = g.generators();
    let ds: Vec<Subgroup> = ctx.maximal_normal_in_gamma(r).iter().map(|u| ctx.d_r_unchecked(r, u)).collect();
    let xs = below.elements().to_vec();
    t.plan(&[xs.len()]).run(|i| {
        let x = xs[i[0]];
        let comms: Vec<Element> = gens.iter().map(|&y| g.commutator(x, y)).collect();
        let xg = g.invariant_closure(&g.trivial_subgroup(), &comms, &gens);
        let avoids = !ds.iter().any(|d| d.contains(x));
        t.check((xg.order() == gr.order()) == avoids, || format!("x = {}", g.format_element(x)));
        true
    });
    let es: Vec<_> = ctx.maximal_in_gamma_under(r).iter().map(|rr| ctx.e_r_unchecked(r, rr)).collect();
    let kgens = below.generators().to_vec();
    let size = g.order() as usize;
    t.plan(&[size]).run(|i| {
        let y = el(i[0]);
        let comms: Vec<Element> = kgens.iter().map(|&k| g.commutator(k, y)).collect();
        let ky = g.invariant_closure(&g.trivial_subgroup(), &comms, &kgens);
        let avoids = !es.iter().any(|e| e.set.contains(y));
        t.check((ky.order() == gr.order()) == avoids, || format!("y = {}", g.format_element(y)));
        true
    });
}

fn de2(ctx: &GroupContext<'_>, r: usize, t: &mut Tally) {
    let g = ctx.group();
    let gr = ctx.gamma(r);
    if g.rank(gr) != 2 {
        return;
    }
    let below = ctx.gamma(r - 1);
    let us = ctx.maximal_normal_in_gamma(r);
    let rs = ctx.maximal_in_gamma_under(r);
    let ds: Vec<Subgroup> = us.iter().map(|u| ctx.d_r_unchecked(r, u)).collect();
    let es: Vec<_> = rs.iter().map(|rr| ctx.e_r_unchecked(r, rr)).collect();
    for (u, d) in us.iter().zip(&ds) {
        t.check(d != below, || format!("(i) D_r(U) = gamma_(r-1) for U {}", describe_subgroup(u)));
    }
    for (rr, e) in rs.iter().zip(&es) {
        t.check(e.set.len() != g.order() as usize, || format!("(i) E_r(R) = G for R {}", describe_subgroup(rr)));
    }
    for (a, _) in us.iter().enumerate() {
        for b in 0..us.len() {
            for c in 0..us.len() {
                if b == c {
                    continue;
                }
                let meet = ds[b].as_set().intersection(ds[c].as_set());
                t.check(meet.is_subset(ds[a].as_set()), || format!("(ii) D: U#{a} V#{b} W#{c}"));
            }
        }
    }
    for a in 0..rs.len() {
        for b in 0..rs.len() {
            for c in 0..rs.len() {
                if b == c {
                    continue;
                }
                let meet = es[b].set.intersection(&es[c].set);
                t.check(meet.is_subset(&es[a].set), || format!("(ii) E: R#{a} S#{b} T#{c}"));
            }
        }
    }
    let grp = g.power_subgroup(gr, 1);
    for (u, d) in us.iter().zip(&ds) {
        for (rr, e) in rs.iter().zip(&es) {
            if u == rr {
                continue;
            }
            let ok = d.generators().iter().all(|&x| e.set.iter().all(|y| grp.contains(g.commutator(x, y))));
            t.check(ok, || format!("(iii) U {} R {}", describe_subgroup(u), describe_subgroup(rr)));
        }
    }
}

fn lemma_c(ctx: &GroupContext<'_>, r: usize, t: &mut Tally) -> Result<(), CheckError> {
    let g = ctx.group();
    let gr = ctx.gamma(r);
    if g.rank(gr) != 2 {
        return Ok(());
    }
    let p = g.p() as usize;
    let c = ctx.c_r(r)?;
    let whole_order = g.order() as usize;
    t.check(whole_order / c.order() <= p, || format!("(i) |G : C_r(G)| = {}", whole_order / c.order()));
    let grp = g.power_subgroup(gr, 1);
    let c_is_g = c.order() == whole_order;
    let next_inside = ctx.gamma(r + 1).is_subgroup_of(&grp);
    t.check(c_is_g == next_inside, || format!("(ii) C_r = G is {c_is_g} but gamma_(r+1) <= gamma_r^p is {next_inside}"));
    if c_is_g {
        match g.invariant_subgroups_between(&grp, gr, &[], SUBGROUP_LIMIT) {
            Some(subs) => {
                for u in subs.iter().filter(|u| **u != grp && *u != gr) {
                    t.check(g.is_normal(u), || format!("(ii) non-normal U {}", describe_subgroup(u)));
                }
            }
            None => t.note(format!("more than {SUBGROUP_LIMIT} subgroups between gamma_r^p and gamma_r")),
        }
    } else if let Some(subs) = g.invariant_subgroups_between(&grp, gr, &g.generators(), SUBGROUP_LIMIT) {
        let strict: Vec<&Subgroup> = subs.iter().filter(|u| **u != grp && *u != gr).collect();
        let expected = g.join(ctx.gamma(r + 1), &grp);
        t.check(strict.len() == 1 && *strict[0] == expected, || {
            format!("(ii) {} normal subgroups strictly between gamma_r^p and gamma_r", strict.len())
        });
    }
    let mut k = 0;
    let mut cur = gr.clone();
    while !cur.is_trivial() {
        let next = g.power_subgroup(&cur, 1);
        let ok = g.commutator_subgroup(&cur, &c).is_subgroup_of(&next);
        t.check(ok, || format!("(iii) k = {k}"));
        cur = next;
        k += 1;
    }
    Ok(())
}

/// Runs one check. `r` is ignored by the checks in [`GROUP_LEMMAS`].
pub fn run_lemma(ctx: &GroupContext<'_>, id: &str, r: usize, opts: &CheckOptions) -> Result<LemmaReport, CheckError> {
    if r < 2 {
        return Err(CheckError::RTooSmall(r));
    }
    let Some(&id) = GROUP_LEMMAS.iter().chain(R_LEMMAS).find(|&&x| x == id) else {
        return Err(CheckError::UnknownLemma(id.into()));
    };
    let r_opt = R_LEMMAS.contains(&id).then_some(r);
    let mut t = Tally::new(id, r_opt, opts);
    match id {
        "comm_id" => comm_id(ctx, &mut t),
        "hall_petrescu" => hall_petrescu(ctx, &mut t),
        "prelim" => prelim(ctx, &mut t),
        "inclusion" => inclusion(ctx, &mut t),
        "separation" => separation(ctx, &mut t)?,
        "separation_corollary" => separation_corollary(ctx, &mut t),
        "c2" => c2(ctx, &mut t)?,
        "powerful" => powerful(ctx, r, &mut t)?,
        "powerful_subgroups" => powerful_subgroups(ctx, r, &mut t),
        "index" => index(ctx, r, &mut t),
        "linking" => linking(ctx, r, &mut t)?,
        "petresco_easy" => petresco_easy(ctx, r, &mut t),
        "petresco_out" => petresco_out(ctx, r, &mut t)?,
        "petresco_hard" => petresco_hard(ctx, r, &mut t),
        "de" => de(ctx, r, &mut t),
        "de2" => de2(ctx, r, &mut t),
        "c" => lemma_c(ctx, r, &mut t)?,
        _ => unreachable!(),
    }
    Ok(t.finish())
}

/// Every check for one `r`: the `r`-independent ones followed by the rest.
pub fn lemma_suite(ctx: &GroupContext<'_>, r: usize, opts: &CheckOptions) -> Result<Vec<LemmaReport>, CheckError> {
    GROUP_LEMMAS.iter().chain(R_LEMMAS).map(|id| run_lemma(ctx, id, r, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn group(name: &str) -> PcGroup {
        PcGroup::new(families::from_name(name).unwrap()).unwrap()
    }

    fn status(reports: &[LemmaReport], id: &str) -> LemmaStatus {
        reports.iter().find(|r| r.id == id).unwrap().status
    }

    #[test]
    fn heis_suite_passes() {
        let g = group("heis(3)");
        let ctx = GroupContext::new(&g);
        let reports = lemma_suite(&ctx, 2, &CheckOptions::default()).unwrap();
        for rep in &reports {
            assert_ne!(rep.status, LemmaStatus::Fail, "{rep:?}");
        }
        assert_eq!(status(&reports, "comm_id"), LemmaStatus::Pass);
        assert!(reports.iter().find(|r| r.id == "comm_id").unwrap().exhaustive);
    }

    #[test]
    fn elementary_abelian_is_vacuous_or_passes() {
        let g = group("elab(3,2)");
        let ctx = GroupContext::new(&g);
        let reports = lemma_suite(&ctx, 2, &CheckOptions::default()).unwrap();
        for rep in &reports {
            assert!(matches!(rep.status, LemmaStatus::Pass | LemmaStatus::Vacuous), "{rep:?}");
        }
        for id in ["de2", "c", "c2", "petresco_hard"] {
            assert_eq!(status(&reports, id), LemmaStatus::Vacuous, "{id}");
        }
    }

    #[test]
    fn wreath_petresco_easy() {
        let g = group("wreath(3)");
        let ctx = GroupContext::new(&g);
        let rep = run_lemma(&ctx, "petresco_easy", 2, &CheckOptions::default()).unwrap();
        assert_eq!(rep.status, LemmaStatus::Pass);
        assert!(rep.instances > 0);
    }

    #[test]
    fn sampled_reports_record_seed() {
        let g = group("freenilp(3,3)");
        let ctx = GroupContext::new(&g);
        let rep = run_lemma(&ctx, "comm_id", 2, &CheckOptions::default()).unwrap();
        assert!(!rep.exhaustive);
        assert!(rep.seed.is_some());
        assert_eq!(rep.instances, 10_000);
        let again = run_lemma(&ctx, "comm_id", 2, &CheckOptions::default()).unwrap();
        assert_eq!(rep, again);
    }

    #[test]
    fn separation_skips_large_groups() {
        let g = group("heis(5)");
        let rep = run_lemma(&GroupContext::new(&g), "separation", 2, &CheckOptions::default()).unwrap();
        assert_eq!(rep.status, LemmaStatus::Skipped);
    }

    #[test]
    fn unknown_lemma() {
        let g = group("heis(3)");
        let ctx = GroupContext::new(&g);
        assert_eq!(
            run_lemma(&ctx, "nope", 2, &CheckOptions::default()),
            Err(CheckError::UnknownLemma("nope".into()))
        );
    }

    #[test]
    fn separation_conjugators_constructive() {
        let g = group("wreath(3)");
        let w = OuterWord::parse("[[1,2],[3,4]]").unwrap();
        let xs = [g.generator(0), g.generator(1), g.generator(2), g.generator(3)];
        for j in 1..=4 {
            let mut args = xs.to_vec();
            args[j - 1] = g.generator((j + 1) % 4);
            let h = args[j - 1];
            let hs = w.separation_conjugators(&g, &args, j);
            let ncl = g.normal_closure(&[h]);
            assert!(hs.iter().all(|&c| ncl.contains(c)));
            let base = w.evaluate(&g, &args).unwrap();
            for x in g.elements() {
                let mut lhs = args.clone();
                lhs[j - 1] = g.multiply(x, h);
                let mut rhs: Vec<Element> = args.iter().zip(&hs).map(|(&y, &c)| g.conjugate(y, c)).collect();
                rhs[j - 1] = g.conjugate(x, hs[j - 1]);
                assert_eq!(
                    w.evaluate(&g, &lhs).unwrap(),
                    g.multiply(w.evaluate(&g, &rhs).unwrap(), base),
                    "slot {j}"
                );
            }
        }
    }
}
