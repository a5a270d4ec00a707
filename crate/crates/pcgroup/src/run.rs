//! Corpus runner and the `report v1` JSON document.
//!
//! Entries run in parallel; results are merged back in corpus order, keys
//! are sorted and timings are left out unless asked for, so two runs with
//! the same corpus, flags and seed give identical bytes.

use std::ops::RangeInclusive;
use std::time::Instant;

use pcgroup_core::checks::{
    check_theorem_a, run_lemma, CheckError, CheckOptions, GroupContext, LemmaReport, LemmaStatus, TheoremVerdict,
    GROUP_LEMMAS, R_LEMMAS,
};
use pcgroup_core::{PcGroup, WitnessTuple};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::corpus::{Corpus, CorpusEntry};

pub const SCHEMA: &str = "report v1";

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub r: RangeInclusive<usize>,
    pub checks: CheckOptions,
    /// `None` runs every lemma.
    pub lemmas: Option<Vec<String>>,
    pub theorem: bool,
    pub jobs: Option<usize>,
    pub timings: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { r: 2..=3, checks: CheckOptions::default(), lemmas: None, theorem: true, jobs: None, timings: false }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Totals {
    pub entries: usize,
    pub load_errors: usize,
    pub theorem_checks: usize,
    pub theorem_failures: usize,
    pub not_applicable: usize,
    pub lemma_pass: usize,
    pub lemma_fail: usize,
    pub lemma_vacuous: usize,
    pub lemma_skipped: usize,
    pub errors: usize,
}

impl Totals {
    pub fn failures(&self) -> usize {
        self.theorem_failures + self.lemma_fail + self.errors
    }

    fn add(&mut self, other: &Totals) {
        self.theorem_checks += other.theorem_checks;
        self.theorem_failures += other.theorem_failures;
        self.not_applicable += other.not_applicable;
        self.lemma_pass += other.lemma_pass;
        self.lemma_fail += other.lemma_fail;
        self.lemma_vacuous += other.lemma_vacuous;
        self.lemma_skipped += other.lemma_skipped;
        self.errors += other.errors;
    }

    fn count(&mut self, rep: &LemmaReport) {
        match rep.status {
            LemmaStatus::Pass => self.lemma_pass += 1,
            LemmaStatus::Fail => self.lemma_fail += 1,
            LemmaStatus::Vacuous => self.lemma_vacuous += 1,
            LemmaStatus::Skipped => self.lemma_skipped += 1,
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "entries": self.entries,
            "load_errors": self.load_errors,
            "theorem_checks": self.theorem_checks,
            "theorem_failures": self.theorem_failures,
            "not_applicable": self.not_applicable,
            "lemmas": {
                "pass": self.lemma_pass,
                "fail": self.lemma_fail,
                "vacuous": self.lemma_vacuous,
                "skipped": self.lemma_skipped,
            },
            "errors": self.errors,
        })
    }
}

pub struct RunReport {
    pub json: Value,
    pub totals: Totals,
}

impl RunReport {
    /// Pretty JSON with a trailing newline.
    pub fn to_string_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn witness_json(g: &PcGroup, w: &WitnessTuple) -> Value {
    json!({
        "slot": w.slot(),
        "fixed": w.fixed().iter().map(|&x| g.format_element(x)).collect::<Vec<_>>(),
    })
}

pub fn verdict_json(g: &PcGroup, v: &TheoremVerdict) -> Value {
    let h = &v.hypotheses;
    let claim = if h.branch == pcgroup_core::checks::Branch::NotApplicable {
        "none"
    } else if v.claim_holds() {
        "holds"
    } else {
        "fails"
    };
    let mut m = Map::new();
    m.insert(
        "hypotheses".into(),
        json!({
            "r": h.r,
            "p": h.p,
            "d_gamma_r": h.d_gamma_r,
            "branch": h.branch.as_str(),
            "c_equals_g": h.c_equals_g,
        }),
    );
    m.insert("claim".into(), claim.into());
    m.insert("witness".into(), v.witness.as_ref().map_or(Value::Null, |w| witness_json(g, w)));
    m.insert("equality_holds".into(), v.equality_holds.into());
    m.insert("reverified".into(), v.reverified.map_or(Value::Null, Value::from));
    m.insert("strategy".into(), v.stats.strategy.into());
    m.insert("candidates".into(), v.stats.candidates.into());
    if let Some(rc) = &v.restricted {
        m.insert(
            "restricted".into(),
            json!({
                "covers": rc.covers,
                "witness": rc.witness.as_ref().map_or(Value::Null, |w| witness_json(g, w)),
            }),
        );
    }
    if let Some(vs) = &v.values {
        m.insert(
            "values".into(),
            json!({
                "value_count": vs.value_count,
                "gamma_order": vs.gamma_order,
                "values_in_gamma": vs.values_in_gamma,
                "values_equal_gamma": vs.values_equal_gamma,
            }),
        );
    }
    Value::Object(m)
}

pub fn lemma_json(rep: &LemmaReport, timings: bool) -> Value {
    let mut m = Map::new();
    m.insert("id".into(), rep.id.into());
    m.insert("status".into(), rep.status.as_str().into());
    m.insert("instances".into(), rep.instances.into());
    m.insert("failure_count".into(), rep.failure_count.into());
    m.insert("failures".into(), rep.failures.clone().into());
    m.insert("exhaustive".into(), rep.exhaustive.into());
    m.insert("seed".into(), rep.seed.map_or(Value::Null, Value::from));
    if !rep.notes.is_empty() {
        m.insert("notes".into(), rep.notes.clone().into());
    }
    if timings {
        if let Some(d) = rep.elapsed {
            m.insert("elapsed_ms".into(), (d.as_secs_f64() * 1000.0).into());
        }
    }
    Value::Object(m)
}

fn wanted(opts: &RunOptions, id: &str) -> bool {
    opts.lemmas.as_ref().is_none_or(|ls| ls.iter().any(|l| l == id))
}

fn timed_lemma(ctx: &GroupContext<'_>, id: &str, r: usize, opts: &CheckOptions) -> Result<LemmaReport, CheckError> {
    let start = Instant::now();
    let mut rep = run_lemma(ctx, id, r, opts)?;
    rep.elapsed = Some(start.elapsed());
    Ok(rep)
}

fn error_json(e: &CheckError) -> Value {
    json!({ "error": e.to_string() })
}

/// Checks for one group, as a report entry.
pub fn run_group(g: &PcGroup, opts: &RunOptions) -> (Value, Totals) {
    let start = Instant::now();
    let ctx = GroupContext::with_options(g, &opts.checks);
    let mut totals = Totals::default();
    let r_first = *opts.r.start();
    let mut group_lemmas = Vec::new();
    for id in GROUP_LEMMAS.iter().filter(|id| wanted(opts, id)) {
        match timed_lemma(&ctx, id, r_first.max(2), &opts.checks) {
            Ok(rep) => {
                totals.count(&rep);
                group_lemmas.push(lemma_json(&rep, opts.timings));
            }
            Err(e) => {
                totals.errors += 1;
                group_lemmas.push(json!({ "id": id, "error": e.to_string() }));
            }
        }
    }
    let mut per_r = Vec::new();
    for r in opts.r.clone() {
        let mut m = Map::new();
        m.insert("r".into(), r.into());
        if opts.theorem {
            totals.theorem_checks += 1;
            match check_theorem_a(&ctx, r) {
                Ok(v) => {
                    if v.hypotheses.branch == pcgroup_core::checks::Branch::NotApplicable {
                        totals.not_applicable += 1;
                    } else if !v.claim_holds() {
                        totals.theorem_failures += 1;
                    }
                    m.insert("theorem".into(), verdict_json(g, &v));
                }
                Err(e) => {
                    totals.errors += 1;
                    m.insert("theorem".into(), error_json(&e));
                }
            }
        }
        let mut lemmas = Vec::new();
        for id in R_LEMMAS.iter().filter(|id| wanted(opts, id)) {
            match timed_lemma(&ctx, id, r, &opts.checks) {
                Ok(rep) => {
                    totals.count(&rep);
                    lemmas.push(lemma_json(&rep, opts.timings));
                }
                Err(e) => {
                    totals.errors += 1;
                    lemmas.push(json!({ "id": id, "error": e.to_string() }));
                }
            }
        }
        m.insert("lemmas".into(), lemmas.into());
        per_r.push(Value::Object(m));
    }
    let series: Vec<usize> = (1..=ctx.class() + 1).map(|i| ctx.gamma(i).order()).collect();
    let mut m = Map::new();
    m.insert("order".into(), g.order().into());
    m.insert("p".into(), g.p().into());
    m.insert("n".into(), g.n().into());
    m.insert("class".into(), ctx.class().into());
    m.insert("lower_central_orders".into(), series.into());
    m.insert("group_lemmas".into(), group_lemmas.into());
    m.insert("per_r".into(), per_r.into());
    if opts.timings {
        m.insert("elapsed_ms".into(), (start.elapsed().as_secs_f64() * 1000.0).into());
    }
    (Value::Object(m), totals)
}

fn run_entries(entries: &[CorpusEntry], opts: &RunOptions) -> Vec<(Value, Totals)> {
    entries
        .par_iter()
        .map(|e| {
            let (mut v, t) = run_group(&e.group, opts);
            let m = v.as_object_mut().unwrap();
            m.insert("id".into(), e.id.clone().into());
            m.insert("source".into(), e.source.to_string().into());
            (v, t)
        })
        .collect()
}

pub fn run_suite(corpus: &Corpus, opts: &RunOptions) -> RunReport {
    let results = match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map(|pool| pool.install(|| run_entries(&corpus.entries, opts)))
            .unwrap_or_else(|_| run_entries(&corpus.entries, opts)),
        None => run_entries(&corpus.entries, opts),
    };
    let mut totals = Totals { entries: corpus.entries.len(), load_errors: corpus.errors.len(), ..Totals::default() };
    let mut entries = Vec::with_capacity(results.len());
    for (v, t) in results {
        totals.add(&t);
        entries.push(v);
    }
    let load_errors: Vec<Value> =
        corpus.errors.iter().map(|(src, msg)| json!({ "source": src, "error": msg })).collect();
    let json = json!({
        "schema": SCHEMA,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": opts.checks.seed,
        "r_range": [opts.r.start(), opts.r.end()],
        "entries": entries,
        "load_errors": load_errors,
        "totals": totals.to_json(),
    });
    RunReport { json, totals }
}
