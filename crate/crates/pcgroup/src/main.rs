use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use pcgroup::corpus::{self, CorpusEntry};
use pcgroup::run::{self, RunOptions};
use pcgroup_core::checks::{CheckOptions, GroupContext, GROUP_LEMMAS, R_LEMMAS};
use pcgroup_core::OuterWord;

/// Finite p-groups from weighted pc presentations: series, word values and
/// single-slot witnesses for lower central words.
#[derive(Parser)]
#[command(name = "pcgroup", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a presentation and check consistency.
    Validate { file: String },
    /// Lower central series and a few invariants.
    Series { file: String },
    /// Value set and verbal subgroup of an outer commutator word.
    Values {
        file: String,
        /// `gammaN`, `γN` or a bracket word such as `[[1,2],[3,4]]`.
        #[arg(long)]
        word: String,
    },
    /// Search for a single-slot witness for `gamma_r`.
    Witness {
        file: String,
        #[arg(short)]
        r: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the lemma checks and the witness check for one `r`.
    Verify {
        file: String,
        #[arg(short)]
        r: usize,
        /// A lemma id, or `all`.
        #[arg(long, default_value = "all")]
        lemma: String,
        #[command(flatten)]
        check: CheckArgs,
        #[arg(long)]
        json: bool,
    },
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Subcommand)]
enum CorpusCommand {
    /// Run every entry of a directory of `.pcp` files (or `@builtin`).
    Run {
        dir: String,
        /// `a..b` or a single value.
        #[arg(short, value_parser = parse_range, default_value = "2..3")]
        r: RangeInclusive<usize>,
        #[command(flatten)]
        check: CheckArgs,
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Include wall-clock timings (the report stops being reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Write the builtin groups as `.pcp` files.
    Export { dir: PathBuf },
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    max_failures: usize,
}

impl CheckArgs {
    fn options(&self) -> CheckOptions {
        CheckOptions { seed: self.seed, max_failures: self.max_failures, ..CheckOptions::default() }
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = s.split_once("..").unwrap_or((s, s));
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
    if a < 2 || b < a {
        return Err(format!("range `{s}` must satisfy 2 <= a <= b"));
    }
    Ok(a..=b)
}

enum Outcome {
    Ok,
    Failed,
}

/// Load and usage problems map to exit code 2.
struct UsageError(anyhow::Error);

fn load(spec: &str) -> Result<CorpusEntry, UsageError> {
    corpus::load_spec(spec).map_err(|e| UsageError(e.into()))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn validate(file: &str) -> Result<Outcome, UsageError> {
    let e = load(file)?;
    let g = &e.group;
    println!("{}: consistent, p = {}, n = {}, order {}", e.id, g.p(), g.n(), g.order());
    Ok(Outcome::Ok)
}

fn series(file: &str) -> Result<Outcome, UsageError> {
    let e = load(file)?;
    let g = &e.group;
    let lcs = g.lower_central_series();
    let whole = g.whole_group();
    println!("group {} of order {}", e.id, g.order());
    for (i, s) in lcs.iter().enumerate() {
        println!("gamma_{} order {} rank {}", i + 1, s.order(), g.rank(s));
    }
    println!("class {}", lcs.len() - 1);
    println!("center order {}", g.center().order());
    println!("frattini order {}", g.frattini(&whole).order());
    println!("rank {}", g.rank(&whole));
    println!("powerful {}", g.is_powerful(&whole));
    Ok(Outcome::Ok)
}

fn values(file: &str, word: &str) -> Result<Outcome, UsageError> {
    let e = load(file)?;
    let g = &e.group;
    let w = OuterWord::parse(word).map_err(|err| UsageError(err.into()))?;
    let set = w.value_set(g).map_err(|err| UsageError(err.into()))?;
    let verbal = w.verbal_subgroup(g).map_err(|err| UsageError(err.into()))?;
    println!("word {w}");
    println!("values {}", set.len());
    println!("verbal subgroup order {}", verbal.order());
    println!("every element is a value: {}", set.len() == verbal.order());
    Ok(Outcome::Ok)
}

fn witness(file: &str, r: usize, json: bool) -> Result<Outcome, UsageError> {
    if r < 2 {
        return Err(UsageError(anyhow::anyhow!("r must be at least 2")));
    }
    let e = load(file)?;
    let g = &e.group;
    let ctx = GroupContext::new(g);
    let v = pcgroup_core::checks::check_theorem_a(&ctx, r).map_err(|err| UsageError(err.into()))?;
    let out = run::verdict_json(g, &v);
    if json {
        print_json(&out);
    } else {
        println!("{} r = {}: branch {}, d(gamma_r) = {}", e.id, r, v.hypotheses.branch.as_str(), v.hypotheses.d_gamma_r);
        match &v.witness {
            Some(w) => {
                let fixed: Vec<String> = w.fixed().iter().map(|&x| g.format_element(x)).collect();
                println!("witness slot {} fixed {}", w.slot(), fixed.join(" "));
                println!("slot values equal gamma_r: {}", v.equality_holds);
            }
            None => println!("no witness"),
        }
        if let Some(vs) = &v.values {
            println!("all values equal gamma_r: {}", vs.values_equal_gamma);
        }
        println!("claim {}", out["claim"].as_str().unwrap_or(""));
    }
    Ok(if v.claim_holds() { Outcome::Ok } else { Outcome::Failed })
}

fn verify(file: &str, r: usize, lemma: &str, check: &CheckArgs, json: bool) -> Result<Outcome, UsageError> {
    if r < 2 {
        return Err(UsageError(anyhow::anyhow!("r must be at least 2")));
    }
    let lemmas = if lemma == "all" {
        None
    } else if GROUP_LEMMAS.iter().chain(R_LEMMAS).any(|&l| l == lemma) {
        Some(vec![lemma.to_string()])
    } else {
        return Err(UsageError(anyhow::anyhow!("unknown lemma `{lemma}`")));
    };
    let e = load(file)?;
    let opts = RunOptions { r: r..=r, checks: check.options(), theorem: lemmas.is_none(), lemmas, ..RunOptions::default() };
    let (report, totals) = run::run_group(&e.group, &opts);
    if json {
        print_json(&report);
    } else {
        let per_r = &report["per_r"][0];
        let all = report["group_lemmas"].as_array().into_iter().chain(per_r["lemmas"].as_array()).flatten();
        for l in all {
            println!(
                "{:<22} {:<8} instances {}",
                l["id"].as_str().unwrap_or(""),
                l["status"].as_str().unwrap_or("error"),
                l["instances"]
            );
            for f in l["failures"].as_array().into_iter().flatten() {
                println!("    {}", f.as_str().unwrap_or(""));
            }
        }
        if let Some(t) = per_r.get("theorem") {
            println!("{:<22} {}", "theorem", t["claim"].as_str().unwrap_or("error"));
        }
    }
    Ok(if totals.failures() == 0 { Outcome::Ok } else { Outcome::Failed })
}

fn corpus_run(
    dir: &str,
    r: RangeInclusive<usize>,
    check: &CheckArgs,
    jobs: Option<usize>,
    report: Option<&Path>,
    timings: bool,
) -> Result<Outcome, UsageError> {
    let corpus = if dir == "@builtin" {
        corpus::builtin_corpus()
    } else {
        corpus::load_dir(Path::new(dir)).with_context(|| format!("reading {dir}")).map_err(UsageError)?
    };
    let opts = RunOptions { r, checks: check.options(), jobs, timings, ..RunOptions::default() };
    let rep = run::run_suite(&corpus, &opts);
    let text = rep.to_string_pretty();
    match report {
        Some(path) => std::fs::write(path, &text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(UsageError)?,
        None => print!("{text}"),
    }
    let t = &rep.totals;
    eprintln!(
        "{} entries, {} load errors, {} theorem failures, {} lemma failures, {} errors",
        t.entries, t.load_errors, t.theorem_failures, t.lemma_fail, t.errors
    );
    if t.failures() > 0 {
        Ok(Outcome::Failed)
    } else if t.load_errors > 0 {
        Err(UsageError(anyhow::anyhow!("{} corpus files failed to load", t.load_errors)))
    } else {
        Ok(Outcome::Ok)
    }
}

fn export(dir: &Path) -> Result<Outcome> {
    for p in corpus::export_builtins(dir)? {
        println!("{}", p.display());
    }
    Ok(Outcome::Ok)
}

fn dispatch(cli: Cli) -> Result<Outcome, UsageError> {
    match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Series { file } => series(&file),
        Command::Values { file, word } => values(&file, &word),
        Command::Witness { file, r, json } => witness(&file, r, json),
        Command::Verify { file, r, lemma, check, json } => verify(&file, r, &lemma, &check, json),
        Command::Corpus(CorpusCommand::Run { dir, r, check, jobs, report, timings }) => {
            corpus_run(&dir, r, &check, jobs, report.as_deref(), timings)
        }
        Command::Corpus(CorpusCommand::Export { dir }) => export(&dir).map_err(UsageError),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(UsageError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
