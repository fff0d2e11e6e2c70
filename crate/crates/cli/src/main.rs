use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maxcode::analysis::{
    analyze, corollary_scan, enumerate_system, AnalysisError, CodeContext, ScanMode, DEFAULT_MATCHING_BUDGET,
    SCHEMA_VERSION,
};
use maxcode::codes::{code_class, is_code, is_maximal, search_positive_factorization, uniform_measure, FiniteCode};
use maxcode::corpus::{standard_corpus, CorpusConfig};
use maxcode::cyclic::{
    chain_of_krasner, enumerate_factorizations, enumerate_krasner, hajos_enumerate, is_krasner, CyclicError,
    DEFAULT_N_BOUND,
};
use maxcode::NatSet;
use serde_json::{json, Value};

const PASS: u8 = 0;
const PROPERTY_FALSE: u8 = 1;
const PRECONDITION: u8 = 2;
const PARSE: u8 = 3;
const THEOREM_VIOLATION: u8 = 4;

#[derive(Parser)]
#[command(name = "maxcode", version, about = "Factorizations of cyclic groups and finite maximal codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunConfig,
}

#[derive(Args)]
struct RunConfig {
    /// Largest n accepted by exhaustive enumerations.
    #[arg(long, global = true, default_value_t = DEFAULT_N_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
    n_bound: u64,
    /// Node budget for searches.
    #[arg(long, global = true, default_value_t = DEFAULT_MATCHING_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Seed for randomized corpora; recorded in every output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// List factorizations of Z_n.
    Factorize {
        n: u64,
        #[arg(long, value_enum, default_value_t = Kind::All)]
        kind: Kind,
    },
    /// Run code checks on a code file. Without flags every check runs.
    Check {
        file: PathBuf,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        code: bool,
        #[arg(long)]
        class: bool,
        #[arg(long)]
        maximal: bool,
        #[arg(long)]
        factorize: bool,
    },
    /// System of factorizations, bayonet tables, arrangements and triangle checks.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value = "a")]
        letter: char,
    },
    /// Aggregate a scan over a generated corpus of factorizing codes.
    Scan {
        #[arg(long, value_enum)]
        mode: Mode,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    All,
    Krasner,
    Hajos,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    KrasnerInSystem,
    Omega2,
    Pair2,
    Triangle,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::KrasnerInSystem => "krasner-in-system",
            Mode::Omega2 => "omega2",
            Mode::Pair2 => "pair2",
            Mode::Triangle => "triangle",
        }
    }
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, default_value_t = 10)]
    max_words: usize,
    /// P and S range over all sets of words up to this length.
    #[arg(long, default_value_t = 2)]
    exhaustive_len: usize,
    #[arg(long, default_value_t = 200)]
    draws: usize,
    #[arg(long, default_value_t = 3)]
    random_len: usize,
    #[arg(long, default_value_t = 12)]
    krasner_order: u64,
    #[arg(long, default_value_t = 4)]
    tree_depth: usize,
    /// Keep only the first codes of the sorted corpus.
    #[arg(long)]
    limit: Option<usize>,
}

/// A finished command: its payload, a text rendering and the exit code.
struct Outcome {
    json: Value,
    text: String,
    code: u8,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        let code = match &e {
            AnalysisError::TheoremViolation { .. } => THEOREM_VIOLATION,
            _ => PRECONDITION,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<CyclicError> for Failure {
    fn from(e: CyclicError) -> Self {
        Failure::new(PRECONDITION, e.to_string())
    }
}

fn set_text(s: &NatSet) -> String {
    let items: Vec<String> = s.iter().map(u64::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn header(run: &RunConfig, command: &str) -> String {
    format!("{command} (schema {SCHEMA_VERSION}, seed {})\n", run.seed)
}

fn read_code(path: &PathBuf) -> Result<FiniteCode, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))?;
    FiniteCode::parse(&text).map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))
}

fn letter_byte(letter: char) -> Result<u8, Failure> {
    u8::try_from(letter).map_err(|_| Failure::new(PRECONDITION, format!("letter {letter:?} is not ASCII")))
}

fn factorize(run: &RunConfig, n: u64, kind: Kind) -> Result<Outcome, Failure> {
    if n == 0 || n > run.n_bound {
        return Err(Failure::new(PRECONDITION, format!("n = {n} must lie in 1..={}", run.n_bound)));
    }
    let hajos: BTreeMap<(NatSet, NatSet), Vec<Vec<u64>>> = hajos_enumerate(n, run.n_bound)?
        .into_iter()
        .map(|e| ((e.pair.left, e.pair.right), e.chains.iter().map(|c| c.as_slice().to_vec()).collect()))
        .collect();
    let pairs: Vec<(NatSet, NatSet)> = match kind {
        Kind::All => enumerate_factorizations(n, run.n_bound)?.into_iter().map(|p| (p.left, p.right)).collect(),
        Kind::Krasner => enumerate_krasner(n)?.into_iter().map(|p| (p.left, p.right)).collect(),
        Kind::Hajos => hajos.keys().cloned().collect(),
    };
    let mut text = header(run, "factorize");
    let mut listing = Vec::new();
    for (left, right) in pairs {
        let krasner = is_krasner(&left, &right, n);
        let chains: Vec<Vec<u64>> = match hajos.get(&(left.clone(), right.clone())) {
            Some(chains) => chains.clone(),
            None if krasner => chain_of_krasner(&left, &right, n).map(|c| c.as_slice().to_vec()).into_iter().collect(),
            None => Vec::new(),
        };
        let label = if krasner {
            "krasner"
        } else if hajos.contains_key(&(left.clone(), right.clone())) {
            "hajos"
        } else {
            "factorization"
        };
        let _ = writeln!(text, "({}, {}) {label} chains {chains:?}", set_text(&left), set_text(&right));
        listing.push(json!({ "left": left, "right": right, "kind": label, "chains": chains }));
    }
    let _ = writeln!(text, "{} pairs", listing.len());
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "seed": run.seed,
        "command": "factorize",
        "n": n,
        "kind": match kind { Kind::All => "all", Kind::Krasner => "krasner", Kind::Hajos => "hajos" },
        "count": listing.len(),
        "pairs": listing,
    });
    Ok(Outcome { json, text, code: PASS })
}

struct Checks {
    code: bool,
    class: bool,
    maximal: bool,
    factorize: bool,
}

fn check(run: &RunConfig, file: &PathBuf, checks: Checks) -> Result<Outcome, Failure> {
    let x = read_code(file)?;
    let mut text = header(run, "check");
    let _ = writeln!(text, "code {x}");
    let mut json = json!({ "schema_version": SCHEMA_VERSION, "seed": run.seed, "command": "check", "code": x });
    let mut pass = true;
    let verdict = is_code(&x);
    if checks.code {
        pass &= verdict.is_code;
        json["is_code"] = json!(verdict);
        match &verdict.witness {
            None => text.push_str("is_code: yes\n"),
            Some(a) => {
                let parse = |ws: &[maxcode::Word]| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("·");
                let _ = writeln!(text, "is_code: no, {} = {} = {}", a.word, parse(&a.first), parse(&a.second));
            }
        }
    }
    if checks.class {
        let c = code_class(&x);
        json["class"] = json!(c);
        let _ = writeln!(text, "class: prefix {} suffix {} bifix {}", c.prefix, c.suffix, c.bifix);
    }
    if checks.maximal {
        let measure = uniform_measure(&x).to_string();
        let maximal = is_maximal(&x).unwrap_or(false);
        pass &= maximal;
        json["maximal"] = json!({ "maximal": maximal, "measure": measure });
        let _ = writeln!(text, "maximal: {} (measure {measure})", if maximal { "yes" } else { "no" });
    }
    if checks.factorize {
        let found = if verdict.is_code {
            search_positive_factorization(&x, run.budget).map_err(|e| Failure::new(PRECONDITION, e.to_string()))?
        } else {
            None
        };
        pass &= found.is_some();
        match &found {
            Some(f) => {
                let words = |s: &std::collections::BTreeSet<maxcode::Word>| {
                    s.iter().map(|w| format!("{w:?}")).collect::<Vec<_>>().join(",")
                };
                let _ = writeln!(text, "factorization: P = {{{}}}, S = {{{}}}", words(&f.p), words(&f.s));
            }
            None => text.push_str("factorization: none\n"),
        }
        json["factorization"] = json!(found);
    }
    json["pass"] = json!(pass);
    Ok(Outcome { json, text, code: if pass { PASS } else { PROPERTY_FALSE } })
}

fn analyze_file(run: &RunConfig, file: &PathBuf, letter: char) -> Result<Outcome, Failure> {
    let x = read_code(file)?;
    let ctx = CodeContext::maximal(&x, letter_byte(letter)?)?;
    let report = analyze(&ctx, run.budget)?;
    let mut text = header(run, "analyze");
    let _ = writeln!(text, "code {} with a^{} in X", report.code, report.n);
    let sets = |v: &[Vec<u64>]| v.iter().map(|s| set_text(&s.iter().copied().collect())).collect::<Vec<_>>().join(" ");
    let _ = writeln!(text, "left sets: {}", sets(&report.lefts));
    let _ = writeln!(text, "right sets: {}", sets(&report.rights));
    if let Some((p, q)) = &report.pair {
        let _ = writeln!(text, "driving pair: ({}, {})", set_text(p), set_text(q));
    }
    for s in &report.separators {
        let _ = writeln!(
            text,
            "w = {}: |X_w| = {}, triangle {}{}",
            s.w,
            s.xw.len(),
            if s.triangle { "holds" } else { "fails" },
            if s.arrangement.is_some() { ", good arrangement certified" } else { "" }
        );
    }
    let mut json = serde_json::to_value(&report).expect("report serializes");
    json["seed"] = json!(run.seed);
    json["command"] = json!("analyze");
    let all = report.separators.iter().all(|s| s.triangle);
    Ok(Outcome { json, text, code: if all { PASS } else { PROPERTY_FALSE } })
}

/// Per-code scan classification.
enum Item {
    Holds,
    Fails,
    NotApplicable,
    OverBudget,
}

impl Item {
    fn name(&self) -> &'static str {
        match self {
            Item::Holds => "holds",
            Item::Fails => "fails",
            Item::NotApplicable => "hypothesis_not_met",
            Item::OverBudget => "budget_exceeded",
        }
    }
}

fn scan_one(ctx: &CodeContext, mode: Mode, budget: u64) -> Result<Item, Failure> {
    let classify = |r: Result<bool, AnalysisError>| match r {
        Ok(true) => Ok(Item::Holds),
        Ok(false) => Ok(Item::Fails),
        Err(AnalysisError::Hypothesis(_)) => Ok(Item::NotApplicable),
        Err(AnalysisError::BudgetExceeded(_)) => Ok(Item::OverBudget),
        Err(e) => Err(Failure::from(e)),
    };
    match mode {
        Mode::KrasnerInSystem => classify(enumerate_system(ctx).map(|s| !s.krasner_pairs().is_empty())),
        Mode::Omega2 => classify(corollary_scan(ctx, ScanMode::Omega2, budget).map(|r| r.all_triangle)),
        Mode::Pair2 => classify(corollary_scan(ctx, ScanMode::Pair2, budget).map(|r| r.all_triangle)),
        Mode::Triangle => match analyze(ctx, budget) {
            Ok(r) if r.pair.is_none() => Ok(Item::NotApplicable),
            r => classify(r.map(|r| r.separators.iter().all(|s| s.triangle))),
        },
    }
}

fn scan(run: &RunConfig, mode: Mode, args: &CorpusArgs) -> Result<Outcome, Failure> {
    let config = CorpusConfig {
        seed: run.seed,
        max_words: args.max_words,
        exhaustive_len: args.exhaustive_len,
        random_draws: args.draws,
        random_len: args.random_len,
        krasner_order: args.krasner_order,
        tree_depth: args.tree_depth,
    };
    // Each of P and S ranges over 2^(2^(len+1) - 2) sets; bound the square by the budget.
    let pool_bits = (1u32 << (args.exhaustive_len.min(5) as u32 + 1)) - 2;
    if args.exhaustive_len > 5 || 2 * pool_bits > 63 || 1u64 << (2 * pool_bits) > run.budget {
        return Err(Failure::new(PRECONDITION, "exhaustive corpus exceeds the budget"));
    }
    if args.krasner_order > run.n_bound || args.tree_depth > 6 || args.random_len > 6 {
        return Err(Failure::new(PRECONDITION, "corpus parameters exceed their bounds"));
    }
    let mut corpus = standard_corpus(&config);
    if let Some(limit) = args.limit {
        corpus.truncate(limit);
    }
    let mut counts: BTreeMap<&'static str, usize> =
        ["holds", "fails", "hypothesis_not_met", "budget_exceeded"].into_iter().map(|k| (k, 0)).collect();
    let mut items = Vec::new();
    let mut text = header(run, "scan");
    for entry in &corpus {
        let ctx = CodeContext::maximal(&entry.code, b'a')?;
        let item = scan_one(&ctx, mode, run.budget)?;
        *counts.get_mut(item.name()).expect("known status") += 1;
        let _ = writeln!(text, "{} n = {}: {}", entry.code, ctx.n, item.name());
        items.push(json!({ "code": entry.code, "n": ctx.n, "origin": entry.origin, "status": item.name() }));
    }
    let partial = counts["budget_exceeded"] > 0;
    let applicable = counts["holds"] + counts["fails"];
    let _ = writeln!(
        text,
        "{} codes; {} of {applicable} applicable hold{}",
        corpus.len(),
        counts["holds"],
        if partial { "; partial, budget exceeded" } else { "" }
    );
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "seed": run.seed,
        "command": "scan",
        "mode": mode.name(),
        "corpus": config,
        "limit": args.limit,
        "codes": corpus.len(),
        "counts": counts,
        "holds_fraction": format!("{}/{applicable}", counts["holds"]),
        "partial": partial,
        "items": items,
    });
    Ok(Outcome { json, text, code: if partial { PRECONDITION } else { PASS } })
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let run = &cli.run;
    match &cli.command {
        Command::Factorize { n, kind } => factorize(run, *n, *kind),
        Command::Check { file, all, code, class, maximal, factorize } => {
            let none = !(*code || *class || *maximal || *factorize);
            let every = *all || none;
            let checks = Checks {
                code: every || *code,
                class: every || *class,
                maximal: every || *maximal,
                factorize: every || *factorize,
            };
            check(run, file, checks)
        }
        Command::Analyze { file, letter } => analyze_file(run, file, *letter),
        Command::Scan { mode, corpus } => scan(run, *mode, corpus),
    }
}

fn emit(run: &RunConfig, body: &str) -> Result<(), String> {
    match &run.out {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (body, code) = match execute(&cli) {
        Ok(out) => match cli.run.format {
            Format::Json => (serde_json::to_string_pretty(&out.json).expect("json") + "\n", out.code),
            Format::Text => (out.text, out.code),
        },
        Err(f) => {
            eprintln!("error: {}", f.message);
            let body = match cli.run.format {
                Format::Json => {
                    let v = json!({ "schema_version": SCHEMA_VERSION, "seed": cli.run.seed, "error": f.message, "exit_code": f.code });
                    serde_json::to_string_pretty(&v).expect("json") + "\n"
                }
                Format::Text => format!("error (schema {SCHEMA_VERSION}, seed {}): {}\n", cli.run.seed, f.message),
            };
            (body, f.code)
        }
    };
    if let Err(e) = emit(&cli.run, &body) {
        eprintln!("error: {e}");
        return ExitCode::from(PRECONDITION);
    }
    ExitCode::from(code)
}
