use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use occur_core::corpus::{self, ENTRIES};
use occur_core::iterms::{i_equivalent, solve_rational, DEFAULT_DEPTH};
use occur_core::mma::{self, exists_ocf_run, is_nsto, OcfSearch, Outcome, StrategyKind, Verdict, DEFAULT_FUEL, DEFAULT_STATE_BOUND};
use occur_core::mma_minus::{run_minus, Mode};
use occur_core::parser::{parse_equations, parse_program, parse_query, ParseError};
use occur_core::robinson::{unify_terms_robinson, FirstPair, LastPair, PairChooser, RandomPair, RobinsonOutcome};
use occur_core::sld::{self, DeriveOptions, Engine, NodeStatus, SelectionRule, Traversal};
use occur_core::terms::{EquationSet, Term};
use occur_core::theorem::{run_suite, SuiteConfig};
use occur_core::trace::TraceDocument;

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(name = "occur-lab", version, about = "Unification with and without the occur-check")]
struct Cli {
    /// Print a JSON document on standard output instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized strategies, rules and generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Mma,
    MmaMinus,
    Robinson,
}

#[derive(Subcommand)]
enum Command {
    /// Run one unification and print the trace.
    Unify {
        /// Equation set, or a file containing one.
        eqs: String,
        #[arg(long, value_enum, default_value = "mma")]
        algo: Algo,
        /// leftmost, rightmost, eager-bind, adversarial or random[:SEED].
        #[arg(long, default_value = "leftmost")]
        strategy: String,
        #[arg(long, default_value = "restricted")]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: usize,
    },
    /// Decide whether no run can reach the occur-check.
    Nsto {
        eqs: String,
        #[arg(long, default_value_t = DEFAULT_STATE_BOUND)]
        bound: usize,
    },
    /// Find a terminating run that avoids the occur-check.
    OcfRun {
        eqs: String,
        #[arg(long, default_value_t = DEFAULT_STATE_BOUND)]
        bound: usize,
    },
    /// Compare two equation sets over rational trees: `iequiv E1 -- E2`.
    Iequiv {
        eqs1: String,
        #[arg(last = true, required = true)]
        eqs2: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Build a bounded SLD-tree.
    Derive(DeriveArgs),
    /// Differential test of the occur-check-free variant on random inputs.
    TheoremTest {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long)]
        fuel: Option<usize>,
        #[arg(long, default_value_t = 20_000)]
        bound: usize,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Embedded programs.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Args)]
struct DeriveArgs {
    /// Initial query.
    query: String,
    /// Program file (defaults to the embedded nqueens fragment).
    #[arg(long)]
    program: Option<String>,
    /// leftmost, rightmost, round-robin or random:SEED.
    #[arg(long, default_value = "leftmost")]
    rule: SelectionRule,
    #[arg(long, default_value_t = sld::DEFAULT_DEPTH)]
    depth: usize,
    #[arg(long, default_value = "mma")]
    engine: Engine,
    /// Follow only the first resolvable clause at each node.
    #[arg(long)]
    single_branch: bool,
    /// Check linearity, groundness, NSTO and occur-check-free runs.
    #[arg(long)]
    report: bool,
    #[arg(long, default_value_t = DEFAULT_STATE_BOUND)]
    bound: usize,
    /// Print every node.
    #[arg(long)]
    tree: bool,
}

#[derive(Subcommand)]
enum CorpusAction {
    List,
    Show { name: String },
}

/// Exit status plus what to print.
struct Report {
    code: u8,
    text: String,
    doc: TraceDocument,
}

fn read_input(arg: &str) -> anyhow::Result<String> {
    if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
    } else {
        Ok(arg.to_string())
    }
}

fn equations(arg: &str) -> anyhow::Result<EquationSet> {
    Ok(parse_equations(&read_input(arg)?)?)
}

fn braces(e: &EquationSet) -> String {
    format!("{{{e}}}")
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Yes => EXIT_OK,
        Verdict::No => EXIT_FAIL,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

fn outcome_code(o: &Outcome) -> u8 {
    match o {
        Outcome::Solved | Outcome::SemiSolved => EXIT_OK,
        Outcome::Failed(_) => EXIT_FAIL,
        _ => EXIT_UNKNOWN,
    }
}

fn strategy(s: &str, seed: u64) -> anyhow::Result<StrategyKind> {
    if s == "random" {
        return Ok(StrategyKind::Random(seed));
    }
    Ok(s.parse()?)
}

fn unify(cmd: Vec<String>, seed: u64, e: &EquationSet, algo: Algo, strat: &str, mode: Mode, fuel: usize) -> anyhow::Result<Report> {
    let kind = strategy(strat, seed)?;
    if let Algo::Robinson = algo {
        let (ls, rs): (Vec<Term>, Vec<Term>) = e.iter().map(|q| (q.lhs.clone(), q.rhs.clone())).unzip();
        let mut chooser: Box<dyn PairChooser> = match kind {
            StrategyKind::Rightmost => Box::new(LastPair),
            StrategyKind::Random(s) => Box::new(RandomPair::new(s)),
            _ => Box::new(FirstPair),
        };
        let out = unify_terms_robinson(&Term::app("eqs", ls), &Term::app("eqs", rs), chooser.as_mut());
        let (code, status, text) = match &out {
            RobinsonOutcome::Success { mgu, .. } => (EXIT_OK, "solved", format!("mgu {mgu}")),
            RobinsonOutcome::ClashFailure { pair } => (EXIT_FAIL, "failed-clash", format!("clash on {} = {}", pair.0, pair.1)),
            RobinsonOutcome::OccurFailure { pair } => (EXIT_FAIL, "failed-occur", format!("occur-check on {} = {}", pair.0, pair.1)),
        };
        let doc = TraceDocument::new(cmd, seed, braces(e), status)
            .with_result(json!({"algo": "robinson", "mgu": out.mgu().map(ToString::to_string)}));
        return Ok(Report { code, text: format!("{text}\n=> {status}"), doc });
    }
    let mut s = kind.build();
    let trace = match algo {
        Algo::MmaMinus => run_minus(e, &mut s, mode, fuel),
        _ => mma::run(e, &mut s, fuel),
    };
    let mgu = trace.mgu();
    let mut text = trace.to_string();
    if let Some(m) = &mgu {
        text.push_str(&format!("\nmgu {m}"));
    }
    let algo_name = match algo {
        Algo::MmaMinus => format!("mma-minus/{mode}"),
        _ => "mma".to_string(),
    };
    let doc = TraceDocument::from_trace(cmd, seed, &trace).with_result(json!({
        "algo": algo_name,
        "strategy": kind.to_string(),
        "mgu": mgu.map(|m| m.to_string()),
    }));
    Ok(Report {
        code: outcome_code(&trace.outcome),
        text,
        doc,
    })
}

fn derive(cmd: Vec<String>, seed: u64, a: &DeriveArgs) -> anyhow::Result<Report> {
    let program = match &a.program {
        Some(p) => parse_program(&read_input(p)?)?,
        None => corpus::nqueens_program(),
    };
    let query = parse_query(&read_input(&a.query)?)?;
    let opts = DeriveOptions {
        rule: a.rule,
        depth: a.depth,
        traversal: if a.single_branch { Traversal::SingleBranch } else { Traversal::AllClauses },
        engine: a.engine,
        ..DeriveOptions::default()
    };
    let tree = sld::derive(&query, &program, opts)?;
    let count = |s: NodeStatus| tree.nodes.iter().filter(|n| n.status == s).count();
    let (succ, fail, cut) = (count(NodeStatus::Success), count(NodeStatus::Failure), count(NodeStatus::Cut));
    let mut text = String::new();
    if a.tree {
        for n in &tree.nodes {
            let via = n.via.as_ref().map(|r| format!(" via clause {}", r.clause_index + 1)).unwrap_or_default();
            let q = if n.query.is_empty() { "□".to_string() } else { n.query.to_string() };
            text.push_str(&format!("{}{q}{via} [{:?}]\n", "  ".repeat(n.depth), n.status));
        }
    }
    text.push_str(&format!(
        "nodes {}, success leaves {succ}, failure leaves {fail}, cut at depth {cut}{}",
        tree.nodes.len(),
        if tree.complete { "" } else { " (node limit reached)" }
    ));
    let status = if succ > 0 {
        "success"
    } else if tree.finitely_failed() {
        "finite-failure"
    } else {
        "unknown"
    };
    let mut result = json!({
        "rule": a.rule.to_string(),
        "engine": a.engine.to_string(),
        "depth": a.depth,
        "nodes": tree.nodes.len(),
        "success_leaves": succ,
        "failure_leaves": fail,
        "cut_leaves": cut,
        "complete": tree.complete,
    });
    let mut code = match status {
        "success" => EXIT_OK,
        "finite-failure" => EXIT_FAIL,
        _ => EXIT_UNKNOWN,
    };
    if a.report {
        let r = sld::check_derivation_invariants(&tree, a.bound);
        text.push_str(&format!("\nprecondition (ground first arguments in query): {}", r.precondition_ok));
        let mut all = Verdict::Yes;
        for (name, v) in r.verdicts() {
            text.push_str(&format!("\n{name}: {}", v.label()));
            result[name] = json!(v.label());
            all = all.and(v);
        }
        text.push_str(&format!("\navailable unifications: {}", r.available));
        result["precondition_ok"] = json!(r.precondition_ok);
        result["available_unifications"] = json!(r.available);
        code = verdict_code(all);
    }
    let doc = TraceDocument::new(cmd, seed, query.to_string(), status).with_result(result);
    Ok(Report { code, text, doc })
}

fn run(cli: &Cli, cmd: Vec<String>) -> anyhow::Result<Report> {
    let seed = cli.seed;
    match &cli.command {
        Command::Unify {
            eqs,
            algo,
            strategy,
            mode,
            fuel,
        } => unify(cmd, seed, &equations(eqs)?, *algo, strategy, *mode, *fuel),
        Command::Nsto { eqs, bound } => {
            let e = equations(eqs)?;
            let v = is_nsto(&e, *bound);
            let doc = TraceDocument::new(cmd, seed, braces(&e), v.label()).with_result(json!({"nsto": v.label(), "bound": bound}));
            Ok(Report {
                code: verdict_code(v),
                text: format!("nsto: {}", v.label()),
                doc,
            })
        }
        Command::OcfRun { eqs, bound } => {
            let e = equations(eqs)?;
            Ok(match exists_ocf_run(&e, *bound) {
                OcfSearch::Found(t) => {
                    let last = t.last_action().map(|a| a.kind.number().to_string());
                    let text = format!("{t}\nwitness found");
                    let doc = TraceDocument::from_trace(cmd, seed, &t)
                        .with_result(json!({"ocf_run": "found", "last_action": last}));
                    Report { code: EXIT_OK, text, doc }
                }
                other => {
                    let label = if matches!(other, OcfSearch::None) { "none" } else { "unknown" };
                    Report {
                        code: verdict_code(other.verdict()),
                        text: format!("ocf run: {label}"),
                        doc: TraceDocument::new(cmd, seed, braces(&e), label).with_result(json!({"ocf_run": label})),
                    }
                }
            })
        }
        Command::Iequiv { eqs1, eqs2, depth } => {
            let (a, b) = (equations(eqs1)?, equations(&eqs2.join(" "))?);
            let eq = i_equivalent(&a, &b, *depth);
            let show = |e: &EquationSet| solve_rational(e).map(|s| s.to_string()).unwrap_or_else(|| "none".into());
            let text = format!(
                "i-solution 1: {}\ni-solution 2: {}\ni-equivalent (depth {depth}): {}",
                show(&a),
                show(&b),
                if eq { "yes" } else { "no" }
            );
            let doc = TraceDocument::new(cmd, seed, braces(&a), if eq { "yes" } else { "no" }).with_result(json!({
                "other": braces(&b),
                "depth": depth,
                "i_equivalent": eq,
            }));
            Ok(Report {
                code: if eq { EXIT_OK } else { EXIT_FAIL },
                text,
                doc,
            })
        }
        Command::Derive(a) => derive(cmd, seed, a),
        Command::TheoremTest { count, fuel, bound, depth } => {
            let mut cfg = SuiteConfig {
                count: *count,
                seed,
                bound: *bound,
                depth: *depth,
                ..SuiteConfig::default()
            };
            if let Some(f) = fuel {
                cfg.fuel = *f;
            }
            let r = run_suite(&cfg);
            let status = if r.passed() { "passed" } else { "failed" };
            let doc = TraceDocument::new(cmd, seed, String::new(), status).with_result(json!({
                "generated": r.generated,
                "kept": r.kept,
                "runs": r.runs,
                "correct": r.correct,
                "incorrect": r.incorrect,
                "nonterminating": r.nonterminating,
                "restricted_nonterminating": r.restricted_nonterminating,
                "steps_checked": r.steps_checked,
                "steps_not_i_equivalent": r.steps_not_i_equivalent,
                "semi_solved_checked": r.semi_solved_checked,
                "semi_solved_without_i_solution": r.semi_solved_without_i_solution,
                "counterexamples": r.counterexamples.iter().map(|c| json!({
                    "schedule": c.schedule.to_string(),
                    "input": braces(&c.input),
                    "shrunk": braces(&c.shrunk),
                })).collect::<Vec<_>>(),
            }));
            Ok(Report {
                code: if r.passed() { EXIT_OK } else { EXIT_FAIL },
                text: r.to_string(),
                doc,
            })
        }
        Command::Corpus { action } => match action {
            CorpusAction::List => {
                let text = ENTRIES
                    .iter()
                    .map(|e| format!("{:<10} {}", e.name, e.description))
                    .collect::<Vec<_>>()
                    .join("\n");
                let names: Vec<&str> = ENTRIES.iter().map(|e| e.name).collect();
                let doc = TraceDocument::new(cmd, seed, String::new(), "ok").with_result(json!({"entries": names}));
                Ok(Report { code: EXIT_OK, text, doc })
            }
            CorpusAction::Show { name } => {
                let e = corpus::entry(name).with_context(|| format!("no corpus entry named `{name}`"))?;
                let text = format!(
                    "{}queries: {}\ntags: {}",
                    e.source,
                    e.queries.join("; "),
                    e.tags.join(", ")
                );
                let doc = TraceDocument::new(cmd, seed, String::new(), "ok").with_result(json!({
                    "name": e.name,
                    "source": e.source,
                    "queries": e.queries,
                    "tags": e.tags,
                }));
                Ok(Report { code: EXIT_OK, text, doc })
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let cmd: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    match run(&cli, cmd) {
        Ok(r) => {
            if cli.json {
                println!("{}", r.doc.with_elapsed(start.elapsed()).to_json());
            } else {
                println!("{}", r.text);
            }
            ExitCode::from(r.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.downcast_ref::<ParseError>().is_some()
                || e.downcast_ref::<occur_core::mma::UnknownStrategy>().is_some()
                || e.downcast_ref::<std::io::Error>().is_some()
                || e.to_string().starts_with("no corpus entry");
            ExitCode::from(if usage { EXIT_USAGE } else { EXIT_FAIL })
        }
    }
}
