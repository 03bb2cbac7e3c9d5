//! Randomized differential testing of the occur-check-free variant.
//!
//! Inputs are random small equation sets kept only when some MMA run avoids
//! the occur-check. Each kept input is run under several schedules of the
//! variant and the result is compared with plain MMA.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::iterms::{has_i_solution, i_equivalent, DEFAULT_DEPTH};
use crate::mma::{exists_ocf_run, OcfSearch, MAX_STATE_SIZE, Outcome, StrategyKind, Trace};

/// Step budget per run. Terminating runs on inputs of this size need far
/// fewer steps; the rest are the unrestricted mode's divergent schedules.
pub const SUITE_FUEL: usize = 1_000;
/// Symbol budget per unrestricted run. Inputs start below 200 symbols.
/// Restricted runs get the global cap so their termination is measured.
pub const SUITE_MAX_SIZE: usize = 500;
use crate::mma_minus::{classify_result, run_minus_bounded, Classification, Mode};
use crate::terms::{Equation, EquationSet, Term};

/// Shape limits for generated inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub max_equations: usize,
    pub max_vars: usize,
    pub max_depth: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_equations: 6,
            max_vars: 4,
            max_depth: 3,
        }
    }
}

const FUNCTORS: [(&str, usize); 6] = [("a", 0), ("b", 0), ("f", 1), ("g", 1), ("h", 2), ("k", 2)];
const VARS: [&str; 4] = ["X", "Y", "Z", "W"];

fn random_term(rng: &mut ChaCha8Rng, vars: &[&str], depth: usize) -> Term {
    // variables are favoured so that cyclic and shared bindings are common
    if depth == 0 || rng.gen_bool(0.4) {
        if rng.gen_bool(0.75) {
            return Term::var(vars.choose(rng).expect("nonempty"));
        }
        let (c, _) = FUNCTORS[rng.gen_range(0..2)];
        return Term::constant(c);
    }
    let (f, n) = FUNCTORS[rng.gen_range(2..FUNCTORS.len())];
    Term::app(f, (0..n).map(|_| random_term(rng, vars, depth - 1)).collect())
}

pub fn random_equation_set(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> EquationSet {
    let nv = rng.gen_range(1..=cfg.max_vars.clamp(1, VARS.len()));
    let vars = &VARS[..nv];
    let ne = rng.gen_range(1..=cfg.max_equations.max(1));
    (0..ne)
        .map(|_| {
            let lhs = if rng.gen_bool(0.5) {
                Term::var(vars.choose(rng).expect("nonempty"))
            } else {
                random_term(rng, vars, cfg.max_depth)
            };
            Equation::new(lhs, random_term(rng, vars, cfg.max_depth))
        })
        .collect()
}

/// One MMA⁻ schedule: a strategy and a mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub strategy: StrategyKind,
    pub mode: Mode,
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.mode, self.strategy)
    }
}

/// Named strategies in both modes plus two seeded random ones per mode.
pub fn schedules(input_seed: u64) -> Vec<Schedule> {
    let mut out = Vec::new();
    for mode in [Mode::Restricted, Mode::Unrestricted] {
        for s in StrategyKind::NAMED {
            out.push(Schedule { strategy: s, mode });
        }
        for k in 0..2 {
            out.push(Schedule {
                strategy: StrategyKind::Random(input_seed.wrapping_mul(31).wrapping_add(k)),
                mode,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub count: usize,
    pub seed: u64,
    pub fuel: usize,
    pub max_size: usize,
    pub bound: usize,
    pub depth: usize,
    pub gen: GenConfig,
    /// i-equivalence is checked for at most this many leading steps of each run.
    pub checked_steps_per_run: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            count: 1000,
            seed: 7,
            fuel: SUITE_FUEL,
            max_size: SUITE_MAX_SIZE,
            bound: 20_000,
            depth: DEFAULT_DEPTH,
            gen: GenConfig::default(),
            checked_steps_per_run: 50,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub input: EquationSet,
    pub shrunk: EquationSet,
    pub schedule: Schedule,
    pub trace: Trace,
}

#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub generated: usize,
    pub kept: usize,
    pub runs: usize,
    pub correct: usize,
    pub incorrect: usize,
    pub nonterminating: usize,
    /// Non-terminating runs in restricted mode.
    pub restricted_nonterminating: usize,
    pub steps_checked: usize,
    pub steps_not_i_equivalent: usize,
    pub semi_solved_checked: usize,
    pub semi_solved_without_i_solution: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.incorrect == 0 && self.steps_not_i_equivalent == 0 && self.semi_solved_without_i_solution == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "inputs generated     {}", self.generated)?;
        writeln!(f, "inputs kept          {}", self.kept)?;
        writeln!(f, "runs                 {}", self.runs)?;
        writeln!(f, "  correct            {}", self.correct)?;
        writeln!(f, "  incorrect          {}", self.incorrect)?;
        writeln!(
            f,
            "  nonterminating     {} (restricted: {})",
            self.nonterminating, self.restricted_nonterminating
        )?;
        writeln!(
            f,
            "steps i-equivalent   {}/{}",
            self.steps_checked - self.steps_not_i_equivalent,
            self.steps_checked
        )?;
        write!(
            f,
            "semi-solved solvable {}/{}",
            self.semi_solved_checked - self.semi_solved_without_i_solution,
            self.semi_solved_checked
        )?;
        for c in &self.counterexamples {
            write!(f, "\ncounterexample under {}: {{{}}} (shrunk from {{{}}})", c.schedule, c.shrunk, c.input)?;
        }
        Ok(())
    }
}

fn kept(e: &EquationSet, bound: usize) -> bool {
    matches!(exists_ocf_run(e, bound), OcfSearch::Found(_))
}

fn run_schedule(e: &EquationSet, s: &Schedule, cfg: &SuiteConfig) -> Trace {
    let max_size = match s.mode {
        Mode::Restricted => MAX_STATE_SIZE,
        Mode::Unrestricted => cfg.max_size,
    };
    run_minus_bounded(e, &mut s.strategy.build(), s.mode, cfg.fuel, max_size)
}

/// Greedy shrinking: drop equations, then replace subterms by constants or
/// variables, keeping any change under which `still_fails` holds.
pub fn shrink(e: &EquationSet, still_fails: impl Fn(&EquationSet) -> bool) -> EquationSet {
    let mut cur = e.clone();
    'outer: loop {
        for i in 0..cur.len() {
            let cand = cur.splice(i, Vec::new());
            if !cand.is_empty() && still_fails(&cand) {
                cur = cand;
                continue 'outer;
            }
        }
        for i in 0..cur.len() {
            let eq = cur.as_slice()[i].clone();
            for (side_is_lhs, t) in [(true, &eq.lhs), (false, &eq.rhs)] {
                for (path, sub) in subterm_paths(t) {
                    if sub.size() <= 1 {
                        continue;
                    }
                    let mut replacements = vec![Term::constant("a")];
                    replacements.extend(crate::terms::vars_of(sub).into_iter().map(Term::Var));
                    for r in replacements {
                        let new_side = t.replace_at(&path, &r);
                        let new_eq = if side_is_lhs {
                            Equation::new(new_side, eq.rhs.clone())
                        } else {
                            Equation::new(eq.lhs.clone(), new_side)
                        };
                        let cand = cur.replace(i, new_eq);
                        if still_fails(&cand) {
                            cur = cand;
                            continue 'outer;
                        }
                    }
                }
            }
        }
        return cur;
    }
}

fn subterm_paths(t: &Term) -> Vec<(Vec<usize>, &Term)> {
    fn go<'a>(t: &'a Term, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Term)>) {
        out.push((path.clone(), t));
        for (i, a) in t.args().iter().enumerate() {
            path.push(i);
            go(a, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Checks one kept input under every schedule, accumulating into `r`.
pub fn check_input(e: &EquationSet, input_seed: u64, cfg: &SuiteConfig, r: &mut SuiteReport) {
    for s in schedules(input_seed) {
        let t = run_schedule(e, &s, cfg);
        r.runs += 1;
        {
            for st in t.states().windows(2).take(cfg.checked_steps_per_run) {
                r.steps_checked += 1;
                if !i_equivalent(st[0], st[1], cfg.depth) {
                    r.steps_not_i_equivalent += 1;
                }
            }
        }
        if t.outcome == Outcome::SemiSolved {
            r.semi_solved_checked += 1;
            if !has_i_solution(t.final_eqs()) {
                r.semi_solved_without_i_solution += 1;
            }
        }
        match classify_result(&t, e) {
            Classification::Correct => r.correct += 1,
            Classification::Nonterminating => {
                r.nonterminating += 1;
                if s.mode == Mode::Restricted {
                    r.restricted_nonterminating += 1;
                }
            }
            Classification::Incorrect => {
                r.incorrect += 1;
                let fails = |c: &EquationSet| {
                    kept(c, cfg.bound) && classify_result(&run_schedule(c, &s, cfg), c) == Classification::Incorrect
                };
                let shrunk = shrink(e, fails);
                r.counterexamples.push(Counterexample {
                    input: e.clone(),
                    shrunk,
                    schedule: s.clone(),
                    trace: t,
                });
            }
        }
    }
}

/// Generates inputs until `cfg.count` of them pass the filter.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut r = SuiteReport::default();
    let max_attempts = cfg.count.saturating_mul(50).max(100);
    while r.kept < cfg.count && r.generated < max_attempts {
        let e = random_equation_set(&mut rng, &cfg.gen);
        r.generated += 1;
        if !kept(&e, cfg.bound) {
            continue;
        }
        r.kept += 1;
        let input_seed = rng.gen();
        check_input(&e, input_seed, cfg, &mut r);
    }
    r
}
