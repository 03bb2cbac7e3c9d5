//! The Martelli-Montanari algorithm as an explicit nondeterministic
//! transition system over equation sets.
//!
//! Actions are numbered as in the usual presentation:
//!
//! | no. | equation                                   | effect                         |
//! |-----|--------------------------------------------|--------------------------------|
//! | 1   | `f(s1..sn) = f(t1..tn)`                     | replace by `s1=t1, ..., sn=tn` |
//! | 2   | `f(..) = g(..)`, `f ≠ g`                    | halt with failure              |
//! | 3   | `X = X`                                    | delete                         |
//! | 4   | `t = X`, `t` not a variable                | replace by `X = t`             |
//! | 5   | `X = t`, `X ∉ Var(t)`, `X` occurs elsewhere | apply `{X/t}` to the others    |
//! | 6   | `X = t`, `X ∈ Var(t)`, `X ≠ t`              | halt with failure              |
//!
//! The occur-check-free variant in [`crate::mma_minus`] reuses the action,
//! strategy and trace types defined here.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::terms::{is_ground, EquationSet, Equation, Side, Substitutable, Substitution, Term, Var};

pub const DEFAULT_STATE_BOUND: usize = 100_000;
pub const DEFAULT_FUEL: usize = 10_000;
/// Runs whose equation set grows past this many symbols, or this term
/// height, count as out of fuel.
pub const MAX_STATE_SIZE: usize = 20_000;
pub const MAX_TERM_HEIGHT: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionKind {
    Decompose,
    Clash,
    DeleteTrivial,
    Orient,
    Eliminate,
    OccurHalt,
    /// Action (5′) of the occur-check-free variant.
    PartialEliminate,
}

impl ActionKind {
    pub fn number(self) -> &'static str {
        match self {
            ActionKind::Decompose => "1",
            ActionKind::Clash => "2",
            ActionKind::DeleteTrivial => "3",
            ActionKind::Orient => "4",
            ActionKind::Eliminate => "5",
            ActionKind::OccurHalt => "6",
            ActionKind::PartialEliminate => "5'",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ActionKind::Decompose => "decompose",
            ActionKind::Clash => "clash",
            ActionKind::DeleteTrivial => "delete",
            ActionKind::Orient => "orient",
            ActionKind::Eliminate => "eliminate",
            ActionKind::OccurHalt => "occur-halt",
            ActionKind::PartialEliminate => "partial-eliminate",
        }
    }
}

/// One variable occurrence inside an equation set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    pub equation: usize,
    pub side: Side,
    pub path: Vec<usize>,
}

impl Occurrence {
    pub fn lhs_of(equation: usize) -> Self {
        Occurrence {
            equation,
            side: Side::Lhs,
            path: Vec::new(),
        }
    }

    pub fn is_whole_lhs(&self) -> bool {
        self.side == Side::Lhs && self.path.is_empty()
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Lhs => "lhs",
            Side::Rhs => "rhs",
        };
        write!(f, "{}.{side}", self.equation)?;
        for p in &self.path {
            write!(f, ".{p}")?;
        }
        Ok(())
    }
}

/// An action applied at one equation position. `binding` is `(X, t)` for
/// eliminations; `selection` lists the replaced occurrences for (5′).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Action {
    pub kind: ActionKind,
    pub position: usize,
    pub binding: Option<(Var, Term)>,
    pub selection: Vec<Occurrence>,
}

impl Action {
    pub fn at(kind: ActionKind, position: usize) -> Self {
        Action {
            kind,
            position,
            binding: None,
            selection: Vec::new(),
        }
    }

    pub fn eliminate(position: usize, x: Var, t: Term) -> Self {
        Action {
            kind: ActionKind::Eliminate,
            position,
            binding: Some((x, t)),
            selection: Vec::new(),
        }
    }

    pub fn partial(position: usize, x: Var, t: Term, selection: Vec<Occurrence>) -> Self {
        Action {
            kind: ActionKind::PartialEliminate,
            position,
            binding: Some((x, t)),
            selection,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})@{}", self.kind.number(), self.position)?;
        if let Some((x, t)) = &self.binding {
            write!(f, " {{{x}/{t}}}")?;
        }
        if !self.selection.is_empty() {
            f.write_str(" at [")?;
            for (i, o) in self.selection.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{o}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

/// Picks one of the applicable actions. Must return an index into `actions`,
/// which is never empty when this is called.
pub trait Strategy {
    fn choose(&mut self, eqs: &EquationSet, actions: &[Action]) -> usize;
    fn name(&self) -> String;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrategyKind {
    Leftmost,
    Rightmost,
    Random(u64),
    /// Bind variables to ground terms as early as possible.
    EagerBind,
    /// Delay ground bindings; reach for occur-check situations first.
    Adversarial,
}

impl StrategyKind {
    pub const NAMED: [StrategyKind; 4] = [
        StrategyKind::Leftmost,
        StrategyKind::Rightmost,
        StrategyKind::EagerBind,
        StrategyKind::Adversarial,
    ];

    pub fn build(&self) -> BuiltinStrategy {
        BuiltinStrategy::new(self.clone())
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyKind::Leftmost => f.write_str("leftmost"),
            StrategyKind::Rightmost => f.write_str("rightmost"),
            StrategyKind::Random(seed) => write!(f, "random:{seed}"),
            StrategyKind::EagerBind => f.write_str("eager-bind"),
            StrategyKind::Adversarial => f.write_str("adversarial"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown strategy `{0}` (expected leftmost, rightmost, eager-bind, adversarial, random:<seed> or a seed)")]
pub struct UnknownStrategy(pub String);

impl FromStr for StrategyKind {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "leftmost" | "leftmost-first" => StrategyKind::Leftmost,
            "rightmost" | "rightmost-first" => StrategyKind::Rightmost,
            "eager-bind" | "bind-first-argument-eagerly" => StrategyKind::EagerBind,
            "adversarial" | "adversarial-delay-binding" => StrategyKind::Adversarial,
            other => {
                let seed = other.strip_prefix("random:").unwrap_or(other);
                StrategyKind::Random(seed.parse().map_err(|_| UnknownStrategy(s.to_string()))?)
            }
        })
    }
}

pub struct BuiltinStrategy {
    kind: StrategyKind,
    rng: ChaCha8Rng,
}

impl BuiltinStrategy {
    pub fn new(kind: StrategyKind) -> Self {
        let seed = match kind {
            StrategyKind::Random(s) => s,
            _ => 0,
        };
        BuiltinStrategy {
            kind,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

fn binding_is_ground(a: &Action) -> bool {
    a.binding.as_ref().is_some_and(|(_, t)| is_ground(t))
}

fn binding_is_cyclic(a: &Action) -> bool {
    a.binding.as_ref().is_some_and(|(x, t)| t.contains_var(x))
}

/// For a (5′) step that rewrites whole left-hand sides: how much larger the
/// inserted term is than the right side it now faces.
fn lhs_growth(eqs: &EquationSet, a: &Action) -> Option<isize> {
    let (_, t) = a.binding.as_ref()?;
    if a.kind != ActionKind::PartialEliminate || !a.selection.iter().all(Occurrence::is_whole_lhs) {
        return None;
    }
    a.selection
        .iter()
        .filter_map(|o| eqs.get(o.equation))
        .map(|e| t.size() as isize - e.rhs.size() as isize)
        .max()
}

fn eager_rank(eqs: &EquationSet, a: &Action) -> u8 {
    match a.kind {
        ActionKind::Eliminate if binding_is_ground(a) => 0,
        ActionKind::Orient if eqs.get(a.position).is_some_and(|e| is_ground(&e.lhs)) => 1,
        _ => 2,
    }
}

fn adversarial_rank(eqs: &EquationSet, a: &Action) -> (u8, isize) {
    match a.kind {
        ActionKind::OccurHalt => (0, 0),
        ActionKind::PartialEliminate => match lhs_growth(eqs, a) {
            Some(g) if g > 0 => (1, -g),
            _ => (7, 0),
        },
        ActionKind::Decompose => (2, 0),
        ActionKind::Eliminate if binding_is_cyclic(a) => (3, 0),
        ActionKind::Eliminate if !binding_is_ground(a) => (4, 0),
        ActionKind::Orient if eqs.get(a.position).is_some_and(|e| !is_ground(&e.lhs)) => (5, 0),
        ActionKind::DeleteTrivial => (6, 0),
        ActionKind::Orient => (8, 0),
        ActionKind::Eliminate => (9, 0),
        ActionKind::Clash => (10, 0),
    }
}

/// Index of the minimum by `key`, first one on ties.
fn argmin_by_key<K: Ord>(actions: &[Action], key: impl Fn(&Action) -> K) -> usize {
    actions
        .iter()
        .enumerate()
        .min_by_key(|(i, a)| (key(a), *i))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

impl Strategy for BuiltinStrategy {
    fn choose(&mut self, eqs: &EquationSet, actions: &[Action]) -> usize {
        match self.kind {
            StrategyKind::Leftmost => 0,
            StrategyKind::Rightmost => {
                let last = actions.iter().map(|a| a.position).max().unwrap_or(0);
                actions.iter().position(|a| a.position == last).unwrap_or(0)
            }
            StrategyKind::Random(_) => self.rng.gen_range(0..actions.len()),
            StrategyKind::EagerBind => argmin_by_key(actions, |a| eager_rank(eqs, a)),
            StrategyKind::Adversarial => argmin_by_key(actions, |a| adversarial_rank(eqs, a)),
        }
    }

    fn name(&self) -> String {
        self.kind.to_string()
    }
}

/// Replays a fixed list of indices into the applicable-action list.
pub struct Scripted {
    picks: Vec<usize>,
    next: usize,
}

impl Scripted {
    pub fn new(picks: Vec<usize>) -> Self {
        Scripted { picks, next: 0 }
    }
}

impl Strategy for Scripted {
    fn choose(&mut self, _: &EquationSet, actions: &[Action]) -> usize {
        let i = self.picks.get(self.next).copied().unwrap_or(0);
        self.next += 1;
        i.min(actions.len() - 1)
    }

    fn name(&self) -> String {
        "scripted".into()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailReason {
    Clash,
    Occur,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Running,
    Failed(FailReason),
    Solved,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmaState {
    pub eqs: EquationSet,
    pub status: Status,
}

impl MmaState {
    pub fn new(eqs: EquationSet) -> Self {
        let status = if eqs.is_solved() { Status::Solved } else { Status::Running };
        MmaState { eqs, status }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MmaError {
    #[error("action {0} is not applicable here")]
    Inapplicable(String),
    #[error("state is not running")]
    NotRunning,
    #[error("state is not solved")]
    NotSolved,
    #[error("(5') on {0} requires a previous (5) on {0}")]
    RequirementD(String),
}

/// The unique action kind an equation admits in MMA, if any.
fn mma_action_at(eqs: &EquationSet, i: usize) -> Option<Action> {
    let e = eqs.get(i)?;
    match (&e.lhs, &e.rhs) {
        (Term::App(f, xs), Term::App(g, ys)) => Some(Action::at(
            if f == g && xs.len() == ys.len() {
                ActionKind::Decompose
            } else {
                ActionKind::Clash
            },
            i,
        )),
        (Term::App(..), Term::Var(_)) => Some(Action::at(ActionKind::Orient, i)),
        (Term::Var(x), t) if t.as_var() == Some(x) => Some(Action::at(ActionKind::DeleteTrivial, i)),
        (Term::Var(x), t) if t.contains_var(x) => Some(Action::at(ActionKind::OccurHalt, i)),
        (Term::Var(x), t) if eqs.occurs_elsewhere(x, i) => Some(Action::eliminate(i, x.clone(), t.clone())),
        (Term::Var(_), _) => None,
    }
}

/// Every applicable action, by position. Empty iff the set is solved.
pub fn applicable_actions(s: &MmaState) -> Vec<Action> {
    if s.status != Status::Running {
        return Vec::new();
    }
    (0..s.eqs.len()).filter_map(|i| mma_action_at(&s.eqs, i)).collect()
}

/// Effect of the actions shared by both algorithms. Halting actions leave
/// the equations unchanged.
pub(crate) fn rewrite(eqs: &EquationSet, a: &Action) -> EquationSet {
    let i = a.position;
    let e = &eqs.as_slice()[i];
    match a.kind {
        ActionKind::Decompose => {
            let parts = e
                .lhs
                .args()
                .iter()
                .zip(e.rhs.args())
                .map(|(s, t)| Equation::new(s.clone(), t.clone()))
                .collect();
            eqs.splice(i, parts)
        }
        ActionKind::DeleteTrivial => eqs.splice(i, Vec::new()),
        ActionKind::Orient => eqs.replace(i, e.flipped()),
        ActionKind::Eliminate => {
            let (x, t) = a.binding.clone().expect("elimination carries a binding");
            let bind = Substitution::singleton(x, t);
            eqs.iter()
                .enumerate()
                .map(|(j, e)| if j == i { e.clone() } else { e.apply(&bind) })
                .collect()
        }
        ActionKind::PartialEliminate => {
            let (_, t) = a.binding.as_ref().expect("elimination carries a binding");
            let mut out = eqs.as_slice().to_vec();
            for o in &a.selection {
                let eq = &mut out[o.equation];
                match o.side {
                    Side::Lhs => eq.lhs = eq.lhs.replace_at(&o.path, t),
                    Side::Rhs => eq.rhs = eq.rhs.replace_at(&o.path, t),
                }
            }
            EquationSet::new(out)
        }
        ActionKind::Clash | ActionKind::OccurHalt => eqs.clone(),
    }
}

pub fn step(s: &MmaState, a: &Action) -> Result<MmaState, MmaError> {
    if s.status != Status::Running {
        return Err(MmaError::NotRunning);
    }
    if mma_action_at(&s.eqs, a.position).as_ref() != Some(a) {
        return Err(MmaError::Inapplicable(a.to_string()));
    }
    Ok(match a.kind {
        ActionKind::Clash => MmaState {
            eqs: s.eqs.clone(),
            status: Status::Failed(FailReason::Clash),
        },
        ActionKind::OccurHalt => MmaState {
            eqs: s.eqs.clone(),
            status: Status::Failed(FailReason::Occur),
        },
        _ => MmaState::new(rewrite(&s.eqs, a)),
    })
}

/// Substitution read off a solved state.
pub fn extract_mgu(s: &MmaState) -> Result<Substitution, MmaError> {
    match s.status {
        Status::Solved => s.eqs.to_substitution().ok_or(MmaError::NotSolved),
        _ => Err(MmaError::NotSolved),
    }
}

/// How a run ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Solved,
    SemiSolved,
    Failed(FailReason),
    FuelExhausted,
    /// The state after step `at` had already occurred after step `first_seen`
    /// (canonically), so the transition graph has a cycle.
    Loop { first_seen: usize, at: usize },
    /// Not semi-solved, yet the restricted mode offers no action.
    Stuck,
}

impl Outcome {
    pub fn is_terminated(&self) -> bool {
        matches!(self, Outcome::Solved | Outcome::SemiSolved | Outcome::Failed(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Solved => "solved",
            Outcome::SemiSolved => "semi-solved",
            Outcome::Failed(FailReason::Clash) => "failed-clash",
            Outcome::Failed(FailReason::Occur) => "failed-occur",
            Outcome::FuelExhausted => "fuel-exhausted",
            Outcome::Loop { .. } => "loop",
            Outcome::Stuck => "stuck",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub action: Action,
    pub after: EquationSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub initial: EquationSet,
    pub steps: Vec<TraceStep>,
    pub outcome: Outcome,
}

impl Trace {
    pub fn final_eqs(&self) -> &EquationSet {
        self.steps.last().map(|s| &s.after).unwrap_or(&self.initial)
    }

    /// The equation sets visited, initial one included.
    pub fn states(&self) -> Vec<&EquationSet> {
        std::iter::once(&self.initial).chain(self.steps.iter().map(|s| &s.after)).collect()
    }

    pub fn performs(&self, kind: ActionKind) -> bool {
        self.steps.iter().any(|s| s.action.kind == kind)
    }

    pub fn last_action(&self) -> Option<&Action> {
        self.steps.last().map(|s| &s.action)
    }

    /// The mgu, for runs ending in a solved set.
    pub fn mgu(&self) -> Option<Substitution> {
        match self.outcome {
            Outcome::Solved | Outcome::SemiSolved => self.final_eqs().to_substitution(),
            _ => None,
        }
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "    {{{}}}", self.initial)?;
        for s in &self.steps {
            writeln!(f, "{:<4}{{{}}}   by {}", "", s.after, s.action)?;
        }
        write!(f, "=> {}", self.outcome.label())
    }
}

/// Drives MMA with `strat` for at most `fuel` steps.
pub fn run(e: &EquationSet, strat: &mut dyn Strategy, fuel: usize) -> Trace {
    let mut state = MmaState::new(e.clone());
    let mut steps = Vec::new();
    let outcome = loop {
        match state.status {
            Status::Solved => break Outcome::Solved,
            Status::Failed(r) => break Outcome::Failed(r),
            Status::Running => {}
        }
        let actions = applicable_actions(&state);
        if actions.is_empty() {
            break Outcome::Solved;
        }
        if steps.len() >= fuel {
            break Outcome::FuelExhausted;
        }
        let a = actions[strat.choose(&state.eqs, &actions).min(actions.len() - 1)].clone();
        state = step(&state, &a).expect("chosen action is applicable");
        steps.push(TraceStep {
            action: a,
            after: state.eqs.clone(),
        });
    };
    Trace {
        initial: e.clone(),
        steps,
        outcome,
    }
}

/// Summary of the reachable part of the MMA transition graph.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunGraphSummary {
    pub any_occur_halt: bool,
    pub any_clash: bool,
    pub any_success: bool,
    /// Distinct mgus read off the reachable solved sets.
    pub mgus: Vec<Substitution>,
    /// The state bound was hit before exploration completed.
    pub exhausted: bool,
    pub states: usize,
}

/// Explores every schedule, memoizing states up to equation order.
pub fn enumerate_runs(e: &EquationSet, bound: usize) -> RunGraphSummary {
    explore(e, bound, false)
}

fn explore(e: &EquationSet, bound: usize, stop_on_occur: bool) -> RunGraphSummary {
    let mut summary = RunGraphSummary::default();
    let mut seen: HashSet<EquationSet> = HashSet::new();
    let mut mgus: HashSet<Substitution> = HashSet::new();
    let mut stack = vec![e.clone()];
    seen.insert(e.canonical());
    while let Some(eqs) = stack.pop() {
        let state = MmaState::new(eqs);
        let actions = applicable_actions(&state);
        if actions.is_empty() {
            summary.any_success = true;
            if let Some(s) = state.eqs.to_substitution() {
                if mgus.insert(s.clone()) {
                    summary.mgus.push(s);
                }
            }
            continue;
        }
        for a in &actions {
            match a.kind {
                ActionKind::OccurHalt => {
                    summary.any_occur_halt = true;
                    if stop_on_occur {
                        summary.states = seen.len();
                        return summary;
                    }
                }
                ActionKind::Clash => summary.any_clash = true,
                _ => {
                    let next = rewrite(&state.eqs, a);
                    let key = next.canonical();
                    if seen.contains(&key) {
                        continue;
                    }
                    if seen.len() >= bound {
                        summary.exhausted = true;
                        continue;
                    }
                    seen.insert(key);
                    stack.push(next);
                }
            }
        }
    }
    summary.states = seen.len();
    summary
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        }
    }

    /// Conjunction: any `No` wins, then any `Unknown`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Yes,
        }
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

/// Not subject to occur-check: no reachable state admits action (6).
pub fn is_nsto(e: &EquationSet, bound: usize) -> Verdict {
    let s = explore(e, bound, true);
    if s.any_occur_halt {
        Verdict::No
    } else if s.exhausted {
        Verdict::Unknown
    } else {
        Verdict::Yes
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OcfSearch {
    Found(Trace),
    None,
    Unknown,
}

impl OcfSearch {
    pub fn verdict(&self) -> Verdict {
        match self {
            OcfSearch::Found(_) => Verdict::Yes,
            OcfSearch::None => Verdict::No,
            OcfSearch::Unknown => Verdict::Unknown,
        }
    }
}

/// Searches for a terminating run that never performs action (6).
/// Ground bindings are tried first, so the witness is usually short.
pub fn exists_ocf_run(e: &EquationSet, bound: usize) -> OcfSearch {
    enum Search {
        Found(Vec<TraceStep>, Outcome),
        Dead,
        OutOfBudget,
    }

    fn go(eqs: &EquationSet, dead: &mut HashMap<EquationSet, ()>, bound: usize, visited: &mut usize) -> Search {
        let state = MmaState::new(eqs.clone());
        let mut actions = applicable_actions(&state);
        if actions.is_empty() {
            return Search::Found(Vec::new(), Outcome::Solved);
        }
        actions.sort_by_key(|a| eager_rank(eqs, a));
        let mut out_of_budget = false;
        for a in actions {
            match a.kind {
                ActionKind::OccurHalt => {}
                ActionKind::Clash => {
                    let after = eqs.clone();
                    return Search::Found(vec![TraceStep { action: a, after }], Outcome::Failed(FailReason::Clash));
                }
                _ => {
                    let next = rewrite(eqs, &a);
                    let key = next.canonical();
                    if dead.contains_key(&key) {
                        continue;
                    }
                    if *visited >= bound {
                        out_of_budget = true;
                        continue;
                    }
                    *visited += 1;
                    match go(&next, dead, bound, visited) {
                        Search::Found(mut rest, o) => {
                            rest.insert(0, TraceStep { action: a, after: next });
                            return Search::Found(rest, o);
                        }
                        Search::Dead => {
                            dead.insert(key, ());
                        }
                        Search::OutOfBudget => out_of_budget = true,
                    }
                }
            }
        }
        if out_of_budget {
            Search::OutOfBudget
        } else {
            Search::Dead
        }
    }

    let mut visited = 1;
    match go(e, &mut HashMap::new(), bound, &mut visited) {
        Search::Found(steps, outcome) => OcfSearch::Found(Trace {
            initial: e.clone(),
            steps,
            outcome,
        }),
        Search::Dead => OcfSearch::None,
        Search::OutOfBudget => OcfSearch::Unknown,
    }
}

/// Decides unifiability with a single leftmost run and returns the mgu.
pub fn mgu(e: &EquationSet) -> Option<Substitution> {
    let t = run(e, &mut StrategyKind::Leftmost.build(), usize::MAX);
    t.mgu()
}
