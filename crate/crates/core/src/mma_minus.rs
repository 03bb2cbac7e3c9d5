//! Martelli-Montanari without the occur-check.
//!
//! Differences from [`crate::mma`]:
//! * action (6) is gone;
//! * action (5) only requires `X ≠ t` instead of `X ∉ Var(t)`;
//! * action (5′) replaces a nonempty selection of the occurrences of `X` in
//!   the other equations by `t`, and is allowed only once (5) has been
//!   performed on `X`.
//!
//! A run succeeds when the current set is semi-solved and fails on a clash.
//! Restricted mode forbids repeating (5) on a variable and limits (5′) to a
//! single left-hand-side occurrence `X = t'` with `|t| ≤ |t'|`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::mma::{self, rewrite, MAX_STATE_SIZE, MAX_TERM_HEIGHT, Action, ActionKind, FailReason, MmaError, Occurrence, Outcome, Strategy, Trace, TraceStep};
use crate::terms::{EquationSet, Side, Substitution, Term, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Unrestricted,
    Restricted,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Unrestricted => "unrestricted",
            Mode::Restricted => "restricted",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unrestricted" => Ok(Mode::Unrestricted),
            "restricted" => Ok(Mode::Restricted),
            other => Err(format!("unknown mode `{other}` (expected restricted or unrestricted)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MinusStatus {
    Running,
    FailedClash,
    SemiSolvedSuccess,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MinusState {
    pub eqs: EquationSet,
    /// Variables on which (5) has been performed so far.
    pub eliminated: BTreeSet<Var>,
    pub status: MinusStatus,
}

impl MinusState {
    pub fn new(eqs: EquationSet) -> Self {
        MinusState {
            eqs,
            eliminated: BTreeSet::new(),
            status: MinusStatus::Running,
        }
    }
}

/// `Xi ≻ Xk` iff `Xk ∈ Var(ti)`, over the left-hand variables of a set whose
/// equations all have the form `X = t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuccRelation {
    pub vars: Vec<Var>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl SuccRelation {
    pub fn of(e: &EquationSet) -> Option<SuccRelation> {
        let vars: Vec<Var> = e.iter().map(|eq| eq.lhs.as_var().cloned()).collect::<Option<_>>()?;
        let mut edges = BTreeSet::new();
        for (i, eq) in e.iter().enumerate() {
            for (k, x) in vars.iter().enumerate() {
                if eq.rhs.contains_var(x) {
                    edges.insert((i, k));
                }
            }
        }
        Some(SuccRelation { vars, edges })
    }

    /// `reach[i][k]` iff `Xi ≻⁺ Xk`.
    pub fn transitive_closure(&self) -> Vec<Vec<bool>> {
        let n = self.vars.len();
        let mut reach = vec![vec![false; n]; n];
        for &(i, k) in &self.edges {
            reach[i][k] = true;
        }
        for m in 0..n {
            for i in 0..n {
                if reach[i][m] {
                    for k in 0..n {
                        if reach[m][k] {
                            reach[i][k] = true;
                        }
                    }
                }
            }
        }
        reach
    }
}

/// Distinct variable left sides, no `X = X`, and every left-hand variable
/// that occurs on some right side lies on a `≻`-cycle.
pub fn is_semi_solved(e: &EquationSet) -> bool {
    let Some(rel) = SuccRelation::of(e) else {
        return false;
    };
    let distinct: BTreeSet<&Var> = rel.vars.iter().collect();
    if distinct.len() != rel.vars.len() {
        return false;
    }
    if e.iter().any(|eq| eq.lhs == eq.rhs) {
        return false;
    }
    let reach = rel.transitive_closure();
    rel.vars.iter().enumerate().all(|(i, x)| reach[i][i] || e.iter().all(|eq| !eq.rhs.contains_var(x)))
}

/// Occurrences of `x` in every equation except `skip`, in order.
fn occurrences_elsewhere(eqs: &EquationSet, x: &Var, skip: usize) -> Vec<Occurrence> {
    let mut out = Vec::new();
    for (j, e) in eqs.iter().enumerate() {
        if j == skip {
            continue;
        }
        for side in [Side::Lhs, Side::Rhs] {
            for path in e.side(side).var_paths(x) {
                out.push(Occurrence { equation: j, side, path });
            }
        }
    }
    out
}

fn partial_selections(eqs: &EquationSet, i: usize, x: &Var, t: &Term, mode: Mode) -> Vec<Vec<Occurrence>> {
    let occs = occurrences_elsewhere(eqs, x, i);
    match mode {
        Mode::Restricted => occs
            .into_iter()
            .filter(|o| o.is_whole_lhs() && t.size() <= eqs.as_slice()[o.equation].rhs.size())
            .map(|o| vec![o])
            .collect(),
        Mode::Unrestricted => {
            let mut out: Vec<Vec<Occurrence>> = Vec::new();
            let lhs: Vec<Occurrence> = occs.iter().filter(|o| o.is_whole_lhs()).cloned().collect();
            for sel in [vec![occs[0].clone()], occs.clone(), lhs] {
                if !sel.is_empty() && !out.contains(&sel) {
                    out.push(sel);
                }
            }
            out
        }
    }
}

fn actions_at(s: &MinusState, i: usize, mode: Mode) -> Vec<Action> {
    let e = &s.eqs.as_slice()[i];
    match (&e.lhs, &e.rhs) {
        (Term::App(f, xs), Term::App(g, ys)) => vec![Action::at(
            if f == g && xs.len() == ys.len() {
                ActionKind::Decompose
            } else {
                ActionKind::Clash
            },
            i,
        )],
        (Term::App(..), Term::Var(_)) => vec![Action::at(ActionKind::Orient, i)],
        (Term::Var(x), t) if t.as_var() == Some(x) => vec![Action::at(ActionKind::DeleteTrivial, i)],
        (Term::Var(x), t) if s.eqs.occurs_elsewhere(x, i) => {
            let done = s.eliminated.contains(x);
            let mut out = Vec::new();
            if mode == Mode::Unrestricted || !done {
                out.push(Action::eliminate(i, x.clone(), t.clone()));
            }
            if done {
                for sel in partial_selections(&s.eqs, i, x, t, mode) {
                    out.push(Action::partial(i, x.clone(), t.clone(), sel));
                }
            }
            out
        }
        (Term::Var(_), _) => Vec::new(),
    }
}

pub fn applicable_actions_minus(s: &MinusState, mode: Mode) -> Vec<Action> {
    if s.status != MinusStatus::Running {
        return Vec::new();
    }
    (0..s.eqs.len()).flat_map(|i| actions_at(s, i, mode)).collect()
}

fn check(s: &MinusState, a: &Action, mode: Mode) -> Result<(), MmaError> {
    if s.status != MinusStatus::Running {
        return Err(MmaError::NotRunning);
    }
    let bad = || Err(MmaError::Inapplicable(a.to_string()));
    let Some(e) = s.eqs.get(a.position) else {
        return bad();
    };
    if a.kind != ActionKind::PartialEliminate {
        return if actions_at(s, a.position, mode).contains(a) { Ok(()) } else { bad() };
    }
    let Some((x, t)) = &a.binding else {
        return bad();
    };
    if e.lhs.as_var() != Some(x) || &e.rhs != t || e.rhs.as_var() == Some(x) || a.selection.is_empty() {
        return bad();
    }
    if !s.eliminated.contains(x) {
        return Err(MmaError::RequirementD(x.to_string()));
    }
    let mut seen = BTreeSet::new();
    for o in &a.selection {
        let Some(eq) = s.eqs.get(o.equation) else {
            return bad();
        };
        if o.equation == a.position || !seen.insert(o) || eq.side(o.side).at(&o.path).and_then(Term::as_var) != Some(x) {
            return bad();
        }
        if mode == Mode::Restricted && !(o.is_whole_lhs() && t.size() <= eq.rhs.size()) {
            return bad();
        }
    }
    if mode == Mode::Restricted && a.selection.len() != 1 {
        return bad();
    }
    Ok(())
}

/// Applies one action. (5′) selections need not be one of the canonical
/// ones offered by [`applicable_actions_minus`], but must be valid.
pub fn step_minus(s: &MinusState, a: &Action, mode: Mode) -> Result<MinusState, MmaError> {
    check(s, a, mode)?;
    let mut eliminated = s.eliminated.clone();
    if a.kind == ActionKind::Eliminate {
        if let Some((x, _)) = &a.binding {
            eliminated.insert(x.clone());
        }
    }
    let (eqs, status) = match a.kind {
        ActionKind::Clash => (s.eqs.clone(), MinusStatus::FailedClash),
        _ => (rewrite(&s.eqs, a), MinusStatus::Running),
    };
    Ok(MinusState { eqs, eliminated, status })
}

/// Runs until clash, a semi-solved set, a repeated state, or `fuel` steps.
/// Every strategy stops at the first semi-solved set.
pub fn run_minus(e: &EquationSet, strat: &mut dyn Strategy, mode: Mode, fuel: usize) -> Trace {
    run_minus_bounded(e, strat, mode, fuel, MAX_STATE_SIZE)
}

/// [`run_minus`] that also gives up once a step would take the set past
/// `max_size` symbols.
pub fn run_minus_bounded(e: &EquationSet, strat: &mut dyn Strategy, mode: Mode, fuel: usize, max_size: usize) -> Trace {
    let mut state = MinusState::new(e.clone());
    let mut steps = Vec::new();
    let mut seen: HashMap<(EquationSet, BTreeSet<Var>), usize> = HashMap::new();
    seen.insert((e.canonical(), BTreeSet::new()), 0);
    let outcome = loop {
        if state.status == MinusStatus::FailedClash {
            break Outcome::Failed(FailReason::Clash);
        }
        if is_semi_solved(&state.eqs) {
            break Outcome::SemiSolved;
        }
        let actions = applicable_actions_minus(&state, mode);
        if actions.is_empty() {
            break Outcome::Stuck;
        }
        if steps.len() >= fuel || too_large(&state.eqs, max_size) {
            break Outcome::FuelExhausted;
        }
        let a = actions[strat.choose(&state.eqs, &actions).min(actions.len() - 1)].clone();
        if size_after(&state.eqs, &a) > max_size {
            break Outcome::FuelExhausted;
        }
        state = step_minus(&state, &a, mode).expect("chosen action is applicable");
        steps.push(TraceStep {
            action: a,
            after: state.eqs.clone(),
        });
        if state.status == MinusStatus::Running {
            let key = (state.eqs.canonical(), state.eliminated.clone());
            if let Some(&first_seen) = seen.get(&key) {
                break Outcome::Loop {
                    first_seen,
                    at: steps.len(),
                };
            }
            seen.insert(key, steps.len());
        }
    };
    Trace {
        initial: e.clone(),
        steps,
        outcome,
    }
}

/// Symbol count of the state `a` would produce, computed without rewriting.
fn size_after(e: &EquationSet, a: &Action) -> usize {
    let total: usize = e.iter().map(|eq| eq.lhs.size() + eq.rhs.size()).sum();
    let Some((x, t)) = &a.binding else {
        return total;
    };
    let replaced = match a.kind {
        ActionKind::Eliminate => e
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != a.position)
            .map(|(_, eq)| eq.lhs.occurrences_of(x) + eq.rhs.occurrences_of(x))
            .sum(),
        _ => a.selection.len(),
    };
    total.saturating_add(replaced.saturating_mul(t.size().saturating_sub(1)))
}

fn too_large(e: &EquationSet, max_size: usize) -> bool {
    let sides = || e.iter().flat_map(|eq| [&eq.lhs, &eq.rhs]);
    sides().map(Term::size).sum::<usize>() > max_size || sides().any(|t| t.height() > MAX_TERM_HEIGHT)
}

/// Replays a trace step by step through [`step_minus`].
pub fn replay_minus(t: &Trace, mode: Mode) -> Result<MinusState, MmaError> {
    let mut s = MinusState::new(t.initial.clone());
    for st in &t.steps {
        s = step_minus(&s, &st.action, mode)?;
        if s.eqs != st.after {
            return Err(MmaError::Inapplicable(format!("{} produced a different state", st.action)));
        }
    }
    Ok(s)
}

/// Replays a trace through plain MMA.
pub fn replay_mma(t: &Trace) -> Result<mma::MmaState, MmaError> {
    let mut s = mma::MmaState {
        eqs: t.initial.clone(),
        status: mma::Status::Running,
    };
    for st in &t.steps {
        s = mma::step(&s, &st.action)?;
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Correct,
    Incorrect,
    Nonterminating,
}

/// Whether `t` gave the right answer for `original`: failure iff the set is
/// not unifiable, otherwise a solved set representing an mgu.
pub fn classify_result(t: &Trace, original: &EquationSet) -> Classification {
    if !t.outcome.is_terminated() {
        return Classification::Nonterminating;
    }
    let truth = mma::mgu(original);
    let ok = match (&t.outcome, truth) {
        (Outcome::Failed(_), None) => true,
        (Outcome::Solved | Outcome::SemiSolved, Some(reference)) => match t.final_eqs().to_substitution() {
            Some(s) => unifies(&s, original) && same_generality(&s, &reference),
            None => false,
        },
        _ => false,
    };
    if ok {
        Classification::Correct
    } else {
        Classification::Incorrect
    }
}

pub fn unifies(s: &Substitution, e: &EquationSet) -> bool {
    use crate::terms::Substitutable;
    e.iter().all(|eq| eq.lhs.apply(s) == eq.rhs.apply(s))
}

/// `a` and `b` are each an instance of the other (`aδ = b`, `bδ' = a`).
pub fn same_generality(a: &Substitution, b: &Substitution) -> bool {
    use crate::terms::{vars_of, Substitutable};
    let mut relevant: Vec<Var> = vars_of(a);
    for v in vars_of(b) {
        if !relevant.contains(&v) {
            relevant.push(v);
        }
    }
    let tuple = |s: &Substitution| Term::app("", relevant.iter().map(|v| Term::Var(v.clone()).apply(s)).collect());
    let (ta, tb) = (tuple(a), tuple(b));
    matches(&ta, &tb) && matches(&tb, &ta)
}

/// One-way matching: some δ with `pattern δ = target`.
pub fn matches(pattern: &Term, target: &Term) -> bool {
    fn go(p: &Term, t: &Term, m: &mut HashMap<Var, Term>) -> bool {
        match p {
            Term::Var(v) => match m.get(v) {
                Some(bound) => bound == t,
                None => {
                    m.insert(v.clone(), t.clone());
                    true
                }
            },
            Term::App(f, ps) => match t {
                Term::App(g, ts) if f == g && ps.len() == ts.len() => ps.iter().zip(ts).all(|(p, t)| go(p, t, m)),
                _ => false,
            },
        }
    }
    go(pattern, target, &mut HashMap::new())
}
