//! The nondeterministic Robinson algorithm over disagreement pairs.
//!
//! A run keeps the current substitution θ together with the instances Aθ
//! and Hθ, plus Bθ for any number of tracked bystander atoms, so that
//! properties of intermediate instances can be checked step by step.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::terms::{Atom, Substitutable, Substitution, Term};

/// Outermost positions where `a` and `h` differ, left to right.
pub fn disagreement_pairs(a: &Term, h: &Term) -> Vec<(Term, Term)> {
    fn go(a: &Term, h: &Term, out: &mut Vec<(Term, Term)>) {
        if a == h {
            return;
        }
        match (a, h) {
            (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
                for (x, y) in xs.iter().zip(ys) {
                    go(x, y, out);
                }
            }
            _ => out.push((a.clone(), h.clone())),
        }
    }
    let mut out = Vec::new();
    go(a, h, &mut out);
    out
}

pub fn atom_disagreement_pairs(a: &Atom, h: &Atom) -> Vec<(Term, Term)> {
    disagreement_pairs(&a.to_term(), &h.to_term())
}

/// Picks one of the current disagreement pairs.
pub trait PairChooser {
    fn choose(&mut self, pairs: &[(Term, Term)]) -> usize;
}

pub struct FirstPair;

impl PairChooser for FirstPair {
    fn choose(&mut self, _: &[(Term, Term)]) -> usize {
        0
    }
}

pub struct LastPair;

impl PairChooser for LastPair {
    fn choose(&mut self, pairs: &[(Term, Term)]) -> usize {
        pairs.len() - 1
    }
}

pub struct RandomPair(ChaCha8Rng);

impl RandomPair {
    pub fn new(seed: u64) -> Self {
        RandomPair(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl PairChooser for RandomPair {
    fn choose(&mut self, pairs: &[(Term, Term)]) -> usize {
        self.0.gen_range(0..pairs.len())
    }
}

/// A fixed list of choices, consumed in order (indices wrap into range).
pub struct ScriptedPairs {
    script: Vec<usize>,
    next: usize,
}

impl ScriptedPairs {
    pub fn new(script: Vec<usize>) -> Self {
        ScriptedPairs { script, next: 0 }
    }
}

impl PairChooser for ScriptedPairs {
    fn choose(&mut self, pairs: &[(Term, Term)]) -> usize {
        let c = self.script.get(self.next).copied().unwrap_or(0);
        self.next += 1;
        c % pairs.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobinsonState {
    pub theta: Substitution,
    pub a_inst: Term,
    pub h_inst: Term,
    pub observers: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RobinsonOutcome {
    Success { mgu: Substitution, state: RobinsonState },
    ClashFailure { pair: (Term, Term) },
    OccurFailure { pair: (Term, Term) },
}

impl RobinsonOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, RobinsonOutcome::Success { .. })
    }

    pub fn mgu(&self) -> Option<&Substitution> {
        match self {
            RobinsonOutcome::Success { mgu, .. } => Some(mgu),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Bound,
    Done(RobinsonOutcome),
}

/// An in-progress run that can be driven one binding at a time.
#[derive(Debug, Clone)]
pub struct Robinson {
    state: RobinsonState,
}

impl Robinson {
    pub fn new(a: &Atom, h: &Atom, observers: &[Atom]) -> Self {
        Self::from_terms(a.to_term(), h.to_term(), observers.iter().map(Atom::to_term).collect())
    }

    pub fn from_terms(a: Term, h: Term, observers: Vec<Term>) -> Self {
        Robinson {
            state: RobinsonState {
                theta: Substitution::new(),
                a_inst: a,
                h_inst: h,
                observers,
            },
        }
    }

    pub fn state(&self) -> &RobinsonState {
        &self.state
    }

    pub fn pairs(&self) -> Vec<(Term, Term)> {
        disagreement_pairs(&self.state.a_inst, &self.state.h_inst)
    }

    pub fn step(&mut self, chooser: &mut dyn PairChooser) -> Step {
        let pairs = self.pairs();
        if pairs.is_empty() {
            return Step::Done(RobinsonOutcome::Success {
                mgu: self.state.theta.clone(),
                state: self.state.clone(),
            });
        }
        let (s, t) = pairs[chooser.choose(&pairs).min(pairs.len() - 1)].clone();
        let (x, t) = match (&s, &t) {
            (Term::Var(x), _) => (x.clone(), t.clone()),
            (_, Term::Var(x)) => (x.clone(), s.clone()),
            _ => return Step::Done(RobinsonOutcome::ClashFailure { pair: (s, t) }),
        };
        if t.contains_var(&x) {
            return Step::Done(RobinsonOutcome::OccurFailure { pair: (s, t.clone()) });
        }
        let bind = Substitution::singleton(x, t);
        let st = &mut self.state;
        st.theta = st.theta.compose(&bind);
        st.a_inst = st.a_inst.apply(&bind);
        st.h_inst = st.h_inst.apply(&bind);
        st.observers = st.observers.apply(&bind);
        Step::Bound
    }
}

/// Runs to completion. `observers` receive Bθ for the final θ on success.
pub fn unify_robinson(a: &Atom, h: &Atom, observers: &[Atom], chooser: &mut dyn PairChooser) -> RobinsonOutcome {
    let mut run = Robinson::new(a, h, observers);
    loop {
        if let Step::Done(out) = run.step(chooser) {
            return out;
        }
    }
}

pub fn unify_terms_robinson(a: &Term, h: &Term, chooser: &mut dyn PairChooser) -> RobinsonOutcome {
    let mut run = Robinson::from_terms(a.clone(), h.clone(), Vec::new());
    loop {
        if let Step::Done(out) = run.step(chooser) {
            return out;
        }
    }
}

/// Outcomes of every schedule, exploring each choice of disagreement pair.
/// Stops after `limit` completed runs.
pub fn all_robinson_runs(a: &Atom, h: &Atom, limit: usize) -> Vec<RobinsonOutcome> {
    fn go(run: Robinson, limit: usize, out: &mut Vec<RobinsonOutcome>) {
        if out.len() >= limit {
            return;
        }
        let n = run.pairs().len().max(1);
        for i in 0..n {
            let mut next = run.clone();
            match next.step(&mut ScriptedPairs::new(vec![i])) {
                Step::Done(o) => {
                    out.push(o);
                    if n == 1 || out.len() >= limit {
                        return;
                    }
                }
                Step::Bound => go(next, limit, out),
            }
        }
    }
    let mut out = Vec::new();
    go(Robinson::new(a, h, &[]), limit, &mut out);
    out
}
