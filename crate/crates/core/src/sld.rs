//! SLD-resolution with pluggable selection rules, recording every
//! unification made available along the way so that derivation-level
//! properties (linearity, groundness, occur-check freeness) can be checked.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::mma::{self, exists_ocf_run, is_nsto, Outcome, StrategyKind, Verdict, DEFAULT_FUEL, DEFAULT_STATE_BOUND};
use crate::mma_minus::{self, Mode};
use crate::terms::{
    is_ground, is_linear, rename_apart, vars_of, Atom, Clause, Equation, EquationSet, Program, Query, Substitutable,
    Substitution, Term, Var, VarGen,
};

pub const DEFAULT_DEPTH: usize = 30;
pub const DEFAULT_MAX_NODES: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectionRule {
    Leftmost,
    Rightmost,
    Random(u64),
    /// Position `depth mod length`: every atom is eventually selected.
    RoundRobin,
}

impl fmt::Display for SelectionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectionRule::Leftmost => f.write_str("leftmost"),
            SelectionRule::Rightmost => f.write_str("rightmost"),
            SelectionRule::Random(s) => write!(f, "random:{s}"),
            SelectionRule::RoundRobin => f.write_str("round-robin"),
        }
    }
}

impl FromStr for SelectionRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "leftmost" | "ld" => Ok(SelectionRule::Leftmost),
            "rightmost" => Ok(SelectionRule::Rightmost),
            "round-robin" => Ok(SelectionRule::RoundRobin),
            other => other
                .strip_prefix("random:")
                .and_then(|n| n.parse().ok())
                .map(SelectionRule::Random)
                .ok_or_else(|| format!("unknown selection rule `{other}`")),
        }
    }
}

struct Selector {
    rule: SelectionRule,
    rng: ChaCha8Rng,
}

impl Selector {
    fn new(rule: SelectionRule) -> Self {
        let seed = match rule {
            SelectionRule::Random(s) => s,
            _ => 0,
        };
        Selector {
            rule,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn select(&mut self, q: &Query, depth: usize) -> usize {
        let n = q.atoms.len();
        match self.rule {
            SelectionRule::Leftmost => 0,
            SelectionRule::Rightmost => n - 1,
            SelectionRule::Random(_) => self.rng.gen_range(0..n),
            SelectionRule::RoundRobin => depth % n,
        }
    }
}

/// Unification procedure used for resolution steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Full MMA, leftmost strategy.
    Mma,
    /// Restricted occur-check-free variant, leftmost strategy.
    MmaMinus,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Mma => "mma",
            Engine::MmaMinus => "mma-minus",
        })
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mma" => Ok(Engine::Mma),
            "mma-minus" => Ok(Engine::MmaMinus),
            other => Err(format!("unknown engine `{other}` (expected mma or mma-minus)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SldError {
    #[error("unification of {0} did not terminate within fuel")]
    NoTermination(String),
    #[error("occur-check-free engine ended in an unsolved semi-solved set for {0}")]
    SemiSolvedNotSolved(String),
    #[error("cannot resolve an empty query")]
    EmptyQuery,
    #[error("selected position {0} is out of range")]
    BadPosition(usize),
    #[error("clause index {0} is out of range")]
    BadClause(usize),
}

impl Engine {
    /// The mgu of `e`, or `None` when `e` is not unifiable.
    pub fn unify(self, e: &EquationSet) -> Result<Option<Substitution>, SldError> {
        let mut strat = StrategyKind::Leftmost.build();
        let trace = match self {
            Engine::Mma => mma::run(e, &mut strat, DEFAULT_FUEL),
            Engine::MmaMinus => mma_minus::run_minus(e, &mut strat, Mode::Restricted, DEFAULT_FUEL),
        };
        match trace.outcome {
            Outcome::Failed(_) => Ok(None),
            Outcome::Solved | Outcome::SemiSolved => trace
                .final_eqs()
                .to_substitution()
                .map(Some)
                .ok_or_else(|| SldError::SemiSolvedNotSolved(e.to_string())),
            _ => Err(SldError::NoTermination(e.to_string())),
        }
    }
}

/// `{A = H}` for a selected atom and a standardized-apart clause head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvailableUnification {
    pub goal_atom: Atom,
    pub head: Atom,
    pub clause_index: usize,
    pub eqs: EquationSet,
    pub unifiable: bool,
}

impl AvailableUnification {
    fn new(goal_atom: &Atom, head: &Atom, clause_index: usize) -> Self {
        AvailableUnification {
            goal_atom: goal_atom.clone(),
            head: head.clone(),
            clause_index,
            eqs: EquationSet::new(vec![Equation::new(goal_atom.to_term(), head.to_term())]),
            unifiable: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolvent {
    pub clause_index: usize,
    pub renamed: Clause,
    pub mgu: Substitution,
    pub query: Query,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    Child(Resolvent, AvailableUnification),
    UnificationFailure(AvailableUnification),
    NoMatchingHead,
}

/// One SLD step on the atom at `selected` with clause `clause_index`.
/// The clause body replaces the selected atom in place.
pub fn resolution_step(
    q: &Query,
    selected: usize,
    clause_index: usize,
    program: &Program,
    gen: &mut VarGen,
    engine: Engine,
) -> Result<StepResult, SldError> {
    if q.is_empty() {
        return Err(SldError::EmptyQuery);
    }
    let atom = q.atoms.get(selected).ok_or(SldError::BadPosition(selected))?;
    let clause = program.clauses.get(clause_index).ok_or(SldError::BadClause(clause_index))?;
    if clause.head.pred != atom.pred || clause.head.arity() != atom.arity() {
        return Ok(StepResult::NoMatchingHead);
    }
    let forbidden: BTreeSet<Var> = vars_of(q).into_iter().collect();
    let (renamed, _) = rename_apart(clause, &forbidden, gen);
    let mut avail = AvailableUnification::new(atom, &renamed.head, clause_index);
    let Some(mgu) = engine.unify(&avail.eqs)? else {
        return Ok(StepResult::UnificationFailure(avail));
    };
    avail.unifiable = true;
    let mut atoms = Vec::with_capacity(q.atoms.len() + renamed.body.len());
    atoms.extend_from_slice(&q.atoms[..selected]);
    atoms.extend(renamed.body.iter().cloned());
    atoms.extend_from_slice(&q.atoms[selected + 1..]);
    let query = Query::new(atoms).apply(&mgu);
    Ok(StepResult::Child(
        Resolvent {
            clause_index,
            renamed,
            mgu,
            query,
        },
        avail,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeStatus {
    /// Empty query.
    Success,
    /// No clause resolves with the selected atom.
    Failure,
    /// Has children.
    Internal,
    /// Depth bound reached with a nonempty query.
    Cut,
}

#[derive(Debug, Clone)]
pub struct DerivationNode {
    pub query: Query,
    pub depth: usize,
    pub parent: Option<usize>,
    pub selected: Option<usize>,
    /// Clause, renamed variant and mgu that produced this node.
    pub via: Option<Resolvent>,
    pub children: Vec<usize>,
    pub available: Vec<AvailableUnification>,
    pub status: NodeStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Traversal {
    AllClauses,
    SingleBranch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeriveOptions {
    pub rule: SelectionRule,
    pub depth: usize,
    pub traversal: Traversal,
    pub engine: Engine,
    pub max_nodes: usize,
}

impl Default for DeriveOptions {
    fn default() -> Self {
        DeriveOptions {
            rule: SelectionRule::Leftmost,
            depth: DEFAULT_DEPTH,
            traversal: Traversal::AllClauses,
            engine: Engine::Mma,
            max_nodes: DEFAULT_MAX_NODES,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DerivationTree {
    pub nodes: Vec<DerivationNode>,
    pub options: DeriveOptions,
    /// False when `max_nodes` stopped construction early.
    pub complete: bool,
}

impl DerivationTree {
    pub fn root(&self) -> &DerivationNode {
        &self.nodes[0]
    }

    pub fn has_success(&self) -> bool {
        self.nodes.iter().any(|n| n.status == NodeStatus::Success)
    }

    /// No success leaf and no branch cut by the depth bound.
    pub fn finitely_failed(&self) -> bool {
        self.complete && self.nodes.iter().all(|n| matches!(n.status, NodeStatus::Failure | NodeStatus::Internal))
    }

    pub fn any_cut(&self) -> bool {
        self.nodes.iter().any(|n| n.status == NodeStatus::Cut)
    }

    /// Preorder sequence of (depth, status, producing clause): equal for two
    /// trees iff they have the same success/failure structure.
    pub fn shape(&self) -> Vec<(usize, NodeStatus, Option<usize>)> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            let n = &self.nodes[i];
            out.push((n.depth, n.status, n.via.as_ref().map(|r| r.clause_index)));
            stack.extend(n.children.iter().rev());
        }
        out
    }
}

/// Builds the bounded SLD-tree (or its leftmost successful branch).
pub fn derive(q0: &Query, program: &Program, opts: DeriveOptions) -> Result<DerivationTree, SldError> {
    let mut gen = VarGen::new();
    gen.observe(&program.clauses);
    gen.observe(q0);
    let mut selector = Selector::new(opts.rule);
    let mut nodes = vec![DerivationNode {
        query: q0.clone(),
        depth: 0,
        parent: None,
        selected: None,
        via: None,
        children: Vec::new(),
        available: Vec::new(),
        status: NodeStatus::Internal,
    }];
    let mut complete = true;
    let mut stack = vec![0usize];
    while let Some(id) = stack.pop() {
        let (query, depth) = (nodes[id].query.clone(), nodes[id].depth);
        if query.is_empty() {
            nodes[id].status = NodeStatus::Success;
            continue;
        }
        if depth >= opts.depth {
            nodes[id].status = NodeStatus::Cut;
            continue;
        }
        let pos = selector.select(&query, depth);
        nodes[id].selected = Some(pos);
        let atom = &query.atoms[pos];
        let candidates: Vec<usize> = program.clauses_for(&atom.pred, atom.arity()).collect();
        let mut children = Vec::new();
        for ci in candidates {
            match resolution_step(&query, pos, ci, program, &mut gen, opts.engine)? {
                StepResult::Child(res, avail) => {
                    nodes[id].available.push(avail);
                    if nodes.len() >= opts.max_nodes {
                        complete = false;
                        continue;
                    }
                    let child = nodes.len();
                    nodes.push(DerivationNode {
                        query: res.query.clone(),
                        depth: depth + 1,
                        parent: Some(id),
                        selected: None,
                        via: Some(res),
                        children: Vec::new(),
                        available: Vec::new(),
                        status: NodeStatus::Internal,
                    });
                    children.push(child);
                    if opts.traversal == Traversal::SingleBranch {
                        break;
                    }
                }
                StepResult::UnificationFailure(avail) => nodes[id].available.push(avail),
                StepResult::NoMatchingHead => {}
            }
        }
        nodes[id].status = if children.is_empty() {
            NodeStatus::Failure
        } else {
            NodeStatus::Internal
        };
        stack.extend(children.iter().rev());
        nodes[id].children = children;
    }
    Ok(DerivationTree {
        nodes,
        options: opts,
        complete,
    })
}

pub fn available_unifications(t: &DerivationTree) -> Vec<&AvailableUnification> {
    t.nodes.iter().flat_map(|n| n.available.iter()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    /// Every atom of the initial query has a ground first argument.
    pub precondition_ok: bool,
    pub all_atoms_linear: Verdict,
    pub first_args_ground: Verdict,
    pub all_available_nsto: Verdict,
    pub all_have_ocf_run: Verdict,
    pub nodes: usize,
    pub available: usize,
}

impl InvariantReport {
    pub fn verdicts(&self) -> [(&'static str, Verdict); 4] {
        [
            ("all_atoms_linear", self.all_atoms_linear),
            ("first_args_ground", self.first_args_ground),
            ("all_available_nsto", self.all_available_nsto),
            ("all_have_ocf_run", self.all_have_ocf_run),
        ]
    }
}

fn first_arg_ground(a: &Atom) -> bool {
    a.args.first().is_none_or(is_ground)
}

/// Renames variables to `V0, V1, ...` in first-occurrence order, so that
/// variants share a memo entry.
fn canonical_variant(e: &EquationSet) -> EquationSet {
    let ren: Substitution = vars_of(e)
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, Term::var(&format!("V{i}"))))
        .collect();
    e.apply(&ren)
}

/// Aggregates linearity, first-argument groundness, NSTO and existence of an
/// occur-check-free run over every node and available unification.
pub fn check_derivation_invariants(t: &DerivationTree, bound: usize) -> InvariantReport {
    let precondition_ok = t.root().query.atoms.iter().all(first_arg_ground);
    let available = available_unifications(t);
    let mut report = InvariantReport {
        precondition_ok,
        all_atoms_linear: Verdict::Unknown,
        first_args_ground: Verdict::Unknown,
        all_available_nsto: Verdict::Unknown,
        all_have_ocf_run: Verdict::Unknown,
        nodes: t.nodes.len(),
        available: available.len(),
    };
    if !precondition_ok {
        return report;
    }
    let atoms = || t.nodes.iter().flat_map(|n| n.query.atoms.iter());
    report.all_atoms_linear = atoms().all(is_linear).into();
    report.first_args_ground = atoms().all(first_arg_ground).into();

    let mut memo: HashMap<EquationSet, (Verdict, Verdict)> = HashMap::new();
    let (mut nsto, mut ocf) = (Verdict::Yes, Verdict::Yes);
    for a in available {
        let key = canonical_variant(&a.eqs);
        let (n, o) = *memo
            .entry(key)
            .or_insert_with(|| (is_nsto(&a.eqs, bound), exists_ocf_run(&a.eqs, bound).verdict()));
        nsto = nsto.and(n);
        ocf = ocf.and(o);
    }
    report.all_available_nsto = nsto;
    report.all_have_ocf_run = ocf;
    report
}

pub fn check_with_default_bound(t: &DerivationTree) -> InvariantReport {
    check_derivation_invariants(t, DEFAULT_STATE_BOUND)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{nqueens_program, query_qin};
    use crate::parser::{parse_program, parse_query};

    #[test]
    fn first_step_of_qin1() {
        let p = nqueens_program();
        let q = query_qin(1);
        let mut gen = VarGen::new();
        gen.observe(&q);
        let StepResult::Child(res, avail) = resolution_step(&q, 0, 1, &p, &mut gen, Engine::Mma).unwrap() else {
            panic!()
        };
        assert!(avail.unifiable);
        assert_eq!(res.query.atoms.len(), 2);
        assert_eq!(&*res.query.atoms[0].pred, "pqs");
        assert_eq!(res.query.atoms[0].args[0], Term::nat(0));
        assert_eq!(&*res.query.atoms[1].pred, "pq");
        assert_eq!(res.query.atoms[1].args[0], Term::nat(1));
    }

    #[test]
    fn fact_gives_empty_query() {
        let p = nqueens_program();
        let q = parse_query("pqs(0, X, Y, Z)").unwrap();
        let StepResult::Child(res, _) = resolution_step(&q, 0, 0, &p, &mut VarGen::new(), Engine::Mma).unwrap() else {
            panic!()
        };
        assert!(res.query.is_empty());
    }

    #[test]
    fn clash_with_clause3() {
        let p = nqueens_program();
        let q = parse_query("pq(0, [], [], [])").unwrap();
        let r = resolution_step(&q, 0, 2, &p, &mut VarGen::new(), Engine::Mma).unwrap();
        assert!(matches!(r, StepResult::UnificationFailure(_)));
        let r = resolution_step(&q, 0, 0, &p, &mut VarGen::new(), Engine::Mma).unwrap();
        assert_eq!(r, StepResult::NoMatchingHead);
    }

    #[test]
    fn trivial_program_succeeds_at_depth_one() {
        let p = parse_program("p(a).").unwrap();
        let t = derive(&parse_query("p(X)").unwrap(), &p, DeriveOptions::default()).unwrap();
        assert!(t.has_success());
        assert_eq!(t.nodes.len(), 2);
        assert_eq!(t.nodes[1].depth, 1);
    }

    #[test]
    fn depth_one_tree_has_two_available() {
        let opts = DeriveOptions {
            depth: 1,
            ..DeriveOptions::default()
        };
        let t = derive(&query_qin(1), &nqueens_program(), opts).unwrap();
        assert_eq!(available_unifications(&t).len(), 2);
        assert!(t.any_cut());
    }

    #[test]
    fn renamings_are_pairwise_disjoint() {
        let opts = DeriveOptions {
            depth: 20,
            traversal: Traversal::SingleBranch,
            ..DeriveOptions::default()
        };
        let p = parse_program("nat(0). nat(s(X)) :- nat(X).").unwrap();
        let q = parse_query("nat(N)").unwrap();
        let t = derive(&q, &p, opts).unwrap();
        let renamed: Vec<Vec<Var>> = t.nodes.iter().filter_map(|n| n.via.as_ref()).map(|r| vars_of(&r.renamed)).collect();
        assert_eq!(renamed.len(), 1);
        // single branch follows the first clause; use the full tree for a long chain
        let t = derive(&q, &p, DeriveOptions { depth: 20, ..DeriveOptions::default() }).unwrap();
        let renamed: Vec<BTreeSet<Var>> = t
            .nodes
            .iter()
            .filter_map(|n| n.via.as_ref())
            .map(|r| vars_of(&r.renamed).into_iter().collect())
            .collect();
        assert!(renamed.len() >= 20);
        for i in 0..renamed.len() {
            for j in i + 1..renamed.len() {
                assert!(renamed[i].is_disjoint(&renamed[j]));
            }
        }
    }

    #[test]
    fn non_ground_first_argument_violates_precondition() {
        let q = parse_query("pqs(N, [A], B, C)").unwrap();
        let opts = DeriveOptions {
            depth: 3,
            ..DeriveOptions::default()
        };
        let t = derive(&q, &nqueens_program(), opts).unwrap();
        let r = check_with_default_bound(&t);
        assert!(!r.precondition_ok);
        assert_eq!(r.all_atoms_linear, Verdict::Unknown);
        assert_eq!(r.all_available_nsto, Verdict::Unknown);
    }

    #[test]
    fn rules_parse() {
        assert_eq!("random:5".parse::<SelectionRule>().unwrap(), SelectionRule::Random(5));
        assert!("random:x".parse::<SelectionRule>().is_err());
        assert_eq!("mma-minus".parse::<Engine>().unwrap(), Engine::MmaMinus);
    }
}
