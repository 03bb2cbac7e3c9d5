//! First-order syntax: terms, atoms, equations, substitutions and clauses.
//!
//! Variables are identified by name. Names containing `#` are reserved for
//! variables minted by a [`VarGen`]; the parser refuses them in user input, so
//! a generated name can never collide with one written by hand.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

/// Marker that separates a base name from the counter in generated names.
pub const RESERVED_MARK: char = '#';

/// Functor for list cells.
pub const CONS: &str = ".";
/// The empty list constant.
pub const NIL: &str = "[]";

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// True for names minted by a [`VarGen`].
    pub fn is_reserved(&self) -> bool {
        is_reserved_name(&self.0)
    }
}

pub fn is_reserved_name(name: &str) -> bool {
    name.contains(RESERVED_MARK)
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite first-order term. Constants are applications with no arguments.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(Arc<str>, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn app(functor: &str, args: Vec<Term>) -> Term {
        Term::App(Arc::from(functor), args)
    }

    pub fn constant(name: &str) -> Term {
        Term::app(name, Vec::new())
    }

    pub fn nil() -> Term {
        Term::constant(NIL)
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::app(CONS, vec![head, tail])
    }

    /// `[e1, ..., en | tail]`
    pub fn list(elems: Vec<Term>, tail: Term) -> Term {
        elems
            .into_iter()
            .rev()
            .fold(tail, |acc, e| Term::cons(e, acc))
    }

    /// The numeral `s^n(0)`.
    pub fn nat(n: usize) -> Term {
        (0..n).fold(Term::constant("0"), |acc, _| Term::app("s", vec![acc]))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    pub fn functor(&self) -> Option<(&str, usize)> {
        match self {
            Term::Var(_) => None,
            Term::App(f, args) => Some((f, args.len())),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    /// Number of variable and function-symbol occurrences, constants included.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Height of the syntax tree; variables and constants have height 1.
    pub fn height(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::height).max().unwrap_or(0),
        }
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    pub fn occurrences_of(&self, v: &Var) -> usize {
        match self {
            Term::Var(w) => usize::from(w == v),
            Term::App(_, args) => args.iter().map(|a| a.occurrences_of(v)).sum(),
        }
    }

    /// Subterm at a path of argument indices.
    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        path.iter().try_fold(self, |t, &i| t.args().get(i))
    }

    /// Paths of every occurrence of `v`, in left-to-right preorder.
    pub fn var_paths(&self, v: &Var) -> Vec<Vec<usize>> {
        fn go(t: &Term, v: &Var, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            match t {
                Term::Var(w) if w == v => out.push(path.clone()),
                Term::Var(_) => {}
                Term::App(_, args) => {
                    for (i, a) in args.iter().enumerate() {
                        path.push(i);
                        go(a, v, path, out);
                        path.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, v, &mut Vec::new(), &mut out);
        out
    }

    /// Copy of `self` with the subterm at `path` replaced.
    pub fn replace_at(&self, path: &[usize], with: &Term) -> Term {
        match path.split_first() {
            None => with.clone(),
            Some((&i, rest)) => match self {
                Term::App(f, args) if i < args.len() => {
                    let mut args = args.clone();
                    args[i] = args[i].replace_at(rest, with);
                    Term::App(f.clone(), args)
                }
                _ => self.clone(),
            },
        }
    }

    /// Splits a list term into its elements and the tail after them.
    pub fn list_parts(&self) -> (Vec<&Term>, &Term) {
        let mut elems = Vec::new();
        let mut cur = self;
        while let Term::App(f, args) = cur {
            if &**f == CONS && args.len() == 2 {
                elems.push(&args[0]);
                cur = &args[1];
            } else {
                break;
            }
        }
        (elems, cur)
    }
}

/// Anything with variables in it.
pub trait HasVars {
    fn visit_vars<'a>(&'a self, f: &mut dyn FnMut(&'a Var));
}

/// Anything a substitution can be applied to.
pub trait Substitutable: HasVars + Sized {
    fn apply(&self, s: &Substitution) -> Self;
}

impl HasVars for Term {
    fn visit_vars<'a>(&'a self, f: &mut dyn FnMut(&'a Var)) {
        match self {
            Term::Var(v) => f(v),
            Term::App(_, args) => args.iter().for_each(|a| a.visit_vars(f)),
        }
    }
}

impl Substitutable for Term {
    fn apply(&self, s: &Substitution) -> Term {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.apply(s)).collect()),
        }
    }
}

impl<T: HasVars> HasVars for [T] {
    fn visit_vars<'a>(&'a self, f: &mut dyn FnMut(&'a Var)) {
        self.iter().for_each(|x| x.visit_vars(f));
    }
}

impl<T: HasVars> HasVars for Vec<T> {
    fn visit_vars<'a>(&'a self, f: &mut dyn FnMut(&'a Var)) {
        self.as_slice().visit_vars(f);
    }
}

impl<T: Substitutable> Substitutable for Vec<T> {
    fn apply(&self, s: &Substitution) -> Self {
        self.iter().map(|x| x.apply(s)).collect()
    }
}

/// Variables of `e` in first-occurrence order.
pub fn vars_of<E: HasVars + ?Sized>(e: &E) -> Vec<Var> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    e.visit_vars(&mut |v| {
        if seen.insert(v) {
            out.push(v.clone());
        }
    });
    out
}

/// No variable occurs more than once in `e`.
pub fn is_linear<E: HasVars + ?Sized>(e: &E) -> bool {
    let mut seen = HashSet::new();
    let mut linear = true;
    e.visit_vars(&mut |v| {
        if !seen.insert(v) {
            linear = false;
        }
    });
    linear
}

pub fn is_ground<E: HasVars + ?Sized>(e: &E) -> bool {
    let mut ground = true;
    e.visit_vars(&mut |_| ground = false);
    ground
}

pub fn occurrences<E: HasVars + ?Sized>(e: &E, v: &Var) -> usize {
    let mut n = 0;
    e.visit_vars(&mut |w| n += usize::from(w == v));
    n
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: Arc<str>,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Self {
        Atom {
            pred: Arc::from(pred),
            args,
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn to_term(&self) -> Term {
        Term::App(self.pred.clone(), self.args.clone())
    }

    /// Reads a compound term as an atom. Variables are not atoms.
    pub fn from_term(t: &Term) -> Option<Atom> {
        match t {
            Term::App(f, args) => Some(Atom {
                pred: f.clone(),
                args: args.clone(),
            }),
            Term::Var(_) => None,
        }
    }
}

impl HasVars for Atom {
    fn visit_vars<'a>(&'a self, f: &mut dyn FnMut(&'a Var)) {
        self.args.visit_vars(f);
    }
}

impl Substitutable for Atom {
    fn apply(&self, s: &Substitution) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.apply(s),
        }
    }
}

/// An oriented equation `lhs = rhs`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn flipped(&self) -> Equation {
        Equation::new(self.rhs.clone(), self.lhs.clone())
    }

    pub fn side(&self, side: Side) -> &Term {
        match side {
            Side::Lhs => &self.lhs,
            Side::Rhs => &self.rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Lhs,
    Rhs,
}

impl HasVars for Equation {
    fn visit_vars<'a>(&'a self, f: &mut dyn FnMut(&'a Var)) {
        self.lhs.visit_vars(f);
        self.rhs.visit_vars(f);
    }
}

impl Substitutable for Equation {
    fn apply(&self, s: &Substitution) -> Equation {
        Equation::new(self.lhs.apply(s), self.rhs.apply(s))
    }
}

/// An ordered multiset of equations. Positions are stable addresses.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EquationSet {
    eqs: Vec<Equation>,
}

impl EquationSet {
    pub fn new(eqs: Vec<Equation>) -> Self {
        EquationSet { eqs }
    }

    pub fn single(lhs: Term, rhs: Term) -> Self {
        EquationSet::new(vec![Equation::new(lhs, rhs)])
    }

    pub fn len(&self) -> usize {
        self.eqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eqs.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Equation> {
        self.eqs.get(i)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Equation> {
        self.eqs.iter()
    }

    pub fn as_slice(&self) -> &[Equation] {
        &self.eqs
    }

    pub fn into_vec(self) -> Vec<Equation> {
        self.eqs
    }

    pub fn push(&mut self, eq: Equation) {
        self.eqs.push(eq);
    }

    /// Replaces the equation at `i` by `with`, keeping the order of the rest.
    pub fn splice(&self, i: usize, with: Vec<Equation>) -> EquationSet {
        let mut eqs = Vec::with_capacity(self.eqs.len() + with.len());
        eqs.extend_from_slice(&self.eqs[..i]);
        eqs.extend(with);
        eqs.extend_from_slice(&self.eqs[i + 1..]);
        EquationSet { eqs }
    }

    pub fn replace(&self, i: usize, with: Equation) -> EquationSet {
        let mut eqs = self.eqs.clone();
        eqs[i] = with;
        EquationSet { eqs }
    }

    /// Occurrences of `v` in every equation except the one at `skip`.
    pub fn occurs_elsewhere(&self, v: &Var, skip: usize) -> bool {
        self.eqs
            .iter()
            .enumerate()
            .any(|(j, e)| j != skip && (e.lhs.contains_var(v) || e.rhs.contains_var(v)))
    }

    /// Equations sorted into a canonical order, for use as a memo key.
    pub fn canonical(&self) -> EquationSet {
        let mut eqs = self.eqs.clone();
        eqs.sort();
        EquationSet { eqs }
    }

    /// Solved form: distinct variable left sides, none occurring on any right side.
    pub fn is_solved(&self) -> bool {
        let mut lhs_vars = HashSet::new();
        for e in &self.eqs {
            match &e.lhs {
                Term::Var(v) if lhs_vars.insert(v) => {}
                _ => return false,
            }
        }
        self.eqs
            .iter()
            .all(|e| lhs_vars.iter().all(|v| !e.rhs.contains_var(v)))
    }

    /// Reads the substitution `{X1/t1, ..., Xn/tn}` off a solved set.
    pub fn to_substitution(&self) -> Option<Substitution> {
        if !self.is_solved() {
            return None;
        }
        let mut s = Substitution::new();
        for e in &self.eqs {
            if let Term::Var(v) = &e.lhs {
                s.insert(v.clone(), e.rhs.clone());
            }
        }
        Some(s)
    }
}

impl From<Vec<Equation>> for EquationSet {
    fn from(eqs: Vec<Equation>) -> Self {
        EquationSet { eqs }
    }
}

impl FromIterator<Equation> for EquationSet {
    fn from_iter<I: IntoIterator<Item = Equation>>(iter: I) -> Self {
        EquationSet {
            eqs: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a EquationSet {
    type Item = &'a Equation;
    type IntoIter = std::slice::Iter<'a, Equation>;
    fn into_iter(self) -> Self::IntoIter {
        self.eqs.iter()
    }
}

impl HasVars for EquationSet {
    fn visit_vars<'a>(&'a self, f: &mut dyn FnMut(&'a Var)) {
        self.eqs.visit_vars(f);
    }
}

impl Substitutable for EquationSet {
    fn apply(&self, s: &Substitution) -> EquationSet {
        EquationSet {
            eqs: self.eqs.apply(s),
        }
    }
}

/// A finite map from variables to terms. Identity bindings are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(v: Var, t: Term) -> Self {
        let mut s = Self::new();
        s.insert(v, t);
        s
    }

    /// Adds `v ↦ t`, dropping it if it is the identity.
    pub fn insert(&mut self, v: Var, t: Term) {
        if t.as_var() == Some(&v) {
            self.map.remove(&v);
        } else {
            self.map.insert(v, t);
        }
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.map.get(v)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.map.keys()
    }

    /// Composition `self` then `other`: `x(self·other) = (x self) other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.map {
            out.insert(v.clone(), t.apply(other));
        }
        for (v, t) in &other.map {
            if !self.map.contains_key(v) {
                out.insert(v.clone(), t.clone());
            }
        }
        out
    }

    pub fn is_idempotent(&self) -> bool {
        self.compose(self) == *self
    }

    /// The bindings as an equation set `X1 = t1, ...` in domain order.
    pub fn to_equations(&self) -> EquationSet {
        self.map
            .iter()
            .map(|(v, t)| Equation::new(Term::Var(v.clone()), t.clone()))
            .collect()
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (v, t) in iter {
            s.insert(v, t);
        }
        s
    }
}

impl HasVars for Substitution {
    fn visit_vars<'a>(&'a self, f: &mut dyn FnMut(&'a Var)) {
        for (v, t) in &self.map {
            f(v);
            t.visit_vars(f);
        }
    }
}

/// `head :- body`. Facts have an empty body.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Atom>,
}

impl Clause {
    pub fn fact(head: Atom) -> Self {
        Clause {
            head,
            body: Vec::new(),
        }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }
}

impl HasVars for Clause {
    fn visit_vars<'a>(&'a self, f: &mut dyn FnMut(&'a Var)) {
        self.head.visit_vars(f);
        self.body.visit_vars(f);
    }
}

impl Substitutable for Clause {
    fn apply(&self, s: &Substitution) -> Clause {
        Clause {
            head: self.head.apply(s),
            body: self.body.apply(s),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Program {
    pub clauses: Vec<Clause>,
}

impl Program {
    pub fn new(clauses: Vec<Clause>) -> Self {
        Program { clauses }
    }

    /// Indices of clauses whose head has the given predicate and arity.
    pub fn clauses_for<'a>(&'a self, pred: &'a str, arity: usize) -> impl Iterator<Item = usize> + 'a {
        self.clauses
            .iter()
            .enumerate()
            .filter(move |(_, c)| &*c.head.pred == pred && c.head.arity() == arity)
            .map(|(i, _)| i)
    }
}

/// A conjunction of atoms. The empty query is the success state of a derivation.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Query {
    pub atoms: Vec<Atom>,
}

impl Query {
    pub fn new(atoms: Vec<Atom>) -> Self {
        Query { atoms }
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

impl HasVars for Query {
    fn visit_vars<'a>(&'a self, f: &mut dyn FnMut(&'a Var)) {
        self.atoms.visit_vars(f);
    }
}

impl Substitutable for Query {
    fn apply(&self, s: &Substitution) -> Query {
        Query {
            atoms: self.atoms.apply(s),
        }
    }
}

/// Source of fresh variable names for one run.
///
/// Generated names have the form `Base#N` with `N` strictly increasing, so two
/// calls never return the same variable.
#[derive(Clone, Debug, Default)]
pub struct VarGen {
    next: u64,
}

impl VarGen {
    pub fn new() -> Self {
        Self::default()
    }

    /// A fresh variable derived from `base` (any previous `#N` suffix is dropped).
    pub fn fresh(&mut self, base: &str) -> Var {
        let stem = base.split(RESERVED_MARK).next().unwrap_or("_");
        let stem = if stem.is_empty() { "_" } else { stem };
        self.next += 1;
        Var::new(&format!("{stem}{RESERVED_MARK}{}", self.next))
    }

    /// Moves the counter past every reserved name already present in `e`.
    pub fn observe<E: HasVars + ?Sized>(&mut self, e: &E) {
        e.visit_vars(&mut |v| {
            if let Some((_, n)) = v.name().rsplit_once(RESERVED_MARK) {
                if let Ok(n) = n.parse::<u64>() {
                    self.next = self.next.max(n);
                }
            }
        });
    }
}

/// A variant of `e` whose variables avoid `forbidden`, and the renaming used.
pub fn rename_apart<E: Substitutable>(
    e: &E,
    forbidden: &BTreeSet<Var>,
    gen: &mut VarGen,
) -> (E, Substitution) {
    let mut renaming = Substitution::new();
    for v in vars_of(e) {
        let mut fresh = gen.fresh(v.name());
        while forbidden.contains(&fresh) {
            fresh = gen.fresh(v.name());
        }
        renaming.insert(v, Term::Var(fresh));
    }
    (e.apply(&renaming), renaming)
}

/// Tries to extend a bijective variable renaming so that `a` maps onto `b`.
fn match_renaming(
    a: &Term,
    b: &Term,
    fwd: &mut HashMap<Var, Var>,
    back: &mut HashMap<Var, Var>,
) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => match (fwd.get(x), back.get(y)) {
            (Some(y2), _) => y2 == y,
            (None, Some(_)) => false,
            (None, None) => {
                fwd.insert(x.clone(), y.clone());
                back.insert(y.clone(), x.clone());
                true
            }
        },
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| match_renaming(x, y, fwd, back))
        }
        _ => false,
    }
}

/// Two equation sets are variants: some variable renaming maps `a` onto `b`
/// position by position.
pub fn equation_sets_variant(a: &EquationSet, b: &EquationSet) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (mut fwd, mut back) = (HashMap::new(), HashMap::new());
    a.iter().zip(b.iter()).all(|(x, y)| {
        match_renaming(&x.lhs, &y.lhs, &mut fwd, &mut back)
            && match_renaming(&x.rhs, &y.rhs, &mut fwd, &mut back)
    })
}

/// Two substitutions are variants: a renaming applied to every binding of
/// `a` (domain variable included) yields exactly the bindings of `b`.
pub fn substitutions_variant(a: &Substitution, b: &Substitution) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let left: Vec<(Term, &Term)> = a.iter().map(|(v, t)| (Term::Var(v.clone()), t)).collect();
    let right: Vec<(Term, &Term)> = b.iter().map(|(v, t)| (Term::Var(v.clone()), t)).collect();
    let mut used = vec![false; right.len()];

    fn search(
        i: usize,
        left: &[(Term, &Term)],
        right: &[(Term, &Term)],
        used: &mut [bool],
        fwd: &HashMap<Var, Var>,
        back: &HashMap<Var, Var>,
    ) -> bool {
        let Some((lv, lt)) = left.get(i) else {
            return true;
        };
        for j in 0..right.len() {
            if used[j] {
                continue;
            }
            let (rv, rt) = &right[j];
            let (mut f2, mut b2) = (fwd.clone(), back.clone());
            if match_renaming(lv, rv, &mut f2, &mut b2) && match_renaming(lt, rt, &mut f2, &mut b2) {
                used[j] = true;
                if search(i + 1, left, right, used, &f2, &b2) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }

    search(0, &left, &right, &mut used, &HashMap::new(), &HashMap::new())
}

fn is_plain_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => chars.all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => name == NIL || name == "0",
    }
}

fn write_name(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    if is_plain_atom_name(name) {
        f.write_str(name)
    } else {
        f.write_str("'")?;
        for c in name.chars() {
            match c {
                '\'' => f.write_str("\\'")?,
                '\\' => f.write_str("\\\\")?,
                c => write!(f, "{c}")?,
            }
        }
        f.write_str("'")
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(name, args) if &**name == CONS && args.len() == 2 => {
                let (elems, tail) = self.list_parts();
                f.write_str("[")?;
                for (i, e) in elems.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                if tail.functor() != Some((NIL, 0)) {
                    write!(f, "|{tail}")?;
                }
                f.write_str("]")
            }
            Term::App(name, args) => {
                write_name(f, name)?;
                if args.is_empty() {
                    Ok(())
                } else {
                    write_args(f, args)
                }
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_name(f, &self.pred)?;
        if self.args.is_empty() {
            Ok(())
        } else {
            write_args(f, &self.args)
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl fmt::Debug for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for EquationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.eqs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for EquationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}/{t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            for (i, a) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
        }
        f.write_str(".")
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}
