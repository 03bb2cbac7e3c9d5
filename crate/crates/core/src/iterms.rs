//! Rational (possibly infinite, finitely representable) terms and
//! i-substitutions, used as a semantic oracle for equation sets that the
//! occur-check-free algorithm manipulates.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::terms::{EquationSet, Term, Var};

pub const DEFAULT_DEPTH: usize = 32;
/// Constant placed where [`unfold`] cuts a term off.
pub const CUT: &str = "⊥";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Func(Arc<str>, Vec<usize>),
    Var(Var),
}

/// A term graph; cycles allowed. Every node is reachable from `root`.
#[derive(Debug, Clone)]
pub struct RationalTerm {
    nodes: Vec<Node>,
    root: usize,
}

impl RationalTerm {
    pub fn from_term(t: &Term) -> Self {
        let mut nodes = Vec::new();
        let root = push_term(&mut nodes, t, &mut |_, _| None);
        RationalTerm { nodes, root }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Copies the graph into `into`, returning the new root index.
    fn embed(&self, into: &mut Vec<Node>) -> usize {
        let off = into.len();
        into.extend(self.nodes.iter().map(|n| match n {
            Node::Func(f, ch) => Node::Func(f.clone(), ch.iter().map(|c| c + off).collect()),
            Node::Var(v) => Node::Var(v.clone()),
        }));
        self.root + off
    }

    pub fn is_finite(&self) -> bool {
        // every node reachable from the root; a cycle exists iff DFS finds a back edge
        fn dfs(g: &[Node], n: usize, state: &mut [u8]) -> bool {
            match state[n] {
                1 => return false,
                2 => return true,
                _ => {}
            }
            state[n] = 1;
            let ok = match &g[n] {
                Node::Func(_, ch) => ch.iter().all(|&c| dfs(g, c, state)),
                Node::Var(_) => true,
            };
            state[n] = 2;
            ok
        }
        dfs(&self.nodes, self.root, &mut vec![0; self.nodes.len()])
    }

    /// Bisimilarity: both denote the same possibly infinite tree.
    pub fn bisimilar(&self, other: &RationalTerm) -> bool {
        let mut nodes = self.nodes.clone();
        let r2 = other.embed(&mut nodes);
        let block = coarsest_partition(&nodes);
        block[self.root] == block[r2]
    }
}

impl RationalTerm {
    /// Same result as comparing `unfold(self, depth)` with `unfold(other, depth)`,
    /// without building the (possibly exponential) unfoldings.
    pub fn agrees_to_depth(&self, other: &RationalTerm, depth: usize) -> bool {
        fn go(
            a: &[Node],
            i: usize,
            b: &[Node],
            j: usize,
            depth: usize,
            memo: &mut HashMap<(usize, usize), usize>,
        ) -> bool {
            if depth == 0 || memo.get(&(i, j)).is_some_and(|&d| d >= depth) {
                return true;
            }
            let ok = match (&a[i], &b[j]) {
                (Node::Var(x), Node::Var(y)) => x == y,
                (Node::Func(f, xs), Node::Func(g, ys)) => {
                    f == g
                        && xs.len() == ys.len()
                        && xs.iter().zip(ys).all(|(&x, &y)| go(a, x, b, y, depth - 1, memo))
                }
                _ => false,
            };
            if ok {
                memo.insert((i, j), depth);
            }
            ok
        }
        go(&self.nodes, self.root, &other.nodes, other.root, depth, &mut HashMap::new())
    }
}

impl PartialEq for RationalTerm {
    fn eq(&self, other: &Self) -> bool {
        self.bisimilar(other)
    }
}

fn push_term(nodes: &mut Vec<Node>, t: &Term, lookup: &mut dyn FnMut(&Var, &mut Vec<Node>) -> Option<usize>) -> usize {
    match t {
        Term::Var(v) => {
            if let Some(i) = lookup(v, nodes) {
                return i;
            }
            nodes.push(Node::Var(v.clone()));
            nodes.len() - 1
        }
        Term::App(f, args) => {
            let ch = args.iter().map(|a| push_term(nodes, a, lookup)).collect();
            nodes.push(Node::Func(f.clone(), ch));
            nodes.len() - 1
        }
    }
}

/// Partition refinement: nodes end up in the same block iff bisimilar.
fn coarsest_partition(nodes: &[Node]) -> Vec<usize> {
    let mut labels: HashMap<(Option<&str>, Option<&Var>, usize), usize> = HashMap::new();
    let mut block: Vec<usize> = nodes
        .iter()
        .map(|n| {
            let key = match n {
                Node::Func(f, ch) => (Some(&**f), None, ch.len()),
                Node::Var(v) => (None, Some(v), 0),
            };
            let next = labels.len();
            *labels.entry(key).or_insert(next)
        })
        .collect();
    let mut count = labels.len();
    loop {
        let mut sigs: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let refined: Vec<usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let ch = match n {
                    Node::Func(_, ch) => ch.iter().map(|&c| block[c]).collect(),
                    Node::Var(_) => Vec::new(),
                };
                let next = sigs.len();
                *sigs.entry((block[i], ch)).or_insert(next)
            })
            .collect();
        let new_count = sigs.len();
        block = refined;
        if new_count == count {
            return block;
        }
        count = new_count;
    }
}

/// Finite truncation: function layers below `depth` are replaced by [`CUT`].
pub fn unfold(t: &RationalTerm, depth: usize) -> Term {
    fn go(g: &[Node], n: usize, depth: usize) -> Term {
        if depth == 0 {
            return Term::constant(CUT);
        }
        match &g[n] {
            Node::Var(v) => Term::Var(v.clone()),
            Node::Func(f, ch) => Term::App(f.clone(), ch.iter().map(|&c| go(g, c, depth - 1)).collect()),
        }
    }
    go(&t.nodes, t.root, depth)
}

impl fmt::Display for RationalTerm {
    /// Cyclic nodes are labelled `@k=` and referred back to as `@k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn mark(g: &[Node], n: usize, on_stack: &mut Vec<bool>, done: &mut Vec<bool>, cyc: &mut Vec<bool>) {
            if on_stack[n] {
                cyc[n] = true;
                return;
            }
            if done[n] {
                return;
            }
            on_stack[n] = true;
            if let Node::Func(_, ch) = &g[n] {
                for &c in ch {
                    mark(g, c, on_stack, done, cyc);
                }
            }
            on_stack[n] = false;
            done[n] = true;
        }
        fn write(g: &[Node], n: usize, cyc: &[bool], open: &mut Vec<bool>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if open[n] {
                return write!(f, "@{n}");
            }
            if cyc[n] {
                write!(f, "@{n}=")?;
            }
            match &g[n] {
                Node::Var(v) => write!(f, "{v}"),
                Node::Func(name, ch) => {
                    open[n] = true;
                    write!(f, "{}", Term::constant(name))?;
                    if !ch.is_empty() {
                        f.write_str("(")?;
                        for (i, &c) in ch.iter().enumerate() {
                            if i > 0 {
                                f.write_str(", ")?;
                            }
                            write(g, c, cyc, open, f)?;
                        }
                        f.write_str(")")?;
                    }
                    open[n] = false;
                    Ok(())
                }
            }
        }
        let n = self.nodes.len();
        let mut cyc = vec![false; n];
        mark(&self.nodes, self.root, &mut vec![false; n], &mut vec![false; n], &mut cyc);
        write(&self.nodes, self.root, &cyc, &mut vec![false; n], f)
    }
}

/// Map from variables to rational terms. Unbound variables stand for themselves.
#[derive(Debug, Clone, Default)]
pub struct ISubstitution {
    map: BTreeMap<Var, RationalTerm>,
}

impl ISubstitution {
    pub fn get(&self, v: &Var) -> Option<&RationalTerm> {
        self.map.get(v)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &RationalTerm)> {
        self.map.iter()
    }

    /// `tθ` as a rational term.
    pub fn apply(&self, t: &Term) -> RationalTerm {
        let mut nodes = Vec::new();
        let root = push_term(&mut nodes, t, &mut |v, nodes| self.map.get(v).map(|r| r.embed(nodes)));
        RationalTerm { nodes, root }
    }

    /// Every equation of `e` holds under `self`, compared exactly.
    pub fn solves(&self, e: &EquationSet) -> bool {
        e.iter().all(|eq| self.apply(&eq.lhs).bisimilar(&self.apply(&eq.rhs)))
    }

    /// Every equation of `e` holds under `self` up to the given unfolding depth.
    pub fn solves_to_depth(&self, e: &EquationSet, depth: usize) -> bool {
        e.iter()
            .all(|eq| self.apply(&eq.lhs).agrees_to_depth(&self.apply(&eq.rhs), depth))
    }
}

impl fmt::Display for ISubstitution {
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

/// Unification over rational trees: no occur-check, fails only on a clash.
/// Returns a most general i-solution.
pub fn solve_rational(e: &EquationSet) -> Option<ISubstitution> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut var_node: BTreeMap<Var, usize> = BTreeMap::new();
    let mut work = Vec::new();
    for eq in e.iter() {
        let mut lookup = |v: &Var, nodes: &mut Vec<Node>| {
            Some(*var_node.entry(v.clone()).or_insert_with(|| {
                nodes.push(Node::Var(v.clone()));
                nodes.len() - 1
            }))
        };
        let l = push_term(&mut nodes, &eq.lhs, &mut lookup);
        let r = push_term(&mut nodes, &eq.rhs, &mut lookup);
        work.push((l, r));
    }

    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }

    while let Some((a, b)) = work.pop() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            continue;
        }
        match (&nodes[ra], &nodes[rb]) {
            (Node::Var(_), _) => parent[ra] = rb,
            (_, Node::Var(_)) => parent[rb] = ra,
            (Node::Func(f, xs), Node::Func(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                work.extend(xs.iter().copied().zip(ys.iter().copied()));
                parent[ra] = rb;
            }
        }
    }

    let mut map = BTreeMap::new();
    for (v, &n) in &var_node {
        let rep = find(&mut parent, n);
        if rep == n {
            continue;
        }
        // copy the class graph reachable from rep
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut out: Vec<Node> = Vec::new();
        let mut stack = vec![rep];
        index.insert(rep, 0);
        out.push(Node::Var(v.clone()));
        while let Some(r) = stack.pop() {
            let node = match &nodes[r] {
                Node::Var(w) => Node::Var(w.clone()),
                Node::Func(f, ch) => {
                    let ch: Vec<usize> = ch
                        .iter()
                        .map(|&c| {
                            let rc = find(&mut parent, c);
                            *index.entry(rc).or_insert_with(|| {
                                out.push(Node::Var(v.clone()));
                                stack.push(rc);
                                out.len() - 1
                            })
                        })
                        .collect();
                    Node::Func(f.clone(), ch)
                }
            };
            out[index[&r]] = node;
        }
        map.insert(v.clone(), RationalTerm { nodes: out, root: 0 });
    }
    Some(ISubstitution { map })
}

pub fn has_i_solution(e: &EquationSet) -> bool {
    solve_rational(e).is_some()
}

/// Sound approximation of i-equivalence: both sets unsolvable, or each
/// set's most general i-solution satisfies the other set up to `depth`.
pub fn i_equivalent(e1: &EquationSet, e2: &EquationSet, depth: usize) -> bool {
    match (solve_rational(e1), solve_rational(e2)) {
        (None, None) => true,
        (Some(s1), Some(s2)) => s1.solves_to_depth(e2, depth) && s2.solves_to_depth(e1, depth),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_equations, parse_term};

    fn eqs(s: &str) -> EquationSet {
        parse_equations(s).unwrap()
    }
    fn x() -> Var {
        Var::new("X")
    }

    #[test]
    fn cyclic_solution() {
        let s = solve_rational(&eqs("X = f(X)")).unwrap();
        let tx = s.get(&x()).unwrap();
        assert!(!tx.is_finite());
        assert_eq!(unfold(tx, 3), parse_term("f(f(f('⊥')))").unwrap());
        assert_eq!(tx.to_string(), "@0=f(@0)");
    }

    #[test]
    fn clash_has_no_solution() {
        assert!(solve_rational(&eqs("f(a) = g(a)")).is_none());
        assert!(!has_i_solution(&eqs("X = f(X), X = g(X)")));
        assert!(has_i_solution(&EquationSet::default()));
    }

    #[test]
    fn mutual_recursion_is_same_tree() {
        let s = solve_rational(&eqs("X = f(Y), Y = f(X)")).unwrap();
        let single = solve_rational(&eqs("X = f(X)")).unwrap();
        let (tx, ty) = (s.get(&x()).unwrap(), s.get(&Var::new("Y")).unwrap());
        assert!(tx.bisimilar(ty));
        assert!(tx.bisimilar(single.get(&x()).unwrap()));
        for k in 0..=32 {
            assert_eq!(unfold(tx, k), unfold(single.get(&x()).unwrap(), k));
        }
    }

    #[test]
    fn finite_unfold_is_identity() {
        let t = parse_term("g(a, h(Y))").unwrap();
        let r = RationalTerm::from_term(&t);
        assert!(r.is_finite());
        assert_eq!(unfold(&r, t.height()), t);
        assert_eq!(unfold(&r, 10), t);
    }

    #[test]
    fn bisimulation_distinguishes() {
        let a = solve_rational(&eqs("X = f(X)")).unwrap();
        let b = solve_rational(&eqs("X = f(f(a))")).unwrap();
        assert!(!a.get(&x()).unwrap().bisimilar(b.get(&x()).unwrap()));
        let c = solve_rational(&eqs("X = f(X, Y)")).unwrap();
        let d = solve_rational(&eqs("X = f(f(X, Y), Y)")).unwrap();
        assert!(c.get(&x()).unwrap().bisimilar(d.get(&x()).unwrap()));
    }

    #[test]
    fn equivalence() {
        assert!(!i_equivalent(&eqs("X = a"), &eqs("X = b"), DEFAULT_DEPTH));
        assert!(i_equivalent(&eqs("f(a) = g(a)"), &eqs("a = b"), DEFAULT_DEPTH));
        assert!(i_equivalent(&eqs("X = f(X), X = f(f(X))"), &eqs("X = f(X)"), DEFAULT_DEPTH));
        assert!(i_equivalent(&eqs("f(X) = f(a)"), &eqs("X = a"), DEFAULT_DEPTH));
        assert!(!i_equivalent(&eqs("X = Y"), &eqs("X = a"), DEFAULT_DEPTH));
    }

    #[test]
    fn solution_solves() {
        let e = eqs("X = f(Y), Y = f(X), Z = g(X, W)");
        let s = solve_rational(&e).unwrap();
        assert!(s.solves(&e));
        assert!(s.solves_to_depth(&e, DEFAULT_DEPTH));
    }

    #[test]
    fn depth_check_matches_unfolding() {
        let s = solve_rational(&eqs("X = h(X, Y), Y = h(Y, X), Z = h(h(Z, Z), Z)")).unwrap();
        let ts: Vec<RationalTerm> = ["X", "Y", "Z", "h(X, X)"].iter().map(|v| s.apply(&parse_term(v).unwrap())).collect();
        for a in &ts {
            for b in &ts {
                for d in 0..8 {
                    assert_eq!(a.agrees_to_depth(b, d), unfold(a, d) == unfold(b, d));
                }
            }
        }
    }
}
