//! Embedded programs, query builders, and a brute-force queens oracle.

use itertools::Itertools;

use crate::parser::parse_program;
use crate::terms::{Atom, Program, Query, Term};

pub const NQUEENS_SOURCE: &str = include_str!("../corpus/nqueens.pl");

#[derive(Debug, Clone, Copy)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub source: &'static str,
    /// Query forms the entry is meant to be run with.
    pub queries: &'static [&'static str],
    /// Properties the derivations are expected to have.
    pub tags: &'static [&'static str],
}

impl CorpusEntry {
    pub fn program(&self) -> Program {
        parse_program(self.source).expect("embedded corpus parses")
    }
}

pub const ENTRIES: &[CorpusEntry] = &[CorpusEntry {
    name: "nqueens",
    description: "core fragment of the n queens program (pqs/4, pq/4)",
    source: NQUEENS_SOURCE,
    queries: &[
        "pqs(s^n(0), [V1,...,Vn], W1, W2)",
        "pqs(s^n(0), T1, T2, T3)",
    ],
    tags: &["linear-atoms", "ground-first-argument", "occur-check-free"],
}];

pub fn entry(name: &str) -> Option<&'static CorpusEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

pub fn nqueens_program() -> Program {
    ENTRIES[0].program()
}

/// `pqs(s^n(0), [V1,...,Vn], W1, W2)` with all variables distinct.
pub fn query_qin(n: usize) -> Query {
    let vs = (1..=n).map(|i| Term::var(&format!("V{i}"))).collect();
    query_q0prime(n, Term::list(vs, Term::nil()), Term::var("W1"), Term::var("W2"))
}

/// `pqs(s^n(0), t1, t2, t3)`.
pub fn query_q0prime(n: usize, t1: Term, t2: Term, t3: Term) -> Query {
    Query::new(vec![Atom::new("pqs", vec![Term::nat(n), t1, t2, t3])])
}

/// Every placement of `n` non-attacking queens, one per row: `p[i]` is the
/// column (1-based) of the queen in row `i`.
pub fn queens_oracle(n: usize) -> Vec<Vec<usize>> {
    (1..=n)
        .permutations(n)
        .filter(|p| {
            (0..n).all(|i| (i + 1..n).all(|j| p[i].abs_diff(p[j]) != j - i))
        })
        .collect()
}
