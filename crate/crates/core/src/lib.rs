//! Unification with and without the occur-check.
//!
//! * [`terms`] and [`parser`]: first-order terms, equation sets, programs.
//! * [`robinson`]: disagreement-pair unification with pluggable choice.
//! * [`mma`]: the Martelli-Montanari transition system, run enumeration,
//!   NSTO decisions and occur-check-free run search.
//! * [`mma_minus`]: the occur-check-free variant ending in semi-solved sets.
//! * [`iterms`]: rational trees, used as a semantic oracle.
//! * [`sld`] and [`corpus`]: SLD-resolution and the n queens fragment.
//! * [`theorem`]: randomized differential testing of the variant.
//! * [`trace`]: JSON documents for runs.

pub mod corpus;
pub mod iterms;
pub mod mma;
pub mod mma_minus;
pub mod parser;
pub mod robinson;
pub mod sld;
pub mod terms;
pub mod theorem;
pub mod trace;

pub use mma::{Outcome, StrategyKind, Trace, Verdict};
pub use mma_minus::Mode;
pub use parser::{parse_equations, parse_program, parse_query, parse_term, ParseError};
pub use terms::{Atom, Clause, Equation, EquationSet, Program, Query, Substitution, Term, Var};
