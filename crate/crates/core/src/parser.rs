//! Reader for the Prolog subset used throughout the crate: facts, rules,
//! queries and comma-separated equation sets.
//!
//! Supported syntax: variables (`X`, `_Foo`, `_`), lowercase or quoted
//! names, compound terms, list sugar `[a,b|T]`, decimal numerals (read as
//! `s^n(0)`), `:-`, `=` and `%` line comments. Writing is done by the
//! `Display` impls in [`crate::terms`].

use std::collections::HashMap;

use thiserror::Error;

use crate::terms::{is_reserved_name, Atom, Clause, Equation, EquationSet, Program, Query, Term, Var, VarGen, CONS, NIL};

const MAX_NUMERAL: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: {kind} `{name}` used with arity {second}, earlier with arity {first}")]
    ArityConflict {
        line: usize,
        col: usize,
        kind: &'static str,
        name: String,
        first: usize,
        second: usize,
    },
    #[error("{line}:{col}: variable name `{name}` is reserved for generated variables")]
    ReservedVariable { line: usize, col: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(String),
    Name(String),
    Int(usize),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Bar,
    Comma,
    Dot,
    Neck,
    Query,
    Eq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Var(v) => format!("variable `{v}`"),
            Tok::Name(n) => format!("name `{n}`"),
            Tok::Int(n) => format!("number `{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Neck => "`:-`".into(),
            Tok::Query => "`?-`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| ParseError::Syntax { line, col, msg };

    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut i, &mut col);
                continue;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            _ => {}
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '|' => Tok::Bar,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '=' => Tok::Eq,
            ':' if chars.get(i + 1) == Some(&'-') => {
                advance(1, &mut i, &mut col);
                Tok::Neck
            }
            '?' if chars.get(i + 1) == Some(&'-') => {
                advance(1, &mut i, &mut col);
                Tok::Query
            }
            '\'' => {
                let mut name = String::new();
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None | Some('\n') => return Err(err(l0, c0, "unterminated quoted name".into())),
                        Some('\\') => {
                            match chars.get(j + 1) {
                                Some(&e) => name.push(e),
                                None => return Err(err(l0, c0, "unterminated quoted name".into())),
                            }
                            j += 2;
                        }
                        Some('\'') => break,
                        Some(&ch) => {
                            name.push(ch);
                            j += 1;
                        }
                    }
                }
                let n = j + 1 - i;
                advance(n - 1, &mut i, &mut col);
                Tok::Name(name)
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i..j].iter().collect();
                let n = digits
                    .parse::<usize>()
                    .ok()
                    .filter(|&n| n <= MAX_NUMERAL)
                    .ok_or_else(|| err(l0, c0, format!("numeral `{digits}` out of range")))?;
                advance(j - i - 1, &mut i, &mut col);
                Tok::Int(n)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '#') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                advance(j - i - 1, &mut i, &mut col);
                if c.is_uppercase() || c == '_' {
                    Tok::Var(word)
                } else {
                    if word.contains('#') {
                        return Err(err(l0, c0, format!("unexpected `#` in name `{word}`")));
                    }
                    Tok::Name(word)
                }
            }
            other => return Err(err(l0, c0, format!("unexpected character `{other}`"))),
        };
        advance(1, &mut i, &mut col);
        out.push(Spanned { tok, line: l0, col: c0 });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Configurable reader. Fresh variables for `_` come from the borrowed generator.
pub struct Reader<'g> {
    gen: &'g mut VarGen,
    allow_reserved: bool,
}

struct State<'r, 'g> {
    reader: &'r mut Reader<'g>,
    toks: Vec<Spanned>,
    pos: usize,
    arities: HashMap<(&'static str, String), usize>,
}

impl<'g> Reader<'g> {
    pub fn new(gen: &'g mut VarGen) -> Self {
        Reader {
            gen,
            allow_reserved: false,
        }
    }

    /// Accept generated (`#`-marked) variable names, e.g. when re-reading
    /// rendered output. The generator is advanced past any such name read.
    pub fn allow_reserved(mut self, yes: bool) -> Self {
        self.allow_reserved = yes;
        self
    }

    fn start(&mut self, text: &str) -> Result<State<'_, 'g>, ParseError> {
        Ok(State {
            toks: lex(text)?,
            reader: self,
            pos: 0,
            arities: HashMap::new(),
        })
    }

    pub fn program(&mut self, text: &str) -> Result<Program, ParseError> {
        let mut st = self.start(text)?;
        let mut clauses = Vec::new();
        while st.peek() != &Tok::Eof {
            clauses.push(st.clause()?);
        }
        Ok(Program::new(clauses))
    }

    pub fn query(&mut self, text: &str) -> Result<Query, ParseError> {
        let mut st = self.start(text)?;
        if st.peek() == &Tok::Query {
            st.bump();
        }
        let mut atoms = vec![st.atom()?];
        while st.peek() == &Tok::Comma {
            st.bump();
            atoms.push(st.atom()?);
        }
        if st.peek() == &Tok::Dot {
            st.bump();
        }
        st.expect(Tok::Eof)?;
        Ok(Query::new(atoms))
    }

    pub fn equations(&mut self, text: &str) -> Result<EquationSet, ParseError> {
        let mut st = self.start(text)?;
        let braced = st.peek() == &Tok::LBrace;
        if braced {
            st.bump();
        }
        let mut eqs = Vec::new();
        if !matches!(st.peek(), Tok::Eof | Tok::RBrace) {
            eqs.push(st.equation()?);
            while st.peek() == &Tok::Comma {
                st.bump();
                eqs.push(st.equation()?);
            }
        }
        if braced {
            st.expect(Tok::RBrace)?;
        }
        if st.peek() == &Tok::Dot {
            st.bump();
        }
        st.expect(Tok::Eof)?;
        Ok(EquationSet::new(eqs))
    }

    pub fn term(&mut self, text: &str) -> Result<Term, ParseError> {
        let mut st = self.start(text)?;
        let t = st.term()?;
        st.expect(Tok::Eof)?;
        Ok(t)
    }
}

impl State<'_, '_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: String) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::Syntax { line, col, msg })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe()))
        }
    }

    fn note_arity(&mut self, kind: &'static str, name: &str, arity: usize, at: (usize, usize)) -> Result<(), ParseError> {
        match self.arities.get(&(kind, name.to_string())) {
            Some(&first) if first != arity => Err(ParseError::ArityConflict {
                line: at.0,
                col: at.1,
                kind,
                name: name.to_string(),
                first,
                second: arity,
            }),
            Some(_) => Ok(()),
            None => {
                self.arities.insert((kind, name.to_string()), arity);
                Ok(())
            }
        }
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        let head = self.atom()?;
        let mut body = Vec::new();
        if self.peek() == &Tok::Neck {
            self.bump();
            body.push(self.atom()?);
            while self.peek() == &Tok::Comma {
                self.bump();
                body.push(self.atom()?);
            }
        }
        self.expect(Tok::Dot)?;
        Ok(Clause { head, body })
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let at = self.here();
        let Tok::Name(name) = self.peek().clone() else {
            return self.error(format!("expected an atom, found {}", self.peek().describe()));
        };
        self.bump();
        let args = if self.peek() == &Tok::LParen { self.args()? } else { Vec::new() };
        self.note_arity("predicate", &name, args.len(), at)?;
        Ok(Atom::new(&name, args))
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.term()?];
        while self.peek() == &Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn equation(&mut self) -> Result<Equation, ParseError> {
        let lhs = self.term()?;
        self.expect(Tok::Eq)?;
        let rhs = self.term()?;
        Ok(Equation::new(lhs, rhs))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let at = self.here();
        match self.bump() {
            Tok::Var(name) if name == "_" => Ok(Term::Var(self.reader.gen.fresh("_"))),
            Tok::Var(name) => {
                if is_reserved_name(&name) {
                    if !self.reader.allow_reserved {
                        return Err(ParseError::ReservedVariable {
                            line: at.0,
                            col: at.1,
                            name,
                        });
                    }
                    let t = Term::Var(Var::new(&name));
                    self.reader.gen.observe(&t);
                    return Ok(t);
                }
                Ok(Term::var(&name))
            }
            Tok::Int(n) => {
                if n > 0 {
                    self.note_arity("functor", "s", 1, at)?;
                }
                self.note_arity("functor", "0", 0, at)?;
                Ok(Term::nat(n))
            }
            Tok::Name(name) => {
                let args = if self.peek() == &Tok::LParen { self.args()? } else { Vec::new() };
                self.note_arity("functor", &name, args.len(), at)?;
                Ok(Term::app(&name, args))
            }
            Tok::LBracket => {
                if self.peek() == &Tok::RBracket {
                    self.bump();
                    return Ok(Term::nil());
                }
                let mut elems = vec![self.term()?];
                while self.peek() == &Tok::Comma {
                    self.bump();
                    elems.push(self.term()?);
                }
                let tail = if self.peek() == &Tok::Bar {
                    self.bump();
                    self.term()?
                } else {
                    Term::nil()
                };
                self.expect(Tok::RBracket)?;
                self.note_arity("functor", CONS, 2, at)?;
                self.note_arity("functor", NIL, 0, at)?;
                Ok(Term::list(elems, tail))
            }
            other => {
                self.pos -= usize::from(other != Tok::Eof);
                self.error(format!("expected a term, found {}", other.describe()))
            }
        }
    }
}

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    Reader::new(&mut VarGen::new()).program(text)
}

pub fn parse_query(text: &str) -> Result<Query, ParseError> {
    Reader::new(&mut VarGen::new()).query(text)
}

pub fn parse_equations(text: &str) -> Result<EquationSet, ParseError> {
    Reader::new(&mut VarGen::new()).equations(text)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    Reader::new(&mut VarGen::new()).term(text)
}
