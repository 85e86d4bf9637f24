//! Parametric word expressions such as `A^{p+1}(baBA)^n b^{q+1}`.
//!
//! Grammar (whitespace is ignored everywhere):
//!
//! ```text
//! expr     := factor*
//! factor   := atom [ "^" exponent ]
//! atom     := "a" | "b" | "A" | "B" | "(" expr ")"
//! exponent := nat | param | param "+" nat      (optionally wrapped in { })
//! param    := "p" | "q" | "n"
//! ```
//!
//! Error positions are 1-based character columns in the original text.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: unexpected {found:?}, expected {expected}")]
    Unexpected {
        found: char,
        position: usize,
        expected: &'static str,
    },
    #[error("syntax error at position {position}: unexpected end of input, expected {expected}")]
    UnexpectedEnd { position: usize, expected: &'static str },
    #[error("unknown parameter {name:?} at position {position} (parameters are p, q and n)")]
    UnknownParameter { name: char, position: usize },
    #[error("syntax error at position {position}: empty parentheses")]
    EmptyGroup { position: usize },
    #[error("exponent at position {position} is too large")]
    ExponentOverflow { position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match *self {
            ParseError::Unexpected { position, .. }
            | ParseError::UnexpectedEnd { position, .. }
            | ParseError::UnknownParameter { position, .. }
            | ParseError::EmptyGroup { position }
            | ParseError::ExponentOverflow { position } => position,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    P,
    Q,
    N,
}

impl Param {
    fn from_char(ch: char) -> Option<Param> {
        match ch {
            'p' => Some(Param::P),
            'q' => Some(Param::Q),
            'n' => Some(Param::N),
            _ => None,
        }
    }

    fn to_char(self) -> char {
        match self {
            Param::P => 'p',
            Param::Q => 'q',
            Param::N => 'n',
        }
    }
}

/// Values for the three surgery parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Binding {
    pub p: u32,
    pub q: u32,
    pub n: u32,
}

impl Binding {
    pub fn new(p: u32, q: u32, n: u32) -> Binding {
        Binding { p, q, n }
    }

    pub fn get(&self, param: Param) -> u32 {
        match param {
            Param::P => self.p,
            Param::Q => self.q,
            Param::N => self.n,
        }
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}, q={}, n={}", self.p, self.q, self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Literal(u32),
    Param(Param),
    /// `param + k`
    Shifted(Param, u32),
}

impl Exponent {
    pub fn eval(&self, binding: &Binding) -> usize {
        match *self {
            Exponent::Literal(k) => k as usize,
            Exponent::Param(p) => binding.get(p) as usize,
            Exponent::Shifted(p, k) => binding.get(p) as usize + k as usize,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Exponent::Literal(k) if k < 10 => write!(f, "^{k}"),
            Exponent::Literal(k) => write!(f, "^{{{k}}}"),
            Exponent::Param(p) => write!(f, "^{}", p.to_char()),
            Exponent::Shifted(p, k) => write!(f, "^{{{}+{k}}}", p.to_char()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Letter(Letter),
    Group(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub atom: Atom,
    /// `None` is an implicit first power.
    pub exponent: Option<Exponent>,
}

impl Factor {
    pub fn power(&self, binding: &Binding) -> usize {
        self.exponent.map_or(1, |e| e.eval(binding))
    }
}

/// Parse tree of a parametric word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Expr {
    pub factors: Vec<Factor>,
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, ParseError> {
        let mut parser = Parser::new(text);
        let expr = parser.expr()?;
        match parser.peek() {
            None => Ok(expr),
            Some((position, found)) => Err(ParseError::Unexpected {
                found,
                position,
                expected: "a letter, '(' or '^'",
            }),
        }
    }

    /// Expands every power without any free reduction.
    pub fn expand(&self, binding: &Binding) -> Vec<Letter> {
        let mut out = Vec::new();
        self.expand_into(binding, &mut out);
        out
    }

    fn expand_into(&self, binding: &Binding, out: &mut Vec<Letter>) {
        for factor in &self.factors {
            let k = factor.power(binding);
            match &factor.atom {
                Atom::Letter(x) => out.extend(std::iter::repeat_n(*x, k)),
                Atom::Group(inner) => {
                    let block = inner.expand(binding);
                    for _ in 0..k {
                        out.extend_from_slice(&block);
                    }
                }
            }
        }
    }

    /// Expands and freely reduces.
    pub fn evaluate(&self, binding: &Binding) -> Word {
        Word::reduce(self.expand(binding))
    }

    /// Juxtaposition of two expressions.
    pub fn concat(&self, other: &Expr) -> Expr {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Expr { factors }
    }

    /// The top-level parenthesised factors, in order of appearance.
    pub fn groups(&self) -> impl Iterator<Item = &Expr> {
        self.factors.iter().filter_map(|f| match &f.atom {
            Atom::Group(e) => Some(e),
            Atom::Letter(_) => None,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for factor in &self.factors {
            match &factor.atom {
                Atom::Letter(x) => write!(f, "{x}")?,
                Atom::Group(e) => write!(f, "({e})")?,
            }
            if let Some(e) = factor.exponent {
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Expr, ParseError> {
        Expr::parse(s)
    }
}

struct Parser {
    // (1-based column, char), whitespace removed
    chars: Vec<(usize, char)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Parser {
        let chars: Vec<(usize, char)> = text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| (i + 1, c))
            .collect();
        Parser {
            chars,
            pos: 0,
            end: text.chars().count() + 1,
        }
    }

    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<(usize, char)> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some((position, found)) => ParseError::Unexpected {
                found,
                position,
                expected,
            },
            None => ParseError::UnexpectedEnd {
                position: self.end,
                expected,
            },
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut factors = Vec::new();
        while let Some((_, c)) = self.peek() {
            if c == ')' {
                break;
            }
            factors.push(self.factor()?);
        }
        Ok(Expr { factors })
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let atom = match self.peek() {
            Some((_, c)) if Letter::from_char(c).is_some() => {
                self.bump();
                Atom::Letter(Letter::from_char(c).unwrap())
            }
            Some((open, '(')) => {
                self.bump();
                let inner = self.expr()?;
                match self.peek() {
                    Some((_, ')')) => {
                        self.bump();
                    }
                    _ => return Err(self.unexpected("')'")),
                }
                if inner.is_empty() {
                    return Err(ParseError::EmptyGroup { position: open });
                }
                Atom::Group(inner)
            }
            _ => return Err(self.unexpected("a letter or '('")),
        };
        let exponent = match self.peek() {
            Some((_, '^')) => {
                self.bump();
                Some(self.exponent()?)
            }
            _ => None,
        };
        Ok(Factor { atom, exponent })
    }

    fn exponent(&mut self) -> Result<Exponent, ParseError> {
        let braced = matches!(self.peek(), Some((_, '{')));
        if braced {
            self.bump();
        }
        let e = match self.peek() {
            Some((_, c)) if c.is_ascii_digit() => Exponent::Literal(self.nat()?),
            Some((position, c)) if c.is_alphabetic() => {
                let param = Param::from_char(c).ok_or(ParseError::UnknownParameter { name: c, position })?;
                self.bump();
                if let Some((_, '+')) = self.peek() {
                    self.bump();
                    Exponent::Shifted(param, self.nat()?)
                } else {
                    Exponent::Param(param)
                }
            }
            _ => return Err(self.unexpected("an exponent (number, p, q or n)")),
        };
        if braced {
            match self.peek() {
                Some((_, '}')) => {
                    self.bump();
                }
                _ => return Err(self.unexpected("'}'")),
            }
        }
        Ok(e)
    }

    fn nat(&mut self) -> Result<u32, ParseError> {
        let start = match self.peek() {
            Some((position, c)) if c.is_ascii_digit() => position,
            _ => return Err(self.unexpected("a number")),
        };
        let mut value: u32 = 0;
        while let Some((_, c)) = self.peek() {
            let Some(d) = c.to_digit(10) else { break };
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(d))
                .ok_or(ParseError::ExponentOverflow { position: start })?;
            self.bump();
        }
        Ok(value)
    }
}

/// Run-length rendering, e.g. `AAAb` becomes `A^3b`.
pub fn format_word(w: &Word) -> String {
    let mut out = String::new();
    let letters = w.letters();
    let mut i = 0;
    while i < letters.len() {
        let x = letters[i];
        let run = letters[i..].iter().take_while(|&&y| y == x).count();
        out.push(x.to_char());
        if run >= 2 {
            out.push_str(&format!("^{run}"));
        }
        i += run;
    }
    out
}
