//! Term and formula syntax, parsing, axiom-schema instantiation, and
//! evaluation in concrete set algebras.
//!
//! Term grammar (ASCII): variables `x0,x1,...`; constants `0`,`1`; `~t`,
//! `t & u`, `t | u` with the usual precedence and parentheses;
//! `s[i,j] t`, `s[i/j] t`, `d[i,j]`. Formulas use `p0,p1,...`, `!f`,
//! `f & g`, `f | g`, `f -> g`, `f <-> g`, `<i,j> f`, `[i,j] f`,
//! `<i/j> f`, `[i/j] f`. An equation is `t = u`; a quasi-equation is
//! `t1=u1 ; ... ; tk=uk => t=u`. Words are `e` or whitespace-separated
//! `s[i,j]` / `s[i/j]` letters.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::perm::{Letter, SigKind, SubstWord, Transformation};
use crate::set::{DenseSet, SetAlgebra, SetError};

/// Dimension plus operation inventory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    pub dim: usize,
    pub kind: SigKind,
}

impl Signature {
    pub fn new(dim: usize, kind: SigKind) -> Result<Signature, TermError> {
        if dim < 2 {
            return Err(TermError::DimensionTooSmall { dim });
        }
        Ok(Signature { dim, kind })
    }

    pub fn ta(dim: usize) -> Result<Signature, TermError> {
        Signature::new(dim, SigKind::Ta)
    }

    pub fn sa(dim: usize) -> Result<Signature, TermError> {
        Signature::new(dim, SigKind::Sa)
    }

    pub fn sad(dim: usize) -> Result<Signature, TermError> {
        Signature::new(dim, SigKind::Sad)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermError {
    DimensionTooSmall { dim: usize },
    IndexOutOfRange { index: usize, dim: usize },
    ReplacementNotInSignature,
    DiagonalNotInSignature,
    EqualIndices { index: usize },
    MissingBinding { var: usize },
    DiagonalNotModal,
    Algebra(SetError),
}

impl fmt::Display for TermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermError::DimensionTooSmall { dim } => {
                write!(f, "signature dimension must be at least 2, got {dim}")
            }
            TermError::IndexOutOfRange { index, dim } => {
                write!(f, "index {index} out of range for dimension {dim}")
            }
            TermError::ReplacementNotInSignature => {
                write!(f, "replacement operator not in this signature")
            }
            TermError::DiagonalNotInSignature => {
                write!(f, "diagonal constant not in this signature")
            }
            TermError::EqualIndices { index } => {
                write!(f, "substitution indices must differ, got {index} twice")
            }
            TermError::MissingBinding { var } => write!(f, "no binding for variable x{var}"),
            TermError::DiagonalNotModal => {
                write!(f, "diagonal constants have no modal counterpart")
            }
            TermError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl From<SetError> for TermError {
    fn from(e: SetError) -> Self {
        TermError::Algebra(e)
    }
}

/// Abstract syntax of algebraic terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(usize),
    Top,
    Bottom,
    Not(Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    /// `s[i,j] t`
    SubstT(usize, usize, Box<Term>),
    /// `s[i/j] t`
    SubstR(usize, usize, Box<Term>),
    /// `d[i,j]`
    Diag(usize, usize),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Term) -> Term {
        Term::Not(Box::new(t))
    }

    pub fn and(a: Term, b: Term) -> Term {
        Term::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Term, b: Term) -> Term {
        Term::Or(Box::new(a), Box::new(b))
    }

    pub fn st(i: usize, j: usize, t: Term) -> Term {
        Term::SubstT(i, j, Box::new(t))
    }

    pub fn sr(i: usize, j: usize, t: Term) -> Term {
        Term::SubstR(i, j, Box::new(t))
    }

    /// Wraps `t` in the substitution operators of a word, first letter
    /// outermost, so the result denotes `s_{hat(word)} t`.
    pub fn subst_word(word: &SubstWord, t: Term) -> Term {
        let mut out = t;
        for l in word.letters().iter().rev() {
            out = match *l {
                Letter::Transpose(i, j) => Term::st(i, j, out),
                Letter::Replace(i, j) => Term::sr(i, j, out),
            };
        }
        out
    }

    pub fn validate(&self, sig: &Signature) -> Result<(), TermError> {
        let check = |i: usize, j: usize| -> Result<(), TermError> {
            for k in [i, j] {
                if k >= sig.dim {
                    return Err(TermError::IndexOutOfRange {
                        index: k,
                        dim: sig.dim,
                    });
                }
            }
            Ok(())
        };
        match self {
            Term::Var(_) | Term::Top | Term::Bottom => Ok(()),
            Term::Not(t) => t.validate(sig),
            Term::And(a, b) | Term::Or(a, b) => {
                a.validate(sig)?;
                b.validate(sig)
            }
            Term::SubstT(i, j, t) => {
                check(*i, *j)?;
                if i == j {
                    return Err(TermError::EqualIndices { index: *i });
                }
                t.validate(sig)
            }
            Term::SubstR(i, j, t) => {
                if !sig.kind.admits_replacements() {
                    return Err(TermError::ReplacementNotInSignature);
                }
                check(*i, *j)?;
                if i == j {
                    return Err(TermError::EqualIndices { index: *i });
                }
                t.validate(sig)
            }
            Term::Diag(i, j) => {
                if !sig.kind.admits_diagonals() {
                    return Err(TermError::DiagonalNotInSignature);
                }
                check(*i, *j)
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            Term::Var(i) => {
                out.insert(*i);
            }
            Term::Top | Term::Bottom | Term::Diag(..) => {}
            Term::Not(t) | Term::SubstT(_, _, t) | Term::SubstR(_, _, t) => t.collect_vars(out),
            Term::And(a, b) | Term::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn has_diagonal(&self) -> bool {
        match self {
            Term::Diag(..) => true,
            Term::Var(_) | Term::Top | Term::Bottom => false,
            Term::Not(t) | Term::SubstT(_, _, t) | Term::SubstR(_, _, t) => t.has_diagonal(),
            Term::And(a, b) | Term::Or(a, b) => a.has_diagonal() || b.has_diagonal(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Term::Or(..) => 1,
            Term::And(..) => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let me = self.prec();
        if me < min {
            write!(f, "(")?;
        }
        match self {
            Term::Var(i) => write!(f, "x{i}")?,
            Term::Top => write!(f, "1")?,
            Term::Bottom => write!(f, "0")?,
            Term::Not(t) => {
                write!(f, "~")?;
                t.fmt_prec(f, 3)?;
            }
            Term::And(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 3)?;
            }
            Term::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 2)?;
            }
            Term::SubstT(i, j, t) => {
                write!(f, "s[{i},{j}] ")?;
                t.fmt_prec(f, 3)?;
            }
            Term::SubstR(i, j, t) => {
                write!(f, "s[{i}/{j}] ")?;
                t.fmt_prec(f, 3)?;
            }
            Term::Diag(i, j) => write!(f, "d[{i},{j}]")?,
        }
        if me < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Modal formulas, the twin language of [`Term`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Prop(usize),
    Top,
    Bottom,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// `<i,j> f`, `[i,j] f`, `<i/j> f`, or `[i/j] f`.
    Modal(ModalKind, Letter, Box<Formula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModalKind {
    Diamond,
    Box,
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn diamond(l: Letter, f: Formula) -> Formula {
        Formula::Modal(ModalKind::Diamond, l, Box::new(f))
    }

    pub fn props(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<usize>) {
        match self {
            Formula::Prop(i) => {
                out.insert(*i);
            }
            Formula::Top | Formula::Bottom => {}
            Formula::Not(f) | Formula::Modal(_, _, f) => f.collect_props(out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
        }
    }

    pub fn validate(&self, sig: &Signature) -> Result<(), TermError> {
        match self {
            Formula::Prop(_) | Formula::Top | Formula::Bottom => Ok(()),
            Formula::Not(f) => f.validate(sig),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.validate(sig)?;
                b.validate(sig)
            }
            Formula::Modal(_, l, f) => {
                let (i, j) = match *l {
                    Letter::Transpose(i, j) => (i, j),
                    Letter::Replace(i, j) => {
                        if !sig.kind.admits_replacements() {
                            return Err(TermError::ReplacementNotInSignature);
                        }
                        (i, j)
                    }
                };
                for k in [i, j] {
                    if k >= sig.dim {
                        return Err(TermError::IndexOutOfRange {
                            index: k,
                            dim: sig.dim,
                        });
                    }
                }
                if i == j {
                    return Err(TermError::EqualIndices { index: i });
                }
                f.validate(sig)
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Iff(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let me = self.prec();
        if me < min {
            write!(f, "(")?;
        }
        match self {
            Formula::Prop(i) => write!(f, "p{i}")?,
            Formula::Top => write!(f, "1")?,
            Formula::Bottom => write!(f, "0")?,
            Formula::Not(g) => {
                write!(f, "!")?;
                g.fmt_prec(f, 4)?;
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, 3)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 4)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 3)?;
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " -> ")?;
                b.fmt_prec(f, 1)?;
            }
            Formula::Iff(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " <-> ")?;
                b.fmt_prec(f, 1)?;
            }
            Formula::Modal(kind, l, g) => {
                let (open, close) = match kind {
                    ModalKind::Diamond => ('<', '>'),
                    ModalKind::Box => ('[', ']'),
                };
                match *l {
                    Letter::Transpose(i, j) => write!(f, "{open}{i},{j}{close} ")?,
                    Letter::Replace(i, j) => write!(f, "{open}{i}/{j}{close} ")?,
                }
                g.fmt_prec(f, 4)?;
            }
        }
        if me < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Equation {
        Equation { lhs, rhs }
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }

    pub fn has_diagonal(&self) -> bool {
        self.lhs.has_diagonal() || self.rhs.has_diagonal()
    }

    pub fn validate(&self, sig: &Signature) -> Result<(), TermError> {
        self.lhs.validate(sig)?;
        self.rhs.validate(sig)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl fmt::Debug for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiEquation {
    pub premises: Vec<Equation>,
    pub conclusion: Equation,
}

impl QuasiEquation {
    pub fn vars(&self) -> BTreeSet<usize> {
        let mut v = self.conclusion.vars();
        for p in &self.premises {
            v.extend(p.vars());
        }
        v
    }

    pub fn has_diagonal(&self) -> bool {
        self.conclusion.has_diagonal() || self.premises.iter().any(|p| p.has_diagonal())
    }

    pub fn validate(&self, sig: &Signature) -> Result<(), TermError> {
        for p in &self.premises {
            p.validate(sig)?;
        }
        self.conclusion.validate(sig)
    }
}

impl fmt::Display for QuasiEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.premises.iter().enumerate() {
            if k > 0 {
                write!(f, " ; ")?;
            }
            write!(f, "{p}")?;
        }
        if !self.premises.is_empty() {
            write!(f, " ")?;
        }
        write!(f, "=> {}", self.conclusion)
    }
}

// ---------------------------------------------------------------------
// Parsing

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String), // letter followed by digits: x0, p12, s, d, e
    Num(usize),
    Tilde,
    Bang,
    Amp,
    Pipe,
    Arrow,  // ->
    DArrow, // =>
    Iff,    // <->
    Eq,
    Semi,
    Comma,
    Slash,
    LBrack,
    RBrack,
    LParen,
    RParen,
    LAngle,
    RAngle,
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let b = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '~' => {
                toks.push((start, Tok::Tilde));
                i += 1;
            }
            '!' => {
                toks.push((start, Tok::Bang));
                i += 1;
            }
            '&' => {
                toks.push((start, Tok::Amp));
                i += 1;
            }
            '|' => {
                toks.push((start, Tok::Pipe));
                i += 1;
            }
            ';' => {
                toks.push((start, Tok::Semi));
                i += 1;
            }
            ',' => {
                toks.push((start, Tok::Comma));
                i += 1;
            }
            '/' => {
                toks.push((start, Tok::Slash));
                i += 1;
            }
            '[' => {
                toks.push((start, Tok::LBrack));
                i += 1;
            }
            ']' => {
                toks.push((start, Tok::RBrack));
                i += 1;
            }
            '(' => {
                toks.push((start, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((start, Tok::RParen));
                i += 1;
            }
            '>' => {
                toks.push((start, Tok::RAngle));
                i += 1;
            }
            '<' => {
                if b.get(i + 1) == Some(&b'-') && b.get(i + 2) == Some(&b'>') {
                    toks.push((start, Tok::Iff));
                    i += 3;
                } else {
                    toks.push((start, Tok::LAngle));
                    i += 1;
                }
            }
            '-' => {
                if b.get(i + 1) == Some(&b'>') {
                    toks.push((start, Tok::Arrow));
                    i += 2;
                } else {
                    return Err(ParseError {
                        pos: start,
                        msg: "expected '->'".to_string(),
                    });
                }
            }
            '=' => {
                if b.get(i + 1) == Some(&b'>') {
                    toks.push((start, Tok::DArrow));
                    i += 2;
                } else {
                    toks.push((start, Tok::Eq));
                    i += 1;
                }
            }
            '0'..='9' => {
                let mut n = 0usize;
                while i < b.len() && b[i].is_ascii_digit() {
                    n = n * 10 + (b[i] - b'0') as usize;
                    i += 1;
                }
                toks.push((start, Tok::Num(n)));
            }
            'a'..='z' | 'A'..='Z' => {
                let mut s = String::new();
                s.push(c);
                i += 1;
                while i < b.len() && b[i].is_ascii_digit() {
                    s.push(b[i] as char);
                    i += 1;
                }
                toks.push((start, Tok::Word(s)));
            }
            _ => {
                return Err(ParseError {
                    pos: start,
                    msg: format!("unexpected character '{c}'"),
                })
            }
        }
    }
    Ok(Lexer { toks, end: b.len() })
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    sig: Signature,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.here(),
            msg: msg.to_string(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(what)
        }
    }

    fn num(&mut self, what: &str) -> Result<usize, ParseError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => self.err(what),
        }
    }

    fn check_index(&self, pos: usize, k: usize) -> Result<(), ParseError> {
        if k >= self.sig.dim {
            return Err(ParseError {
                pos,
                msg: format!("index {k} out of range for dimension {}", self.sig.dim),
            });
        }
        Ok(())
    }

    /// `i,j` or `i/j` between brackets.
    fn index_pair(&mut self) -> Result<(usize, usize, bool), ParseError> {
        let p = self.here();
        let i = self.num("expected an index")?;
        self.check_index(p, i)?;
        let replacement = match self.peek() {
            Some(Tok::Comma) => {
                self.pos += 1;
                false
            }
            Some(Tok::Slash) => {
                self.pos += 1;
                true
            }
            _ => return self.err("expected ',' or '/'"),
        };
        let p = self.here();
        let j = self.num("expected an index")?;
        self.check_index(p, j)?;
        Ok((i, j, replacement))
    }

    // terms

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.term_and()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            let u = self.term_and()?;
            t = Term::or(t, u);
        }
        Ok(t)
    }

    fn term_and(&mut self) -> Result<Term, ParseError> {
        let mut t = self.term_unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let u = self.term_unary()?;
            t = Term::and(t, u);
        }
        Ok(t)
    }

    fn term_unary(&mut self) -> Result<Term, ParseError> {
        let pos = self.here();
        match self.peek() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Term::not(self.term_unary()?))
            }
            Some(Tok::Word(w)) if w == "s" => {
                self.pos += 1;
                self.expect(Tok::LBrack, "expected '[' after 's'")?;
                let (i, j, replacement) = self.index_pair()?;
                if i == j {
                    return Err(ParseError {
                        pos,
                        msg: format!("substitution indices must differ, got {i} twice"),
                    });
                }
                self.expect(Tok::RBrack, "expected ']'")?;
                if replacement && !self.sig.kind.admits_replacements() {
                    return Err(ParseError {
                        pos,
                        msg: "replacement operator not in this signature".to_string(),
                    });
                }
                let sub = self.term_unary()?;
                Ok(if replacement {
                    Term::sr(i, j, sub)
                } else {
                    Term::st(i, j, sub)
                })
            }
            Some(Tok::Word(w)) if w == "d" => {
                self.pos += 1;
                if !self.sig.kind.admits_diagonals() {
                    return Err(ParseError {
                        pos,
                        msg: "diagonal constant not in this signature".to_string(),
                    });
                }
                self.expect(Tok::LBrack, "expected '[' after 'd'")?;
                let (i, j, replacement) = self.index_pair()?;
                if replacement {
                    return Err(ParseError {
                        pos,
                        msg: "diagonal indices are separated by ','".to_string(),
                    });
                }
                self.expect(Tok::RBrack, "expected ']'")?;
                Ok(Term::Diag(i, j))
            }
            Some(Tok::Word(w)) if w.starts_with('x') && w.len() > 1 => {
                let i: usize = w[1..].parse().map_err(|_| ParseError {
                    pos,
                    msg: "bad variable index".to_string(),
                })?;
                self.pos += 1;
                Ok(Term::Var(i))
            }
            Some(Tok::Num(0)) => {
                self.pos += 1;
                Ok(Term::Bottom)
            }
            Some(Tok::Num(1)) => {
                self.pos += 1;
                Ok(Term::Top)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "expected ')'")?;
                Ok(t)
            }
            _ => self.err("expected a term"),
        }
    }

    // formulas

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.formula_imp()?;
        while self.peek() == Some(&Tok::Iff) {
            self.pos += 1;
            let g = self.formula_imp()?;
            f = Formula::iff(f, g);
        }
        Ok(f)
    }

    fn formula_imp(&mut self) -> Result<Formula, ParseError> {
        let f = self.formula_or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let g = self.formula_imp()?;
            return Ok(Formula::implies(f, g));
        }
        Ok(f)
    }

    fn formula_or(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.formula_and()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            let g = self.formula_and()?;
            f = Formula::or(f, g);
        }
        Ok(f)
    }

    fn formula_and(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.formula_unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let g = self.formula_unary()?;
            f = Formula::and(f, g);
        }
        Ok(f)
    }

    fn modal_letter(
        &mut self,
        pos: usize,
        i: usize,
        j: usize,
        replacement: bool,
    ) -> Result<Letter, ParseError> {
        if i == j {
            return Err(ParseError {
                pos,
                msg: format!("modal indices must differ, got {i} twice"),
            });
        }
        if replacement && !self.sig.kind.admits_replacements() {
            return Err(ParseError {
                pos,
                msg: "replacement modality not in this signature".to_string(),
            });
        }
        Ok(if replacement {
            Letter::Replace(i, j)
        } else {
            Letter::Transpose(i, j)
        })
    }

    fn formula_unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.here();
        match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Formula::not(self.formula_unary()?))
            }
            Some(Tok::LAngle) => {
                self.pos += 1;
                let (i, j, replacement) = self.index_pair()?;
                self.expect(Tok::RAngle, "expected '>'")?;
                let l = self.modal_letter(pos, i, j, replacement)?;
                let sub = self.formula_unary()?;
                Ok(Formula::Modal(ModalKind::Diamond, l, Box::new(sub)))
            }
            Some(Tok::LBrack) => {
                self.pos += 1;
                let (i, j, replacement) = self.index_pair()?;
                self.expect(Tok::RBrack, "expected ']'")?;
                let l = self.modal_letter(pos, i, j, replacement)?;
                let sub = self.formula_unary()?;
                Ok(Formula::Modal(ModalKind::Box, l, Box::new(sub)))
            }
            Some(Tok::Word(w)) if w.starts_with('p') && w.len() > 1 => {
                let i: usize = w[1..].parse().map_err(|_| ParseError {
                    pos,
                    msg: "bad propositional variable index".to_string(),
                })?;
                self.pos += 1;
                Ok(Formula::Prop(i))
            }
            Some(Tok::Num(0)) => {
                self.pos += 1;
                Ok(Formula::Bottom)
            }
            Some(Tok::Num(1)) => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "expected ')'")?;
                Ok(f)
            }
            _ => self.err("expected a formula"),
        }
    }

    // words

    fn word(&mut self) -> Result<SubstWord, ParseError> {
        if let Some(Tok::Word(w)) = self.peek() {
            if w == "e" {
                self.pos += 1;
                return Ok(SubstWord::empty(self.sig.dim));
            }
        }
        let mut letters = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Word(w)) if w == "s" => {
                    let pos = self.here();
                    self.pos += 1;
                    self.expect(Tok::LBrack, "expected '[' after 's'")?;
                    let (i, j, replacement) = self.index_pair()?;
                    if i == j {
                        return Err(ParseError {
                            pos,
                            msg: format!("generator indices must differ, got {i} twice"),
                        });
                    }
                    if replacement && !self.sig.kind.admits_replacements() {
                        return Err(ParseError {
                            pos,
                            msg: "replacement letter not in this signature".to_string(),
                        });
                    }
                    self.expect(Tok::RBrack, "expected ']'")?;
                    letters.push(if replacement {
                        Letter::Replace(i, j)
                    } else {
                        Letter::Transpose(i, j)
                    });
                }
                _ => break,
            }
        }
        if letters.is_empty() {
            return self.err("expected a word ('e' or generator letters)");
        }
        Ok(SubstWord::new(self.sig.dim, letters).expect("indices validated"))
    }

    fn equation(&mut self) -> Result<Equation, ParseError> {
        let lhs = self.term()?;
        self.expect(Tok::Eq, "expected '='")?;
        let rhs = self.term()?;
        Ok(Equation::new(lhs, rhs))
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            return Err(ParseError {
                pos: self.here(),
                msg: "trailing input".to_string(),
            });
        }
        Ok(())
    }
}

fn with_parser<T>(
    text: &str,
    sig: &Signature,
    f: impl FnOnce(&mut Parser) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let lexer = lex(text)?;
    let mut p = Parser {
        toks: &lexer.toks,
        pos: 0,
        end: lexer.end,
        sig: *sig,
    };
    let out = f(&mut p)?;
    p.finish()?;
    Ok(out)
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    with_parser(text, sig, |p| p.term())
}

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    with_parser(text, sig, |p| p.formula())
}

pub fn parse_equation(text: &str, sig: &Signature) -> Result<Equation, ParseError> {
    with_parser(text, sig, |p| p.equation())
}

pub fn parse_quasi_equation(text: &str, sig: &Signature) -> Result<QuasiEquation, ParseError> {
    with_parser(text, sig, |p| {
        let mut eqs = Vec::new();
        eqs.push(p.equation()?);
        loop {
            match p.peek() {
                Some(Tok::Semi) => {
                    p.pos += 1;
                    eqs.push(p.equation()?);
                }
                Some(Tok::DArrow) => {
                    p.pos += 1;
                    let conclusion = p.equation()?;
                    return Ok(QuasiEquation {
                        premises: eqs,
                        conclusion,
                    });
                }
                _ => {
                    if eqs.len() == 1 {
                        // a bare equation is a premise-free quasi-equation
                        return Ok(QuasiEquation {
                            premises: Vec::new(),
                            conclusion: eqs.pop().expect("one equation"),
                        });
                    }
                    return p.err("expected ';' or '=>'");
                }
            }
        }
    })
}

pub fn parse_word(text: &str, sig: &Signature) -> Result<SubstWord, ParseError> {
    with_parser(text, sig, |p| p.word())
}

/// `w1 = w2` over generator words.
pub fn parse_word_equation(
    text: &str,
    sig: &Signature,
) -> Result<(SubstWord, SubstWord), ParseError> {
    with_parser(text, sig, |p| {
        let w1 = p.word()?;
        p.expect(Tok::Eq, "expected '='")?;
        let w2 = p.word()?;
        Ok((w1, w2))
    })
}

// ---------------------------------------------------------------------
// Axiom schemas

/// Identifier of an axiom schema, as used in listings and traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemaId {
    /// Boolean basis axioms B1..B8.
    Bool(u8),
    /// Substitutions distribute over meet (schema 2).
    MeetHom,
    /// Substitutions commute with complement (schema 3).
    ComplHom,
    /// Transpositions are involutions (schema 4).
    Involution,
    /// Disjoint adjacent transpositions commute (schema 5).
    AdjCommute,
    /// The braid relation of adjacent transpositions (schema 6).
    AdjBraid,
    /// Replacement schemas S1..S11.
    Subst(u8),
    /// Diagonal schemas D1..D4.
    Diag(u8),
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaId::Bool(k) => write!(f, "B{k}"),
            SchemaId::MeetHom => write!(f, "2"),
            SchemaId::ComplHom => write!(f, "3"),
            SchemaId::Involution => write!(f, "4"),
            SchemaId::AdjCommute => write!(f, "5"),
            SchemaId::AdjBraid => write!(f, "6"),
            SchemaId::Subst(k) => write!(f, "S{k}"),
            SchemaId::Diag(k) => write!(f, "D{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomInstance {
    pub schema: SchemaId,
    pub equation: Equation,
}

fn x() -> Term {
    Term::Var(0)
}

fn y() -> Term {
    Term::Var(1)
}

fn z() -> Term {
    Term::Var(2)
}

/// All index instances of the axiom schemas of the signature, each tagged
/// with its schema id.
///
/// The Boolean axioms are a fixed finite basis (a Huntington-style set).
/// Replacement schema S11 is instantiated in its sound form
/// `s[j/i] s[i,j] x = s[j/i] x` (the composite on the left is not a
/// bijection, so it cannot equal a transposition); diagonal schema D4 as
/// `s_g d[i,j] = d[g(i),g(j)]` for every generator letter `g`.
pub fn instantiate_axioms(sig: &Signature) -> Vec<AxiomInstance> {
    let n = sig.dim;
    let mut out = Vec::new();
    let mut push = |schema: SchemaId, lhs: Term, rhs: Term| {
        out.push(AxiomInstance {
            schema,
            equation: Equation::new(lhs, rhs),
        });
    };

    // B1..B8: a Huntington-style complete basis for Boolean algebra
    push(SchemaId::Bool(1), Term::or(x(), y()), Term::or(y(), x()));
    push(SchemaId::Bool(2), Term::and(x(), y()), Term::and(y(), x()));
    push(
        SchemaId::Bool(3),
        Term::or(x(), Term::and(y(), z())),
        Term::and(Term::or(x(), y()), Term::or(x(), z())),
    );
    push(
        SchemaId::Bool(4),
        Term::and(x(), Term::or(y(), z())),
        Term::or(Term::and(x(), y()), Term::and(x(), z())),
    );
    push(SchemaId::Bool(5), Term::or(x(), Term::Bottom), x());
    push(SchemaId::Bool(6), Term::and(x(), Term::Top), x());
    push(SchemaId::Bool(7), Term::or(x(), Term::not(x())), Term::Top);
    push(
        SchemaId::Bool(8),
        Term::and(x(), Term::not(x())),
        Term::Bottom,
    );

    let wrap = |l: Letter, t: Term| match l {
        Letter::Transpose(i, j) => Term::st(i, j, t),
        Letter::Replace(i, j) => Term::sr(i, j, t),
    };
    let letters = crate::perm::generators(n, sig.kind);

    // 2, 3: every substitution is a Boolean endomorphism
    for &l in &letters {
        push(
            SchemaId::MeetHom,
            wrap(l, Term::and(x(), y())),
            Term::and(wrap(l, x()), wrap(l, y())),
        );
        push(
            SchemaId::ComplHom,
            wrap(l, Term::not(x())),
            Term::not(wrap(l, x())),
        );
    }

    // 4: involutions
    for i in 0..n {
        for j in i + 1..n {
            push(
                SchemaId::Involution,
                Term::st(i, j, Term::st(i, j, x())),
                x(),
            );
        }
    }

    // 5, 6: Coxeter relations of the adjacent transpositions s[a,a+1]
    let adj = n.saturating_sub(1);
    for a in 0..adj {
        for b in a + 2..adj {
            let sa = |t| Term::st(a, a + 1, t);
            let sb = |t| Term::st(b, b + 1, t);
            push(SchemaId::AdjCommute, sa(sb(x())), sb(sa(x())));
        }
        if a + 1 < adj {
            let b = a + 1;
            let sa = |t| Term::st(a, a + 1, t);
            let sb = |t| Term::st(b, b + 1, t);
            push(SchemaId::AdjBraid, sa(sb(sa(x()))), sb(sa(sb(x()))));
        }
    }

    if sig.kind.admits_replacements() {
        let distinct2 =
            || (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)));
        // S1: s[k,l] s[j/i] s[k,l] x = s[j/i] x, all four indices distinct
        for (i, j) in distinct2() {
            for k in 0..n {
                for l in k + 1..n {
                    if [k, l].contains(&i) || [k, l].contains(&j) {
                        continue;
                    }
                    push(
                        SchemaId::Subst(1),
                        Term::st(k, l, Term::sr(j, i, Term::st(k, l, x()))),
                        Term::sr(j, i, x()),
                    );
                }
            }
        }
        // S2..S4: conjugating a replacement by an overlapping transposition
        for (i, j) in distinct2() {
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let (jk0, jk1) = (j.min(k), j.max(k));
                push(
                    SchemaId::Subst(2),
                    Term::st(jk0, jk1, Term::sr(j, i, Term::st(jk0, jk1, x()))),
                    Term::sr(k, i, x()),
                );
                let (ki0, ki1) = (k.min(i), k.max(i));
                push(
                    SchemaId::Subst(3),
                    Term::st(ki0, ki1, Term::sr(j, i, Term::st(ki0, ki1, x()))),
                    Term::sr(j, k, x()),
                );
            }
            let (ij0, ij1) = (i.min(j), i.max(j));
            push(
                SchemaId::Subst(4),
                Term::st(ij0, ij1, Term::sr(j, i, Term::st(ij0, ij1, x()))),
                Term::sr(i, j, x()),
            );
        }
        // S5: disjoint replacements commute
        for (i, j) in distinct2() {
            for (l, k) in distinct2() {
                if (j, i) >= (k, l) {
                    continue;
                }
                if [k, l].contains(&i) || [k, l].contains(&j) {
                    continue;
                }
                push(
                    SchemaId::Subst(5),
                    Term::sr(j, i, Term::sr(k, l, x())),
                    Term::sr(k, l, Term::sr(j, i, x())),
                );
            }
        }
        // S6: replacements into a common source index
        for (i, j) in distinct2() {
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if j < k {
                    push(
                        SchemaId::Subst(6),
                        Term::sr(j, i, Term::sr(k, i, x())),
                        Term::sr(k, i, Term::sr(j, i, x())),
                    );
                }
                push(
                    SchemaId::Subst(6),
                    Term::sr(k, i, Term::sr(j, i, x())),
                    Term::sr(j, i, Term::sr(k, j, x())),
                );
            }
        }
        // S7..S8: chained replacements
        for (i, j) in distinct2() {
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let (ij0, ij1) = (i.min(j), i.max(j));
                push(
                    SchemaId::Subst(7),
                    Term::sr(j, i, Term::sr(i, k, x())),
                    Term::sr(j, k, Term::st(ij0, ij1, x())),
                );
                push(
                    SchemaId::Subst(8),
                    Term::sr(j, i, Term::sr(j, k, x())),
                    Term::sr(j, k, x()),
                );
            }
        }
        // S9..S11: idempotence and absorption
        for (i, j) in distinct2() {
            let (ij0, ij1) = (i.min(j), i.max(j));
            push(
                SchemaId::Subst(9),
                Term::sr(j, i, Term::sr(j, i, x())),
                Term::sr(j, i, x()),
            );
            push(
                SchemaId::Subst(10),
                Term::sr(j, i, Term::sr(i, j, x())),
                Term::sr(j, i, x()),
            );
            push(
                SchemaId::Subst(11),
                Term::sr(j, i, Term::st(ij0, ij1, x())),
                Term::sr(j, i, x()),
            );
        }
    }

    if sig.kind.admits_diagonals() {
        for i in 0..n {
            push(SchemaId::Diag(1), Term::Diag(i, i), Term::Top);
        }
        for i in 0..n {
            for j in i + 1..n {
                push(SchemaId::Diag(2), Term::Diag(i, j), Term::Diag(j, i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for k in 0..n {
                    let lhs = Term::and(Term::Diag(i, k), Term::Diag(k, j));
                    push(
                        SchemaId::Diag(3),
                        Term::and(lhs.clone(), Term::Diag(i, j)),
                        lhs,
                    );
                }
            }
        }
        for &l in &letters {
            let g = l.transformation(n).expect("generator letters are in range");
            for i in 0..n {
                for j in i + 1..n {
                    let (gi, gj) = (g.apply(i), g.apply(j));
                    push(
                        SchemaId::Diag(4),
                        wrap(l, Term::Diag(i, j)),
                        Term::Diag(gi.min(gj), gi.max(gj)),
                    );
                }
            }
        }
    }

    out
}

// ---------------------------------------------------------------------
// Evaluation

pub type Assignment = BTreeMap<usize, DenseSet>;

/// Compositional evaluation of a term in a concrete set algebra; the
/// brute-force oracle for everything downstream.
pub fn eval_term(
    t: &Term,
    assignment: &Assignment,
    alg: &SetAlgebra,
) -> Result<DenseSet, TermError> {
    match t {
        Term::Var(i) => assignment
            .get(i)
            .cloned()
            .ok_or(TermError::MissingBinding { var: *i }),
        Term::Top => Ok(alg.top()),
        Term::Bottom => Ok(alg.bottom()),
        Term::Not(sub) => Ok(alg.complement(&eval_term(sub, assignment, alg)?)),
        Term::And(a, b) => Ok(alg.meet(
            &eval_term(a, assignment, alg)?,
            &eval_term(b, assignment, alg)?,
        )),
        Term::Or(a, b) => Ok(alg.join(
            &eval_term(a, assignment, alg)?,
            &eval_term(b, assignment, alg)?,
        )),
        Term::SubstT(i, j, sub) => {
            let t = Transformation::transposition(alg.dim(), *i, *j).map_err(|_| {
                TermError::IndexOutOfRange {
                    index: (*i).max(*j),
                    dim: alg.dim(),
                }
            })?;
            Ok(alg.apply_subst(&eval_term(sub, assignment, alg)?, &t)?)
        }
        Term::SubstR(i, j, sub) => {
            let t = Transformation::replacement(alg.dim(), *i, *j).map_err(|_| {
                TermError::IndexOutOfRange {
                    index: (*i).max(*j),
                    dim: alg.dim(),
                }
            })?;
            Ok(alg.apply_subst(&eval_term(sub, assignment, alg)?, &t)?)
        }
        Term::Diag(i, j) => Ok(alg.diagonal(*i, *j)?),
    }
}

/// Both sides of an equation under one assignment.
pub fn eval_equation(
    eq: &Equation,
    assignment: &Assignment,
    alg: &SetAlgebra,
) -> Result<(DenseSet, DenseSet), TermError> {
    Ok((
        eval_term(&eq.lhs, assignment, alg)?,
        eval_term(&eq.rhs, assignment, alg)?,
    ))
}

// ---------------------------------------------------------------------
// Modal translation

/// Maps a formula to its algebraic term. Both modalities translate to the
/// substitution operator: transposition accessibility is a bijective
/// involution and replacement accessibility is a function, so diamond and
/// box coincide semantically.
pub fn translate(f: &Formula) -> Term {
    match f {
        Formula::Prop(i) => Term::Var(*i),
        Formula::Top => Term::Top,
        Formula::Bottom => Term::Bottom,
        Formula::Not(g) => Term::not(translate(g)),
        Formula::And(a, b) => Term::and(translate(a), translate(b)),
        Formula::Or(a, b) => Term::or(translate(a), translate(b)),
        Formula::Implies(a, b) => Term::or(Term::not(translate(a)), translate(b)),
        Formula::Iff(a, b) => {
            let (ta, tb) = (translate(a), translate(b));
            Term::and(
                Term::or(Term::not(ta.clone()), tb.clone()),
                Term::or(Term::not(tb), ta),
            )
        }
        Formula::Modal(_, l, g) => match *l {
            Letter::Transpose(i, j) => Term::st(i, j, translate(g)),
            Letter::Replace(i, j) => Term::sr(i, j, translate(g)),
        },
    }
}

/// Maps a diagonal-free term back to a formula, rendering substitutions as
/// diamonds.
pub fn translate_back(t: &Term) -> Result<Formula, TermError> {
    Ok(match t {
        Term::Var(i) => Formula::Prop(*i),
        Term::Top => Formula::Top,
        Term::Bottom => Formula::Bottom,
        Term::Not(sub) => Formula::not(translate_back(sub)?),
        Term::And(a, b) => Formula::and(translate_back(a)?, translate_back(b)?),
        Term::Or(a, b) => Formula::or(translate_back(a)?, translate_back(b)?),
        Term::SubstT(i, j, sub) => {
            Formula::diamond(Letter::Transpose(*i, *j), translate_back(sub)?)
        }
        Term::SubstR(i, j, sub) => Formula::diamond(Letter::Replace(*i, *j), translate_back(sub)?),
        Term::Diag(..) => return Err(TermError::DiagonalNotModal),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::Bits;
    use crate::config::Config;

    fn sig_ta2() -> Signature {
        Signature::ta(2).unwrap()
    }

    fn sig_sad2() -> Signature {
        Signature::sad(2).unwrap()
    }

    #[test]
    fn parse_term_examples() {
        let t = parse_term("s[0,1] x0", &sig_ta2()).unwrap();
        assert_eq!(t, Term::st(0, 1, Term::Var(0)));

        let err = parse_term("~(x0 & s[0/1] x1)", &sig_ta2()).unwrap_err();
        assert!(err.msg.contains("replacement"));

        let t = parse_term("d[0,0]", &sig_sad2()).unwrap();
        assert_eq!(t, Term::Diag(0, 0));

        let err = parse_term("s[0,2] x0", &sig_ta2()).unwrap_err();
        assert!(err.msg.contains("out of range"));
    }

    #[test]
    fn parse_formula_examples() {
        let f = parse_formula("<0,1> p0", &sig_ta2()).unwrap();
        assert_eq!(
            f,
            Formula::diamond(Letter::Transpose(0, 1), Formula::Prop(0))
        );

        let f = parse_formula("[0,1] p0 -> p0", &sig_ta2()).unwrap();
        assert!(matches!(f, Formula::Implies(..)));

        let err = parse_formula("<0,2> p0", &sig_ta2()).unwrap_err();
        assert!(err.msg.contains("out of range"));
    }

    #[test]
    fn print_parse_round_trip() {
        let sig = Signature::sad(3).unwrap();
        let texts = [
            "x0 & ~x1 | s[0,1] (x2 & d[1,2])",
            "s[0/1] s[1,2] ~(x0 | 0) & 1",
            "~~x5",
        ];
        for text in texts {
            let t = parse_term(text, &sig).unwrap();
            let printed = format!("{t}");
            assert_eq!(parse_term(&printed, &sig).unwrap(), t, "via {printed}");
        }
        let fsig = Signature::sa(3).unwrap();
        let ftexts = [
            "p0 -> p1 -> p0",
            "<0,1> [1,2] p0 <-> !(p1 & p2)",
            "<0/1> p3 | p1 & p0",
        ];
        for text in ftexts {
            let f = parse_formula(text, &fsig).unwrap();
            let printed = format!("{f}");
            assert_eq!(parse_formula(&printed, &fsig).unwrap(), f, "via {printed}");
        }
    }

    #[test]
    fn parse_quasi_equation_shapes() {
        let sig = sig_ta2();
        let qe = parse_quasi_equation("s[0,1] x0 = ~x0 => 0 = 1", &sig).unwrap();
        assert_eq!(qe.premises.len(), 1);
        let qe = parse_quasi_equation("x0 = x0", &sig).unwrap();
        assert!(qe.premises.is_empty());
        let qe = parse_quasi_equation("x0 = x1 ; x1 = x2 => x0 = x2", &sig).unwrap();
        assert_eq!(qe.premises.len(), 2);
    }

    #[test]
    fn parse_word_examples() {
        let sig = Signature::sa(3).unwrap();
        let w = parse_word("s[0,1] s[1/2] s[0,2]", &sig).unwrap();
        assert_eq!(w.len(), 3);
        assert!(parse_word("e", &sig).unwrap().is_empty());
        let (w1, w2) = parse_word_equation("s[0,1] s[0,1] = e", &sig).unwrap();
        assert_eq!(w1.len(), 2);
        assert!(w2.is_empty());
    }

    #[test]
    fn axiom_counts_at_small_dims() {
        let ta2 = instantiate_axioms(&sig_ta2());
        // B1..B8 + meet/compl hom for s[0,1] + involution
        assert_eq!(ta2.len(), 8 + 2 + 1);
        assert!(ta2.iter().any(|a| a.schema == SchemaId::Involution
            && format!("{}", a.equation) == "s[0,1] s[0,1] x0 = x0"));

        let ta3 = instantiate_axioms(&Signature::ta(3).unwrap());
        // one braid instance at n=3, no commute instances
        assert_eq!(
            ta3.iter()
                .filter(|a| a.schema == SchemaId::AdjBraid)
                .count(),
            1
        );
        assert_eq!(
            ta3.iter()
                .filter(|a| a.schema == SchemaId::AdjCommute)
                .count(),
            0
        );
        let ta4 = instantiate_axioms(&Signature::ta(4).unwrap());
        assert_eq!(
            ta4.iter()
                .filter(|a| a.schema == SchemaId::AdjCommute)
                .count(),
            1
        );

        let sa3 = instantiate_axioms(&Signature::sa(3).unwrap());
        // an S2 instance with (i,j,k) = (0,1,2): s[1,2] s[1/0] s[1,2] x = s[2/0] x
        assert!(sa3.iter().any(|a| a.schema == SchemaId::Subst(2)
            && format!("{}", a.equation) == "s[1,2] s[1/0] s[1,2] x0 = s[2/0] x0"));

        let sad2 = instantiate_axioms(&sig_sad2());
        assert!(sad2
            .iter()
            .any(|a| a.schema == SchemaId::Diag(1) && format!("{}", a.equation) == "d[0,0] = 1"));
    }

    #[test]
    fn eval_examples() {
        let config = Config::default();
        let alg = SetAlgebra::small(2, 2, SigKind::Ta, &config).unwrap();
        let sig = sig_ta2();
        let mut assignment = Assignment::new();
        assignment.insert(0, alg.from_points(&[2]).unwrap()); // {(0,1)}

        assert_eq!(eval_term(&Term::Top, &assignment, &alg).unwrap(), alg.top());
        let t = parse_term("s[0,1] x0", &sig).unwrap();
        assert_eq!(
            eval_term(&t, &assignment, &alg).unwrap(),
            alg.from_points(&[1]).unwrap()
        );
        assert_eq!(
            eval_term(&Term::Var(3), &assignment, &alg),
            Err(TermError::MissingBinding { var: 3 })
        );
    }

    #[test]
    fn axiom_soundness_exhaustive_on_a22() {
        let config = Config::default();
        for (kind, sig) in [
            (SigKind::Ta, sig_ta2()),
            (SigKind::Sa, Signature::sa(2).unwrap()),
            (SigKind::Sad, sig_sad2()),
        ] {
            let alg = SetAlgebra::small(2, 2, kind, &config).unwrap();
            for inst in instantiate_axioms(&sig) {
                let vars: Vec<usize> = inst.equation.vars().into_iter().collect();
                let mut counters = alloc::vec![0usize; vars.len()];
                loop {
                    let mut assignment = Assignment::new();
                    for (v, c) in vars.iter().zip(&counters) {
                        let idx: Vec<usize> = (0..4).filter(|i| c >> i & 1 == 1).collect();
                        assignment.insert(*v, alg.from_bits(Bits::from_indices(4, &idx)).unwrap());
                    }
                    let (l, r) = eval_equation(&inst.equation, &assignment, &alg).unwrap();
                    assert_eq!(l, r, "schema {} instance {}", inst.schema, inst.equation);
                    // odometer over assignments
                    let mut k = 0;
                    loop {
                        if k == counters.len() {
                            break;
                        }
                        counters[k] += 1;
                        if counters[k] < 16 {
                            break;
                        }
                        counters[k] = 0;
                        k += 1;
                    }
                    if counters.iter().all(|&c| c == 0) {
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn eval_commutes_with_relativization() {
        // h(eval(t, sigma)) = eval(t, h∘sigma) for the permutable
        // subunit G = {(0,1),(1,0)} of ^2 2
        let config = Config::default();
        let full = SetAlgebra::small(2, 2, SigKind::Ta, &config).unwrap();
        let g = crate::set::AlgebraDesc {
            dim: 2,
            base: 2,
            unit: crate::set::UnitSpec::Points(alloc::vec![1, 2]),
            kind: SigKind::Ta,
        }
        .build(&config)
        .unwrap();
        let sig = sig_ta2();
        let terms = [
            "s[0,1] (x0 & ~x1)",
            "s[0,1] s[0,1] x0 | ~x0",
            "~(x0 | s[0,1] x1)",
        ];
        for text in terms {
            let t = parse_term(text, &sig).unwrap();
            for code in 0..256u32 {
                let mut sigma = Assignment::new();
                let mut relativized = Assignment::new();
                for v in 0..2usize {
                    let pts: Vec<usize> = (0..4).filter(|i| code >> (v * 4 + i) & 1 == 1).collect();
                    let x = full.from_points(&pts).unwrap();
                    relativized.insert(v, crate::set::relativize_hom(&x, &full, &g).unwrap());
                    sigma.insert(v, x);
                }
                let lhs =
                    crate::set::relativize_hom(&eval_term(&t, &sigma, &full).unwrap(), &full, &g)
                        .unwrap();
                let rhs = eval_term(&t, &relativized, &g).unwrap();
                assert_eq!(lhs, rhs, "{text}");
            }
        }
    }

    #[test]
    fn translate_examples() {
        assert_eq!(translate(&Formula::Prop(0)), Term::Var(0));
        let f = Formula::diamond(Letter::Transpose(0, 1), Formula::Prop(0));
        assert_eq!(translate(&f), Term::st(0, 1, Term::Var(0)));
        // box and diamond with the same tag translate identically
        let g = Formula::Modal(
            ModalKind::Box,
            Letter::Transpose(0, 1),
            Box::new(Formula::Prop(0)),
        );
        assert_eq!(translate(&f), translate(&g));
        // round trip on diamond-only formulas
        let f = parse_formula("<0,1> (p0 & !p1) | <0/1> p2", &Signature::sa(2).unwrap()).unwrap();
        assert_eq!(translate_back(&translate(&f)).unwrap(), f);
        assert_eq!(
            translate_back(&Term::Diag(0, 1)),
            Err(TermError::DiagonalNotModal)
        );
    }
}
