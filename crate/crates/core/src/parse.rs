//! Tokenizer and parser for the clause language.
//!
//! Lowercase-initial tokens are symbols, uppercase or `_`-initial tokens are
//! variables, `[a,b|T]` desugars to `'.'/2` cons cells ending in `[]`, and
//! the infix operators are `/` (400, left) and `-` (500, left), so `np-kim`
//! reads as `-(np,kim)` and `s/[T1,T2]` as `/(s,[T1,T2])`. `%` starts a
//! comment running to end of line.

use std::collections::BTreeMap;
use std::fmt;

use crate::goal::Literal;
use crate::program::{Program, ProgramClause};
use crate::term::{Term, VarGen};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Var(String),
    Int(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Bar,
    Dot,
    Neck,   // :-
    Arrow,  // =>
    Slash,
    Minus,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) | Tok::Int(s) => write!(f, "{s}"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::LBracket => write!(f, "["),
            Tok::RBracket => write!(f, "]"),
            Tok::Comma => write!(f, ","),
            Tok::Bar => write!(f, "|"),
            Tok::Dot => write!(f, "."),
            Tok::Neck => write!(f, ":-"),
            Tok::Arrow => write!(f, "=>"),
            Tok::Slash => write!(f, "/"),
            Tok::Minus => write!(f, "-"),
        }
    }
}

pub struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Tokenizes the whole input, attaching positions.
    pub fn tokenize(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            while let Some(c) = self.peek() {
                if c == b'%' {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                } else if c.is_ascii_whitespace() {
                    self.bump();
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let c = match self.peek() {
                None => break,
                Some(c) => c,
            };
            let tok = match c {
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'[' => {
                    self.bump();
                    Tok::LBracket
                }
                b']' => {
                    self.bump();
                    Tok::RBracket
                }
                b',' => {
                    self.bump();
                    Tok::Comma
                }
                b'|' => {
                    self.bump();
                    Tok::Bar
                }
                b'.' => {
                    self.bump();
                    Tok::Dot
                }
                b'/' => {
                    self.bump();
                    Tok::Slash
                }
                b'-' => {
                    self.bump();
                    Tok::Minus
                }
                b':' => {
                    self.bump();
                    if self.peek() == Some(b'-') {
                        self.bump();
                        Tok::Neck
                    } else {
                        return Err(self.err("expected '-' after ':'"));
                    }
                }
                b'=' => {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        self.bump();
                        Tok::Arrow
                    } else {
                        return Err(self.err("expected '>' after '='"));
                    }
                }
                c if c.is_ascii_digit() => {
                    let mut s = String::new();
                    while let Some(c) = self.peek() {
                        if c.is_ascii_digit() {
                            s.push(c as char);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Int(s)
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let mut s = String::new();
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphanumeric() || c == b'_' {
                            s.push(c as char);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    if c.is_ascii_uppercase() || c == b'_' {
                        Tok::Var(s)
                    } else {
                        Tok::Ident(s)
                    }
                }
                other => {
                    return Err(self.err(format!("unexpected character '{}'", other as char)));
                }
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

/// Stream of tokens with a per-scope variable name table.
pub struct Parser<'g> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    pub gen: &'g mut VarGen,
    names: BTreeMap<String, Term>,
    end_line: usize,
    end_col: usize,
}

impl<'g> Parser<'g> {
    pub fn new(src: &str, gen: &'g mut VarGen) -> Result<Parser<'g>, ParseError> {
        let toks = Lexer::new(src).tokenize()?;
        let (end_line, end_col) = toks
            .last()
            .map(|(_, l, c)| (*l, *c + 1))
            .unwrap_or((1, 1));
        Ok(Parser {
            toks,
            pos: 0,
            gen,
            names: BTreeMap::new(),
            end_line,
            end_col,
        })
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((self.end_line, self.end_col))
    }

    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    pub fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            match self.peek() {
                Some(got) => Err(self.error(format!("expected '{t}', found '{got}'"))),
                None => Err(self.error(format!("expected '{t}', found end of input"))),
            }
        }
    }

    /// Opens a fresh variable-name scope (one per clause or query).
    pub fn new_scope(&mut self) {
        self.names.clear();
    }

    fn var(&mut self, name: String) -> Term {
        if name == "_" {
            return Term::Var(self.gen.fresh());
        }
        if let Some(t) = self.names.get(&name) {
            return t.clone();
        }
        let t = Term::Var(self.gen.fresh());
        self.names.insert(name, t.clone());
        t
    }

    pub fn term(&mut self) -> Result<Term, ParseError> {
        self.term_prec(1200)
    }

    fn term_prec(&mut self, max_prec: u32) -> Result<Term, ParseError> {
        let mut left = self.primary()?;
        loop {
            let (op, prec) = match self.peek() {
                Some(Tok::Minus) => ("-", 500),
                Some(Tok::Slash) => ("/", 400),
                _ => break,
            };
            if prec > max_prec {
                break;
            }
            self.bump();
            let right = self.term_prec(prec - 1)?;
            left = Term::app(op, vec![left, right]);
        }
        Ok(left)
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        match self.bump() {
            Some(Tok::Ident(name)) => {
                if self.eat(&Tok::LParen) {
                    let mut args = vec![self.term()?];
                    while self.eat(&Tok::Comma) {
                        args.push(self.term()?);
                    }
                    self.expect(&Tok::RParen)?;
                    Ok(Term::App(name, args))
                } else {
                    Ok(Term::App(name, Vec::new()))
                }
            }
            Some(Tok::Var(name)) => Ok(self.var(name)),
            Some(Tok::Int(s)) => Ok(Term::App(s, Vec::new())),
            Some(Tok::LBracket) => {
                if self.eat(&Tok::RBracket) {
                    return Ok(Term::atom("[]"));
                }
                let mut elems = vec![self.term()?];
                while self.eat(&Tok::Comma) {
                    elems.push(self.term()?);
                }
                let tail = if self.eat(&Tok::Bar) {
                    self.term()?
                } else {
                    Term::atom("[]")
                };
                self.expect(&Tok::RBracket)?;
                let mut t = tail;
                for e in elems.into_iter().rev() {
                    t = Term::App(".".to_string(), vec![e, t]);
                }
                Ok(t)
            }
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Some(other) => Err(ParseError {
                line: self.toks[self.pos - 1].1,
                col: self.toks[self.pos - 1].2,
                msg: format!("expected a term, found '{other}'"),
            }),
            None => Err(self.error("expected a term, found end of input")),
        }
    }

    pub fn literal(&mut self) -> Result<Literal, ParseError> {
        let (line, col) = self.here();
        let t = self.term()?;
        term_to_literal(t).map_err(|msg| ParseError { line, col, msg })
    }
}

fn term_to_literal(t: Term) -> Result<Literal, String> {
    match t {
        Term::Var(_) => Err("a literal cannot be a variable".to_string()),
        Term::App(f, args) => {
            if f == "." || f == "[]" {
                Err(format!("'{f}' is reserved and cannot be a predicate"))
            } else {
                Ok(Literal { pred: f, args })
            }
        }
    }
}

/// Parses a whole program: a flat sequence of `head.` and
/// `head :- b1, ..., bn.` clauses.
pub fn parse_program(src: &str, gen: &mut VarGen) -> Result<Program, ParseError> {
    let mut p = Parser::new(src, gen)?;
    let mut clauses = Vec::new();
    while !p.at_end() {
        p.new_scope();
        let head = p.literal()?;
        let mut body = Vec::new();
        if p.eat(&Tok::Neck) {
            body.push(p.literal()?);
            while p.eat(&Tok::Comma) {
                body.push(p.literal()?);
            }
        }
        p.expect(&Tok::Dot)?;
        clauses.push(ProgramClause { head, body });
    }
    Ok(Program::from_clauses(clauses))
}

/// Parses a query: a non-empty comma-separated literal sequence, optionally
/// ending in `.`.
pub fn parse_query(src: &str, gen: &mut VarGen) -> Result<Vec<Literal>, ParseError> {
    let mut p = Parser::new(src, gen)?;
    if p.at_end() {
        return Err(p.error("empty query"));
    }
    let mut lits = vec![p.literal()?];
    while p.eat(&Tok::Comma) {
        lits.push(p.literal()?);
    }
    p.eat(&Tok::Dot);
    if !p.at_end() {
        return Err(p.error("trailing input after query"));
    }
    Ok(lits)
}

/// Parses a single term; used by tests and tools.
pub fn parse_term(src: &str, gen: &mut VarGen) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, gen)?;
    let t = p.term()?;
    if !p.at_end() {
        return Err(p.error("trailing input after term"));
    }
    Ok(t)
}
