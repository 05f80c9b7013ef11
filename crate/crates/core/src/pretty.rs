//! Canonical text rendering of terms, literals, goals and clauses.
//!
//! Variables are named by first occurrence (A, B, ..., Z, A1, B1, ...) so
//! that repeated runs print byte-identical output. Infix `-` and `/` and
//! list sugar are rendered in the same syntax the parser accepts.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::goal::{GeneralizedClause, Goal, Literal};
use crate::program::{Program, ProgramClause};
use crate::term::{Term, VarId};

const PREC_MINUS: u32 = 500;
const PREC_SLASH: u32 = 400;
const PREC_TOP: u32 = 1200;

/// Assigns display names by first occurrence.
#[derive(Default)]
pub struct Namer {
    names: BTreeMap<VarId, String>,
}

impl Namer {
    pub fn new() -> Namer {
        Namer::default()
    }

    fn name(&mut self, v: VarId) -> String {
        let n = self.names.len();
        self.names
            .entry(v)
            .or_insert_with(|| {
                let letter = (b'A' + (n % 26) as u8) as char;
                if n < 26 {
                    letter.to_string()
                } else {
                    format!("{}{}", letter, n / 26)
                }
            })
            .clone()
    }

    pub fn term(&mut self, t: &Term) -> String {
        let mut out = String::new();
        self.write_term(&mut out, t, PREC_TOP);
        out
    }

    pub fn literal(&mut self, l: &Literal) -> String {
        self.term(&Term::App(l.pred.clone(), l.args.clone()))
    }

    pub fn literals(&mut self, ls: &[Literal]) -> String {
        let parts: Vec<String> = ls.iter().map(|l| self.literal(l)).collect();
        parts.join(", ")
    }

    pub fn goal(&mut self, g: &Goal) -> String {
        self.literals(g.literals())
    }

    fn write_term(&mut self, out: &mut String, t: &Term, max_prec: u32) {
        match t {
            Term::Var(v) => {
                let n = self.name(*v);
                out.push_str(&n);
            }
            Term::App(f, args) if f == "." && args.len() == 2 => {
                self.write_list(out, t);
            }
            Term::App(f, args) if (f == "-" || f == "/") && args.len() == 2 => {
                let prec = if f == "-" { PREC_MINUS } else { PREC_SLASH };
                let parens = prec > max_prec;
                if parens {
                    out.push('(');
                }
                self.write_term(out, &args[0], prec);
                out.push_str(f);
                self.write_term(out, &args[1], prec - 1);
                if parens {
                    out.push(')');
                }
            }
            Term::App(f, args) => {
                out.push_str(f);
                if !args.is_empty() {
                    out.push('(');
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        self.write_term(out, a, PREC_TOP);
                    }
                    out.push(')');
                }
            }
        }
    }

    fn write_list(&mut self, out: &mut String, t: &Term) {
        out.push('[');
        let mut cur = t;
        let mut first = true;
        loop {
            match cur {
                Term::App(f, args) if f == "." && args.len() == 2 => {
                    if !first {
                        out.push(',');
                    }
                    self.write_term(out, &args[0], PREC_TOP);
                    first = false;
                    cur = &args[1];
                }
                Term::App(f, args) if f == "[]" && args.is_empty() => break,
                other => {
                    out.push('|');
                    self.write_term(out, other, PREC_TOP);
                    break;
                }
            }
        }
        out.push(']');
    }
}

/// A term alone, with its own fresh naming scope.
pub fn term(t: &Term) -> String {
    Namer::new().term(t)
}

pub fn literal(l: &Literal) -> String {
    Namer::new().literal(l)
}

/// A literal sequence under one naming scope.
pub fn literals(ls: &[Literal]) -> String {
    Namer::new().literals(ls)
}

pub fn goal(g: &Goal) -> String {
    Namer::new().goal(g)
}

/// `head :- body.` or `head.` with head and body sharing one naming scope.
pub fn clause(c: &GeneralizedClause) -> String {
    let mut n = Namer::new();
    let head = n.goal(&c.head);
    if c.body.is_empty() {
        format!("{head}.")
    } else {
        let body = n.goal(&c.body);
        format!("{head} :- {body}.")
    }
}

pub fn program_clause(c: &ProgramClause) -> String {
    let mut n = Namer::new();
    let head = n.literal(&c.head);
    if c.body.is_empty() {
        format!("{head}.")
    } else {
        let body = n.literals(&c.body);
        format!("{head} :- {body}.")
    }
}

pub fn program(p: &Program) -> String {
    let mut out = String::new();
    for c in p.clauses() {
        let _ = writeln!(out, "{}", program_clause(c));
    }
    out
}
