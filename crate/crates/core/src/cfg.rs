//! Context-free grammar front-end.
//!
//! Grammar files hold one rule per line, `LHS -> RHS1 [RHS2]` for unary and
//! binary nonterminal rules or `LHS -> 'word'` for pre-terminals, with `|`
//! separating alternatives and `%` starting a comment. Nonterminals are
//! uppercase tokens and map to lowercase program symbols. A `start: S` line
//! overrides the default start symbol (the first rule's left-hand side).
//!
//! Encoding emits the fixed `parse/2` driver and `y/3` yield clauses plus
//! one `wf/2` clause per rule: `wf(c-word, c).` for pre-terminals,
//! `wf(c/[T1], c) :- wf(T1, c1).` for unary rules, and
//! `wf(c/[T1,T2], c) :- wf(T1, c1), wf(T2, c2).` for binary ones.

use std::fmt::Write;

use crate::parse::{parse_program, ParseError};
use crate::program::Program;
use crate::term::VarGen;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CfgRhs {
    /// A single quoted terminal word.
    Terminal(String),
    /// One or two nonterminal categories (already lowercased).
    NonTerminals(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfgRule {
    pub lhs: String,
    pub rhs: CfgRhs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cfg {
    pub start: String,
    pub rules: Vec<CfgRule>,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col: 1,
        msg: msg.into(),
    }
}

fn is_nonterminal(tok: &str) -> bool {
    let mut chars = tok.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_word(tok: &str) -> bool {
    let mut chars = tok.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_cfg(src: &str) -> Result<Cfg, ParseError> {
    let mut rules = Vec::new();
    let mut start: Option<String> = None;
    for (i, raw) in src.lines().enumerate() {
        let lineno = i + 1;
        let line = match raw.find('%') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("start:") {
            let s = rest.trim();
            if !is_nonterminal(s) {
                return Err(err(lineno, format!("'{s}' is not a nonterminal")));
            }
            start = Some(s.to_lowercase());
            continue;
        }
        let (lhs, rhs) = match line.split_once("->") {
            Some(parts) => parts,
            None => return Err(err(lineno, "expected 'LHS -> RHS'")),
        };
        let lhs = lhs.trim();
        if !is_nonterminal(lhs) {
            return Err(err(
                lineno,
                format!("left-hand side '{lhs}' is not a nonterminal"),
            ));
        }
        for alt in rhs.split('|') {
            let toks: Vec<&str> = alt.split_whitespace().collect();
            if toks.is_empty() {
                return Err(err(lineno, "empty right-hand side"));
            }
            let quoted: Vec<&str> = toks
                .iter()
                .filter(|t| t.starts_with('\'') && t.ends_with('\'') && t.len() >= 3)
                .copied()
                .collect();
            let rhs = if quoted.len() == toks.len() {
                if toks.len() != 1 {
                    return Err(err(lineno, "a pre-terminal rule takes exactly one word"));
                }
                let word = &toks[0][1..toks[0].len() - 1];
                if !is_word(word) {
                    return Err(err(
                        lineno,
                        format!("terminal '{word}' must be a lowercase word"),
                    ));
                }
                CfgRhs::Terminal(word.to_string())
            } else if quoted.is_empty() {
                if toks.len() > 2 {
                    return Err(err(
                        lineno,
                        "more than two nonterminals on the right-hand side; binarize first",
                    ));
                }
                let mut cats = Vec::new();
                for t in &toks {
                    if !is_nonterminal(t) {
                        return Err(err(lineno, format!("'{t}' is not a nonterminal")));
                    }
                    cats.push(t.to_lowercase());
                }
                CfgRhs::NonTerminals(cats)
            } else {
                return Err(err(
                    lineno,
                    "terminals and nonterminals cannot mix on one right-hand side",
                ));
            };
            rules.push(CfgRule {
                lhs: lhs.to_lowercase(),
                rhs,
            });
        }
    }
    if rules.is_empty() {
        return Err(err(1, "the grammar has no rules"));
    }
    Ok(Cfg {
        start: start.unwrap_or_else(|| rules[0].lhs.clone()),
        rules,
    })
}

/// Emits the clause program for a grammar.
pub fn encode_cfg(g: &Cfg, gen: &mut VarGen) -> Program {
    let text = encode_cfg_text(g);
    parse_program(&text, gen).expect("generated program text is well-formed")
}

/// The program as source text, exactly what `encode_cfg` parses.
pub fn encode_cfg_text(g: &Cfg) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "parse(String, Tree) :- wf(Tree, {}), y(Tree, String, []).",
        g.start
    );
    out.push_str("y(_-Word, [Word|Words], Words).\n");
    out.push_str("y(_/[Tree1], Words0, Words) :- y(Tree1, Words0, Words).\n");
    out.push_str(
        "y(_/[Tree1,Tree2], Words0, Words) :- y(Tree1, Words0, Words1), y(Tree2, Words1, Words).\n",
    );
    for rule in &g.rules {
        let c = &rule.lhs;
        match &rule.rhs {
            CfgRhs::Terminal(w) => {
                let _ = writeln!(out, "wf({c}-{w}, {c}).");
            }
            CfgRhs::NonTerminals(cats) if cats.len() == 1 => {
                let _ = writeln!(out, "wf({c}/[Tree1], {c}) :- wf(Tree1, {}).", cats[0]);
            }
            CfgRhs::NonTerminals(cats) => {
                let _ = writeln!(
                    out,
                    "wf({c}/[Tree1,Tree2], {c}) :- wf(Tree1, {}), wf(Tree2, {}).",
                    cats[0], cats[1]
                );
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pretty;

    const FRAGMENT_CFG: &str = "
% the running grammar
start: S
NP -> 'kim'
N -> 'friend'
V -> 'walks'
S -> NP VP
NP -> NP N
VP -> V
";

    const FRAGMENT_LP: &str = "
parse(String, Tree) :- wf(Tree, s), y(Tree, String, []).
y(_-Word, [Word|Words], Words).
y(_/[Tree1], Words0, Words) :- y(Tree1, Words0, Words).
y(_/[Tree1,Tree2], Words0, Words) :- y(Tree1, Words0, Words1), y(Tree2, Words1, Words).
wf(np-kim, np).
wf(n-friend, n).
wf(v-walks, v).
wf(s/[Tree1, Tree2], s) :- wf(Tree1, np), wf(Tree2, vp).
wf(np/[Tree1, Tree2], np) :- wf(Tree1, np), wf(Tree2, n).
wf(vp/[Tree1], vp) :- wf(Tree1, v).
";

    #[test]
    fn binary_and_preterminal_rules_parse() {
        let g = parse_cfg("S -> NP VP\nNP -> 'kim'\n").unwrap();
        assert_eq!(g.start, "s");
        assert_eq!(
            g.rules[0].rhs,
            CfgRhs::NonTerminals(vec!["np".to_string(), "vp".to_string()])
        );
        assert_eq!(g.rules[1].rhs, CfgRhs::Terminal("kim".to_string()));
    }

    #[test]
    fn long_right_hand_sides_ask_for_binarization() {
        let e = parse_cfg("X -> A B C\n").unwrap_err();
        assert!(e.msg.contains("binarize"));
        assert!(parse_cfg("X -> A 'b'\n").is_err());
        assert!(parse_cfg("").is_err());
    }

    #[test]
    fn encoded_rules_take_the_tree_shapes() {
        let mut gen = VarGen::new();
        let g = parse_cfg("NP -> NP N\nVP -> V\nNP -> 'kim'\n").unwrap();
        let p = encode_cfg(&g, &mut gen);
        let text = pretty::program(&p);
        assert!(text.contains("wf(np/[A,B], np) :- wf(A, np), wf(B, n)."));
        assert!(text.contains("wf(vp/[A], vp) :- wf(A, v)."));
        assert!(text.contains("wf(np-kim, np)."));
    }

    #[test]
    fn fragment_grammar_encodes_to_the_hand_written_program() {
        let mut gen = VarGen::new();
        let g = parse_cfg(FRAGMENT_CFG).unwrap();
        let encoded = encode_cfg(&g, &mut gen);
        let by_hand = crate::parse::parse_program(FRAGMENT_LP, &mut gen).unwrap();
        assert!(encoded.variant_eq(&by_hand));
    }

    #[test]
    fn alternatives_split_into_rules() {
        let g = parse_cfg("S -> S S | 'a'\n").unwrap();
        assert_eq!(g.rules.len(), 2);
        assert_eq!(
            g.rules[0].rhs,
            CfgRhs::NonTerminals(vec!["s".to_string(), "s".to_string()])
        );
        assert_eq!(g.rules[1].rhs, CfgRhs::Terminal("a".to_string()));
    }
}
