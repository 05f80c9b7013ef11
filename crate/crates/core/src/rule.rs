//! Control rules: the policy that tags untagged lemma-tree nodes.
//!
//! A rule maps a node's clause (and whether the node is a tree root) to one
//! of three tags: emit the clause as a solution, resolve one body literal
//! against the program, or resolve a body subset against a table entry.
//! Roots must always receive a program tag so an entry cannot reduce itself
//! vacuously.
//!
//! Two rules are built in. `builtin:leftmost` processes bodies left to
//! right and tables the leftmost literal at non-root nodes (switch the
//! tabling off for plain program resolution). `builtin:grammar` drives the
//! tree/yield encoding produced by the CFG front-end: it expands yield
//! literals at roots, expands well-formedness literals whose tree argument
//! is instantiated, and tables `wf`/`y` pairs that share a tree variable
//! once the string position is known, provided the category is defined by
//! at least one non-fact clause (categories defined only by facts are
//! cheaper to finish by program steps than to open an entry for).
//!
//! Rule files hold one case per line:
//!
//! ```text
//! % delay wf goals until the tree argument is known
//! if wf(T,C), y(T,S0,S), nonvar(S0) => table
//! if root, body has y(T,S0,S)      => program y(T,S0,S)
//! if body empty                    => solution
//! ```
//!
//! Cases fire in order; the first whose patterns match (leftmost-first
//! assignment over body literals) decides the tag, and a built-in fallback
//! tags `solution` on empty bodies and `program(leftmost)` otherwise.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::goal::{match_literal_oneway, Bindings, Literal};
use crate::parse::{ParseError, Parser, Tok};
use crate::program::Program;
use crate::term::{Term, VarGen, VarId};

/// What a rule decided for a node, in terms of body positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleTag {
    Solution,
    /// Resolve the body literal at this position against the program.
    Program(usize),
    /// Resolve these body positions (ascending) against a table entry.
    Table(Vec<usize>),
}

/// A control-rule decision that breaks the tagging contract.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleViolation {
    pub msg: String,
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "control-rule violation: {}", self.msg)
    }
}

impl std::error::Error for RuleViolation {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GuardKind {
    Var,
    NonVar,
}

#[derive(Debug, Clone)]
struct Guard {
    kind: GuardKind,
    var: VarId,
    name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Action {
    Solution,
    /// 0-based index into the case's patterns.
    Program(usize),
    Table,
}

#[derive(Debug, Clone)]
pub struct RuleCase {
    root_only: bool,
    require_empty: bool,
    patterns: Vec<Literal>,
    guards: Vec<Guard>,
    action: Action,
}

/// A parsed rule file.
#[derive(Debug, Clone, Default)]
pub struct RuleSpec {
    cases: Vec<RuleCase>,
}

/// A control rule ready for evaluation.
#[derive(Debug, Clone)]
pub enum ControlRule {
    Leftmost { tabling: bool },
    Grammar,
    File(RuleSpec),
}

impl ControlRule {
    /// Resolves a `builtin:` name.
    pub fn from_name(name: &str) -> Option<ControlRule> {
        match name {
            "builtin:leftmost" | "builtin:leftmost-with-tabling" => {
                Some(ControlRule::Leftmost { tabling: true })
            }
            "builtin:leftmost-no-tabling" => Some(ControlRule::Leftmost { tabling: false }),
            "builtin:grammar" => Some(ControlRule::Grammar),
            _ => None,
        }
    }

    /// Per-program context: the categories the grammar rule may table.
    pub fn context_for(&self, program: &Program) -> RuleContext {
        match self {
            ControlRule::Grammar => RuleContext {
                tabled_categories: ruled_categories(program),
            },
            _ => RuleContext::default(),
        }
    }

    /// Tags a node. The returned tag always satisfies the contract: a
    /// solution only describes the clause itself, program positions and
    /// table subsets lie inside the body, and roots get program tags; a
    /// matched case that cannot satisfy this is a violation.
    pub fn select(
        &self,
        body: &[Literal],
        is_root: bool,
        ctx: &RuleContext,
    ) -> Result<RuleTag, RuleViolation> {
        if body.is_empty() {
            if is_root {
                return Err(RuleViolation {
                    msg: "a root node cannot have an empty body".to_string(),
                });
            }
            return Ok(RuleTag::Solution);
        }
        match self {
            ControlRule::Leftmost { tabling } => {
                if is_root || !tabling {
                    Ok(RuleTag::Program(0))
                } else {
                    Ok(RuleTag::Table(vec![0]))
                }
            }
            ControlRule::Grammar => Ok(grammar_select(body, is_root, ctx)),
            ControlRule::File(spec) => file_select(spec, body, is_root),
        }
    }
}

/// Context computed once per run.
#[derive(Debug, Clone, Default)]
pub struct RuleContext {
    tabled_categories: BTreeSet<String>,
}

fn ruled_categories(p: &Program) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for c in p.clauses() {
        if c.head.pred == "wf" && c.head.args.len() == 2 && !c.body.is_empty() {
            if let Some(cat) = c.head.args[1].as_constant() {
                out.insert(cat.to_string());
            }
        }
    }
    out
}

fn grammar_select(body: &[Literal], is_root: bool, ctx: &RuleContext) -> RuleTag {
    if is_root {
        let i = body
            .iter()
            .position(|l| l.pred == "y" && l.args.len() == 3)
            .unwrap_or(0);
        return RuleTag::Program(i);
    }
    if let Some(i) = body
        .iter()
        .position(|l| l.pred == "wf" && l.args.len() == 2 && !l.args[0].is_var())
    {
        return RuleTag::Program(i);
    }
    for (i, wf) in body.iter().enumerate() {
        if wf.pred != "wf" || wf.args.len() != 2 {
            continue;
        }
        match wf.args[1].as_constant() {
            Some(c) if ctx.tabled_categories.contains(c) => {}
            _ => continue,
        }
        for (j, yl) in body.iter().enumerate() {
            if yl.pred == "y"
                && yl.args.len() == 3
                && yl.args[0] == wf.args[0]
                && !yl.args[1].is_var()
            {
                let mut positions = vec![i, j];
                positions.sort_unstable();
                return RuleTag::Table(positions);
            }
        }
    }
    RuleTag::Program(0)
}

fn file_select(
    spec: &RuleSpec,
    body: &[Literal],
    is_root: bool,
) -> Result<RuleTag, RuleViolation> {
    for case in &spec.cases {
        if case.root_only && !is_root {
            continue;
        }
        if case.require_empty && !body.is_empty() {
            continue;
        }
        let mut positions = Vec::new();
        if match_patterns(
            &case.patterns,
            body,
            0,
            &mut positions,
            &Bindings::new(),
            &case.guards,
        )
        .is_none()
        {
            continue;
        }
        let tag = match case.action {
            Action::Solution => RuleTag::Solution,
            Action::Program(k) => RuleTag::Program(positions[k]),
            Action::Table => {
                let mut ps = positions.clone();
                ps.sort_unstable();
                RuleTag::Table(ps)
            }
        };
        if is_root && !matches!(tag, RuleTag::Program(_)) {
            return Err(RuleViolation {
                msg: "the matched case does not tag the root with program(...)".to_string(),
            });
        }
        return Ok(tag);
    }
    Ok(RuleTag::Program(0))
}

fn match_patterns(
    patterns: &[Literal],
    body: &[Literal],
    i: usize,
    positions: &mut Vec<usize>,
    bind: &Bindings,
    guards: &[Guard],
) -> Option<Bindings> {
    if i == patterns.len() {
        let ok = guards.iter().all(|g| match bind.get(&g.var) {
            Some(t) => match g.kind {
                GuardKind::Var => t.is_var(),
                GuardKind::NonVar => !t.is_var(),
            },
            None => false,
        });
        return if ok { Some(bind.clone()) } else { None };
    }
    for (j, lit) in body.iter().enumerate() {
        if positions.contains(&j) {
            continue;
        }
        let mut attempt = bind.clone();
        if match_literal_oneway(&patterns[i], lit, &mut attempt) {
            positions.push(j);
            if let Some(done) = match_patterns(patterns, body, i + 1, positions, &attempt, guards)
            {
                return Some(done);
            }
            positions.pop();
        }
    }
    None
}

/// Parses a rule file: one case per line, `%` comments, blank lines ignored.
pub fn parse_rule_spec(src: &str) -> Result<RuleSpec, ParseError> {
    let mut cases = Vec::new();
    for (lineno, line) in src.lines().enumerate() {
        let lineno = lineno + 1;
        let mut gen = VarGen::new();
        let mut p = Parser::new(line, &mut gen).map_err(|e| at_line(e, lineno))?;
        if p.at_end() {
            continue;
        }
        let case = parse_case(&mut p).map_err(|e| at_line(e, lineno))?;
        cases.push(case);
    }
    Ok(RuleSpec { cases })
}

fn at_line(mut e: ParseError, lineno: usize) -> ParseError {
    e.line = lineno;
    e
}

fn parse_case(p: &mut Parser) -> Result<RuleCase, ParseError> {
    match p.bump() {
        Some(Tok::Ident(w)) if w == "if" => {}
        _ => return Err(p.error("a rule case starts with 'if'")),
    }
    let mut case = RuleCase {
        root_only: false,
        require_empty: false,
        patterns: Vec::new(),
        guards: Vec::new(),
        action: Action::Solution,
    };
    let mut names: BTreeMap<VarId, String> = BTreeMap::new();
    loop {
        match p.peek() {
            Some(Tok::Ident(w)) if w == "root" => {
                p.bump();
                case.root_only = true;
            }
            Some(Tok::Ident(w)) if w == "body" => {
                p.bump();
                match p.bump() {
                    Some(Tok::Ident(w)) if w == "empty" => case.require_empty = true,
                    Some(Tok::Ident(w)) if w == "has" => {
                        parse_condition_literal(p, &mut case, &mut names)?
                    }
                    _ => return Err(p.error("expected 'empty' or 'has' after 'body'")),
                }
            }
            _ => parse_condition_literal(p, &mut case, &mut names)?,
        }
        if p.eat(&Tok::Comma) {
            continue;
        }
        p.expect(&Tok::Arrow)?;
        break;
    }
    let mut pattern_vars = BTreeSet::new();
    for pat in &case.patterns {
        pat.collect_vars(&mut pattern_vars);
    }
    for g in &case.guards {
        if !pattern_vars.contains(&g.var) {
            return Err(p.error(format!(
                "guard variable '{}' does not occur in any pattern",
                g.name
            )));
        }
    }
    case.action = parse_action(p, &case)?;
    if !p.at_end() {
        return Err(p.error("trailing input after the action"));
    }
    if case.action == Action::Solution && (!case.require_empty || !case.patterns.is_empty()) {
        return Err(p.error("the solution action is only valid with the empty-body guard"));
    }
    if case.action == Action::Table && case.patterns.is_empty() {
        return Err(p.error("the table action needs at least one pattern"));
    }
    Ok(case)
}

fn parse_condition_literal(
    p: &mut Parser,
    case: &mut RuleCase,
    names: &mut BTreeMap<VarId, String>,
) -> Result<(), ParseError> {
    let lit = p.literal()?;
    if (lit.pred == "nonvar" || lit.pred == "var") && lit.args.len() == 1 {
        match &lit.args[0] {
            Term::Var(v) => {
                case.guards.push(Guard {
                    kind: if lit.pred == "var" {
                        GuardKind::Var
                    } else {
                        GuardKind::NonVar
                    },
                    var: *v,
                    name: names.get(v).cloned().unwrap_or_else(|| "_".to_string()),
                });
                return Ok(());
            }
            _ => return Err(p.error("guards take a single variable argument")),
        }
    }
    let mut vars = BTreeSet::new();
    lit.collect_vars(&mut vars);
    for v in vars {
        names.entry(v).or_insert_with(|| format!("V{}", v.0));
    }
    case.patterns.push(lit);
    Ok(())
}

fn parse_action(p: &mut Parser, case: &RuleCase) -> Result<Action, ParseError> {
    match p.bump() {
        Some(Tok::Ident(w)) if w == "solution" => Ok(Action::Solution),
        Some(Tok::Ident(w)) if w == "table" => Ok(Action::Table),
        Some(Tok::Ident(w)) if w == "program" => match p.peek() {
            Some(Tok::Int(_)) => {
                let k = match p.bump() {
                    Some(Tok::Int(s)) => s.parse::<usize>().unwrap_or(0),
                    _ => unreachable!(),
                };
                if k == 0 || k > case.patterns.len() {
                    return Err(p.error(format!(
                        "program index {k} is out of range (the case has {} patterns)",
                        case.patterns.len()
                    )));
                }
                Ok(Action::Program(k - 1))
            }
            _ => {
                // `program <pattern>` names one of the condition patterns;
                // the shared name scope makes identical patterns equal
                let lit = p.literal()?;
                match case.patterns.iter().position(|pat| *pat == lit) {
                    Some(i) => Ok(Action::Program(i)),
                    None => Err(p.error("the program action does not match any pattern")),
                }
            }
        },
        _ => Err(p.error("expected 'solution', 'table' or 'program'")),
    }
}
