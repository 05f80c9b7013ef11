//! Depth-bounded SLD resolution with pluggable literal selection.
//!
//! This is the non-memoized baseline: no cycle detection and no tabling, so
//! left-recursive programs drive it into the depth bound by design. Goals
//! are literal sequences; each resolution step removes the selected literal
//! and inserts the clause body to the left of the remaining literals.
//!
//! The search runs on an explicit stack. Children are generated in clause
//! order and pushed as they are made, so the branch through the last
//! matching clause is explored first; empty resolvents are collected as
//! answers the moment they are produced. The first branch to reach the
//! depth bound stops the whole search, since a bound hit signals a
//! non-terminating descent and continuing would enumerate an unbounded
//! frontier.

use std::collections::BTreeSet;

use crate::goal::{unify_literals, Literal};
use crate::program::Program;
use crate::term::{Substitution, VarGen};

/// How the next literal of a goal is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionRule {
    /// Always the leftmost literal.
    Leftmost,
    /// The leftmost `wf(T,C)` whose tree argument is instantiated, else the
    /// leftmost `y(T,S0,S)` whose input string is instantiated, else the
    /// leftmost literal.
    Preference,
}

impl SelectionRule {
    /// Index of the selected literal. The goal must be non-empty.
    pub fn select(&self, goal: &[Literal]) -> usize {
        match self {
            SelectionRule::Leftmost => 0,
            SelectionRule::Preference => {
                if let Some(i) = goal
                    .iter()
                    .position(|l| l.pred == "wf" && l.args.len() == 2 && !l.args[0].is_var())
                {
                    return i;
                }
                if let Some(i) = goal
                    .iter()
                    .position(|l| l.pred == "y" && l.args.len() == 3 && !l.args[1].is_var())
                {
                    return i;
                }
                0
            }
        }
    }
}

/// One refutation: its computed answer restricted to the query variables and
/// the number of resolution steps on its branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SldAnswer {
    pub bindings: Substitution,
    pub derivation_length: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SldStatus {
    /// The whole SLD tree within the bound was explored; no branch was cut.
    Exhausted,
    /// Some branch reached the depth bound.
    DepthLimited,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SldOutcome {
    pub answers: Vec<SldAnswer>,
    pub status: SldStatus,
}

impl SldOutcome {
    /// The query instances the answers stand for.
    pub fn answer_goals(&self, query: &[Literal]) -> Vec<Vec<Literal>> {
        self.answers
            .iter()
            .map(|a| query.iter().map(|l| l.apply(&a.bindings)).collect())
            .collect()
    }
}

struct Frame {
    goal: Vec<Literal>,
    subst: Substitution,
    depth: usize,
}

/// Runs the bounded search. `max_depth` counts resolution steps per branch.
pub fn sld_solve(
    p: &Program,
    query: &[Literal],
    rule: SelectionRule,
    max_depth: usize,
    occurs_check: bool,
    gen: &mut VarGen,
) -> SldOutcome {
    assert!(!query.is_empty(), "sld_solve requires a non-empty query");
    let mut query_vars = BTreeSet::new();
    for l in query {
        l.collect_vars(&mut query_vars);
    }
    let mut answers = Vec::new();
    let mut stack = vec![Frame {
        goal: query.to_vec(),
        subst: Substitution::new(),
        depth: 0,
    }];
    while let Some(frame) = stack.pop() {
        let idx = rule.select(&frame.goal);
        let selected = &frame.goal[idx];
        for clause in p.clauses_for(&selected.pred, selected.args.len(), gen) {
            let theta = match unify_literals(selected, &clause.head, occurs_check) {
                Some(t) => t,
                None => continue,
            };
            let mut child_goal: Vec<Literal> =
                clause.body.iter().map(|l| l.apply(&theta)).collect();
            child_goal.extend(
                frame
                    .goal
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != idx)
                    .map(|(_, l)| l.apply(&theta)),
            );
            let child_subst = frame.subst.compose(&theta);
            let child_depth = frame.depth + 1;
            if child_goal.is_empty() {
                answers.push(SldAnswer {
                    bindings: child_subst.restrict(&query_vars),
                    derivation_length: child_depth,
                });
            } else if child_depth >= max_depth {
                return SldOutcome {
                    answers,
                    status: SldStatus::DepthLimited,
                };
            } else {
                stack.push(Frame {
                    goal: child_goal,
                    subst: child_subst,
                    depth: child_depth,
                });
            }
        }
    }
    SldOutcome {
        answers,
        status: SldStatus::Exhausted,
    }
}

/// One row of a derivation trace: the goal at selection time and the literal
/// selected in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub goal: Vec<Literal>,
    pub selected: Literal,
}

/// Follows the first-explored branch for up to `steps` selections: at each
/// step the selected literal is resolved with the last matching clause, the
/// one the bounded search descends into first. The trace is shorter than
/// `steps` when the branch fails or ends early.
pub fn trace_derivation(
    p: &Program,
    query: &[Literal],
    rule: SelectionRule,
    steps: usize,
    occurs_check: bool,
    gen: &mut VarGen,
) -> Vec<TraceStep> {
    assert!(steps >= 1);
    let mut trace = Vec::new();
    let mut goal = query.to_vec();
    for _ in 0..steps {
        if goal.is_empty() {
            break;
        }
        let idx = rule.select(&goal);
        let selected = goal[idx].clone();
        trace.push(TraceStep {
            goal: goal.clone(),
            selected: selected.clone(),
        });
        let mut next = None;
        for clause in p.clauses_for(&selected.pred, selected.args.len(), gen) {
            if let Some(theta) = unify_literals(&selected, &clause.head, occurs_check) {
                let mut child: Vec<Literal> =
                    clause.body.iter().map(|l| l.apply(&theta)).collect();
                child.extend(
                    goal.iter()
                        .enumerate()
                        .filter(|(i, _)| *i != idx)
                        .map(|(_, l)| l.apply(&theta)),
                );
                next = Some(child);
            }
        }
        match next {
            Some(g) => goal = g,
            None => break,
        }
    }
    trace
}


/// Small helpers shared by test suites: a naive bottom-up evaluator for
/// function-free programs and ground instantiation over its constants.
pub mod testsupport {
    use std::collections::BTreeSet;

    use crate::goal::Literal;
    use crate::program::Program;
    use crate::term::{Substitution, Term, VarId};

    pub struct LeastModel {
        pub facts: BTreeSet<Literal>,
        pub constants: Vec<Term>,
    }

    fn constants_of(p: &Program) -> Vec<Term> {
        let mut out = BTreeSet::new();
        fn walk(t: &Term, out: &mut BTreeSet<String>) {
            if let Term::App(f, args) = t {
                if args.is_empty() {
                    out.insert(f.clone());
                } else {
                    for a in args {
                        walk(a, out);
                    }
                }
            }
        }
        let mut names = BTreeSet::new();
        for c in p.clauses() {
            for t in &c.head.args {
                walk(t, &mut names);
            }
            for l in &c.body {
                for t in &l.args {
                    walk(t, &mut names);
                }
            }
        }
        for n in names {
            out.insert(Term::atom(&n));
        }
        out.into_iter().collect()
    }

    fn assignments(vars: &[VarId], consts: &[Term]) -> Vec<Substitution> {
        let mut out = vec![Substitution::new()];
        for v in vars {
            let mut next = Vec::new();
            for s in &out {
                for c in consts {
                    let mut s2 = s.clone();
                    s2.bind(*v, c.clone());
                    next.push(s2);
                }
            }
            out = next;
        }
        out
    }

    /// Naive fixpoint evaluation. Only meaningful for function-free clauses;
    /// facts with nested terms are kept as given.
    pub fn least_model(p: &Program) -> LeastModel {
        let constants = constants_of(p);
        let mut facts: BTreeSet<Literal> = BTreeSet::new();
        loop {
            let mut added = false;
            for c in p.clauses() {
                let mut vars = BTreeSet::new();
                c.head.collect_vars(&mut vars);
                for l in &c.body {
                    l.collect_vars(&mut vars);
                }
                let vars: Vec<VarId> = vars.into_iter().collect();
                for s in assignments(&vars, &constants) {
                    let body_ok = c.body.iter().all(|l| facts.contains(&l.apply(&s)));
                    if body_ok {
                        let h = c.head.apply(&s);
                        if facts.insert(h) {
                            added = true;
                        }
                    }
                }
            }
            if !added {
                break;
            }
        }
        LeastModel { facts, constants }
    }

    /// All ground instances of a literal sequence over the given constants.
    pub fn ground_instances(goal: &[Literal], consts: &[Term]) -> Vec<Vec<Literal>> {
        let mut vars = BTreeSet::new();
        for l in goal {
            l.collect_vars(&mut vars);
        }
        let vars: Vec<VarId> = vars.into_iter().collect();
        assignments(&vars, consts)
            .into_iter()
            .map(|s| goal.iter().map(|l| l.apply(&s)).collect())
            .collect()
    }
}
