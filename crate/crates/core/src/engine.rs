//! The tabling engine: table entries, lemma trees, prediction and
//! completion, and the fair fixpoint loop.
//!
//! A table entry pairs a goal with a resolution tree and an append-only
//! solution list. Tree nodes carry a generalized clause and, once
//! processed, a tag: `solution` appends the clause to the entry's list,
//! `program` resolves one body literal against program clauses, and `table`
//! resolves a body subset against another entry's solutions through a
//! cursor. A single FIFO worklist carries one task per untagged node and
//! one per cursor with pending solutions, so every applicable operation is
//! eventually performed and identical inputs replay identically.
//!
//! Self-subscription is allowed: a node may consume the growing solution
//! list of its own entry, which is what makes left-recursive programs
//! terminate.

use std::collections::VecDeque;
use std::fmt;

use crate::goal::{
    subsumes_clause, subsumes_goal, subsumes_goal_assign, unify_literals_into, AbstractionOp,
    GeneralizedClause, Goal, Literal,
};
use crate::program::Program;
use crate::rule::{ControlRule, RuleContext, RuleTag, RuleViolation};
use crate::term::{Substitution, VarGen};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntryId(pub usize);

/// How a processed node was resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tag {
    /// The clause was appended to its entry's solution list.
    Solution,
    /// The body literal at this position was resolved against the program.
    Program { selected: usize },
    /// The body literals at `positions` are resolved against `entry`'s
    /// solutions. `aligned` lists the same literals in entry-goal order, the
    /// order solutions inherit from the entry's root clause; `cursor` counts
    /// consumed solutions. `created` records whether this tag opened the
    /// entry or found it by subsumption.
    Table {
        positions: Vec<usize>,
        aligned: Vec<Literal>,
        entry: EntryId,
        cursor: usize,
        created: bool,
    },
}

#[derive(Debug, Clone)]
pub struct Node {
    pub id: NodeId,
    pub entry: EntryId,
    pub clause: GeneralizedClause,
    pub tag: Option<Tag>,
    pub children: Vec<NodeId>,
    pending: bool,
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub id: EntryId,
    pub goal: Goal,
    pub root: NodeId,
    pub solutions: Vec<GeneralizedClause>,
    subscribers: Vec<NodeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Task {
    Predict(NodeId),
    Complete(NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    /// Suppress a new solution when a recorded one subsumes it.
    pub answer_subsumption: bool,
    pub occurs_check: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            answer_subsumption: true,
            occurs_check: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineStats {
    pub entries: usize,
    pub nodes: usize,
    pub predictions: usize,
    pub completions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineStatus {
    Fixpoint,
    StepLimited,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineResult {
    /// The top entry's solution list in append order.
    pub solutions: Vec<GeneralizedClause>,
    pub status: EngineStatus,
    pub stats: EngineStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    EmptyGoal,
    RuleViolation(RuleViolation),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::EmptyGoal => write!(f, "the goal must not be empty"),
            EngineError::RuleViolation(v) => write!(f, "{v}"),
        }
    }
}

impl std::error::Error for EngineError {}

impl From<RuleViolation> for EngineError {
    fn from(v: RuleViolation) -> Self {
        EngineError::RuleViolation(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AddOutcome {
    Appended,
    Suppressed,
}

pub struct Engine<'p> {
    program: &'p Program,
    rule: ControlRule,
    ctx: RuleContext,
    alpha: AbstractionOp,
    config: EngineConfig,
    gen: VarGen,
    nodes: Vec<Node>,
    entries: Vec<Entry>,
    worklist: VecDeque<Task>,
    predictions: usize,
    completions: usize,
}

impl<'p> Engine<'p> {
    /// The variable generator must be the one the goal was parsed with.
    pub fn new(
        program: &'p Program,
        rule: ControlRule,
        alpha: AbstractionOp,
        config: EngineConfig,
        gen: VarGen,
    ) -> Engine<'p> {
        let ctx = rule.context_for(program);
        Engine {
            program,
            rule,
            ctx,
            alpha,
            config,
            gen,
            nodes: Vec::new(),
            entries: Vec::new(),
            worklist: VecDeque::new(),
            predictions: 0,
            completions: 0,
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn stats(&self) -> EngineStats {
        EngineStats {
            entries: self.entries.len(),
            nodes: self.nodes.len(),
            predictions: self.predictions,
            completions: self.completions,
        }
    }

    /// Creates the top entry for a non-empty goal.
    pub fn init(&mut self, goal: Goal) -> Result<EntryId, EngineError> {
        if goal.is_empty() {
            return Err(EngineError::EmptyGoal);
        }
        Ok(self.new_entry(goal))
    }

    /// Processes worklist tasks until none applies or `max_steps` tasks ran,
    /// then reports the top entry's solutions.
    pub fn run(&mut self, max_steps: usize) -> Result<EngineResult, EngineError> {
        assert!(
            !self.entries.is_empty(),
            "run requires an initialized engine"
        );
        let mut steps = 0;
        let status = loop {
            if self.worklist.is_empty() {
                break EngineStatus::Fixpoint;
            }
            if steps == max_steps {
                break EngineStatus::StepLimited;
            }
            match self.worklist.pop_front().unwrap() {
                Task::Predict(n) => self.predict(n)?,
                Task::Complete(n) => self.complete(n),
            }
            steps += 1;
        };
        Ok(EngineResult {
            solutions: self.entries[0].solutions.clone(),
            status,
            stats: self.stats(),
        })
    }

    fn new_entry(&mut self, goal: Goal) -> EntryId {
        let id = EntryId(self.entries.len());
        let root_clause = GeneralizedClause::new(goal.clone(), goal.clone());
        self.entries.push(Entry {
            id,
            goal,
            root: NodeId(self.nodes.len()),
            solutions: Vec::new(),
            subscribers: Vec::new(),
        });
        self.new_node(id, root_clause, None);
        id
    }

    fn new_node(
        &mut self,
        entry: EntryId,
        clause: GeneralizedClause,
        parent: Option<NodeId>,
    ) -> NodeId {
        debug_assert!(
            subsumes_goal(&self.entries[entry.0].goal, &clause.head).is_some(),
            "node head must be an instance of its entry's goal"
        );
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node {
            id,
            entry,
            clause,
            tag: None,
            children: Vec::new(),
            pending: false,
        });
        if let Some(p) = parent {
            self.nodes[p.0].children.push(id);
        }
        self.worklist.push_back(Task::Predict(id));
        id
    }

    /// Appends a solution unless answer subsumption suppresses it, then
    /// wakes every cursor waiting on the entry.
    fn add_solution(&mut self, entry: EntryId, clause: GeneralizedClause) -> AddOutcome {
        assert!(
            subsumes_goal(&self.entries[entry.0].goal, &clause.head).is_some(),
            "solution head must be an instance of the entry goal"
        );
        if self.config.answer_subsumption
            && self.entries[entry.0]
                .solutions
                .iter()
                .any(|s| subsumes_clause(s, &clause))
        {
            return AddOutcome::Suppressed;
        }
        self.entries[entry.0].solutions.push(clause);
        let subs = self.entries[entry.0].subscribers.clone();
        for n in subs {
            self.schedule_completion(n);
        }
        AddOutcome::Appended
    }

    fn schedule_completion(&mut self, n: NodeId) {
        if self.nodes[n.0].pending {
            return;
        }
        let (entry, cursor) = match &self.nodes[n.0].tag {
            Some(Tag::Table { entry, cursor, .. }) => (*entry, *cursor),
            _ => return,
        };
        if cursor < self.entries[entry.0].solutions.len() {
            self.nodes[n.0].pending = true;
            self.worklist.push_back(Task::Complete(n));
        }
    }

    /// Tags an untagged node and performs the tag's action.
    fn predict(&mut self, n: NodeId) -> Result<(), EngineError> {
        debug_assert!(self.nodes[n.0].tag.is_none());
        let clause = self.nodes[n.0].clause.clone();
        let entry = self.nodes[n.0].entry;
        let is_root = self.entries[entry.0].root == n;
        let tag = self
            .rule
            .select(clause.body.literals(), is_root, &self.ctx)?;
        if is_root && !matches!(tag, RuleTag::Program(_)) {
            return Err(EngineError::RuleViolation(RuleViolation {
                msg: "the root of a lemma tree must be tagged program(...)".to_string(),
            }));
        }
        match tag {
            RuleTag::Solution => {
                self.nodes[n.0].tag = Some(Tag::Solution);
                self.add_solution(entry, clause);
            }
            RuleTag::Program(pos) => {
                assert!(pos < clause.body.len(), "program tag outside the body");
                let selected = clause.body.literals()[pos].clone();
                self.nodes[n.0].tag = Some(Tag::Program { selected: pos });
                let candidates =
                    self.program
                        .clauses_for(&selected.pred, selected.args.len(), &mut self.gen);
                for pc in candidates {
                    let mut theta = Substitution::new();
                    if unify_literals_into(&selected, &pc.head, self.config.occurs_check, &mut theta)
                        .is_none()
                    {
                        continue;
                    }
                    let head = clause.head.apply(&theta);
                    let mut body: Vec<Literal> = clause
                        .body
                        .literals()
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != pos)
                        .map(|(_, l)| l.apply(&theta))
                        .collect();
                    body.extend(pc.body.iter().map(|l| l.apply(&theta)));
                    let child = GeneralizedClause::new(head, Goal::from_ordered(body));
                    self.new_node(entry, child, Some(n));
                }
            }
            RuleTag::Table(positions) => {
                assert!(!positions.is_empty(), "table tag with an empty subgoal");
                assert!(
                    positions.iter().all(|p| *p < clause.body.len()),
                    "table tag outside the body"
                );
                let sub: Vec<Literal> = positions
                    .iter()
                    .map(|p| clause.body.literals()[*p].clone())
                    .collect();
                let sub_goal = Goal::from_ordered(sub.clone());
                let mut found = None;
                for e in &self.entries {
                    if let Some((_, assign)) = subsumes_goal_assign(&e.goal, &sub_goal) {
                        found = Some((e.id, assign));
                        break;
                    }
                }
                let (target, aligned, created) = match found {
                    Some((eid, assign)) => {
                        let aligned = assign
                            .iter()
                            .map(|j| sub_goal.literals()[*j].clone())
                            .collect();
                        (eid, aligned, false)
                    }
                    None => {
                        let abstracted = self.alpha.apply(&sub_goal, &mut self.gen);
                        let eid = self.new_entry(abstracted);
                        (eid, sub, true)
                    }
                };
                self.nodes[n.0].tag = Some(Tag::Table {
                    positions,
                    aligned,
                    entry: target,
                    cursor: 0,
                    created,
                });
                self.entries[target.0].subscribers.push(n);
                self.schedule_completion(n);
            }
        }
        self.predictions += 1;
        Ok(())
    }

    /// Advances a table cursor over one solution; a successful unification
    /// of the stored subgoal with the solution head adds one child.
    fn complete(&mut self, n: NodeId) {
        let (positions, aligned, entry, cursor) = match &self.nodes[n.0].tag {
            Some(Tag::Table {
                positions,
                aligned,
                entry,
                cursor,
                ..
            }) => (positions.clone(), aligned.clone(), *entry, *cursor),
            other => panic!("completion on a non-table node: {other:?}"),
        };
        assert!(
            cursor < self.entries[entry.0].solutions.len(),
            "completion with the cursor at the end of the list"
        );
        let solution = self.entries[entry.0].solutions[cursor].clone();
        if let Some(Tag::Table { cursor, .. }) = &mut self.nodes[n.0].tag {
            *cursor += 1;
        }
        self.nodes[n.0].pending = false;
        self.schedule_completion(n);

        let solution = solution.rename(&mut self.gen);
        let theta = if solution.head.len() == aligned.len() {
            unify_aligned(&aligned, solution.head.literals(), self.config.occurs_check)
        } else {
            // a collapsed solution head lost the positional correspondence;
            // fall back to set unification
            unify_as_sets(&aligned, solution.head.literals(), self.config.occurs_check)
        };
        self.completions += 1;
        let theta = match theta {
            Some(t) => t,
            None => return,
        };
        let clause = self.nodes[n.0].clause.clone();
        let head = clause.head.apply(&theta);
        let mut body: Vec<Literal> = clause
            .body
            .literals()
            .iter()
            .enumerate()
            .filter(|(i, _)| !positions.contains(i))
            .map(|(_, l)| l.apply(&theta))
            .collect();
        body.extend(solution.body.literals().iter().map(|l| l.apply(&theta)));
        let child = GeneralizedClause::new(head, Goal::from_ordered(body));
        self.new_node(self.nodes[n.0].entry, child, Some(n));
    }
}

fn unify_aligned(a: &[Literal], b: &[Literal], occurs: bool) -> Option<Substitution> {
    let mut s = Substitution::new();
    for (x, y) in a.iter().zip(b.iter()) {
        unify_literals_into(x, y, occurs, &mut s)?;
    }
    Some(s)
}

fn unify_as_sets(a: &[Literal], b: &[Literal], occurs: bool) -> Option<Substitution> {
    fn search(
        a: &[Literal],
        b: &[Literal],
        i: usize,
        used: &mut Vec<bool>,
        s: Substitution,
        occurs: bool,
    ) -> Option<Substitution> {
        if i == a.len() {
            if used.iter().all(|u| *u) {
                return Some(s);
            }
            return None;
        }
        for j in 0..b.len() {
            let mut attempt = s.clone();
            if unify_literals_into(&a[i], &b[j], occurs, &mut attempt).is_some() {
                let was = used[j];
                used[j] = true;
                if let Some(done) = search(a, b, i + 1, used, attempt, occurs) {
                    return Some(done);
                }
                used[j] = was;
            }
        }
        None
    }
    let mut used = vec![false; b.len()];
    search(a, b, 0, &mut used, Substitution::new(), occurs)
}

/// Runs the whole procedure for one goal.
pub fn lt_run(
    program: &Program,
    goal: Goal,
    rule: ControlRule,
    alpha: AbstractionOp,
    max_steps: usize,
    config: EngineConfig,
    gen: VarGen,
) -> Result<EngineResult, EngineError> {
    let mut engine = Engine::new(program, rule, alpha, config, gen);
    engine.init(goal)?;
    engine.run(max_steps)
}
