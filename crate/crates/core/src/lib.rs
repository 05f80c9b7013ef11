//! A tabling logic-programming engine.
//!
//! The engine memoizes *sets* of literals rather than single calls: table
//! entries pair a goal with a resolution tree and a growing solution list,
//! and a pluggable control rule decides per node whether to resolve against
//! the program, against another entry's solutions, or to emit the node as a
//! solution. A plain depth-bounded SLD engine with selectable literal
//! selection serves as the non-memoized baseline, and a small CFG front-end
//! compiles grammars into the tree/yield clause encoding the engine parses
//! with.

pub mod cfg;
pub mod dot;
pub mod engine;
pub mod goal;
pub mod parse;
pub mod pretty;
pub mod program;
pub mod rule;
pub mod sld;
pub mod term;

pub use cfg::{encode_cfg, encode_cfg_text, parse_cfg, Cfg, CfgRhs, CfgRule};
pub use dot::export_dot;
pub use engine::{
    lt_run, AddOutcome, Engine, EngineConfig, EngineError, EngineResult, EngineStats,
    EngineStatus, Entry, EntryId, Node, NodeId, Tag,
};
pub use goal::{
    subsumes_clause, subsumes_goal, subsumes_goal_assign, unify_literals, variant_goals,
    variant_subset, AbstractionOp, GeneralizedClause, Goal, Literal,
};
pub use parse::{parse_program, parse_query, parse_term, ParseError};
pub use program::{Program, ProgramClause};
pub use rule::{parse_rule_spec, ControlRule, RuleContext, RuleSpec, RuleTag, RuleViolation};
pub use sld::{
    sld_solve, trace_derivation, SelectionRule, SldAnswer, SldOutcome, SldStatus, TraceStep,
};
pub use term::{unify_terms, Substitution, Term, VarGen, VarId};
