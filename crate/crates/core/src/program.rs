//! Clause database indexed by predicate and arity.

use std::collections::BTreeMap;

use crate::goal::Literal;
use crate::term::VarGen;

/// A definite clause: `head.` when body is empty, else
/// `head :- b1, ..., bn.` with the body in source order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramClause {
    pub head: Literal,
    pub body: Vec<Literal>,
}

impl ProgramClause {
    pub fn rename(&self, gen: &mut VarGen) -> ProgramClause {
        let mut map = BTreeMap::new();
        ProgramClause {
            head: self.head.rename(&mut map, gen),
            body: self.body.iter().map(|l| l.rename(&mut map, gen)).collect(),
        }
    }

    /// Equal up to a bijective variable renaming, with body order significant.
    pub fn variant_eq(&self, other: &ProgramClause) -> bool {
        if self.body.len() != other.body.len() {
            return false;
        }
        let mut m1 = BTreeMap::new();
        let mut m2 = BTreeMap::new();
        if self.head.canonical_with(&mut m1) != other.head.canonical_with(&mut m2) {
            return false;
        }
        self.body
            .iter()
            .zip(other.body.iter())
            .all(|(a, b)| a.canonical_with(&mut m1) == b.canonical_with(&mut m2))
    }
}

/// An immutable clause sequence with a (predicate, arity) index. The same
/// predicate name may be used at several arities; each is keyed separately.
#[derive(Debug, Clone, Default)]
pub struct Program {
    clauses: Vec<ProgramClause>,
    index: BTreeMap<(String, usize), Vec<usize>>,
}

impl Program {
    pub fn from_clauses(clauses: Vec<ProgramClause>) -> Program {
        let mut index: BTreeMap<(String, usize), Vec<usize>> = BTreeMap::new();
        for (i, c) in clauses.iter().enumerate() {
            index
                .entry((c.head.pred.clone(), c.head.args.len()))
                .or_default()
                .push(i);
        }
        Program { clauses, index }
    }

    pub fn clauses(&self) -> &[ProgramClause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// All clauses whose head matches the key, in source order, each renamed
    /// apart with fresh variables. An unknown key yields no clauses.
    pub fn clauses_for(&self, pred: &str, arity: usize, gen: &mut VarGen) -> Vec<ProgramClause> {
        match self.index.get(&(pred.to_string(), arity)) {
            Some(ids) => ids.iter().map(|i| self.clauses[*i].rename(gen)).collect(),
            None => Vec::new(),
        }
    }

    /// Clause-wise variant equality, order significant.
    pub fn variant_eq(&self, other: &Program) -> bool {
        self.clauses.len() == other.clauses.len()
            && self
                .clauses
                .iter()
                .zip(other.clauses.iter())
                .all(|(a, b)| a.variant_eq(b))
    }
}
