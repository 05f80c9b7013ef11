//! First-order terms, variables, substitutions and unification.

use std::collections::{BTreeMap, BTreeSet};

/// Identifier of a logic variable. Ids are issued by a [`VarGen`] and are
/// unique within one engine run; everything that resolves against the same
/// program must draw from the same generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u64);

/// Source of fresh variable ids.
#[derive(Debug, Default, Clone)]
pub struct VarGen {
    next: u64,
}

impl VarGen {
    pub fn new() -> Self {
        VarGen { next: 0 }
    }

    pub fn fresh(&mut self) -> VarId {
        let id = VarId(self.next);
        self.next += 1;
        id
    }
}

/// A term is a variable or a function symbol applied to arguments.
/// An atomic constant is an application with zero arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(VarId),
    App(String, Vec<Term>),
}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::App(name.to_string(), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(name.to_string(), args)
    }

    /// Cons-cell list from elements, terminated by `[]`.
    pub fn list(elems: Vec<Term>) -> Term {
        let mut t = Term::atom("[]");
        for e in elems.into_iter().rev() {
            t = Term::App(".".to_string(), vec![e, t]);
        }
        t
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_constant(&self) -> Option<&str> {
        match self {
            Term::App(f, args) if args.is_empty() => Some(f),
            _ => None,
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    /// Rewrites variables through `map`, drawing fresh ids for unseen ones.
    pub fn rename(&self, map: &mut BTreeMap<VarId, VarId>, gen: &mut VarGen) -> Term {
        match self {
            Term::Var(v) => Term::Var(*map.entry(*v).or_insert_with(|| gen.fresh())),
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| a.rename(map, gen)).collect(),
            ),
        }
    }

    /// Renumbers variables by first occurrence starting at 0. Two terms are
    /// variants exactly when their canonical forms are equal.
    pub fn canonical(&self) -> Term {
        let mut map = BTreeMap::new();
        self.canonical_with(&mut map)
    }

    pub fn canonical_with(&self, map: &mut BTreeMap<VarId, u64>) -> Term {
        match self {
            Term::Var(v) => {
                let n = map.len() as u64;
                Term::Var(VarId(*map.entry(*v).or_insert(n)))
            }
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| a.canonical_with(map)).collect(),
            ),
        }
    }
}

/// A finite map from variables to terms.
///
/// Application is a single simultaneous pass: a variable is replaced by its
/// binding and the replacement is not rewritten again. Unification and
/// composition keep bindings fully resolved, so their results are idempotent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<VarId, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn get(&self, v: VarId) -> Option<&Term> {
        self.bindings.get(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &Term)> {
        self.bindings.iter().map(|(v, t)| (*v, t))
    }

    /// Inserts `v -> t` without resolving anything. Bindings of a variable to
    /// itself are dropped.
    pub fn bind(&mut self, v: VarId, t: Term) {
        if t != Term::Var(v) {
            self.bindings.insert(v, t);
        }
    }

    /// Inserts `v -> t` and rewrites existing binding values with the new
    /// pair, keeping the map fully resolved.
    fn bind_resolving(&mut self, v: VarId, t: Term) {
        if t == Term::Var(v) {
            return;
        }
        let mut single = Substitution::new();
        single.bind(v, t.clone());
        for val in self.bindings.values_mut() {
            *val = single.apply_term(val);
        }
        self.bindings.insert(v, t);
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match self.bindings.get(v) {
                Some(bound) => bound.clone(),
                None => t.clone(),
            },
            Term::App(f, args) => Term::App(
                f.clone(),
                args.iter().map(|a| self.apply_term(a)).collect(),
            ),
        }
    }

    /// Composition: applying the result equals applying `self` then `other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.bindings {
            out.bind(*v, other.apply_term(t));
        }
        for (v, t) in &other.bindings {
            if !self.bindings.contains_key(v) {
                out.bind(*v, t.clone());
            }
        }
        out
    }

    pub fn restrict(&self, keep: &BTreeSet<VarId>) -> Substitution {
        Substitution {
            bindings: self
                .bindings
                .iter()
                .filter(|(v, _)| keep.contains(v))
                .map(|(v, t)| (*v, t.clone()))
                .collect(),
        }
    }
}

/// Unifies two terms, returning a most general unifier. `None` is ordinary
/// failure, not an error. With `occurs_check` off, cyclic bindings are the
/// caller's responsibility.
pub fn unify_terms(a: &Term, b: &Term, occurs_check: bool) -> Option<Substitution> {
    let mut s = Substitution::new();
    unify_into(a, b, occurs_check, &mut s)?;
    Some(s)
}

pub(crate) fn unify_into(
    a: &Term,
    b: &Term,
    occurs_check: bool,
    s: &mut Substitution,
) -> Option<()> {
    let a = s.apply_term(a);
    let b = s.apply_term(b);
    match (&a, &b) {
        (Term::Var(x), Term::Var(y)) if x == y => Some(()),
        (Term::Var(x), t) | (t, Term::Var(x)) => {
            if occurs_check && t.contains_var(*x) {
                return None;
            }
            s.bind_resolving(*x, (*t).clone());
            Some(())
        }
        (Term::App(f, fa), Term::App(g, ga)) => {
            if f != g || fa.len() != ga.len() {
                return None;
            }
            for (x, y) in fa.iter().zip(ga.iter()) {
                unify_into(x, y, occurs_check, s)?;
            }
            Some(())
        }
    }
}
