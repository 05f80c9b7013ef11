//! Literals, goals (sets of literals interpreted conjunctively), goal
//! subsumption and variance, generalized clauses, and goal abstraction.

use std::collections::{BTreeMap, BTreeSet};

use crate::term::{Substitution, Term, VarGen, VarId};

/// An atomic formula: predicate applied to terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(pred: &str, args: Vec<Term>) -> Literal {
        Literal {
            pred: pred.to_string(),
            args,
        }
    }

    pub fn key(&self) -> (&str, usize) {
        (&self.pred, self.args.len())
    }

    pub fn apply(&self, s: &Substitution) -> Literal {
        Literal {
            pred: self.pred.clone(),
            args: self.args.iter().map(|t| s.apply_term(t)).collect(),
        }
    }

    pub fn rename(&self, map: &mut BTreeMap<VarId, VarId>, gen: &mut VarGen) -> Literal {
        Literal {
            pred: self.pred.clone(),
            args: self.args.iter().map(|t| t.rename(map, gen)).collect(),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        for a in &self.args {
            a.collect_vars(out);
        }
    }

    pub fn canonical_with(&self, map: &mut BTreeMap<VarId, u64>) -> Literal {
        Literal {
            pred: self.pred.clone(),
            args: self.args.iter().map(|t| t.canonical_with(map)).collect(),
        }
    }

    /// Variant check: equal up to a bijective renaming of variables.
    pub fn variant_eq(&self, other: &Literal) -> bool {
        let mut m1 = BTreeMap::new();
        let mut m2 = BTreeMap::new();
        self.canonical_with(&mut m1) == other.canonical_with(&mut m2)
    }
}

/// Unifies two literals. Distinct predicate or arity fails immediately.
pub fn unify_literals(a: &Literal, b: &Literal, occurs_check: bool) -> Option<Substitution> {
    if a.key() != b.key() {
        return None;
    }
    let mut s = Substitution::new();
    for (x, y) in a.args.iter().zip(b.args.iter()) {
        crate::term::unify_into(x, y, occurs_check, &mut s)?;
    }
    Some(s)
}

/// Extends `s` so it unifies `a` and `b`, or fails leaving `s` untouched on
/// the caller's side (callers clone before speculative extension).
pub fn unify_literals_into(
    a: &Literal,
    b: &Literal,
    occurs_check: bool,
    s: &mut Substitution,
) -> Option<()> {
    if a.key() != b.key() {
        return None;
    }
    for (x, y) in a.args.iter().zip(b.args.iter()) {
        crate::term::unify_into(x, y, occurs_check, s)?;
    }
    Some(())
}

/// A set of literals interpreted conjunctively.
///
/// The literal order is a sequence fixed at construction: `new` establishes
/// the canonical order (predicate, arity, then structure with variables
/// numbered by first occurrence), while `from_ordered` and substitution keep
/// the order they are given. Duplicates are always collapsed, keeping the
/// first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Goal {
    lits: Vec<Literal>,
}

impl Goal {
    /// Builds a goal in canonical order.
    pub fn new(mut lits: Vec<Literal>) -> Goal {
        lits.sort_by(|a, b| {
            let ka = (a.pred.clone(), a.args.len());
            let kb = (b.pred.clone(), b.args.len());
            ka.cmp(&kb).then_with(|| {
                let mut m1 = BTreeMap::new();
                let mut m2 = BTreeMap::new();
                a.canonical_with(&mut m1).cmp(&b.canonical_with(&mut m2))
            })
        });
        Goal::from_ordered(lits)
    }

    /// Builds a goal keeping the given order, collapsing duplicates.
    pub fn from_ordered(lits: Vec<Literal>) -> Goal {
        let mut out: Vec<Literal> = Vec::with_capacity(lits.len());
        for l in lits {
            if !out.contains(&l) {
                out.push(l);
            }
        }
        Goal { lits: out }
    }

    pub fn empty() -> Goal {
        Goal { lits: Vec::new() }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn apply(&self, s: &Substitution) -> Goal {
        Goal::from_ordered(self.lits.iter().map(|l| l.apply(s)).collect())
    }

    pub fn rename(&self, map: &mut BTreeMap<VarId, VarId>, gen: &mut VarGen) -> Goal {
        Goal::from_ordered(self.lits.iter().map(|l| l.rename(map, gen)).collect())
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        for l in &self.lits {
            l.collect_vars(out);
        }
    }

    /// Set equality, ignoring order.
    pub fn same_set(&self, other: &Goal) -> bool {
        self.lits.len() == other.lits.len()
            && self.lits.iter().all(|l| other.lits.contains(l))
    }
}

/// Binding store for one-way matching. Unlike a substitution it records
/// `v -> Var(v)` self-bindings, so consistency checks across shared pattern
/// variables stay sound even when pattern and target variable ids collide.
pub(crate) type Bindings = BTreeMap<VarId, Term>;

/// One-way matching of `pat` onto `tgt`: only variables of `pat` may be
/// bound, and a variable already bound must map to a syntactically equal
/// term.
fn match_term(pat: &Term, tgt: &Term, b: &mut Bindings) -> bool {
    match pat {
        Term::Var(v) => match b.get(v) {
            Some(bound) => bound == tgt,
            None => {
                b.insert(*v, tgt.clone());
                true
            }
        },
        Term::App(f, fa) => match tgt {
            Term::App(g, ga) if f == g && fa.len() == ga.len() => {
                fa.iter().zip(ga.iter()).all(|(x, y)| match_term(x, y, b))
            }
            _ => false,
        },
    }
}

fn match_literal(pat: &Literal, tgt: &Literal, b: &mut Bindings) -> bool {
    pat.key() == tgt.key()
        && pat
            .args
            .iter()
            .zip(tgt.args.iter())
            .all(|(x, y)| match_term(x, y, b))
}

/// One-way literal matching for pattern evaluation: only variables of `pat`
/// are bound, consistently across calls sharing `b`.
pub(crate) fn match_literal_oneway(pat: &Literal, tgt: &Literal, b: &mut Bindings) -> bool {
    match_literal(pat, tgt, b)
}

fn bindings_to_subst(b: &Bindings) -> Substitution {
    let mut s = Substitution::new();
    for (v, t) in b {
        s.bind(*v, t.clone());
    }
    s
}

fn subsumes_search(
    src: &[Literal],
    tgt: &[Literal],
    i: usize,
    b: Bindings,
    assign: &mut Vec<usize>,
) -> Option<Bindings> {
    if i == src.len() {
        // every target literal must be covered for exact set equality
        let covered: BTreeSet<usize> = assign.iter().copied().collect();
        if covered.len() == tgt.len() {
            return Some(b);
        }
        return None;
    }
    for (j, t) in tgt.iter().enumerate() {
        let mut attempt = b.clone();
        if match_literal(&src[i], t, &mut attempt) {
            assign.push(j);
            if let Some(done) = subsumes_search(src, tgt, i + 1, attempt, assign) {
                return Some(done);
            }
            assign.pop();
        }
    }
    None
}

/// Goal subsumption: finds a substitution with `g` applied equal to `g2` as
/// a set. The assignment of `g`'s literals onto `g2`'s may be non-injective
/// (collapse), but every literal of `g2` must be hit. The first solution
/// under the stored orders is returned.
pub fn subsumes_goal(g: &Goal, g2: &Goal) -> Option<Substitution> {
    subsumes_goal_assign(g, g2).map(|(s, _)| s)
}

/// Like [`subsumes_goal`] but also returns, per literal of `g`, the index of
/// the `g2` literal it was mapped onto.
pub fn subsumes_goal_assign(g: &Goal, g2: &Goal) -> Option<(Substitution, Vec<usize>)> {
    if g2.len() > g.len() {
        return None;
    }
    let mut assign = Vec::new();
    let b = subsumes_search(g.literals(), g2.literals(), 0, Bindings::new(), &mut assign)?;
    Some((bindings_to_subst(&b), assign))
}

fn variant_match_term(
    a: &Term,
    b: &Term,
    fwd: &mut BTreeMap<VarId, VarId>,
    bwd: &mut BTreeMap<VarId, VarId>,
) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            let f = *fwd.entry(*x).or_insert(*y);
            let g = *bwd.entry(*y).or_insert(*x);
            f == *y && g == *x
        }
        (Term::App(f, fa), Term::App(g, ga)) => {
            f == g
                && fa.len() == ga.len()
                && fa
                    .iter()
                    .zip(ga.iter())
                    .all(|(x, y)| variant_match_term(x, y, fwd, bwd))
        }
        _ => false,
    }
}

fn variant_search(
    a: &[Literal],
    b: &[Literal],
    i: usize,
    used: &mut Vec<bool>,
    fwd: BTreeMap<VarId, VarId>,
    bwd: BTreeMap<VarId, VarId>,
) -> bool {
    if i == a.len() {
        return true;
    }
    for j in 0..b.len() {
        if used[j] || a[i].key() != b[j].key() {
            continue;
        }
        let mut f = fwd.clone();
        let mut w = bwd.clone();
        if a[i]
            .args
            .iter()
            .zip(b[j].args.iter())
            .all(|(x, y)| variant_match_term(x, y, &mut f, &mut w))
        {
            used[j] = true;
            if variant_search(a, b, i + 1, used, f, w) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// True when the goals are equal up to a bijective renaming of variables,
/// with literals in bijective correspondence.
pub fn variant_goals(g: &Goal, g2: &Goal) -> bool {
    g.len() == g2.len() && variant_subset(g, g2)
}

/// True when every literal of `g` maps to a distinct literal of `g2` under
/// one consistent bijective variable renaming; `g2` may be larger.
pub fn variant_subset(g: &Goal, g2: &Goal) -> bool {
    if g.len() > g2.len() {
        return false;
    }
    let mut used = vec![false; g2.len()];
    variant_search(
        g.literals(),
        g2.literals(),
        0,
        &mut used,
        BTreeMap::new(),
        BTreeMap::new(),
    )
}

/// A pair of goals: if each member of `body` holds, every member of `head`
/// holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedClause {
    pub head: Goal,
    pub body: Goal,
}

impl GeneralizedClause {
    pub fn new(head: Goal, body: Goal) -> GeneralizedClause {
        GeneralizedClause { head, body }
    }

    pub fn apply(&self, s: &Substitution) -> GeneralizedClause {
        GeneralizedClause {
            head: self.head.apply(s),
            body: self.body.apply(s),
        }
    }

    pub fn rename(&self, gen: &mut VarGen) -> GeneralizedClause {
        let mut map = BTreeMap::new();
        GeneralizedClause {
            head: self.head.rename(&mut map, gen),
            body: self.body.rename(&mut map, gen),
        }
    }

    pub fn variant_eq(&self, other: &GeneralizedClause) -> bool {
        // heads and bodies must correspond under one shared renaming; check
        // via a combined goal with reserved wrapper predicates
        let wrap = |c: &GeneralizedClause| {
            let mut ls: Vec<Literal> = c
                .head
                .literals()
                .iter()
                .map(|l| Literal::new("$h", vec![Term::App(l.pred.clone(), l.args.clone())]))
                .collect();
            ls.extend(
                c.body
                    .literals()
                    .iter()
                    .map(|l| Literal::new("$b", vec![Term::App(l.pred.clone(), l.args.clone())])),
            );
            Goal::from_ordered(ls)
        };
        variant_goals(&wrap(self), &wrap(other))
    }
}

/// Joint subsumption of clause pairs: one substitution must map `c`'s head
/// onto `c2`'s head and `c`'s body onto `c2`'s body, both as sets.
pub fn subsumes_clause(c: &GeneralizedClause, c2: &GeneralizedClause) -> bool {
    if c2.head.len() > c.head.len() || c2.body.len() > c.body.len() {
        return false;
    }
    fn body_stage(c: &GeneralizedClause, c2: &GeneralizedClause, b: Bindings) -> bool {
        let mut assign = Vec::new();
        subsumes_search(c.body.literals(), c2.body.literals(), 0, b, &mut assign).is_some()
    }
    fn head_stage(
        src: &[Literal],
        tgt: &[Literal],
        i: usize,
        b: Bindings,
        assign: &mut Vec<usize>,
        c: &GeneralizedClause,
        c2: &GeneralizedClause,
    ) -> bool {
        if i == src.len() {
            let covered: BTreeSet<usize> = assign.iter().copied().collect();
            return covered.len() == tgt.len() && body_stage(c, c2, b);
        }
        for (j, t) in tgt.iter().enumerate() {
            let mut attempt = b.clone();
            if match_literal(&src[i], t, &mut attempt) {
                assign.push(j);
                if head_stage(src, tgt, i + 1, attempt, assign, c, c2) {
                    return true;
                }
                assign.pop();
            }
        }
        false
    }
    let mut assign = Vec::new();
    head_stage(
        c.head.literals(),
        c2.head.literals(),
        0,
        Bindings::new(),
        &mut assign,
        c,
        c2,
    )
}

/// Goal-to-goal abstraction used when creating table entries. The result
/// always subsumes the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbstractionOp {
    /// Leaves goals unchanged.
    Identity,
    /// Truncates compound subterms at the given depth with fresh variables;
    /// the root of each literal argument is at depth 1.
    Depth(u32),
}

impl AbstractionOp {
    pub fn apply(&self, g: &Goal, gen: &mut VarGen) -> Goal {
        match self {
            AbstractionOp::Identity => g.clone(),
            AbstractionOp::Depth(d) => Goal::from_ordered(
                g.literals()
                    .iter()
                    .map(|l| Literal {
                        pred: l.pred.clone(),
                        args: l.args.iter().map(|t| abstract_term(t, 1, *d, gen)).collect(),
                    })
                    .collect(),
            ),
        }
    }
}

fn abstract_term(t: &Term, depth: u32, cutoff: u32, gen: &mut VarGen) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(_, args) if args.is_empty() => t.clone(),
        Term::App(f, args) => {
            if depth >= cutoff {
                Term::Var(gen.fresh())
            } else {
                Term::App(
                    f.clone(),
                    args.iter()
                        .map(|a| abstract_term(a, depth + 1, cutoff, gen))
                        .collect(),
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(n: u64) -> Term {
        Term::Var(VarId(n))
    }

    fn lit(p: &str, args: Vec<Term>) -> Literal {
        Literal::new(p, args)
    }

    #[test]
    fn apply_collapses_duplicates() {
        // {p(X), p(Y)} under {X -> a, Y -> a} becomes {p(a)}
        let g = Goal::new(vec![lit("p", vec![var(0)]), lit("p", vec![var(1)])]);
        let mut s = Substitution::new();
        s.bind(VarId(0), Term::atom("a"));
        s.bind(VarId(1), Term::atom("a"));
        let r = g.apply(&s);
        assert_eq!(r.len(), 1);
        assert_eq!(r.literals()[0], lit("p", vec![Term::atom("a")]));
    }

    #[test]
    fn identity_substitution_is_identity() {
        let g = Goal::new(vec![lit("p", vec![var(0), Term::atom("b")])]);
        assert_eq!(g.apply(&Substitution::new()), g);
    }

    #[test]
    fn subsumes_simple_instance() {
        let g = Goal::new(vec![lit("p", vec![var(0), var(1)])]);
        let g2 = Goal::new(vec![lit("p", vec![Term::atom("a"), Term::atom("b")])]);
        let s = subsumes_goal(&g, &g2).unwrap();
        assert!(g.apply(&s).same_set(&g2));
        assert!(subsumes_goal(&g2, &g).is_none());
    }

    #[test]
    fn subsumes_collapsing_assignment() {
        // {p(X), p(Y)} subsumes {p(a)}
        let g = Goal::new(vec![lit("p", vec![var(0)]), lit("p", vec![var(1)])]);
        let g2 = Goal::new(vec![lit("p", vec![Term::atom("a")])]);
        let s = subsumes_goal(&g, &g2).unwrap();
        assert_eq!(s.get(VarId(0)), Some(&Term::atom("a")));
        assert_eq!(s.get(VarId(1)), Some(&Term::atom("a")));
        // but {p(a)} does not subsume {p(X), p(Y)}
        assert!(subsumes_goal(&g2, &g).is_none());
    }

    #[test]
    fn shared_variable_ids_do_not_confuse_matching() {
        // p(X,X) must not subsume p(X,a) even though both sides use the
        // same variable id
        let g = Goal::new(vec![lit("p", vec![var(0), var(0)])]);
        let g2 = Goal::new(vec![lit("p", vec![var(0), Term::atom("a")])]);
        assert!(subsumes_goal(&g, &g2).is_none());
        // and p(X,Y) subsumes p(X,a) with Y bound, X left alone
        let g3 = Goal::new(vec![lit("p", vec![var(0), var(1)])]);
        let s = subsumes_goal(&g3, &g2).unwrap();
        assert!(g3.apply(&s).same_set(&g2));
    }

    #[test]
    fn subsumes_requires_full_coverage() {
        let g = Goal::new(vec![lit("p", vec![var(0)])]);
        let g2 = Goal::new(vec![
            lit("p", vec![Term::atom("a")]),
            lit("p", vec![Term::atom("b")]),
        ]);
        assert!(subsumes_goal(&g, &g2).is_none());
    }

    #[test]
    fn variance_basics() {
        let gx = Goal::new(vec![lit("p", vec![var(0)])]);
        let gy = Goal::new(vec![lit("p", vec![var(7)])]);
        let ga = Goal::new(vec![lit("p", vec![Term::atom("a")])]);
        assert!(variant_goals(&gx, &gy));
        assert!(!variant_goals(&gx, &ga));

        // p(X,Y) is not a variant of p(Z,Z): the renaming must be bijective
        let gxy = Goal::new(vec![lit("p", vec![var(0), var(1)])]);
        let gzz = Goal::new(vec![lit("p", vec![var(2), var(2)])]);
        assert!(!variant_goals(&gxy, &gzz));
    }

    #[test]
    fn variance_is_an_equivalence() {
        let goals = vec![
            Goal::new(vec![lit("p", vec![var(0), var(1)])]),
            Goal::new(vec![lit("p", vec![var(3), var(4)])]),
            Goal::new(vec![lit("p", vec![var(5), var(5)])]),
        ];
        for g in &goals {
            assert!(variant_goals(g, g));
        }
        assert!(variant_goals(&goals[0], &goals[1]));
        assert!(variant_goals(&goals[1], &goals[0]));
        assert!(!variant_goals(&goals[0], &goals[2]));
        assert!(!variant_goals(&goals[1], &goals[2]));
    }

    #[test]
    fn abstraction_examples() {
        let mut gen = VarGen::new();
        for _ in 0..100 {
            gen.fresh();
        }

        // identity
        let g = Goal::new(vec![lit("p", vec![Term::app("f", vec![var(0)])])]);
        assert_eq!(AbstractionOp::Identity.apply(&g, &mut gen), g);

        // depth(2) on p(f(g(a))) -> p(f(X))
        let g2 = Goal::new(vec![lit(
            "p",
            vec![Term::app("f", vec![Term::app("g", vec![Term::atom("a")])])],
        )]);
        let r2 = AbstractionOp::Depth(2).apply(&g2, &mut gen);
        match &r2.literals()[0].args[0] {
            Term::App(f, args) => {
                assert_eq!(f, "f");
                assert!(args[0].is_var());
            }
            _ => panic!("expected compound"),
        }
        assert!(subsumes_goal(&r2, &g2).is_some());

        // depth(1) on p(f(a), b) -> p(X, b); constants at depth 1 kept
        let g3 = Goal::new(vec![lit(
            "p",
            vec![Term::app("f", vec![Term::atom("a")]), Term::atom("b")],
        )]);
        let r3 = AbstractionOp::Depth(1).apply(&g3, &mut gen);
        assert!(r3.literals()[0].args[0].is_var());
        assert_eq!(r3.literals()[0].args[1], Term::atom("b"));
        assert!(subsumes_goal(&r3, &g3).is_some());
    }

    #[test]
    fn clause_subsumption_is_joint() {
        let mk = |h: Vec<Literal>, b: Vec<Literal>| {
            GeneralizedClause::new(Goal::from_ordered(h), Goal::from_ordered(b))
        };
        let c1 = mk(vec![lit("p", vec![var(0)])], vec![lit("q", vec![var(0)])]);
        let inst = mk(
            vec![lit("p", vec![Term::atom("a")])],
            vec![lit("q", vec![Term::atom("a")])],
        );
        // same variable must instantiate consistently in head and body
        let crossed = mk(
            vec![lit("p", vec![Term::atom("a")])],
            vec![lit("q", vec![Term::atom("b")])],
        );
        assert!(subsumes_clause(&c1, &inst));
        assert!(!subsumes_clause(&c1, &crossed));
        assert!(!subsumes_clause(&inst, &c1));
    }

    #[test]
    fn subsumes_random_instances() {
        // subsumes_goal(g, g.apply(s)) succeeds for generated g and s
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..200 {
            let mut lits = Vec::new();
            let n = 1 + (next() % 3) as usize;
            for _ in 0..n {
                let arity = 1 + (next() % 2) as usize;
                let mut args = Vec::new();
                for _ in 0..arity {
                    args.push(match next() % 3 {
                        0 => var(next() % 3),
                        1 => Term::atom(["a", "b"][(next() % 2) as usize]),
                        _ => Term::app("f", vec![var(next() % 3)]),
                    });
                }
                lits.push(lit(["p", "q"][(next() % 2) as usize], args));
            }
            let g = Goal::new(lits);
            let mut s = Substitution::new();
            for v in 0..3 {
                if next() % 2 == 0 {
                    s.bind(
                        VarId(v),
                        match next() % 2 {
                            0 => Term::atom("a"),
                            _ => Term::app("f", vec![Term::atom("b")]),
                        },
                    );
                }
            }
            let g2 = g.apply(&s);
            assert!(
                subsumes_goal(&g, &g2).is_some(),
                "goal must subsume its own instance: {:?} vs {:?}",
                g,
                g2
            );
        }
    }
}
