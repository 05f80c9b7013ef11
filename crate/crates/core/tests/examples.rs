//! Cross-module checks: the worked unification and subsumption examples,
//! and a brute-force most-general-unifier oracle over a tiny term universe.

use std::collections::BTreeSet;

use lemtab::{
    parse_query, subsumes_goal, unify_literals, unify_terms, variant_goals, Goal, Literal,
    Substitution, Term, VarGen, VarId,
};

#[test]
fn tree_position_unification() {
    // wf(T, s) against wf(s/[T1,T2], s) binds the tree variable
    let mut gen = VarGen::new();
    let a = parse_query("wf(T, s)", &mut gen).unwrap();
    let b = parse_query("wf(s/[T1,T2], s)", &mut gen).unwrap();
    let s = unify_literals(&a[0], &b[0], true).unwrap();
    assert_eq!(a[0].apply(&s), b[0].apply(&s));
    // exactly one binding: T to the tree skeleton
    assert_eq!(s.len(), 1);

    // different predicates or arities fail immediately
    let c = parse_query("wfx(T, s)", &mut gen).unwrap();
    assert!(unify_literals(&a[0], &c[0], true).is_none());
    let d = parse_query("wf(T)", &mut gen).unwrap();
    assert!(unify_literals(&a[0], &d[0], true).is_none());
}

#[test]
fn table_lookup_subsumption() {
    // the entry goal covers the later lookup with fresh variables
    let mut gen = VarGen::new();
    let entry = Goal::from_ordered(parse_query("wf(T, C), y(T, S0, S)", &mut gen).unwrap());
    let lookup =
        Goal::from_ordered(parse_query("wf(T2, vp), y(T2, [walks], [])", &mut gen).unwrap());
    let s = subsumes_goal(&entry, &lookup).unwrap();
    assert!(entry.apply(&s).same_set(&lookup));
    assert!(subsumes_goal(&lookup, &entry).is_none());
}

#[test]
fn renamed_clause_is_a_variant() {
    let mut gen = VarGen::new();
    let q = parse_query("wf(np/[T1,T2], np), wf(T1, np), wf(T2, n)", &mut gen).unwrap();
    let g = Goal::from_ordered(q);
    let mut map = std::collections::BTreeMap::new();
    let renamed = g.rename(&mut map, &mut gen);
    assert!(variant_goals(&g, &renamed));
    let mut shared = BTreeSet::new();
    let mut fresh = BTreeSet::new();
    g.collect_vars(&mut shared);
    renamed.collect_vars(&mut fresh);
    assert!(shared.is_disjoint(&fresh));
}

// ---------------------------------------------------------------------
// most-general-unifier oracle: any unifier over a small ground universe
// must factor through the one the implementation returns
// ---------------------------------------------------------------------

fn ground_universe() -> Vec<Term> {
    let atoms = vec![Term::atom("a"), Term::atom("b")];
    let mut out = atoms.clone();
    for t in &atoms {
        out.push(Term::app("f", vec![t.clone()]));
    }
    for t in &atoms {
        for u in &atoms {
            out.push(Term::app("g", vec![t.clone(), u.clone()]));
        }
    }
    out
}

fn assignments(vars: &[VarId], universe: &[Term]) -> Vec<Substitution> {
    let mut out = vec![Substitution::new()];
    for v in vars {
        let mut next = Vec::new();
        for s in &out {
            for t in universe {
                let mut s2 = s.clone();
                s2.bind(*v, t.clone());
                next.push(s2);
            }
        }
        out = next;
    }
    out
}

struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }
}

fn random_term(rng: &mut Rng, depth: usize) -> Term {
    match rng.next() % if depth == 0 { 2 } else { 4 } {
        0 => Term::Var(VarId(rng.next() % 3)),
        1 => Term::atom(["a", "b"][(rng.next() % 2) as usize]),
        2 => Term::app("f", vec![random_term(rng, depth - 1)]),
        _ => Term::app(
            "g",
            vec![random_term(rng, depth - 1), random_term(rng, depth - 1)],
        ),
    }
}

#[test]
fn every_enumerated_unifier_factors_through_the_mgu() {
    let universe = ground_universe();
    let vars = [VarId(0), VarId(1), VarId(2)];
    let all = assignments(&vars, &universe);
    let mut rng = Rng(0x5eed_cafe_f00d_1234);
    let mut checked_pairs = 0;
    let mut checked_unifiers = 0;
    for _ in 0..120 {
        let a = random_term(&mut rng, 2);
        let b = random_term(&mut rng, 2);
        let mgu = unify_terms(&a, &b, true);
        if let Some(ref m) = mgu {
            assert_eq!(m.apply_term(&a), m.apply_term(&b));
        }
        for sigma in &all {
            if sigma.apply_term(&a) != sigma.apply_term(&b) {
                continue;
            }
            checked_unifiers += 1;
            let m = mgu
                .as_ref()
                .expect("a unifier exists, so the mgu must too");
            // sigma factors through m: match the instantiated variable
            // tuple of m onto sigma's
            let tuple = |s: &Substitution| {
                Literal::new(
                    "t",
                    vars.iter().map(|v| s.apply_term(&Term::Var(*v))).collect(),
                )
            };
            let from = Goal::from_ordered(vec![tuple(m)]);
            let to = Goal::from_ordered(vec![tuple(sigma)]);
            assert!(
                subsumes_goal(&from, &to).is_some(),
                "unifier {sigma:?} of {a:?} = {b:?} does not factor through {m:?}"
            );
        }
        checked_pairs += 1;
    }
    assert_eq!(checked_pairs, 120);
    assert!(checked_unifiers > 1000, "oracle exercised too few unifiers");
}
