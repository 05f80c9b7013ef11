//! The tabling engine against a naive bottom-up least-model oracle, over
//! randomly generated function-free programs that may recurse freely —
//! including left recursion the depth-bounded top-down baseline cannot
//! exhaust. Every engine answer must hold in the least model, and every
//! model fact of the queried predicate must be covered by some answer.

use std::collections::BTreeSet;

use lemtab::sld::testsupport::{ground_instances, least_model};
use lemtab::{
    lt_run, parse_program, parse_query, subsumes_goal, AbstractionOp, ControlRule, EngineConfig,
    EngineStatus, Goal, Literal, VarGen,
};

struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[(self.next() % xs.len() as u64) as usize]
    }
}

const PREDS: [(&str, usize); 3] = [("p", 1), ("q", 1), ("r", 2)];
const CONSTS: [&str; 3] = ["a", "b", "c"];
const VARS: [&str; 2] = ["X", "Y"];

/// A random range-restricted program: ground facts plus rules whose head
/// variables all occur in the body. Recursion of any shape is allowed.
fn random_program(seed: u64) -> String {
    let mut rng = Rng(seed.wrapping_mul(0x2545_f491_4f6c_dd1d) | 1);
    let mut out = String::new();
    for _ in 0..2 + rng.next() % 3 {
        let (pred, arity) = *rng.pick(&PREDS);
        let args: Vec<&str> = (0..arity).map(|_| *rng.pick(&CONSTS)).collect();
        out.push_str(&format!("{pred}({}).\n", args.join(", ")));
    }
    for _ in 0..1 + rng.next() % 3 {
        let mut body_vars = BTreeSet::new();
        let n_body = 1 + rng.next() % 2;
        let mut body = Vec::new();
        for _ in 0..n_body {
            let (pred, arity) = *rng.pick(&PREDS);
            let args: Vec<&str> = (0..arity)
                .map(|_| {
                    if rng.next().is_multiple_of(3) {
                        *rng.pick(&CONSTS)
                    } else {
                        let v = *rng.pick(&VARS);
                        body_vars.insert(v);
                        v
                    }
                })
                .collect();
            body.push(format!("{pred}({})", args.join(", ")));
        }
        let body_vars: Vec<&str> = body_vars.into_iter().collect();
        let (pred, arity) = *rng.pick(&PREDS);
        let args: Vec<&str> = (0..arity)
            .map(|_| {
                if body_vars.is_empty() || rng.next().is_multiple_of(4) {
                    *rng.pick(&CONSTS)
                } else {
                    *rng.pick(&body_vars)
                }
            })
            .collect();
        out.push_str(&format!(
            "{pred}({}) :- {}.\n",
            args.join(", "),
            body.join(", ")
        ));
    }
    out
}

#[test]
fn engine_answers_equal_the_least_model_on_random_programs() {
    let mut recursive_programs = 0usize;
    for seed in 1..=30u64 {
        let source = random_program(seed);
        let mut gen0 = VarGen::new();
        let program = parse_program(&source, &mut gen0).unwrap();
        if program.clauses().iter().any(|c| {
            !c.body.is_empty() && c.body.iter().any(|l| l.key() == c.head.key())
        }) {
            recursive_programs += 1;
        }
        let model = least_model(&program);
        for (pred, arity) in PREDS {
            let query = match arity {
                1 => format!("{pred}(X)"),
                _ => format!("{pred}(X, Y)"),
            };
            let mut gen = VarGen::new();
            let program = parse_program(&source, &mut gen).unwrap();
            let lits = parse_query(&query, &mut gen).unwrap();
            let result = lt_run(
                &program,
                Goal::from_ordered(lits.clone()),
                ControlRule::Leftmost { tabling: true },
                AbstractionOp::Identity,
                200_000,
                EngineConfig::default(),
                gen,
            )
            .unwrap();
            assert_eq!(
                result.status,
                EngineStatus::Fixpoint,
                "seed {seed} / {query} did not settle:\n{source}"
            );

            // soundness: every ground instance of every answer is a model fact
            for solution in &result.solutions {
                assert!(solution.body.is_empty());
                for inst in ground_instances(solution.head.literals(), &model.constants) {
                    for lit in inst {
                        assert!(
                            model.facts.contains(&lit),
                            "seed {seed} / {query}: unsound answer {lit:?}\n{source}"
                        );
                    }
                }
            }

            // completeness: every model fact of this predicate is covered
            let heads: Vec<&Goal> = result.solutions.iter().map(|s| &s.head).collect();
            for fact in model
                .facts
                .iter()
                .filter(|f| f.pred == pred && f.args.len() == arity)
            {
                let target = Goal::from_ordered(vec![fact.clone()]);
                assert!(
                    heads.iter().any(|h| subsumes_goal(h, &target).is_some()),
                    "seed {seed} / {query}: model fact {fact:?} not derived\n{source}"
                );
            }
        }
    }
    assert!(
        recursive_programs >= 5,
        "the generator produced too few directly recursive programs: {recursive_programs}"
    );
}

#[test]
fn engine_matches_the_model_on_mutual_left_recursion() {
    // written-out worst case: mutually recursive predicates, left-recursive
    // clauses first
    let source = "
p(X) :- q(X).
q(X) :- p(X).
q(X) :- r(X, Y), p(Y).
p(a).
r(b, a).
r(c, b).
";
    let mut gen0 = VarGen::new();
    let program = parse_program(source, &mut gen0).unwrap();
    let model = least_model(&program);
    for query in ["p(X)", "q(X)"] {
        let mut gen = VarGen::new();
        let program = parse_program(source, &mut gen).unwrap();
        let lits = parse_query(query, &mut gen).unwrap();
        let result = lt_run(
            &program,
            Goal::from_ordered(lits),
            ControlRule::Leftmost { tabling: true },
            AbstractionOp::Identity,
            100_000,
            EngineConfig::default(),
            gen,
        )
        .unwrap();
        assert_eq!(result.status, EngineStatus::Fixpoint);
        let got: BTreeSet<Literal> = result
            .solutions
            .iter()
            .map(|s| s.head.literals()[0].clone())
            .collect();
        let pred = &query[..1];
        let want: BTreeSet<Literal> = model
            .facts
            .iter()
            .filter(|f| f.pred == pred)
            .cloned()
            .collect();
        assert_eq!(got, want, "{query}");
    }
}
