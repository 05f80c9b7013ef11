//! Grammar round trip: the tabling engine run over an encoded grammar must
//! accept exactly the strings the grammar derives (up to length 6), with
//! one solution per distinct parse tree.
//!
//! The oracle enumerates parse trees directly from the grammar by bounded
//! leaf count, independently of the clause encoding and the engine.

use std::collections::{BTreeMap, BTreeSet};

use lemtab::{
    encode_cfg, lt_run, parse_cfg, parse_query, pretty, AbstractionOp, Cfg, CfgRhs, ControlRule,
    EngineConfig, EngineStatus, Goal, Term, VarGen,
};

/// All parse trees for `cat` with exactly `leaves` leaves, as tree terms
/// paired with their yields. Grammars must not contain unary cycles.
fn trees(cfg: &Cfg, cat: &str, leaves: usize) -> Vec<(Vec<String>, Term)> {
    let mut out = Vec::new();
    if leaves == 0 {
        return out;
    }
    for rule in cfg.rules.iter().filter(|r| r.lhs == cat) {
        match &rule.rhs {
            CfgRhs::Terminal(w) => {
                if leaves == 1 {
                    out.push((
                        vec![w.clone()],
                        Term::app("-", vec![Term::atom(cat), Term::atom(w)]),
                    ));
                }
            }
            CfgRhs::NonTerminals(cats) if cats.len() == 1 => {
                for (y, t) in trees(cfg, &cats[0], leaves) {
                    out.push((
                        y,
                        Term::app("/", vec![Term::atom(cat), Term::list(vec![t])]),
                    ));
                }
            }
            CfgRhs::NonTerminals(cats) => {
                for k in 1..leaves {
                    for (ly, lt) in trees(cfg, &cats[0], k) {
                        for (ry, rt) in trees(cfg, &cats[1], leaves - k) {
                            let mut y = ly.clone();
                            y.extend(ry.iter().cloned());
                            out.push((
                                y,
                                Term::app(
                                    "/",
                                    vec![Term::atom(cat), Term::list(vec![lt.clone(), rt])],
                                ),
                            ));
                        }
                    }
                }
            }
        }
    }
    out
}

fn language_up_to(cfg: &Cfg, max_len: usize) -> BTreeMap<Vec<String>, BTreeSet<Term>> {
    let mut map: BTreeMap<Vec<String>, BTreeSet<Term>> = BTreeMap::new();
    for n in 1..=max_len {
        for (y, t) in trees(cfg, &cfg.start, n) {
            map.entry(y).or_default().insert(t);
        }
    }
    map
}

fn engine_trees(source: &str, words: &[String]) -> BTreeSet<Term> {
    let mut gen = VarGen::new();
    let program = lemtab::parse_program(source, &mut gen).unwrap();
    let query = format!("parse([{}], T)", words.join(","));
    let goal = Goal::from_ordered(parse_query(&query, &mut gen).unwrap());
    let result = lt_run(
        &program,
        goal,
        ControlRule::Grammar,
        AbstractionOp::Identity,
        200_000,
        EngineConfig::default(),
        gen,
    )
    .unwrap();
    assert_eq!(result.status, EngineStatus::Fixpoint, "{query}");
    result
        .solutions
        .iter()
        .map(|s| {
            assert!(s.body.is_empty());
            s.head.literals()[0].args[1].clone()
        })
        .collect()
}

fn check_grammar(cfg_src: &str, rejected: &[&[&str]]) {
    let cfg = parse_cfg(cfg_src).unwrap();
    let mut gen = VarGen::new();
    let source = pretty::program(&encode_cfg(&cfg, &mut gen));
    let language = language_up_to(&cfg, 6);
    assert!(!language.is_empty(), "oracle derived nothing");
    for (words, want) in &language {
        let got = engine_trees(&source, words);
        assert_eq!(
            &got, want,
            "trees differ for {words:?} under grammar:\n{cfg_src}"
        );
    }
    for words in rejected {
        let words: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert!(
            engine_trees(&source, &words).is_empty(),
            "{words:?} should be rejected under grammar:\n{cfg_src}"
        );
    }
}

#[test]
fn fragment_grammar_matches_direct_derivation() {
    check_grammar(
        "start: S\nNP -> 'kim'\nN -> 'friend'\nV -> 'walks'\nS -> NP VP\nNP -> NP N\nVP -> V\n",
        &[&["walks"], &["kim", "kim", "walks"], &["friend"]],
    );
}

#[test]
fn ambiguous_grammar_matches_direct_derivation() {
    check_grammar("S -> S S | 'a'\n", &[&["b"]]);
}

#[test]
fn nonrecursive_grammar_matches_direct_derivation() {
    check_grammar(
        "start: S\nS -> NP VP\nNP -> 'kim'\nNP -> 'sandy'\nVP -> V\nV -> 'walks'\nV -> 'sleeps'\n",
        &[&["kim"], &["walks", "kim"]],
    );
}

#[test]
fn unary_chain_grammar_matches_direct_derivation() {
    check_grammar("start: S\nS -> A\nA -> B\nB -> 'x'\n", &[&["x", "x"]]);
}

#[test]
fn mixed_branching_grammar_matches_direct_derivation() {
    // left recursion, unary wrapping and ambiguity in one grammar
    check_grammar(
        "start: E\nE -> E T\nE -> T\nT -> 'i'\n",
        &[&["j"], &["i", "j"]],
    );
}
