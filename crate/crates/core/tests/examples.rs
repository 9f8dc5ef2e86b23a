use std::collections::HashSet;

use dlog_core::derivation::{check_derivation, explain, DerivationCheck};
use dlog_core::ground::{ground, herbrand_base};
use dlog_core::modelcheck::{self, count_models, logical_consequences, DEFAULT_CAP};
use dlog_core::parser::{parse_conclusion, parse_theory};
use dlog_core::{engine, metaprogram, ConclusionSet, GroundTheory, Literal, TaggedConclusion, ThreeVal};

fn load(text: &str) -> GroundTheory {
    ground(&parse_theory(text).unwrap()).unwrap()
}

fn set(items: &[&str]) -> ConclusionSet {
    items.iter().map(|s| parse_conclusion(s).unwrap()).collect()
}

const BIRD: &str = include_str!("fixtures/bird.dl");

const BIRD_STATED: [&str; 14] = [
    "+D emu(ethel)",
    "+D bird(tweety)",
    "+D bird(ethel)",
    "-D heavy(tweety)",
    "-D ~flies(tweety)",
    "+d bird(ethel)",
    "+d heavy(ethel)",
    "+d flies(tweety)",
    "-d brokenWing(ethel)",
    "-d ~flies(ethel)",
    "-d flies(ethel)",
    "-d brokenWing(tweety)",
    "-d heavy(tweety)",
    "-d ~flies(tweety)",
];

#[test]
fn bird_stated_conclusions() {
    let g = load(BIRD);
    let derived = engine::derive_all(&g).unwrap();
    for c in BIRD_STATED {
        assert!(derived.contains(&parse_conclusion(c).unwrap()), "missing {c}");
    }
    assert_eq!(derived, metaprogram::conclusions(&g).unwrap());
    assert!(derived.invariant_violations().is_empty());
}

#[test]
fn bird_opposites_are_absent() {
    let derived = engine::derive_all(&load(BIRD)).unwrap();
    for c in BIRD_STATED {
        let c = parse_conclusion(c).unwrap();
        let opposite = TaggedConclusion::new(c.tag.opposite(), c.literal.clone());
        assert!(!derived.contains(&opposite), "{opposite} derived");
    }
}

#[test]
fn bird_explanations_validate() {
    let g = load(BIRD);
    for c in &engine::derive_all(&g).unwrap() {
        let d = explain(&g, c).unwrap();
        assert_eq!(d.last(), Some(c));
        assert_eq!(check_derivation(&g, &d), DerivationCheck::Valid, "{c}");
        let distinct: HashSet<_> = d.steps.iter().collect();
        assert_eq!(distinct.len(), d.len());
    }
}

#[test]
fn inconsistent_facts_do_not_spread() {
    let g = load("a. ~a. r: b -> b.");
    let alone = load("r: b -> b.");
    let c = engine::derive_all(&g).unwrap();
    for s in ["+D a", "+D ~a", "+d a", "+d ~a"] {
        assert!(c.contains(&parse_conclusion(s).unwrap()), "{s}");
    }
    let c_alone = engine::derive_all(&alone).unwrap();
    for b in [Literal::prop("b"), Literal::prop("~b")] {
        for definite in [true, false] {
            assert_eq!(c.status(&b, definite), c_alone.status(&b, definite));
        }
    }
    assert_eq!(c.status(&Literal::prop("b"), true), ThreeVal::Undefined);
    assert_eq!(c.status(&Literal::prop("b"), false), ThreeVal::Undefined);
    assert_eq!(c, metaprogram::conclusions(&g).unwrap());
}

#[test]
fn unresolved_conflict_agrees_across_semantics() {
    let g = load("r1: => p. r2: => ~p.");
    let expected = set(&["-D p", "-D ~p", "-d p", "-d ~p"]);
    assert_eq!(engine::derive_all(&g).unwrap(), expected);
    assert_eq!(metaprogram::conclusions(&g).unwrap(), expected);
    assert_eq!(logical_consequences(&g, DEFAULT_CAP).unwrap(), expected);
}

#[test]
fn superiority_resolves_conflict() {
    let g = load("r1: => p. r2: => ~p. r1 > r2.");
    let expected = set(&["-D p", "-D ~p", "+d p", "-d ~p"]);
    assert_eq!(engine::derive_all(&g).unwrap(), expected);
    assert_eq!(logical_consequences(&g, DEFAULT_CAP).unwrap(), expected);
}

#[test]
fn self_supporting_rule_has_three_models() {
    let g = load("r: p => p.");
    assert_eq!(g.base.len(), 2);
    assert_eq!(count_models(&g, DEFAULT_CAP).unwrap(), 3);
    let expected = set(&["-D p", "-D ~p", "-d ~p"]);
    assert_eq!(logical_consequences(&g, DEFAULT_CAP).unwrap(), expected);
    assert_eq!(engine::derive_all(&g).unwrap(), expected);
}

#[test]
fn unconditional_rule_has_one_model() {
    let g = load("r: => p.");
    assert_eq!(count_models(&g, DEFAULT_CAP).unwrap(), 1);
    assert_eq!(
        logical_consequences(&g, DEFAULT_CAP).unwrap(),
        set(&["-D p", "-D ~p", "+d p", "-d ~p"])
    );
}

#[test]
fn empty_theory_over_one_atom() {
    let mut g = GroundTheory::empty();
    let q = Literal::prop("q");
    g.base = herbrand_base(&g, [&q]);
    let expected = set(&["-D q", "-D ~q", "-d q", "-d ~q"]);
    assert_eq!(logical_consequences(&g, DEFAULT_CAP).unwrap(), expected);
    let proved = engine::prove(&g, &parse_conclusion("-d q").unwrap()).unwrap();
    assert_eq!(proved, engine::Proof::Proved);
}

#[test]
fn models_of_unrestricted_statuses_are_well_formed() {
    for text in ["r: p => p.", "r: => p.", "p. r: p => ~p.", "r1: => p. r2: q ~> ~p.", "r1: p -> q. r2: => ~q."] {
        let g = load(text);
        assert!(g.base.len() <= 4);
        let report = modelcheck::unrestricted_models(&g, DEFAULT_CAP).unwrap();
        assert!(report.models >= 1, "{text}");
        assert_eq!(report.ill_formed, 0, "{text}");
    }
}
