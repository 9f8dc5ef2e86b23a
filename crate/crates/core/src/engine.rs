//! Sceptical inference for DL by incremental propagation.
//!
//! Each of the four inference conditions is monotone in the set of conclusions
//! already derived, so the set of provable conclusions is a least fixpoint. It
//! is reached here with per-rule and per-literal counters: a conclusion is
//! appended to the log the moment its condition becomes true, and each logged
//! conclusion updates the counters of the rules it occurs in. Every counter is
//! decremented at most once per body occurrence or superiority pair, so a run
//! is linear in the size of the theory.
//!
//! The log is itself a derivation: each entry is justified by entries before it.

use thiserror::Error;

use crate::conclusion::{ConclusionSet, Tag, TaggedConclusion};
use crate::ground::{herbrand_base, GroundTheory, HerbrandBase};
use crate::index::TheoryIndex;
use crate::syntax::RuleKind;
use crate::truth::ThreeVal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("internal error: derived both {0} and its opposite")]
    Incoherent(TaggedConclusion),
    #[error("no derivation of {0}: it is not provable")]
    NoDerivation(TaggedConclusion),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proof {
    Proved,
    NotDerivable,
}

/// Result of one propagation run: final statuses plus the order of derivation.
#[derive(Debug, Clone)]
pub struct Run {
    pub index: TheoryIndex,
    pub definite: Vec<ThreeVal>,
    pub defeasible: Vec<ThreeVal>,
    /// `(tag, literal id)` in the order conclusions were established.
    pub log: Vec<(Tag, usize)>,
}

impl Run {
    pub fn conclusions(&self) -> ConclusionSet {
        // Ids follow canonical literal order, so presorting by id leaves the set
        // construction an already-sorted run.
        let mut sorted = self.log.clone();
        sorted.sort_unstable();
        sorted
            .iter()
            .map(|&(tag, l)| TaggedConclusion::new(tag, self.index.literals[l].clone()))
            .collect()
    }

    pub fn contains(&self, c: &TaggedConclusion) -> bool {
        let Some(l) = self.index.id(&c.literal) else {
            return false;
        };
        let v = if c.tag.is_definite() { self.definite[l] } else { self.defeasible[l] };
        v == ThreeVal::from(c.tag.is_positive())
    }
}

/// Final statuses and the derivation log of a propagation run.
struct Outcome {
    definite: Vec<ThreeVal>,
    defeasible: Vec<ThreeVal>,
    log: Vec<(Tag, usize)>,
}

struct Propagator<'a> {
    ix: &'a TheoryIndex,
    definite: Vec<ThreeVal>,
    defeasible: Vec<ThreeVal>,
    log: Vec<(Tag, usize)>,

    // per rule
    definite_pending: Vec<u32>,
    definite_blocked: Vec<bool>,
    defeasible_pending: Vec<u32>,
    defeasible_blocked: Vec<bool>,
    /// The rule, as an attacker, is discarded or beaten by an applicable superior rule.
    attack_handled: Vec<bool>,
    /// Superior supportive rules not yet blocked.
    superiors_open: Vec<u32>,

    // per literal
    strict_applicable: Vec<bool>,
    strict_open: Vec<u32>,
    supportive_applicable: Vec<bool>,
    supportive_open: Vec<u32>,
    attackers_open: Vec<u32>,
    /// Some applicable rule for `~q` has no unblocked superior rule for `q`.
    winning_attacker: Vec<bool>,
}

impl<'a> Propagator<'a> {
    fn new(ix: &'a TheoryIndex) -> Self {
        let n = ix.len();
        let m = ix.rules.len();
        let count = |v: &Vec<usize>| v.len() as u32;
        Propagator {
            ix,
            definite: vec![ThreeVal::Undefined; n],
            defeasible: vec![ThreeVal::Undefined; n],
            log: Vec::with_capacity(2 * n),
            definite_pending: ix.rules.iter().map(|r| r.body.len() as u32).collect(),
            definite_blocked: vec![false; m],
            defeasible_pending: ix.rules.iter().map(|r| r.body.len() as u32).collect(),
            defeasible_blocked: vec![false; m],
            attack_handled: vec![false; m],
            superiors_open: ix.superior_to.iter().map(count).collect(),
            strict_applicable: vec![false; n],
            strict_open: ix.strict_by_head.iter().map(count).collect(),
            supportive_applicable: vec![false; n],
            supportive_open: ix.supportive_by_head.iter().map(count).collect(),
            attackers_open: (0..n).map(|q| count(&ix.all_by_head[ix.complement[q]])).collect(),
            winning_attacker: vec![false; n],
        }
    }

    fn run(mut self) -> Result<Outcome, EngineError> {
        let ix = self.ix;
        for (r, rule) in ix.rules.iter().enumerate() {
            if rule.body.is_empty() {
                if rule.kind == RuleKind::Strict {
                    self.strict_applicable[rule.head] = true;
                }
                self.rule_applicable(r)?;
            }
        }
        for q in 0..ix.len() {
            self.try_fire(q)?;
        }
        let mut cursor = 0;
        while cursor < self.log.len() {
            let (tag, lit) = self.log[cursor];
            cursor += 1;
            self.propagate(tag, lit)?;
        }
        Ok(Outcome {
            definite: self.definite,
            defeasible: self.defeasible,
            log: self.log,
        })
    }

    fn set(&mut self, tag: Tag, q: usize) -> Result<(), EngineError> {
        let slot = if tag.is_definite() {
            &mut self.definite[q]
        } else {
            &mut self.defeasible[q]
        };
        let value = ThreeVal::from(tag.is_positive());
        match *slot {
            ThreeVal::Undefined => {
                *slot = value;
                self.log.push((tag, q));
                Ok(())
            }
            v if v == value => Ok(()),
            _ => Err(EngineError::Incoherent(TaggedConclusion::new(
                tag,
                self.ix.literals[q].clone(),
            ))),
        }
    }

    /// Checks all four conditions for `q`; each check is constant time.
    fn try_fire(&mut self, q: usize) -> Result<(), EngineError> {
        let nq = self.ix.complement[q];
        if self.definite[q] == ThreeVal::Undefined {
            if self.ix.is_fact[q] || self.strict_applicable[q] {
                self.set(Tag::PlusDelta, q)?;
            } else if self.strict_open[q] == 0 {
                self.set(Tag::MinusDelta, q)?;
            }
        }
        if self.defeasible[q] == ThreeVal::Undefined {
            let definite = self.definite[q];
            if definite == ThreeVal::True
                || (self.supportive_applicable[q]
                    && self.definite[nq] == ThreeVal::False
                    && self.attackers_open[q] == 0)
            {
                self.set(Tag::PlusPartial, q)?;
            } else if definite == ThreeVal::False
                && (self.supportive_open[q] == 0
                    || self.definite[nq] == ThreeVal::True
                    || self.winning_attacker[q])
            {
                self.set(Tag::MinusPartial, q)?;
            }
        }
        Ok(())
    }

    fn propagate(&mut self, tag: Tag, a: usize) -> Result<(), EngineError> {
        let ix = self.ix;
        match tag {
            Tag::PlusDelta => {
                for &r in &ix.occurrences[a] {
                    if ix.rules[r].kind == RuleKind::Strict {
                        self.definite_pending[r] -= 1;
                        if self.definite_pending[r] == 0 {
                            let h = ix.rules[r].head;
                            self.strict_applicable[h] = true;
                            self.try_fire(h)?;
                        }
                    }
                }
                self.try_fire(a)?;
                self.try_fire(ix.complement[a])?;
            }
            Tag::MinusDelta => {
                for &r in &ix.occurrences[a] {
                    if ix.rules[r].kind == RuleKind::Strict && !self.definite_blocked[r] {
                        self.definite_blocked[r] = true;
                        let h = ix.rules[r].head;
                        self.strict_open[h] -= 1;
                        self.try_fire(h)?;
                    }
                }
                self.try_fire(a)?;
                self.try_fire(ix.complement[a])?;
            }
            Tag::PlusPartial => {
                for &r in &ix.occurrences[a] {
                    self.defeasible_pending[r] -= 1;
                    if self.defeasible_pending[r] == 0 {
                        self.rule_applicable(r)?;
                    }
                }
            }
            Tag::MinusPartial => {
                for &r in &ix.occurrences[a] {
                    if !self.defeasible_blocked[r] {
                        self.rule_blocked(r)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Every body literal of `r` is `+d`.
    fn rule_applicable(&mut self, r: usize) -> Result<(), EngineError> {
        let ix = self.ix;
        let h = ix.rules[r].head;
        if ix.rules[r].kind.is_supportive() {
            self.supportive_applicable[h] = true;
            for &s in &ix.beats[r] {
                if !self.attack_handled[s] {
                    self.attack_handled[s] = true;
                    self.attackers_open[h] -= 1;
                }
            }
            self.try_fire(h)?;
        }
        if self.superiors_open[r] == 0 {
            let target = ix.complement[h];
            self.winning_attacker[target] = true;
            self.try_fire(target)?;
        }
        Ok(())
    }

    /// Some body literal of `r` is `-d`.
    fn rule_blocked(&mut self, r: usize) -> Result<(), EngineError> {
        let ix = self.ix;
        self.defeasible_blocked[r] = true;
        let h = ix.rules[r].head;
        if ix.rules[r].kind.is_supportive() {
            self.supportive_open[h] -= 1;
            self.try_fire(h)?;
            for &s in &ix.beats[r] {
                self.superiors_open[s] -= 1;
                if self.superiors_open[s] == 0 && self.defeasible_pending[s] == 0 {
                    self.winning_attacker[h] = true;
                    self.try_fire(h)?;
                }
            }
        }
        if !self.attack_handled[r] {
            self.attack_handled[r] = true;
            let target = ix.complement[h];
            self.attackers_open[target] -= 1;
            self.try_fire(target)?;
        }
        Ok(())
    }
}

/// Runs propagation over the theory's own Herbrand base.
pub fn run(g: &GroundTheory) -> Result<Run, EngineError> {
    run_over(g, &g.base)
}

/// Runs propagation over `base`, which may extend the theory's own base.
pub fn run_over(g: &GroundTheory, base: &HerbrandBase) -> Result<Run, EngineError> {
    let ix = TheoryIndex::with_base(g, base);
    let out = Propagator::new(&ix).run()?;
    Ok(Run {
        index: ix,
        definite: out.definite,
        defeasible: out.defeasible,
        log: out.log,
    })
}

/// All conclusions provable in `g` about literals of its Herbrand base.
pub fn derive_all(g: &GroundTheory) -> Result<ConclusionSet, EngineError> {
    Ok(run(g)?.conclusions())
}

/// Decides `g ⊢ c`, extending the base with `c`'s literal when needed.
pub fn prove(g: &GroundTheory, c: &TaggedConclusion) -> Result<Proof, EngineError> {
    let run = if g.base.contains(&c.literal) {
        run(g)?
    } else {
        run_over(g, &herbrand_base(g, [&c.literal]))?
    };
    Ok(if run.contains(c) { Proof::Proved } else { Proof::NotDerivable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::ground;
    use crate::parser::{parse_conclusion, parse_theory};

    fn theory(src: &str) -> GroundTheory {
        ground(&parse_theory(src).unwrap()).unwrap()
    }

    fn set(items: &[&str]) -> ConclusionSet {
        items.iter().map(|s| parse_conclusion(s).unwrap()).collect()
    }

    #[test]
    fn self_supporting_rule_leaves_p_undefined() {
        let out = derive_all(&theory("r: p => p.")).unwrap();
        assert_eq!(out, set(&["-D p", "-D ~p", "-d ~p"]));
    }

    #[test]
    fn unresolved_conflict_refutes_both() {
        let out = derive_all(&theory("r1: => p. r2: => ~p.")).unwrap();
        assert_eq!(out, set(&["-D p", "-D ~p", "-d p", "-d ~p"]));
    }

    #[test]
    fn superiority_resolves_conflict() {
        let out = derive_all(&theory("r1: => p. r2: => ~p. r1 > r2.")).unwrap();
        assert_eq!(out, set(&["-D p", "-D ~p", "+d p", "-d ~p"]));
    }

    #[test]
    fn team_defeat() {
        // Each attacker is beaten by some supportive rule, not necessarily the same one.
        let src = "a. b. t1: a => p. t2: b => p. s1: a => ~p. s2: b => ~p. t1 > s1. t2 > s2.";
        let out = derive_all(&theory(src)).unwrap();
        assert!(out.has(Tag::PlusPartial, &crate::syntax::Literal::prop("p")));
        assert!(out.has(Tag::MinusPartial, &crate::syntax::Literal::prop("~p")));
    }

    #[test]
    fn defeater_blocks_without_supporting() {
        let out = derive_all(&theory("r: => p. d: ~> ~p.")).unwrap();
        assert_eq!(out, set(&["-D p", "-D ~p", "-d p", "-d ~p"]));
    }

    #[test]
    fn strict_chain_and_definite_conflict() {
        let out = derive_all(&theory("a. r: a -> b. s: => ~b.")).unwrap();
        assert!(out.has(Tag::PlusDelta, &crate::syntax::Literal::prop("b")));
        assert!(out.has(Tag::PlusPartial, &crate::syntax::Literal::prop("b")));
        assert!(out.has(Tag::MinusPartial, &crate::syntax::Literal::prop("~b")));
    }

    #[test]
    fn prove_on_empty_theory_extends_base() {
        let g = GroundTheory::empty();
        for (c, expect) in [("-d q", Proof::Proved), ("-D q", Proof::Proved), ("+d q", Proof::NotDerivable)] {
            assert_eq!(prove(&g, &parse_conclusion(c).unwrap()).unwrap(), expect, "{c}");
        }
    }

    #[test]
    fn prove_circular() {
        let g = theory("r: p => p.");
        for c in ["+d p", "-d p"] {
            assert_eq!(prove(&g, &parse_conclusion(c).unwrap()).unwrap(), Proof::NotDerivable);
        }
    }

    #[test]
    fn log_has_no_duplicates() {
        let g = theory(include_str!("../tests/fixtures/bird.dl"));
        let run = run(&g).unwrap();
        let set = run.conclusions();
        assert_eq!(set.len(), run.log.len());
    }
}
