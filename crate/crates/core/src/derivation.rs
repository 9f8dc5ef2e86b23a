//! Derivations: extraction from an engine run, and an independent replay checker.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::conclusion::{Tag, TaggedConclusion};
use crate::engine::{self, EngineError};
use crate::ground::{herbrand_base, rules_for, GroundTheory};
use crate::index::TheoryIndex;
use crate::syntax::{Literal, Rule, RuleKind};

/// A proof `P(1..n)`: each element justified by the elements before it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<TaggedConclusion>,
}

impl Derivation {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> Option<&TaggedConclusion> {
        self.steps.last()
    }
}

impl FromIterator<TaggedConclusion> for Derivation {
    fn from_iter<I: IntoIterator<Item = TaggedConclusion>>(iter: I) -> Self {
        Derivation {
            steps: iter.into_iter().collect(),
        }
    }
}

/// Which clause of which inference rule licenses a step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// `+D`: the literal is a fact.
    Fact,
    /// `+D`: a strict rule with every body literal `+D`.
    StrictRule(String),
    /// `-D`: not a fact, and every strict rule has a `-D` body literal.
    NoStrictSupport,
    /// `+d` (1): the literal is `+D`.
    Definite,
    /// `+d` (2): the named rule applies, the complement is `-D`, and every attack is countered.
    Supported(String),
    /// `-d` (2.1): every supportive rule has a `-d` body literal.
    NoSupportiveRule,
    /// `-d` (2.2): the complement is `+D`.
    ComplementDefinite,
    /// `-d` (2.3): the named rule for the complement applies and no applicable superior rule beats it.
    UndefeatedAttacker(String),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Fact => f.write_str("fact"),
            Justification::StrictRule(r) => write!(f, "strict rule {r}"),
            Justification::NoStrictSupport => f.write_str("no applicable strict rule"),
            Justification::Definite => f.write_str("(1) definitely provable"),
            Justification::Supported(r) => write!(f, "(2) supported by {r}, all attacks countered"),
            Justification::NoSupportiveRule => f.write_str("(2.1) no applicable supportive rule"),
            Justification::ComplementDefinite => f.write_str("(2.2) complement definitely provable"),
            Justification::UndefeatedAttacker(s) => write!(f, "(2.3) undefeated attack by {s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivationCheck {
    Valid,
    /// 1-based position of the first unjustified step.
    InvalidAt { index: usize, reason: String },
}

/// Finds the inference-rule clause that allows appending `c` after `prefix`.
///
/// This works directly from the theory's rule list and superiority pairs and
/// shares no code with the propagation engine.
pub fn justify_step(
    g: &GroundTheory,
    prefix: &HashSet<TaggedConclusion>,
    c: &TaggedConclusion,
) -> Option<Justification> {
    let sup: HashSet<(&str, &str)> = g
        .superiority
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let has = |tag: Tag, l: &Literal| prefix.contains(&TaggedConclusion::new(tag, l.clone()));
    let all = |tag: Tag, r: &Rule| r.body.iter().all(|a| has(tag, a));
    let some = |tag: Tag, r: &Rule| r.body.iter().any(|a| has(tag, a));
    let q = &c.literal;
    let nq = q.complement();
    let supportive = rules_for(g, &RuleKind::SUPPORTIVE, q);
    let attackers = rules_for(g, &RuleKind::ALL, &nq);
    let beats = |t: &Rule, s: &Rule| sup.contains(&(t.label.as_str(), s.label.as_str()));

    match c.tag {
        Tag::PlusDelta => {
            if g.facts.contains(q) {
                return Some(Justification::Fact);
            }
            rules_for(g, &[RuleKind::Strict], q)
                .into_iter()
                .find(|r| all(Tag::PlusDelta, r))
                .map(|r| Justification::StrictRule(r.label.clone()))
        }
        Tag::MinusDelta => {
            let ok = !g.facts.contains(q)
                && rules_for(g, &[RuleKind::Strict], q)
                    .iter()
                    .all(|r| some(Tag::MinusDelta, r));
            ok.then_some(Justification::NoStrictSupport)
        }
        Tag::PlusPartial => {
            if has(Tag::PlusDelta, q) {
                return Some(Justification::Definite);
            }
            if !has(Tag::MinusDelta, &nq) {
                return None;
            }
            let countered = attackers.iter().all(|s| {
                some(Tag::MinusPartial, s)
                    || supportive.iter().any(|t| all(Tag::PlusPartial, t) && beats(t, s))
            });
            if !countered {
                return None;
            }
            supportive
                .iter()
                .find(|r| all(Tag::PlusPartial, r))
                .map(|r| Justification::Supported(r.label.clone()))
        }
        Tag::MinusPartial => {
            if !has(Tag::MinusDelta, q) {
                return None;
            }
            if supportive.iter().all(|r| some(Tag::MinusPartial, r)) {
                return Some(Justification::NoSupportiveRule);
            }
            if has(Tag::PlusDelta, &nq) {
                return Some(Justification::ComplementDefinite);
            }
            attackers
                .iter()
                .find(|s| {
                    all(Tag::PlusPartial, s)
                        && supportive.iter().all(|t| some(Tag::MinusPartial, t) || !beats(t, s))
                })
                .map(|s| Justification::UndefeatedAttacker(s.label.clone()))
        }
    }
}

/// Replays `d` step by step against the inference rules.
pub fn check_derivation(g: &GroundTheory, d: &Derivation) -> DerivationCheck {
    let mut prefix = HashSet::new();
    for (i, c) in d.steps.iter().enumerate() {
        if justify_step(g, &prefix, c).is_none() {
            return DerivationCheck::InvalidAt {
                index: i + 1,
                reason: format!("no inference rule allows {c} from the preceding steps"),
            };
        }
        prefix.insert(c.clone());
    }
    DerivationCheck::Valid
}

/// A derivation ending in `c`, built from the premises actually used by the engine.
pub fn explain(g: &GroundTheory, c: &TaggedConclusion) -> Result<Derivation, EngineError> {
    let run = if g.base.contains(&c.literal) {
        engine::run(g)?
    } else {
        engine::run_over(g, &herbrand_base(g, [&c.literal]))?
    };
    let ix = &run.index;
    let target = ix
        .id(&c.literal)
        .filter(|_| run.contains(c))
        .ok_or_else(|| EngineError::NoDerivation(c.clone()))?;

    let slot = |t: Tag| match t {
        Tag::PlusDelta => 0,
        Tag::MinusDelta => 1,
        Tag::PlusPartial => 2,
        Tag::MinusPartial => 3,
    };
    let mut position = vec![[usize::MAX; 4]; ix.len()];
    for (i, &(tag, l)) in run.log.iter().enumerate() {
        position[l][slot(tag)] = i;
    }

    let mut needed: BTreeSet<usize> = BTreeSet::new();
    let mut stack = vec![position[target][slot(c.tag)]];
    while let Some(step) = stack.pop() {
        if !needed.insert(step) {
            continue;
        }
        let (tag, q) = run.log[step];
        let before = |t: Tag, l: usize| position[l][slot(t)] < step;
        let premises = premises(ix, tag, q, &before).ok_or_else(|| {
            EngineError::Internal(format!(
                "logged conclusion {tag} {} has no justification",
                ix.literals[q]
            ))
        })?;
        for (t, l) in premises {
            stack.push(position[l][slot(t)]);
        }
    }
    Ok(needed
        .into_iter()
        .map(|i| {
            let (tag, l) = run.log[i];
            TaggedConclusion::new(tag, ix.literals[l].clone())
        })
        .collect())
}

/// Premises licensing `tag q`, chosen among conclusions for which `before` holds.
fn premises(
    ix: &TheoryIndex,
    tag: Tag,
    q: usize,
    before: &dyn Fn(Tag, usize) -> bool,
) -> Option<Vec<(Tag, usize)>> {
    let nq = ix.complement[q];
    let body = |r: usize| &ix.rules[r].body;
    let applicable = |t: Tag, r: usize| body(r).iter().all(|&a| before(t, a));
    let blocker = |t: Tag, r: usize| body(r).iter().copied().find(|&a| before(t, a));
    let mut out = Vec::new();
    match tag {
        Tag::PlusDelta => {
            if ix.is_fact[q] {
                return Some(out);
            }
            let r = ix.strict_by_head[q]
                .iter()
                .copied()
                .find(|&r| applicable(Tag::PlusDelta, r))?;
            out.extend(body(r).iter().map(|&a| (Tag::PlusDelta, a)));
        }
        Tag::MinusDelta => {
            for &r in &ix.strict_by_head[q] {
                out.push((Tag::MinusDelta, blocker(Tag::MinusDelta, r)?));
            }
        }
        Tag::PlusPartial => {
            if before(Tag::PlusDelta, q) {
                return Some(vec![(Tag::PlusDelta, q)]);
            }
            let r = ix.supportive_by_head[q]
                .iter()
                .copied()
                .find(|&r| applicable(Tag::PlusPartial, r))?;
            out.extend(body(r).iter().map(|&a| (Tag::PlusPartial, a)));
            out.push((Tag::MinusDelta, nq));
            for &s in &ix.all_by_head[nq] {
                if let Some(a) = blocker(Tag::MinusPartial, s) {
                    out.push((Tag::MinusPartial, a));
                } else {
                    let t = ix.superior_to[s]
                        .iter()
                        .copied()
                        .find(|&t| applicable(Tag::PlusPartial, t))?;
                    out.extend(body(t).iter().map(|&a| (Tag::PlusPartial, a)));
                }
            }
        }
        Tag::MinusPartial => {
            out.push((Tag::MinusDelta, q));
            let blockers: Option<Vec<usize>> = ix.supportive_by_head[q]
                .iter()
                .map(|&r| blocker(Tag::MinusPartial, r))
                .collect();
            if let Some(bs) = blockers {
                out.extend(bs.into_iter().map(|a| (Tag::MinusPartial, a)));
            } else if before(Tag::PlusDelta, nq) {
                out.push((Tag::PlusDelta, nq));
            } else {
                let (s, bs) = ix.all_by_head[nq].iter().copied().find_map(|s| {
                    if !applicable(Tag::PlusPartial, s) {
                        return None;
                    }
                    let bs: Option<Vec<usize>> = ix.superior_to[s]
                        .iter()
                        .map(|&t| blocker(Tag::MinusPartial, t))
                        .collect();
                    bs.map(|bs| (s, bs))
                })?;
                out.extend(body(s).iter().map(|&a| (Tag::PlusPartial, a)));
                out.extend(bs.into_iter().map(|a| (Tag::MinusPartial, a)));
            }
        }
    }
    Some(out)
}
