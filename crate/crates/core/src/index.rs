//! Integer-indexed view of a ground theory over a chosen base.

use std::collections::HashMap;

use crate::ground::{GroundTheory, HerbrandBase};
use crate::syntax::{Atom, Literal, RuleKind};

#[derive(Debug, Clone)]
pub struct IndexedRule {
    pub label: String,
    pub kind: RuleKind,
    pub head: usize,
    pub body: Vec<usize>,
}

/// Literals and rules of a ground theory, addressed by position.
///
/// Literal ids follow the base's canonical order; rule ids follow the theory's
/// rule order. Superiority is kept only between rules with complementary heads
/// whose superior side is strict or defeasible, which is the only form the
/// inference conditions consult.
#[derive(Debug, Clone)]
pub struct TheoryIndex {
    pub literals: Vec<Literal>,
    /// Ids of the positive and negative literal over each atom.
    lookup: HashMap<Atom, [usize; 2]>,
    pub complement: Vec<usize>,
    pub is_fact: Vec<bool>,
    pub rules: Vec<IndexedRule>,
    pub strict_by_head: Vec<Vec<usize>>,
    pub supportive_by_head: Vec<Vec<usize>>,
    pub all_by_head: Vec<Vec<usize>>,
    /// Rules whose body mentions the literal.
    pub occurrences: Vec<Vec<usize>>,
    /// For rule `s`: supportive rules `t` with head `~head(s)` and `t > s`.
    pub superior_to: Vec<Vec<usize>>,
    /// For supportive rule `t`: rules `s` with head `~head(t)` and `t > s`.
    pub beats: Vec<Vec<usize>>,
}

impl TheoryIndex {
    /// Indexes `g` over its own base.
    pub fn new(g: &GroundTheory) -> Self {
        Self::with_base(g, &g.base)
    }

    /// Indexes `g` over `base`, which must contain every literal of the theory.
    pub fn with_base(g: &GroundTheory, base: &HerbrandBase) -> Self {
        let mut literals: Vec<Literal> = Vec::with_capacity(base.len());
        let mut lookup: HashMap<Atom, [usize; 2]> = HashMap::with_capacity(base.len() / 2);
        let mut intern = |l: &Literal, literals: &mut Vec<Literal>| -> usize {
            if let Some(ids) = lookup.get(&l.atom) {
                return ids[l.negated as usize];
            }
            let ids = [literals.len(), literals.len() + 1];
            literals.push(Literal::positive(l.atom.clone()));
            literals.push(Literal::negative(l.atom.clone()));
            lookup.insert(l.atom.clone(), ids);
            ids[l.negated as usize]
        };
        for l in base.iter() {
            intern(l, &mut literals);
        }

        let mut rules = Vec::with_capacity(g.rules.len());
        for r in &g.rules {
            let head = intern(&r.head, &mut literals);
            let body = r.body.iter().map(|b| intern(b, &mut literals)).collect();
            rules.push(IndexedRule {
                label: r.label.clone(),
                kind: r.kind,
                head,
                body,
            });
        }
        let facts: Vec<usize> = g.facts.iter().map(|f| intern(f, &mut literals)).collect();

        let n = literals.len();
        let complement = (0..n).map(|i| i ^ 1).collect();
        let mut is_fact = vec![false; n];
        for f in facts {
            is_fact[f] = true;
        }
        let mut strict_by_head = vec![Vec::new(); n];
        let mut supportive_by_head = vec![Vec::new(); n];
        let mut all_by_head = vec![Vec::new(); n];
        let mut occurrences = vec![Vec::new(); n];
        for (i, r) in rules.iter().enumerate() {
            if r.kind == RuleKind::Strict {
                strict_by_head[r.head].push(i);
            }
            if r.kind.is_supportive() {
                supportive_by_head[r.head].push(i);
            }
            all_by_head[r.head].push(i);
            for &b in &r.body {
                occurrences[b].push(i);
            }
        }

        let mut by_label: HashMap<&str, Vec<usize>> = HashMap::new();
        for (i, r) in g.rules.iter().enumerate().filter(|_| !g.superiority.is_empty()) {
            by_label.entry(r.label.as_str()).or_default().push(i);
        }
        let mut index = TheoryIndex {
            literals,
            lookup,
            complement,
            is_fact,
            strict_by_head,
            supportive_by_head,
            all_by_head,
            occurrences,
            superior_to: vec![Vec::new(); rules.len()],
            beats: vec![Vec::new(); rules.len()],
            rules,
        };
        for (hi, lo) in &g.superiority {
            let (Some(his), Some(los)) = (by_label.get(hi.as_str()), by_label.get(lo.as_str())) else {
                continue;
            };
            for &t in his {
                for &s in los {
                    let (rt, rs) = (&index.rules[t], &index.rules[s]);
                    if rt.kind.is_supportive()
                        && rt.head == index.complement[rs.head]
                        && !index.beats[t].contains(&s)
                    {
                        index.beats[t].push(s);
                        index.superior_to[s].push(t);
                    }
                }
            }
        }
        index
    }

    pub fn id(&self, lit: &Literal) -> Option<usize> {
        self.lookup.get(&lit.atom).map(|ids| ids[lit.negated as usize])
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }
}
