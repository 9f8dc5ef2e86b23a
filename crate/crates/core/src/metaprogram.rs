//! The DL metaprogram, specialised to a ground theory, and its Kunen semantics.
//!
//! Clauses, with `r`, `s`, `t` ranging over ground rules:
//!
//! ```text
//! definitely(q).                                            for each fact q
//! definitely(q) :- definitely(a1), ..., definitely(an).     strict r: a1..an -> q
//! defeasibly(q) :- definitely(q).                           every q in the base
//! defeasibly(q) :- not definitely(~q), defeasibly(a1), ..., defeasibly(an),
//!                  not overruled(r, q).                     supportive r: a1..an => q
//! overruled(r, q) :- defeasibly(u1), ..., defeasibly(um),
//!                    not defeated(s, ~q).                   supportive r for q, any s: u1..um ~> ~q
//! defeated(s, ~q) :- defeasibly(v1), ..., defeasibly(vk).   supportive t: v1..vk => q, t > s
//! ```
//!
//! The classification predicates and rule lists of the schematic program are
//! resolved at translation time, so every clause here is ground.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::conclusion::ConclusionSet;
use crate::ground::{GroundTheory, HerbrandBase};
use crate::index::TheoryIndex;
use crate::syntax::Literal;
use crate::truth::ThreeVal;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetaAtom {
    Definitely(Literal),
    Defeasibly(Literal),
    Overruled(String, Literal),
    Defeated(String, Literal),
}

impl fmt::Display for MetaAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetaAtom::Definitely(l) => write!(f, "definitely({l})"),
            MetaAtom::Defeasibly(l) => write!(f, "defeasibly({l})"),
            MetaAtom::Overruled(r, l) => write!(f, "overruled({r}, {l})"),
            MetaAtom::Defeated(s, l) => write!(f, "defeated({s}, {l})"),
        }
    }
}

/// A body element: an atom id, possibly under negation as failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BodyAtom {
    pub atom: usize,
    pub negated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub head: usize,
    pub body: Vec<BodyAtom>,
}

/// Interned atoms shared between a program and its interpretations.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct AtomTable {
    atoms: Vec<MetaAtom>,
    ids: HashMap<MetaAtom, usize>,
}

impl AtomTable {
    fn intern(&mut self, a: MetaAtom) -> usize {
        if let Some(&i) = self.ids.get(&a) {
            return i;
        }
        self.ids.insert(a.clone(), self.atoms.len());
        self.atoms.push(a);
        self.atoms.len() - 1
    }

    pub fn id(&self, a: &MetaAtom) -> Option<usize> {
        self.ids.get(a).copied()
    }

    pub fn atom(&self, i: usize) -> &MetaAtom {
        &self.atoms[i]
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct GroundMetaProgram {
    pub table: Arc<AtomTable>,
    pub clauses: Vec<Clause>,
    by_head: Vec<Vec<usize>>,
    /// The base the program was translated over.
    pub base: HerbrandBase,
}

impl GroundMetaProgram {
    pub fn atoms(&self) -> usize {
        self.table.len()
    }

    pub fn clauses_for(&self, atom: &MetaAtom) -> impl Iterator<Item = &Clause> {
        let ids = self.table.id(atom).map(|i| self.by_head[i].as_slice()).unwrap_or(&[]);
        ids.iter().map(|&c| &self.clauses[c])
    }

    pub fn display_clause(&self, c: &Clause) -> String {
        let head = self.table.atom(c.head);
        if c.body.is_empty() {
            return format!("{head}.");
        }
        let body: Vec<String> = c
            .body
            .iter()
            .map(|b| {
                let a = self.table.atom(b.atom);
                if b.negated {
                    format!("not {a}")
                } else {
                    a.to_string()
                }
            })
            .collect();
        format!("{head} :- {}.", body.join(", "))
    }
}

impl fmt::Display for GroundMetaProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{}", self.display_clause(c))?;
        }
        Ok(())
    }
}

/// Total map from the program's atoms to `t`, `f`, `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeValuedInterpretation {
    table: Arc<AtomTable>,
    values: Vec<ThreeVal>,
}

impl ThreeValuedInterpretation {
    /// The starting point of the iteration: everything `u`.
    pub fn undefined(p: &GroundMetaProgram) -> Self {
        ThreeValuedInterpretation {
            table: Arc::clone(&p.table),
            values: vec![ThreeVal::Undefined; p.atoms()],
        }
    }

    pub fn get(&self, atom: &MetaAtom) -> Option<ThreeVal> {
        self.table.id(atom).map(|i| self.values[i])
    }

    pub fn value(&self, id: usize) -> ThreeVal {
        self.values[id]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MetaAtom, ThreeVal)> {
        self.values.iter().enumerate().map(|(i, &v)| (self.table.atom(i), v))
    }

    /// No atom defined here has a different value in `later`.
    pub fn below(&self, later: &ThreeValuedInterpretation) -> bool {
        self.values
            .iter()
            .zip(&later.values)
            .all(|(&a, &b)| b.refines(a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetaError {
    #[error("internal error: Kunen iteration did not converge within {0} steps")]
    NoConvergence(usize),
    #[error("internal error: Kunen iteration retracted the value of {0}")]
    NotMonotone(String),
}

/// Builds the ground metaprogram over the theory's Herbrand base.
pub fn translate(g: &GroundTheory) -> GroundMetaProgram {
    translate_over(g, &g.base)
}

pub fn translate_over(g: &GroundTheory, base: &HerbrandBase) -> GroundMetaProgram {
    let ix = TheoryIndex::with_base(g, base);
    let mut table = AtomTable::default();
    let lit = |i: usize| ix.literals[i].clone();
    let definitely: Vec<usize> = (0..ix.len())
        .map(|q| table.intern(MetaAtom::Definitely(lit(q))))
        .collect();
    let defeasibly: Vec<usize> = (0..ix.len())
        .map(|q| table.intern(MetaAtom::Defeasibly(lit(q))))
        .collect();
    let pos = |atom| BodyAtom { atom, negated: false };
    let neg = |atom| BodyAtom { atom, negated: true };

    let mut clauses = Vec::new();
    for q in (0..ix.len()).filter(|&q| ix.is_fact[q]) {
        clauses.push(Clause {
            head: definitely[q],
            body: Vec::new(),
        });
    }
    for r in ix.rules.iter().filter(|r| r.kind == crate::syntax::RuleKind::Strict) {
        clauses.push(Clause {
            head: definitely[r.head],
            body: r.body.iter().map(|&a| pos(definitely[a])).collect(),
        });
    }
    for q in 0..ix.len() {
        clauses.push(Clause {
            head: defeasibly[q],
            body: vec![pos(definitely[q])],
        });
    }
    for r in ix.rules.iter().filter(|r| r.kind.is_supportive()) {
        let q = r.head;
        let nq = ix.complement[q];
        let overruled = table.intern(MetaAtom::Overruled(r.label.clone(), lit(q)));
        let mut body = vec![neg(definitely[nq])];
        body.extend(r.body.iter().map(|&a| pos(defeasibly[a])));
        body.push(neg(overruled));
        clauses.push(Clause {
            head: defeasibly[q],
            body,
        });
        for &s in &ix.all_by_head[nq] {
            let attacker = &ix.rules[s];
            let defeated = table.intern(MetaAtom::Defeated(attacker.label.clone(), lit(nq)));
            let mut body: Vec<BodyAtom> = attacker.body.iter().map(|&u| pos(defeasibly[u])).collect();
            body.push(neg(defeated));
            clauses.push(Clause { head: overruled, body });
        }
    }
    for (s, attacker) in ix.rules.iter().enumerate() {
        for &t in &ix.superior_to[s] {
            let defeated = table.intern(MetaAtom::Defeated(attacker.label.clone(), lit(attacker.head)));
            clauses.push(Clause {
                head: defeated,
                body: ix.rules[t].body.iter().map(|&v| pos(defeasibly[v])).collect(),
            });
        }
    }

    let mut by_head = vec![Vec::new(); table.len()];
    for (i, c) in clauses.iter().enumerate() {
        by_head[c.head].push(i);
    }
    GroundMetaProgram {
        table: Arc::new(table),
        clauses,
        by_head,
        base: base.clone(),
    }
}

/// One application of the Kleene consequence operator: an atom is `t` if some
/// clause body is `t`, `f` if every clause body is `f` (or it has no clauses),
/// and `u` otherwise.
pub fn fitting_step(p: &GroundMetaProgram, i: &ThreeValuedInterpretation) -> ThreeValuedInterpretation {
    let eval_body = |c: &Clause| {
        c.body.iter().fold(ThreeVal::True, |acc, b| {
            let v = i.values[b.atom];
            acc.and(if b.negated { !v } else { v })
        })
    };
    let values = p
        .by_head
        .iter()
        .map(|clauses| {
            clauses
                .iter()
                .fold(ThreeVal::False, |acc, &c| acc.or(eval_body(&p.clauses[c])))
        })
        .collect();
    ThreeValuedInterpretation {
        table: Arc::clone(&p.table),
        values,
    }
}

/// Iterates [`fitting_step`] from the all-`u` interpretation to its fixpoint.
pub fn kunen_fixpoint(p: &GroundMetaProgram) -> Result<ThreeValuedInterpretation, MetaError> {
    let limit = p.atoms() + 1;
    let mut current = ThreeValuedInterpretation::undefined(p);
    for _ in 0..limit {
        let next = fitting_step(p, &current);
        if next == current {
            return Ok(current);
        }
        if let Some(i) = (0..p.atoms()).find(|&i| !next.values[i].refines(current.values[i])) {
            return Err(MetaError::NotMonotone(p.table.atom(i).to_string()));
        }
        current = next;
    }
    Err(MetaError::NoConvergence(limit))
}

/// Reads tagged conclusions off an interpretation: `definitely(q)` gives `+D`/`-D`,
/// `defeasibly(q)` gives `+d`/`-d`, and `u` gives nothing.
pub fn to_conclusions(i: &ThreeValuedInterpretation, base: &HerbrandBase) -> ConclusionSet {
    let mut out = ConclusionSet::new();
    for q in base.iter() {
        let d = i.get(&MetaAtom::Definitely(q.clone())).unwrap_or(ThreeVal::Undefined);
        let p = i.get(&MetaAtom::Defeasibly(q.clone())).unwrap_or(ThreeVal::Undefined);
        out.insert_statuses(q, d, p);
    }
    out
}

/// Translation, fixpoint and read-off in one call.
pub fn conclusions(g: &GroundTheory) -> Result<ConclusionSet, MetaError> {
    let p = translate(g);
    let fix = kunen_fixpoint(&p)?;
    Ok(to_conclusions(&fix, &g.base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::ground;
    use crate::parser::{parse_conclusion, parse_literal, parse_theory};

    fn theory(src: &str) -> GroundTheory {
        ground(&parse_theory(src).unwrap()).unwrap()
    }

    fn bird() -> GroundTheory {
        theory(include_str!("../tests/fixtures/bird.dl"))
    }

    fn l(s: &str) -> Literal {
        parse_literal(s).unwrap()
    }

    #[test]
    fn bird_guarded_defeasibly_clause() {
        let p = translate(&bird());
        let text = p.to_string();
        assert!(text.contains(
            "defeasibly(flies(tweety)) :- not definitely(~flies(tweety)), defeasibly(bird(tweety)), \
             not overruled(r2#tweety, flies(tweety))."
        ));
        assert!(text.contains("defeated(r2#tweety, flies(tweety)) :- defeasibly(brokenWing(tweety))."));
        assert!(text.contains("definitely(emu(ethel))."));
    }

    #[test]
    fn empty_program() {
        let g = GroundTheory::empty();
        let p = translate(&g);
        assert!(p.clauses.is_empty());
        let fix = kunen_fixpoint(&p).unwrap();
        assert_eq!(fix.get(&MetaAtom::Definitely(l("q"))), None);
        let p = translate_over(&g, &crate::ground::herbrand_base(&g, [&l("q")]));
        let fix = kunen_fixpoint(&p).unwrap();
        assert_eq!(fix.get(&MetaAtom::Definitely(l("q"))), Some(ThreeVal::False));
        assert_eq!(fix.get(&MetaAtom::Defeasibly(l("~q"))), Some(ThreeVal::False));
    }

    #[test]
    fn first_step_on_bird() {
        let p = translate(&bird());
        let step = fitting_step(&p, &ThreeValuedInterpretation::undefined(&p));
        assert_eq!(step.get(&MetaAtom::Definitely(l("emu(ethel)"))), Some(ThreeVal::True));
        assert_eq!(step.get(&MetaAtom::Definitely(l("brokenWing(ethel)"))), Some(ThreeVal::False));
        assert_eq!(step.get(&MetaAtom::Defeasibly(l("flies(tweety)"))), Some(ThreeVal::Undefined));
    }

    #[test]
    fn fixpoint_is_stable_and_monotone() {
        let p = translate(&bird());
        let fix = kunen_fixpoint(&p).unwrap();
        assert_eq!(fitting_step(&p, &fix), fix);
        assert_eq!(fix.get(&MetaAtom::Defeasibly(l("flies(tweety)"))), Some(ThreeVal::True));
        let mut cur = ThreeValuedInterpretation::undefined(&p);
        loop {
            let next = fitting_step(&p, &cur);
            assert!(cur.below(&next));
            if next == cur {
                break;
            }
            cur = next;
        }
    }

    #[test]
    fn circular_support_stays_undefined() {
        let p = translate(&theory("r: p => p."));
        let fix = kunen_fixpoint(&p).unwrap();
        assert_eq!(fix.get(&MetaAtom::Defeasibly(l("p"))), Some(ThreeVal::Undefined));
    }

    #[test]
    fn undefined_reads_as_nothing() {
        let g = bird();
        let p = translate(&g);
        assert!(to_conclusions(&ThreeValuedInterpretation::undefined(&p), &g.base).is_empty());
    }

    #[test]
    fn superiority_read_off() {
        let out = conclusions(&theory("r1: => p. r2: => ~p. r1 > r2.")).unwrap();
        let expected: ConclusionSet = ["+d p", "-d ~p", "-D p", "-D ~p"]
            .iter()
            .map(|s| parse_conclusion(s).unwrap())
            .collect();
        assert_eq!(out, expected);
    }
}
