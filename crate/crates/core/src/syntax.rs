//! Terms, atoms, literals and rules, in both schematic and ground form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A term is either a constant (lowercase) or a variable (uppercase).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Const(s) | Term::Var(s) => s,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `p(t1, ..., tn)`; zero-arity atoms are plain propositions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    /// A zero-arity atom.
    pub fn prop(name: impl Into<String>) -> Self {
        Atom::new(name, Vec::new())
    }

    /// A ground atom over the given constants.
    pub fn ground<S: Into<String>>(predicate: impl Into<String>, consts: impl IntoIterator<Item = S>) -> Self {
        Atom::new(predicate, consts.into_iter().map(|c| Term::Const(c.into())).collect())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        !self.args.iter().any(Term::is_var)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// An atom or its classical negation. Ordered by atom first, positive before negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub fn positive(atom: Atom) -> Self {
        Literal { atom, negated: false }
    }

    pub fn negative(atom: Atom) -> Self {
        Literal { atom, negated: true }
    }

    /// Propositional shorthand: `Literal::prop("p")`, `Literal::prop("~p")`.
    pub fn prop(name: &str) -> Self {
        match name.strip_prefix('~') {
            Some(rest) => Literal::negative(Atom::prop(rest)),
            None => Literal::positive(Atom::prop(name)),
        }
    }

    /// The complementary literal `~q`.
    pub fn complement(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            negated: !self.negated,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.atom.is_ground()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Strict,
    Defeasible,
    Defeater,
}

impl RuleKind {
    pub const ALL: [RuleKind; 3] = [RuleKind::Strict, RuleKind::Defeasible, RuleKind::Defeater];
    /// Strict and defeasible rules: the ones that can support a conclusion.
    pub const SUPPORTIVE: [RuleKind; 2] = [RuleKind::Strict, RuleKind::Defeasible];

    pub fn arrow(self) -> &'static str {
        match self {
            RuleKind::Strict => "->",
            RuleKind::Defeasible => "=>",
            RuleKind::Defeater => "~>",
        }
    }

    pub fn is_supportive(self) -> bool {
        !matches!(self, RuleKind::Defeater)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub label: String,
    pub kind: RuleKind,
    /// Antecedent, kept duplicate-free in first-occurrence order.
    pub body: Vec<Literal>,
    pub head: Literal,
}

impl Rule {
    pub fn new(label: impl Into<String>, kind: RuleKind, body: Vec<Literal>, head: Literal) -> Self {
        let mut seen = BTreeSet::new();
        let body = body.into_iter().filter(|l| seen.insert(l.clone())).collect();
        Rule {
            label: label.into(),
            kind,
            body,
            head,
        }
    }

    pub fn strict(label: impl Into<String>, body: Vec<Literal>, head: Literal) -> Self {
        Rule::new(label, RuleKind::Strict, body, head)
    }

    pub fn defeasible(label: impl Into<String>, body: Vec<Literal>, head: Literal) -> Self {
        Rule::new(label, RuleKind::Defeasible, body, head)
    }

    pub fn defeater(label: impl Into<String>, body: Vec<Literal>, head: Literal) -> Self {
        Rule::new(label, RuleKind::Defeater, body, head)
    }

    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.body.iter().chain(std::iter::once(&self.head))
    }

    /// Distinct variables in first-occurrence order (body, then head).
    pub fn variables(&self) -> Vec<String> {
        let mut vars: Vec<String> = Vec::new();
        for lit in self.literals() {
            for t in &lit.atom.args {
                if let Term::Var(v) = t {
                    if !vars.contains(v) {
                        vars.push(v.clone());
                    }
                }
            }
        }
        vars
    }

    pub fn is_ground(&self) -> bool {
        self.literals().all(Literal::is_ground)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.label)?;
        for (i, l) in self.body.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { ", " })?;
            write!(f, "{l}")?;
        }
        write!(f, " {} {}.", self.kind.arrow(), self.head)
    }
}

/// Predicate arities and constants used by a theory.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub predicates: BTreeMap<String, usize>,
    pub constants: BTreeSet<String>,
}

impl Signature {
    /// Records the literal's predicate and constants. Returns the previously
    /// recorded arity on a clash.
    pub fn observe(&mut self, lit: &Literal) -> Result<(), usize> {
        let arity = lit.atom.arity();
        match self.predicates.get(&lit.atom.predicate) {
            Some(&known) if known != arity => return Err(known),
            Some(_) => {}
            None => {
                self.predicates.insert(lit.atom.predicate.clone(), arity);
            }
        }
        for t in &lit.atom.args {
            if let Term::Const(c) = t {
                self.constants.insert(c.clone());
            }
        }
        Ok(())
    }
}

/// A theory as written: facts, possibly schematic rules and a superiority
/// relation over rule labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceTheory {
    pub facts: Vec<Literal>,
    pub rules: Vec<Rule>,
    /// `(superior, inferior)` label pairs.
    pub superiority: Vec<(String, String)>,
}

impl SourceTheory {
    pub fn is_empty(&self) -> bool {
        self.facts.is_empty() && self.rules.is_empty() && self.superiority.is_empty()
    }

    /// Signature collected from facts and rules. Fails on the first arity clash,
    /// naming the predicate.
    pub fn signature(&self) -> Result<Signature, String> {
        let mut sig = Signature::default();
        let lits = self.facts.iter().chain(self.rules.iter().flat_map(Rule::literals));
        for lit in lits {
            sig.observe(lit).map_err(|_| lit.atom.predicate.clone())?;
        }
        Ok(sig)
    }
}
