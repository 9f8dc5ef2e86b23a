//! Grounding of rule schemas, the Herbrand base, and structural validation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::syntax::{Atom, Literal, Rule, RuleKind, Signature, SourceTheory, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundingError {
    #[error("rule `{label}` contains variables but the theory has no constants to instantiate them")]
    NoConstants { label: String },
    #[error("predicate `{predicate}` is used with inconsistent arities")]
    ArityClash { predicate: String },
    #[error("`{what}` is not ground")]
    NotGround { what: String },
}

/// All ground literals, both signs, over a finite signature.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HerbrandBase {
    literals: BTreeSet<Literal>,
}

impl HerbrandBase {
    /// Every literal `p(c1..cn)` and `~p(c1..cn)` for the signature's predicates and constants.
    pub fn from_signature(sig: &Signature) -> Self {
        let consts: Vec<&String> = sig.constants.iter().collect();
        let mut literals = BTreeSet::new();
        for (pred, &arity) in &sig.predicates {
            for tuple in tuples(&consts, arity) {
                let atom = Atom::ground(pred.as_str(), tuple.into_iter().cloned());
                literals.insert(Literal::positive(atom.clone()));
                literals.insert(Literal::negative(atom));
            }
        }
        HerbrandBase { literals }
    }

    /// A base containing the given literals and their complements.
    pub fn closure_of<'a>(lits: impl IntoIterator<Item = &'a Literal>) -> Self {
        let mut base = HerbrandBase::default();
        base.extend(lits);
        base
    }

    /// Adds literals together with their complements.
    pub fn extend<'a>(&mut self, lits: impl IntoIterator<Item = &'a Literal>) {
        for l in lits {
            self.literals.insert(l.complement());
            self.literals.insert(l.clone());
        }
    }

    pub fn contains(&self, lit: &Literal) -> bool {
        self.literals.contains(lit)
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Literal> {
        self.literals.iter()
    }
}

fn tuples<'a>(consts: &[&'a String], arity: usize) -> Vec<Vec<&'a String>> {
    let mut out: Vec<Vec<&String>> = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                consts.iter().map(move |c| {
                    let mut t = prefix.clone();
                    t.push(*c);
                    t
                })
            })
            .collect();
    }
    out
}

/// A variable-free theory together with its signature and Herbrand base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTheory {
    pub facts: BTreeSet<Literal>,
    pub rules: Vec<Rule>,
    /// `(superior, inferior)` pairs over ground rule labels.
    pub superiority: Vec<(String, String)>,
    pub predicates: BTreeMap<String, usize>,
    pub constants: BTreeSet<String>,
    pub base: HerbrandBase,
}

impl GroundTheory {
    /// Builds a ground theory from already-ground parts. Duplicate facts and
    /// duplicate superiority pairs are collapsed.
    pub fn new(
        facts: impl IntoIterator<Item = Literal>,
        rules: Vec<Rule>,
        superiority: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, GroundingError> {
        let facts: BTreeSet<Literal> = facts.into_iter().collect();
        let mut sig = Signature::default();
        for f in &facts {
            if !f.is_ground() {
                return Err(GroundingError::NotGround { what: f.to_string() });
            }
            sig.observe(f).map_err(|_| GroundingError::ArityClash {
                predicate: f.atom.predicate.clone(),
            })?;
        }
        for r in &rules {
            if !r.is_ground() {
                return Err(GroundingError::NotGround { what: r.to_string() });
            }
            for l in r.literals() {
                sig.observe(l).map_err(|_| GroundingError::ArityClash {
                    predicate: l.atom.predicate.clone(),
                })?;
            }
        }
        let mut seen = BTreeSet::new();
        let superiority = superiority.into_iter().filter(|p| seen.insert(p.clone())).collect();
        let base = HerbrandBase::from_signature(&sig);
        Ok(GroundTheory {
            facts,
            rules,
            superiority,
            predicates: sig.predicates,
            constants: sig.constants,
            base,
        })
    }

    pub fn empty() -> Self {
        GroundTheory::new([], Vec::new(), []).expect("empty theory is ground")
    }

    pub fn rule(&self, label: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.label == label)
    }
}

/// Instantiates every rule schema once per assignment of the theory's
/// constants to its variables.
///
/// Instance labels are `<schema>#<c1,...,ck>` with variables in first-occurrence
/// order; variable-free schemas keep their label. Superiority between schemas
/// becomes the cross product of their instances.
pub fn ground(theory: &SourceTheory) -> Result<GroundTheory, GroundingError> {
    let sig = theory
        .signature()
        .map_err(|predicate| GroundingError::ArityClash { predicate })?;
    for f in &theory.facts {
        if !f.is_ground() {
            return Err(GroundingError::NotGround { what: f.to_string() });
        }
    }
    let consts: Vec<&String> = sig.constants.iter().collect();

    let mut rules = Vec::new();
    let mut instances: HashMap<&str, Vec<String>> = HashMap::new();
    for schema in &theory.rules {
        let vars = schema.variables();
        if vars.is_empty() {
            instances.entry(&schema.label).or_default().push(schema.label.clone());
            rules.push(schema.clone());
            continue;
        }
        if consts.is_empty() {
            return Err(GroundingError::NoConstants {
                label: schema.label.clone(),
            });
        }
        for tuple in tuples(&consts, vars.len()) {
            let binding: HashMap<&str, &String> =
                vars.iter().map(String::as_str).zip(tuple.iter().copied()).collect();
            let subst = |l: &Literal| Literal {
                negated: l.negated,
                atom: Atom::new(
                    l.atom.predicate.clone(),
                    l.atom
                        .args
                        .iter()
                        .map(|t| match t {
                            Term::Var(v) => Term::Const(binding[v.as_str()].clone()),
                            c => c.clone(),
                        })
                        .collect(),
                ),
            };
            let suffix = tuple.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(",");
            let label = format!("{}#{}", schema.label, suffix);
            instances.entry(&schema.label).or_default().push(label.clone());
            rules.push(Rule::new(
                label,
                schema.kind,
                schema.body.iter().map(subst).collect(),
                subst(&schema.head),
            ));
        }
    }

    let mut superiority = Vec::new();
    for (hi, lo) in &theory.superiority {
        // Undeclared labels are carried through so validation can name them.
        let his = instances.get(hi.as_str()).cloned().unwrap_or_else(|| vec![hi.clone()]);
        let los = instances.get(lo.as_str()).cloned().unwrap_or_else(|| vec![lo.clone()]);
        for h in &his {
            for l in &los {
                superiority.push((h.clone(), l.clone()));
            }
        }
    }

    GroundTheory::new(theory.facts.iter().cloned(), rules, superiority)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationWarning {
    /// The pair relates rules whose heads are not complementary, so inference never consults it.
    NonConflictingSuperiority { superior: String, inferior: String },
    /// Reported instead of an error when cyclic superiority is allowed.
    SuperiorityCycle { labels: Vec<String> },
}

impl fmt::Display for ValidationWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationWarning::NonConflictingSuperiority { superior, inferior } => write!(
                f,
                "superiority {superior} > {inferior} has no effect: heads do not conflict"
            ),
            ValidationWarning::SuperiorityCycle { labels } => {
                write!(f, "superiority cycle: {}", labels.join(" > "))
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub warnings: Vec<ValidationWarning>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("duplicate rule label `{0}`")]
    DuplicateLabel(String),
    #[error("superiority refers to undeclared rule label `{0}`")]
    DanglingLabel(String),
    #[error("superiority relation is cyclic: {}", .0.join(" > "))]
    Cycle(Vec<String>),
}

/// Checks label uniqueness, superiority references and acyclicity.
pub fn validate(g: &GroundTheory, allow_cyclic_superiority: bool) -> Result<ValidationReport, ValidationError> {
    let mut by_label: HashMap<&str, &Rule> = HashMap::new();
    for r in &g.rules {
        if by_label.insert(&r.label, r).is_some() {
            return Err(ValidationError::DuplicateLabel(r.label.clone()));
        }
    }
    for (hi, lo) in &g.superiority {
        for l in [hi, lo] {
            if !by_label.contains_key(l.as_str()) {
                return Err(ValidationError::DanglingLabel(l.clone()));
            }
        }
    }

    let mut report = ValidationReport::default();
    if let Some(cycle) = find_cycle(&g.superiority) {
        if !allow_cyclic_superiority {
            return Err(ValidationError::Cycle(cycle));
        }
        report.warnings.push(ValidationWarning::SuperiorityCycle { labels: cycle });
    }
    for (hi, lo) in &g.superiority {
        if by_label[hi.as_str()].head != by_label[lo.as_str()].head.complement() {
            report.warnings.push(ValidationWarning::NonConflictingSuperiority {
                superior: hi.clone(),
                inferior: lo.clone(),
            });
        }
    }
    Ok(report)
}

/// Returns the labels along some cycle (first label repeated at the end), if any.
fn find_cycle(pairs: &[(String, String)]) -> Option<Vec<String>> {
    let mut succ: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (a, b) in pairs {
        succ.entry(a).or_default().push(b);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: HashMap<&str, u8> = HashMap::new();
    for &start in succ.keys() {
        if state.get(start).copied().unwrap_or(0) != 0 {
            continue;
        }
        let mut path: Vec<&str> = vec![start];
        let mut stack: Vec<(&str, usize)> = vec![(start, 0)];
        state.insert(start, 1);
        while let Some((node, idx)) = stack.last_mut() {
            let next = succ.get(*node).and_then(|v| v.get(*idx)).copied();
            *idx += 1;
            match next {
                Some(n) => match state.get(n).copied().unwrap_or(0) {
                    0 => {
                        state.insert(n, 1);
                        stack.push((n, 0));
                        path.push(n);
                    }
                    1 => {
                        let from = path.iter().position(|&p| p == n).unwrap_or(0);
                        let mut cycle: Vec<String> = path[from..].iter().map(|s| s.to_string()).collect();
                        cycle.push(n.to_string());
                        return Some(cycle);
                    }
                    _ => {}
                },
                None => {
                    state.insert(node, 2);
                    stack.pop();
                    path.pop();
                }
            }
        }
    }
    None
}

/// Rules of the given kinds whose head is `head`.
pub fn rules_for<'g>(g: &'g GroundTheory, kinds: &[RuleKind], head: &Literal) -> Vec<&'g Rule> {
    g.rules
        .iter()
        .filter(|r| kinds.contains(&r.kind) && &r.head == head)
        .collect()
}

/// The theory's Herbrand base extended with `extra` literals and their complements.
pub fn herbrand_base<'a>(g: &GroundTheory, extra: impl IntoIterator<Item = &'a Literal>) -> HerbrandBase {
    let mut base = g.base.clone();
    base.extend(extra);
    base
}
