//! Defeasible interpretations, the four model conditions, and brute-force
//! model enumeration over the Herbrand base.
//!
//! An interpretation assigns each base literal a pair of statuses: its
//! definite status (`I_Δ`) and its defeasible status (`I_∂`), each True,
//! False or Undefined. A model satisfies four biconditionals that mirror the
//! inference rules. The conclusions holding in every model are the theory's
//! logical consequences.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::conclusion::ConclusionSet;
use crate::ground::{GroundTheory, HerbrandBase};
use crate::index::TheoryIndex;
use crate::syntax::Literal;
use crate::truth::ThreeVal;

pub const DEFAULT_CAP: u64 = 2_000_000;

use ThreeVal::{False as F, True as T, Undefined as U};

/// Status pairs `(definite, defeasible)` allowed by the two epistemic conditions.
pub const ADMISSIBLE: [(ThreeVal, ThreeVal); 6] = [(T, T), (F, T), (F, F), (F, U), (U, T), (U, U)];

const UNRESTRICTED: [(ThreeVal, ThreeVal); 9] =
    [(T, T), (T, F), (T, U), (F, T), (F, F), (F, U), (U, T), (U, F), (U, U)];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("enumerating {required} interpretations over a base of {base_size} literals exceeds the cap of {cap}")]
    CapExceeded { base_size: usize, required: u128, cap: u64 },
    #[error("interpretation base does not match the theory's Herbrand base")]
    BaseMismatch,
    #[error("internal error: the theory has no model")]
    NoModel,
}

/// Kleene conjunction of the given values; True for an empty body.
pub fn conj_value(values: impl IntoIterator<Item = ThreeVal>) -> ThreeVal {
    values.into_iter().fold(ThreeVal::True, ThreeVal::and)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefeasibleInterpretation {
    literals: Arc<[Literal]>,
    pub delta: Vec<ThreeVal>,
    pub partial: Vec<ThreeVal>,
}

impl DefeasibleInterpretation {
    /// Every status Undefined.
    pub fn undefined(base: &HerbrandBase) -> Self {
        let literals: Arc<[Literal]> = base.iter().cloned().collect();
        let n = literals.len();
        DefeasibleInterpretation {
            literals,
            delta: vec![U; n],
            partial: vec![U; n],
        }
    }

    /// Reads `+D`/`-D` and `+d`/`-d` conclusions as True/False statuses.
    pub fn from_conclusions(base: &HerbrandBase, c: &ConclusionSet) -> Self {
        let mut m = Self::undefined(base);
        for (i, q) in m.literals.iter().enumerate() {
            m.delta[i] = c.status(q, true);
            m.partial[i] = c.status(q, false);
        }
        m
    }

    fn index(&self, q: &Literal) -> Option<usize> {
        self.literals.binary_search(q).ok()
    }

    /// Sets both statuses of `q`; false if `q` is outside the base.
    pub fn set(&mut self, q: &Literal, delta: ThreeVal, partial: ThreeVal) -> bool {
        match self.index(q) {
            Some(i) => {
                self.delta[i] = delta;
                self.partial[i] = partial;
                true
            }
            None => false,
        }
    }

    pub fn delta(&self, q: &Literal) -> Option<ThreeVal> {
        self.index(q).map(|i| self.delta[i])
    }

    pub fn partial(&self, q: &Literal) -> Option<ThreeVal> {
        self.index(q).map(|i| self.partial[i])
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    /// Both epistemic conditions hold everywhere: known implies believed,
    /// and not believed implies not known.
    pub fn well_formed(&self) -> bool {
        self.delta
            .iter()
            .zip(&self.partial)
            .all(|(&d, &p)| (d != T || p == T) && (p != F || d == F))
    }
}

impl fmt::Display for DefeasibleInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, q) in self.literals.iter().enumerate() {
            writeln!(f, "{q}: Δ={} ∂={}", self.delta[i], self.partial[i])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    DeltaTrue,
    DeltaFalse,
    PartialTrue,
    PartialFalse,
    Epistemic1,
    Epistemic2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// The right-hand side holds but the status is not the one it forces.
    If,
    /// The status holds without the right-hand side to account for it.
    OnlyIf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub literal: Literal,
    /// None for the two epistemic conditions, which are implications.
    pub direction: Option<Direction>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelReport {
    pub violations: Vec<Violation>,
}

impl ModelReport {
    pub fn is_model(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Right-hand sides of the four biconditionals at one literal.
struct Sides {
    delta_true: bool,
    delta_false: bool,
    partial_true: bool,
    partial_false: bool,
}

/// Evaluates the model conditions of one theory; built once, reused per interpretation.
pub struct ModelChecker {
    ix: TheoryIndex,
    /// `(t, s)` rule ids with `t > s`.
    sup: HashSet<(usize, usize)>,
    base: HerbrandBase,
}

impl ModelChecker {
    pub fn new(g: &GroundTheory) -> Self {
        let ix = TheoryIndex::new(g);
        let mut by_label: HashMap<&str, Vec<usize>> = HashMap::new();
        for (i, r) in ix.rules.iter().enumerate() {
            by_label.entry(&r.label).or_default().push(i);
        }
        let mut sup = HashSet::new();
        for (hi, lo) in &g.superiority {
            if let (Some(ts), Some(ss)) = (by_label.get(hi.as_str()), by_label.get(lo.as_str())) {
                for &t in ts {
                    for &s in ss {
                        sup.insert((t, s));
                    }
                }
            }
        }
        ModelChecker {
            ix,
            sup,
            base: g.base.clone(),
        }
    }

    pub fn base_size(&self) -> usize {
        self.ix.len()
    }

    fn conj(&self, values: &[ThreeVal], rule: usize) -> ThreeVal {
        conj_value(self.ix.rules[rule].body.iter().map(|&a| values[a]))
    }

    fn sides(&self, q: usize, delta: &[ThreeVal], partial: &[ThreeVal]) -> Sides {
        let ix = &self.ix;
        let nq = ix.complement[q];
        let strict = &ix.strict_by_head[q];
        let supportive = &ix.supportive_by_head[q];
        let attackers = &ix.all_by_head[nq];
        let delta_true = ix.is_fact[q] || strict.iter().any(|&r| self.conj(delta, r) == T);
        let delta_false = !ix.is_fact[q] && strict.iter().all(|&r| self.conj(delta, r) == F);
        let partial_true = delta[q] == T
            || (supportive.iter().any(|&r| self.conj(partial, r) == T)
                && delta[nq] == F
                && attackers.iter().all(|&s| {
                    self.conj(partial, s) == F
                        || supportive
                            .iter()
                            .any(|&t| self.conj(partial, t) == T && self.sup.contains(&(t, s)))
                }));
        let partial_false = delta[q] == F
            && (supportive.iter().all(|&r| self.conj(partial, r) == F)
                || delta[nq] == T
                || attackers.iter().any(|&s| {
                    self.conj(partial, s) == T
                        && supportive
                            .iter()
                            .all(|&t| self.conj(partial, t) == F || !self.sup.contains(&(t, s)))
                }));
        Sides {
            delta_true,
            delta_false,
            partial_true,
            partial_false,
        }
    }

    /// The four biconditionals only, without the epistemic conditions.
    fn satisfies(&self, delta: &[ThreeVal], partial: &[ThreeVal]) -> bool {
        let forced = |t: bool, f: bool| match (t, f) {
            (true, false) => Some(T),
            (false, true) => Some(F),
            (false, false) => Some(U),
            (true, true) => None,
        };
        (0..self.ix.len()).all(|q| {
            let s = self.sides(q, delta, partial);
            forced(s.delta_true, s.delta_false) == Some(delta[q])
                && forced(s.partial_true, s.partial_false) == Some(partial[q])
        })
    }

    /// Full report for one interpretation, both directions of every condition.
    pub fn check(&self, m: &DefeasibleInterpretation) -> Result<ModelReport, ModelError> {
        if m.literals.len() != self.ix.len() || !m.literals.iter().eq(self.base.iter()) {
            return Err(ModelError::BaseMismatch);
        }
        let (delta, partial) = (&m.delta, &m.partial);
        let mut violations = Vec::new();
        for q in 0..self.ix.len() {
            let lit = &self.ix.literals[q];
            let mut push = |condition, direction| {
                violations.push(Violation {
                    condition,
                    literal: lit.clone(),
                    direction,
                })
            };
            let s = self.sides(q, delta, partial);
            let biconditionals = [
                (Condition::DeltaTrue, s.delta_true, delta[q] == T),
                (Condition::DeltaFalse, s.delta_false, delta[q] == F),
                (Condition::PartialTrue, s.partial_true, partial[q] == T),
                (Condition::PartialFalse, s.partial_false, partial[q] == F),
            ];
            for (cond, rhs, status) in biconditionals {
                if rhs && !status {
                    push(cond, Some(Direction::If));
                }
                if status && !rhs {
                    push(cond, Some(Direction::OnlyIf));
                }
            }
            if delta[q] == T && partial[q] != T {
                push(Condition::Epistemic1, None);
            }
            if partial[q] == F && delta[q] != F {
                push(Condition::Epistemic2, None);
            }
        }
        Ok(ModelReport { violations })
    }

    fn required(&self, statuses: usize, cap: u64) -> Result<(), ModelError> {
        let required = (statuses as u128).saturating_pow(self.ix.len() as u32);
        if required > cap as u128 {
            return Err(ModelError::CapExceeded {
                base_size: self.ix.len(),
                required,
                cap,
            });
        }
        Ok(())
    }

    /// Calls `visit` with the status vectors of every model, drawing each
    /// literal's status pair from `pairs`.
    fn for_each_model(&self, pairs: &[(ThreeVal, ThreeVal)], mut visit: impl FnMut(&[ThreeVal], &[ThreeVal])) {
        let n = self.ix.len();
        let mut digits = vec![0usize; n];
        let mut delta = vec![pairs[0].0; n];
        let mut partial = vec![pairs[0].1; n];
        loop {
            if self.satisfies(&delta, &partial) {
                visit(&delta, &partial);
            }
            let mut i = 0;
            loop {
                if i == n {
                    return;
                }
                digits[i] += 1;
                if digits[i] == pairs.len() {
                    digits[i] = 0;
                }
                (delta[i], partial[i]) = pairs[digits[i]];
                if digits[i] != 0 {
                    break;
                }
                i += 1;
            }
        }
    }
}

/// Checks every condition at every base literal of `g`.
pub fn is_model(g: &GroundTheory, m: &DefeasibleInterpretation) -> Result<ModelReport, ModelError> {
    ModelChecker::new(g).check(m)
}

/// Every well-formed interpretation over `g`'s base, each exactly once.
pub fn enumerate_interpretations(
    g: &GroundTheory,
    cap: u64,
) -> Result<impl Iterator<Item = DefeasibleInterpretation>, ModelError> {
    let n = g.base.len();
    let required = 6u128.saturating_pow(n as u32);
    if required > cap as u128 {
        return Err(ModelError::CapExceeded {
            base_size: n,
            required,
            cap,
        });
    }
    let template = DefeasibleInterpretation::undefined(&g.base);
    Ok((0..required as u64).map(move |mut code| {
        let mut m = template.clone();
        for i in 0..n {
            let (d, p) = ADMISSIBLE[(code % 6) as usize];
            m.delta[i] = d;
            m.partial[i] = p;
            code /= 6;
        }
        m
    }))
}

/// All models of `g` among the well-formed interpretations.
pub fn models(g: &GroundTheory, cap: u64) -> Result<Vec<DefeasibleInterpretation>, ModelError> {
    let checker = ModelChecker::new(g);
    checker.required(ADMISSIBLE.len(), cap)?;
    let template = DefeasibleInterpretation::undefined(&g.base);
    let mut out = Vec::new();
    checker.for_each_model(&ADMISSIBLE, |d, p| {
        let mut m = template.clone();
        m.delta.copy_from_slice(d);
        m.partial.copy_from_slice(p);
        out.push(m);
    });
    Ok(out)
}

/// Number of models of `g`.
pub fn count_models(g: &GroundTheory, cap: u64) -> Result<u64, ModelError> {
    let checker = ModelChecker::new(g);
    checker.required(ADMISSIBLE.len(), cap)?;
    let mut count = 0;
    checker.for_each_model(&ADMISSIBLE, |_, _| count += 1);
    Ok(count)
}

/// Conclusions that hold in every model: `+D q` iff `I_Δ(q)` is True in all of
/// them, `-D q` iff False in all, and likewise for `+d`/`-d` with `I_∂`.
pub fn logical_consequences(g: &GroundTheory, cap: u64) -> Result<ConclusionSet, ModelError> {
    let checker = ModelChecker::new(g);
    checker.required(ADMISSIBLE.len(), cap)?;
    let n = checker.base_size();
    // Per literal: [delta always T, delta always F, partial always T, partial always F]
    let mut always = vec![[true; 4]; n];
    let mut count = 0u64;
    checker.for_each_model(&ADMISSIBLE, |d, p| {
        count += 1;
        for q in 0..n {
            let a = &mut always[q];
            a[0] &= d[q] == T;
            a[1] &= d[q] == F;
            a[2] &= p[q] == T;
            a[3] &= p[q] == F;
        }
    });
    if count == 0 {
        return Err(ModelError::NoModel);
    }
    let mut out = ConclusionSet::new();
    for (q, a) in always.iter().enumerate() {
        let pick = |t: bool, f: bool| if t { T } else if f { F } else { U };
        out.insert_statuses(&checker.ix.literals[q], pick(a[0], a[1]), pick(a[2], a[3]));
    }
    Ok(out)
}

/// Outcome of enumerating all nine status pairs per literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnrestrictedReport {
    pub models: u64,
    /// Models of the four conditions that break an epistemic condition.
    pub ill_formed: u64,
}

/// Enumerates interpretations without the epistemic restriction, keeps those
/// satisfying the four model conditions, and counts how many of them are not
/// well formed.
pub fn unrestricted_models(g: &GroundTheory, cap: u64) -> Result<UnrestrictedReport, ModelError> {
    let checker = ModelChecker::new(g);
    checker.required(UNRESTRICTED.len(), cap)?;
    let mut report = UnrestrictedReport { models: 0, ill_formed: 0 };
    checker.for_each_model(&UNRESTRICTED, |d, p| {
        report.models += 1;
        let ok = d.iter().zip(p).all(|(&d, &p)| (d != T || p == T) && (p != F || d == F));
        if !ok {
            report.ill_formed += 1;
        }
    });
    Ok(report)
}
