//! Differential testing: engine against the metaprogram fixpoint and the
//! all-models consequences, on seeded random theories.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::{json, Value};

use dlog_core::ground::ground;
use dlog_core::modelcheck::{self, DefeasibleInterpretation, ModelError};
use dlog_core::parser::{parse_theory, render_theory};
use dlog_core::{engine, metaprogram, ConclusionSet, GroundTheory, TaggedConclusion};

use crate::generate::{generate_random_theory, GeneratorConfig};

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub seed: u64,
    pub theories: usize,
    pub max_atoms: usize,
    pub max_rules: usize,
    /// Also compare against model enumeration (small bases only).
    pub models: bool,
    pub cap: u64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seed: 0,
            theories: 500,
            max_atoms: 3,
            max_rules: 10,
            models: true,
            cap: modelcheck::DEFAULT_CAP,
        }
    }
}

/// A theory on which the three semantics disagree, or on which an invariant fails.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceWitness {
    pub seed: u64,
    /// The theory in canonical concrete syntax.
    pub theory: String,
    pub engine: ConclusionSet,
    pub metaprogram: ConclusionSet,
    pub models: Option<ConclusionSet>,
    pub disagreements: Vec<TaggedConclusion>,
    /// Coherence, containment and model-existence failures.
    pub violations: Vec<String>,
}

impl DivergenceWitness {
    pub fn to_json(&self) -> Value {
        let list = |c: &ConclusionSet| c.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        json!({
            "seed": self.seed,
            "theory": self.theory,
            "engine": list(&self.engine),
            "metaprogram": list(&self.metaprogram),
            "models": self.models.as_ref().map(list),
            "disagreements": self.disagreements.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "violations": self.violations,
        })
    }

    /// Re-derives everything from the rendered theory.
    pub fn rerun(&self, cap: u64) -> Result<Option<DivergenceWitness>, String> {
        let src = parse_theory(&self.theory).map_err(|e| e.to_string())?;
        let g = ground(&src).map_err(|e| e.to_string())?;
        compare(self.seed, &g, self.theory.clone(), self.models.is_some(), cap)
    }
}

#[derive(Debug, Clone)]
pub struct FuzzReport {
    pub theories: usize,
    pub witnesses: Vec<DivergenceWitness>,
    pub elapsed: Duration,
}

impl FuzzReport {
    pub fn is_clean(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Compares the three semantics on one ground theory. `Ok(None)` means full agreement.
pub fn compare(
    seed: u64,
    g: &GroundTheory,
    rendered: String,
    with_models: bool,
    cap: u64,
) -> Result<Option<DivergenceWitness>, String> {
    let mut violations = Vec::new();
    let derived = match engine::derive_all(g) {
        Ok(c) => c,
        Err(e) => {
            violations.push(format!("engine: {e}"));
            ConclusionSet::new()
        }
    };
    let meta = match metaprogram::conclusions(g) {
        Ok(c) => c,
        Err(e) => {
            violations.push(format!("metaprogram: {e}"));
            ConclusionSet::new()
        }
    };
    violations.extend(derived.invariant_violations().iter().map(|v| format!("engine: {v}")));
    violations.extend(meta.invariant_violations().iter().map(|v| format!("metaprogram: {v}")));

    let mut disagreements = derived.symmetric_difference(&meta);
    let models = if with_models {
        let consequences = match modelcheck::logical_consequences(g, cap) {
            Ok(c) => c,
            Err(e @ ModelError::CapExceeded { .. }) => return Err(e.to_string()),
            Err(e) => {
                violations.push(format!("models: {e}"));
                ConclusionSet::new()
            }
        };
        disagreements.extend(derived.symmetric_difference(&consequences));
        let kunen = DefeasibleInterpretation::from_conclusions(&g.base, &meta);
        match modelcheck::is_model(g, &kunen) {
            Ok(r) if r.is_model() => {}
            Ok(r) => violations.push(format!(
                "fixpoint interpretation is not a model ({} violations)",
                r.violations.len()
            )),
            Err(e) => violations.push(format!("models: {e}")),
        }
        Some(consequences)
    } else {
        None
    };
    disagreements.sort();
    disagreements.dedup();

    if disagreements.is_empty() && violations.is_empty() {
        return Ok(None);
    }
    Ok(Some(DivergenceWitness {
        seed,
        theory: rendered,
        engine: derived,
        metaprogram: meta,
        models,
        disagreements,
        violations,
    }))
}

/// Seed of the `i`-th theory of a run.
pub fn theory_seed(master: u64, i: usize) -> u64 {
    master.wrapping_add(i as u64)
}

/// Generates and compares `cfg.theories` random theories in parallel.
pub fn fuzz(cfg: &FuzzConfig) -> Result<FuzzReport, String> {
    let start = Instant::now();
    let results: Vec<Result<Option<DivergenceWitness>, String>> = (0..cfg.theories)
        .into_par_iter()
        .map(|i| {
            let seed = theory_seed(cfg.seed, i);
            let src = generate_random_theory(&GeneratorConfig::new(seed, cfg.max_atoms, cfg.max_rules));
            let g = ground(&src).map_err(|e| e.to_string())?;
            compare(seed, &g, render_theory(&src), cfg.models, cfg.cap)
        })
        .collect();
    let mut witnesses = Vec::new();
    for r in results {
        if let Some(w) = r? {
            witnesses.push(w);
        }
    }
    Ok(FuzzReport {
        theories: cfg.theories,
        witnesses,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_clean() {
        let cfg = FuzzConfig {
            theories: 40,
            seed: 7,
            ..FuzzConfig::default()
        };
        let report = fuzz(&cfg).unwrap();
        assert!(report.is_clean(), "{:?}", report.witnesses);
    }

    #[test]
    fn witness_reruns() {
        // Forge a witness by swapping in a wrong engine result; rerun must agree with reality.
        let src = parse_theory("r1: => p. r2: => ~p. r1 > r2.").unwrap();
        let g = ground(&src).unwrap();
        assert_eq!(compare(0, &g, render_theory(&src), true, 1000).unwrap(), None);
        let w = DivergenceWitness {
            seed: 0,
            theory: render_theory(&src),
            engine: ConclusionSet::new(),
            metaprogram: ConclusionSet::new(),
            models: Some(ConclusionSet::new()),
            disagreements: Vec::new(),
            violations: Vec::new(),
        };
        assert_eq!(w.rerun(1000).unwrap(), None);
        let j = w.to_json();
        assert_eq!(j["theory"], render_theory(&src));
    }

    #[test]
    fn cap_is_reported() {
        let src = parse_theory("a. b. c. d.").unwrap();
        let g = ground(&src).unwrap();
        assert!(compare(0, &g, String::new(), true, 10).is_err());
    }
}
