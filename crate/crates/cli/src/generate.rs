//! Seeded random propositional theories for differential testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dlog_core::{Atom, Literal, Rule, RuleKind, SourceTheory};

/// Every parameter that shapes a generated theory; together with the seed it
/// reproduces the theory exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub max_atoms: usize,
    pub max_rules: usize,
    /// Chance that any given literal of the pool is a fact.
    pub fact_probability: f64,
    /// Relative weights of strict, defeasible and defeater rules.
    pub kind_weights: [u32; 3],
    pub max_body: usize,
    /// Chance that an eligible conflicting pair is put in the superiority relation.
    pub superiority_probability: f64,
}

impl GeneratorConfig {
    pub fn new(seed: u64, max_atoms: usize, max_rules: usize) -> Self {
        GeneratorConfig {
            seed,
            max_atoms,
            max_rules,
            fact_probability: 0.15,
            kind_weights: [3, 5, 2],
            max_body: 2,
            superiority_probability: 0.5,
        }
    }
}

fn atom_name(i: usize) -> String {
    const NAMES: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    match NAMES.get(i) {
        Some(&c) => (c as char).to_string(),
        None => format!("a{i}"),
    }
}

/// A random ground propositional theory over at most `max_atoms` atoms.
///
/// Superiority is only placed on pairs with complementary heads, and always
/// from the earlier to the later rule of a random ranking, so it is acyclic.
pub fn generate_random_theory(cfg: &GeneratorConfig) -> SourceTheory {
    assert!(cfg.max_atoms >= 1, "need at least one atom");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let atoms = rng.gen_range(1..=cfg.max_atoms);
    let pick = |rng: &mut ChaCha8Rng| {
        let atom = Atom::prop(atom_name(rng.gen_range(0..atoms)));
        if rng.gen_bool(0.5) {
            Literal::negative(atom)
        } else {
            Literal::positive(atom)
        }
    };

    let mut theory = SourceTheory::default();
    for i in 0..atoms {
        for negated in [false, true] {
            if rng.gen_bool(cfg.fact_probability) {
                theory.facts.push(Literal {
                    atom: Atom::prop(atom_name(i)),
                    negated,
                });
            }
        }
    }

    let total: u32 = cfg.kind_weights.iter().sum();
    let rules = rng.gen_range(0..=cfg.max_rules);
    for i in 1..=rules {
        let mut roll = rng.gen_range(0..total);
        let mut kind = RuleKind::Defeater;
        for (k, &w) in RuleKind::ALL.iter().zip(&cfg.kind_weights) {
            if roll < w {
                kind = *k;
                break;
            }
            roll -= w;
        }
        let body_len = rng.gen_range(0..=cfg.max_body);
        let body = (0..body_len).map(|_| pick(&mut rng)).collect();
        let head = pick(&mut rng);
        theory.rules.push(Rule::new(format!("r{i}"), kind, body, head));
    }

    let mut rank: Vec<usize> = (0..rules).collect();
    rank.shuffle(&mut rng);
    for t in 0..rules {
        for s in 0..rules {
            let (rt, rs) = (&theory.rules[t], &theory.rules[s]);
            if rank[t] < rank[s]
                && rt.head == rs.head.complement()
                && rng.gen_bool(cfg.superiority_probability)
            {
                theory.superiority.push((rt.label.clone(), rs.label.clone()));
            }
        }
    }
    theory
}

#[cfg(test)]
mod tests {
    use super::*;
    use dlog_core::ground::{ground, validate};

    #[test]
    fn same_seed_same_theory() {
        let cfg = GeneratorConfig::new(42, 4, 8);
        assert_eq!(generate_random_theory(&cfg), generate_random_theory(&cfg));
        let other = GeneratorConfig::new(43, 4, 8);
        let differs = (0..20).any(|k| {
            generate_random_theory(&GeneratorConfig::new(k, 4, 8)) != generate_random_theory(&other)
        });
        assert!(differs);
    }

    #[test]
    fn zero_rules_gives_facts_only() {
        for seed in 0..50 {
            let t = generate_random_theory(&GeneratorConfig::new(seed, 3, 0));
            assert!(t.rules.is_empty());
            assert!(t.superiority.is_empty());
        }
    }

    #[test]
    fn superiority_is_acyclic_and_conflicting() {
        for seed in 0..300 {
            let t = generate_random_theory(&GeneratorConfig::new(seed, 3, 10));
            let g = ground(&t).unwrap();
            let report = validate(&g, false).unwrap();
            assert!(report.warnings.is_empty(), "seed {seed}: {:?}", report.warnings);
            assert!(g.base.len() <= 6);
        }
    }
}
