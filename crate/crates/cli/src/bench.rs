//! Chain theories for scaling measurements.

use std::time::{Duration, Instant};

use dlog_core::{engine, Atom, GroundTheory, Literal, Rule};

fn p(i: usize) -> Literal {
    Literal::positive(Atom::prop(format!("p{i}")))
}

/// `p0.` and `r_i: p(i-1) => p(i)` for `i = 1..=rules`. Derives `+d p(rules)`.
pub fn chain_theory(rules: usize) -> GroundTheory {
    let rs = (1..=rules)
        .map(|i| Rule::defeasible(format!("r{i}"), vec![p(i - 1)], p(i)))
        .collect();
    GroundTheory::new([p(0)], rs, []).expect("chain theory is ground")
}

/// A chain where every link is attacked and the attack is beaten:
/// `r_i: p(i-1) => p(i)`, `s_i: p(i-1) => ~p(i)`, `r_i > s_i`.
/// `rules` counts both kinds, so the chain has `rules / 2` links.
pub fn attacked_chain_theory(rules: usize) -> GroundTheory {
    let links = rules / 2;
    let mut rs = Vec::with_capacity(2 * links);
    let mut sup = Vec::with_capacity(links);
    for i in 1..=links {
        rs.push(Rule::defeasible(format!("r{i}"), vec![p(i - 1)], p(i)));
        rs.push(Rule::defeasible(format!("s{i}"), vec![p(i - 1)], p(i).complement()));
        sup.push((format!("r{i}"), format!("s{i}")));
    }
    GroundTheory::new([p(0)], rs, sup).expect("chain theory is ground")
}

/// The literal at the end of a chain built with `rules` rules.
pub fn chain_end(rules: usize, attacked: bool) -> Literal {
    p(if attacked { rules / 2 } else { rules })
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub rules: usize,
    pub conclusions: usize,
    /// Best of the repetitions.
    pub elapsed: Duration,
}

/// Times `derive_all` on the given theory, best of `repeats` runs.
pub fn time_derive(g: &GroundTheory, repeats: usize) -> Result<BenchRow, engine::EngineError> {
    let mut best = Duration::MAX;
    let mut conclusions = 0;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let out = engine::derive_all(g)?;
        best = best.min(start.elapsed());
        conclusions = out.len();
    }
    Ok(BenchRow {
        rules: g.rules.len(),
        conclusions,
        elapsed: best,
    })
}

pub fn bench(sizes: &[usize], attacked: bool, repeats: usize) -> Result<Vec<BenchRow>, engine::EngineError> {
    sizes
        .iter()
        .map(|&n| {
            let g = if attacked { attacked_chain_theory(n) } else { chain_theory(n) };
            time_derive(&g, repeats)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use dlog_core::Tag;

    #[test]
    fn chains_derive_their_end() {
        for attacked in [false, true] {
            let n = 200;
            let g = if attacked { attacked_chain_theory(n) } else { chain_theory(n) };
            let out = engine::derive_all(&g).unwrap();
            let end = chain_end(n, attacked);
            assert!(out.has(Tag::PlusPartial, &end));
            if attacked {
                assert!(out.has(Tag::MinusPartial, &end.complement()));
            }
        }
    }
}
