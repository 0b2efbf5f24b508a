//! Seeded and exhaustive instance generators.
//!
//! All randomness goes through `ChaCha8Rng`, so a seed pins the output
//! across platforms and releases.

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hypergraph::{DirectedHypergraph, Hyperedge};
use crate::system::SparsityPattern;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of a generated sparsity pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternParams {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    /// Number of distinct tensor multi-indices (clamped to `n^k`).
    pub support: usize,
}

impl PatternParams {
    /// Uniform `n in 1..=max_n`, `m in 1..=max_m`, `support in 0..=max_support`.
    pub fn random<R: Rng>(
        rng: &mut R,
        max_n: usize,
        k: usize,
        max_m: usize,
        max_support: usize,
    ) -> Self {
        Self {
            n: rng.gen_range(1..=max_n),
            k,
            m: rng.gen_range(1..=max_m),
            support: rng.gen_range(0..=max_support),
        }
    }
}

/// Random pattern: `support` distinct multi-indices drawn uniformly, and
/// for every input column one random row plus each other row with
/// probability 0.2.
pub fn random_pattern_with<R: Rng>(rng: &mut R, p: &PatternParams) -> SparsityPattern {
    let cells = (p.n as u128).saturating_pow(p.k as u32);
    let target = (p.support as u128).min(cells) as usize;
    let mut tensor = BTreeSet::new();
    while tensor.len() < target {
        let index: Vec<usize> = (0..p.k).map(|_| rng.gen_range(0..p.n)).collect();
        tensor.insert(index);
    }
    let mut control = BTreeSet::new();
    for j in 0..p.m {
        control.insert((rng.gen_range(0..p.n), j));
        for i in 0..p.n {
            if rng.gen_bool(0.2) {
                control.insert((i, j));
            }
        }
    }
    SparsityPattern::new(p.k, p.n, p.m, tensor, control).expect("generated indices are in range")
}

pub fn random_pattern(p: &PatternParams, seed: u64) -> SparsityPattern {
    random_pattern_with(&mut rng_from_seed(seed), p)
}

fn random_nonempty_subset<R: Rng>(rng: &mut R, n: usize, max_size: usize) -> Vec<usize> {
    let size = rng.gen_range(1..=max_size.min(n));
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(size);
    all
}

/// Random hypergraph with `n in 1..=max_n` system vertices, one or two
/// control vertices, tails that are control singletons or system
/// 3-multisets, and heads of one to three system vertices.
pub fn random_hypergraph<R: Rng>(rng: &mut R, max_n: usize) -> DirectedHypergraph {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=2);
    let count = rng.gen_range(0..=n + 1);
    let mut tails = BTreeSet::new();
    let mut edges = Vec::new();
    for _ in 0..count {
        let tail = if rng.gen_bool(0.3) {
            vec![n + rng.gen_range(0..m)]
        } else {
            let mut t: Vec<usize> = (0..3).map(|_| rng.gen_range(0..n)).collect();
            t.sort_unstable();
            t
        };
        if !tails.insert(tail.clone()) {
            continue;
        }
        edges.push(Hyperedge::new(tail, random_nonempty_subset(rng, n, 3)));
    }
    DirectedHypergraph::new(n, m, edges).expect("generated hyperedges are valid")
}

/// System-vertex 3-multisets over `n` vertices, sorted.
fn cubic_tails(n: usize) -> Vec<Vec<usize>> {
    (0..n).combinations_with_replacement(3).collect()
}

fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    (1..1usize << n)
        .map(|mask| (0..n).filter(|b| mask & (1 << b) != 0).collect())
        .collect()
}

/// Calls `visit` once per hypergraph of the desk-scale exhaustive family:
/// one control vertex, at most four hyperedges, tails either the control
/// singleton or a system 3-multiset, heads any non-empty set of system
/// vertices.
///
/// For `n <= 3` every choice of distinct tails and every head assignment is
/// produced. For `n = 4` every head assignment is produced over every
/// subset of two fixed tail lists, one with single-vertex supports and
/// one with mixed supports.
pub fn for_each_exhaustive<F: FnMut(&DirectedHypergraph)>(mut visit: F) {
    for n in 1..=3 {
        let mut tails = vec![vec![n]];
        tails.extend(cubic_tails(n));
        enumerate_over(n, &tails, &mut visit);
    }
    let n = 4;
    let templates = [
        vec![
            vec![n],
            vec![0, 0, 0],
            vec![1, 1, 1],
            vec![2, 2, 2],
            vec![3, 3, 3],
        ],
        vec![
            vec![n],
            vec![0, 0, 1],
            vec![1, 2, 2],
            vec![0, 2, 3],
            vec![1, 3, 3],
        ],
    ];
    for tails in &templates {
        enumerate_over(n, tails, &mut visit);
    }
}

fn enumerate_over<F: FnMut(&DirectedHypergraph)>(n: usize, tails: &[Vec<usize>], visit: &mut F) {
    let heads = nonempty_subsets(n);
    // every (tail, head) hyperedge built once, cloned per instance
    let table: Vec<Vec<Hyperedge>> = tails
        .iter()
        .map(|t| {
            heads
                .iter()
                .map(|h| Hyperedge::new(t.clone(), h.iter().copied()))
                .collect()
        })
        .collect();
    for count in 0..=4.min(tails.len()) {
        for chosen in (0..tails.len()).combinations(count) {
            let mut pick = vec![0usize; count];
            loop {
                let edges = chosen
                    .iter()
                    .zip(&pick)
                    .map(|(&t, &h)| table[t][h].clone())
                    .collect();
                let h = DirectedHypergraph::new(n, 1, edges).expect("family tails are distinct");
                visit(&h);
                // odometer over head choices
                let mut slot = 0;
                while slot < count {
                    pick[slot] += 1;
                    if pick[slot] < heads.len() {
                        break;
                    }
                    pick[slot] = 0;
                    slot += 1;
                }
                if slot == count {
                    break;
                }
            }
        }
    }
}

/// Size of the exhaustive family.
pub fn exhaustive_family_size() -> usize {
    let mut count = 0;
    for_each_exhaustive(|_| count += 1);
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patterns_are_seed_deterministic() {
        let p = PatternParams {
            n: 4,
            k: 4,
            m: 2,
            support: 6,
        };
        assert_eq!(random_pattern(&p, 3), random_pattern(&p, 3));
        let pat = random_pattern(&p, 3);
        assert_eq!(pat.tensor_support().len(), 6);
        for j in 0..2 {
            assert!(pat.control_support().iter().any(|&(_, c)| c == j));
        }
    }

    #[test]
    fn support_is_clamped() {
        let p = PatternParams {
            n: 1,
            k: 2,
            m: 1,
            support: 10,
        };
        assert_eq!(random_pattern(&p, 0).tensor_support().len(), 1);
    }

    #[test]
    fn small_family_counts() {
        // n = 1: tails {ctrl}, {1,1,1}; one head choice each -> 1 + 2 + 1
        let mut tails = vec![vec![1]];
        tails.extend(cubic_tails(1));
        let mut count = 0;
        enumerate_over(1, &tails, &mut |_| count += 1);
        assert_eq!(count, 4);
        // n = 2: 5 tails, 3 heads -> sum_e C(5,e) 3^e for e <= 4
        let mut tails = vec![vec![2]];
        tails.extend(cubic_tails(2));
        let mut count = 0;
        enumerate_over(2, &tails, &mut |_| count += 1);
        assert_eq!(count, 1 + 15 + 90 + 270 + 405);
    }
}
