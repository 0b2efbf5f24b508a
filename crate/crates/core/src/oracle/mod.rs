//! Independent ground-truth engines for cross-checking the structural and
//! numeric tests. Everything here is exhaustive or symbolic and only meant
//! for desk-scale inputs.

mod lie;

pub use lie::{
    default_depth_cap, lie_algebra_rank_at_origin, lie_bracket, LieRank, Monomial, PolyVectorField,
};

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::DirectedHypergraph;
use crate::numeric::equilibrated_rank;
use crate::tensor::DenseMatrix;

pub const BRUTE_FORCE_MAX_N: usize = 12;
pub const CLOSURE_MAX_VERTICES: usize = 16;
pub const DEFAULT_CLOSURE_CAP: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteDilation {
    pub dilated: bool,
    pub witness: Option<Vec<usize>>,
}

/// Number of hyperedges whose head meets `set`.
pub fn heads_into(h: &DirectedHypergraph, set: &[usize]) -> usize {
    h.edges()
        .iter()
        .filter(|e| e.head().iter().any(|v| set.contains(v)))
        .count()
}

/// Checks every non-empty subset of system vertices, smallest first and
/// lexicographic within a size.
pub fn brute_force_dilation(h: &DirectedHypergraph) -> Result<BruteDilation> {
    if h.n() > BRUTE_FORCE_MAX_N {
        return Err(Error::Guard(format!(
            "brute-force dilation enumerates 2^n subsets; n = {} exceeds {BRUTE_FORCE_MAX_N}",
            h.n()
        )));
    }
    let heads: Vec<u32> = h.edges().iter().map(|e| mask_of(e.head())).collect();
    // first violator in (size, lexicographic) order over all 2^n - 1 subsets
    let mut best: Option<(u32, Vec<usize>)> = None;
    for subset in 1u32..1 << h.n() {
        let size = subset.count_ones();
        if best.as_ref().is_some_and(|(s, _)| size > *s) {
            continue;
        }
        let meeting = heads.iter().filter(|&&m| m & subset != 0).count();
        if meeting < size as usize {
            let members = members(subset);
            if best.as_ref().is_none_or(|(s, w)| size < *s || members < *w) {
                best = Some((size, members));
            }
        }
    }
    if let Some((_, witness)) = best {
        return Ok(BruteDilation {
            dilated: true,
            witness: Some(witness),
        });
    }
    Ok(BruteDilation {
        dilated: false,
        witness: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AccessClosure {
    /// Every vertex set in the closed family, sorted.
    pub sets: Vec<Vec<usize>>,
    /// System vertices `v` with `{v}` in the family.
    pub individually_accessible: Vec<usize>,
    /// Vertices covered by sets reached through walk steps alone.
    pub walk_accessible: Vec<usize>,
    /// The family hit the size cap before reaching its fixed point.
    pub truncated: bool,
}

fn mask_of(vs: &[usize]) -> u32 {
    vs.iter().fold(0, |m, &v| m | (1 << v))
}

fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).collect()
}

/// Union of the family members that lie inside `tail`; the hyperedge can
/// fire when this union is the whole tail.
fn covered(family: &BTreeSet<u32>, tail: u32) -> bool {
    let union = family
        .iter()
        .filter(|&&h| h & !tail == 0)
        .fold(0, |acc, &h| acc | h);
    union == tail
}

/// Walks in the strict sense (a tail must be exactly a union of visited
/// sets lying inside it) interleaved with closure of the visited family
/// under pairwise union and difference, iterated to a fixed point.
pub fn individual_accessibility_closure(
    h: &DirectedHypergraph,
    cap: usize,
) -> Result<AccessClosure> {
    if h.vertex_count() > CLOSURE_MAX_VERTICES {
        return Err(Error::Guard(format!(
            "closure works on vertex bitmasks; {} vertices exceed {CLOSURE_MAX_VERTICES}",
            h.vertex_count()
        )));
    }
    let tails: Vec<u32> = h
        .edges()
        .iter()
        .map(|e| mask_of(&e.tail_support()))
        .collect();
    let heads: Vec<u32> = h.edges().iter().map(|e| mask_of(e.head())).collect();
    let mut family: BTreeSet<u32> = (h.n()..h.vertex_count()).map(|v| 1 << v).collect();
    let mut fired = vec![false; tails.len()];
    let mut walk_reached = 0u32;
    let mut truncated = false;

    // walk-only pass, for the plain accessibility reading
    {
        let mut walk_family = family.clone();
        let mut walk_fired = vec![false; tails.len()];
        loop {
            let mut progress = false;
            for (i, &t) in tails.iter().enumerate() {
                if !walk_fired[i] && covered(&walk_family, t) {
                    walk_fired[i] = true;
                    walk_family.insert(heads[i]);
                    walk_reached |= heads[i];
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
    }

    'outer: loop {
        let mut progress = false;
        for (i, &t) in tails.iter().enumerate() {
            if !fired[i] && covered(&family, t) {
                fired[i] = true;
                progress |= family.insert(heads[i]);
            }
        }
        loop {
            let current: Vec<u32> = family.iter().copied().collect();
            let mut fresh = Vec::new();
            for (i, &a) in current.iter().enumerate() {
                for &b in &current[i + 1..] {
                    for c in [a | b, a & !b, b & !a] {
                        if c != 0 && !family.contains(&c) {
                            fresh.push(c);
                        }
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            for c in fresh {
                if family.insert(c) {
                    progress = true;
                    if family.len() > cap {
                        truncated = true;
                        break 'outer;
                    }
                }
            }
        }
        if !progress {
            break;
        }
    }

    let individually_accessible = (0..h.n()).filter(|&v| family.contains(&(1 << v))).collect();
    Ok(AccessClosure {
        sets: family.iter().map(|&m| members(m)).collect(),
        individually_accessible,
        walk_accessible: members(walk_reached),
        truncated,
    })
}

/// Rank of `[B, AB, …, A^{n-1}B]` for the linear system `ẋ = A x + B u`,
/// with columns equilibrated before the cutoff.
pub fn kalman_rank(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> Result<usize> {
    if a.rows() != a.cols() {
        return Err(Error::Dimension {
            context: "Kalman test, square state matrix",
            expected: a.rows(),
            found: a.cols(),
        });
    }
    if b.rows() != a.rows() {
        return Err(Error::Dimension {
            context: "Kalman test, input matrix rows",
            expected: a.rows(),
            found: b.rows(),
        });
    }
    let mut block = b.clone();
    let mut stacked = b.clone();
    for _ in 1..a.rows() {
        block = a.matmul(&block)?;
        stacked = stacked.hcat(&block)?;
    }
    Ok(equilibrated_rank(&stacked, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hyperedge;

    fn hg(n: usize, m: usize, edges: &[(&[usize], &[usize])]) -> DirectedHypergraph {
        DirectedHypergraph::new(
            n,
            m,
            edges
                .iter()
                .map(|(t, h)| Hyperedge::new(t.to_vec(), h.iter().copied()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn brute_force_examples() {
        let dil = hg(2, 1, &[(&[2], &[0, 1])]);
        assert_eq!(
            brute_force_dilation(&dil).unwrap(),
            BruteDilation {
                dilated: true,
                witness: Some(vec![0, 1])
            }
        );
        let chain = hg(2, 1, &[(&[2], &[0]), (&[0], &[1])]);
        assert!(!brute_force_dilation(&chain).unwrap().dilated);
        let single = hg(1, 1, &[(&[1], &[0])]);
        assert_eq!(brute_force_dilation(&single).unwrap().witness, None);
        let big = DirectedHypergraph::new(13, 1, vec![]).unwrap();
        assert!(matches!(brute_force_dilation(&big), Err(Error::Guard(_))));
    }

    #[test]
    fn closure_examples() {
        let dil = hg(2, 1, &[(&[2], &[0, 1])]);
        let c = individual_accessibility_closure(&dil, DEFAULT_CLOSURE_CAP).unwrap();
        assert!(c.sets.contains(&vec![0, 1]));
        assert!(c.individually_accessible.is_empty());
        assert!(!c.truncated);

        let chain = hg(2, 1, &[(&[2], &[0]), (&[0], &[1])]);
        let c = individual_accessibility_closure(&chain, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(c.individually_accessible, vec![0, 1]);

        let diff = hg(2, 1, &[(&[2], &[0, 1]), (&[0, 1, 1], &[0])]);
        let c = individual_accessibility_closure(&diff, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(c.individually_accessible, vec![0, 1]);
    }

    #[test]
    fn strict_walks_need_exact_tail_cover() {
        // {1,4} reached together cannot feed the tail {1,1,1}
        let h = hg(4, 1, &[(&[4], &[0, 3]), (&[0, 0, 0], &[1])]);
        let c = individual_accessibility_closure(&h, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(c.walk_accessible, vec![0, 3]);
        assert!(c.individually_accessible.is_empty());
    }

    #[test]
    fn closure_cap_is_reported() {
        let h = hg(2, 1, &[(&[2], &[0, 1]), (&[0, 1, 1], &[0])]);
        assert!(individual_accessibility_closure(&h, 3).unwrap().truncated);
        let full = individual_accessibility_closure(&h, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(full.sets.len(), 7);
    }

    #[test]
    fn kalman_examples() {
        let a = DenseMatrix::from_rows(&[[0.0, 0.0], [1.0, 0.0]]);
        let b = DenseMatrix::from_rows(&[[1.0], [0.0]]);
        assert_eq!(kalman_rank(&a, &b, 1e-10).unwrap(), 2);
        assert_eq!(
            kalman_rank(&DenseMatrix::zeros(2, 2), &b, 1e-10).unwrap(),
            1
        );
        assert_eq!(
            kalman_rank(&a, &DenseMatrix::zeros(2, 1), 1e-10).unwrap(),
            0
        );
        assert!(kalman_rank(&DenseMatrix::zeros(2, 3), &b, 0.0).is_err());
    }
}
