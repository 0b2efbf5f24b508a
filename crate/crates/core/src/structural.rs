//! Structural controllability test: no hyperedge dilation and no
//! inaccessible vertex in `H(A, B)`.
//!
//! Dilation is detected by a maximum matching between hyperedges and the
//! system vertices in their heads (augmenting paths, Ford-Fulkerson with
//! unit capacities). Accessibility is a flat-set fixed point from the
//! control vertices.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::hypergraph::{build_hypergraph, DirectedHypergraph};
use crate::system::SparsityPattern;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Dilation {
    pub dilated: bool,
    /// System vertices `S` with fewer hyperedges heading into `S` than `|S|`.
    pub witness: Option<Vec<usize>>,
    /// `(hyperedge, system vertex)` pairs, sorted by hyperedge.
    pub matching: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuralVerdict {
    pub controllable: bool,
    pub dilation_witness: Option<Vec<usize>>,
    pub inaccessible: Vec<usize>,
    pub matching: Vec<(usize, usize)>,
    pub accessible: Vec<usize>,
}

impl StructuralVerdict {
    pub fn of_hypergraph(h: &DirectedHypergraph) -> Self {
        let dilation = detect_dilation(h);
        let accessible = accessible_set(h);
        let inaccessible: Vec<usize> = (0..h.n()).filter(|v| !accessible.contains(v)).collect();
        Self {
            controllable: !dilation.dilated && inaccessible.is_empty(),
            dilation_witness: dilation.witness,
            inaccessible,
            matching: dilation.matching,
            accessible: accessible.into_iter().collect(),
        }
    }

    pub fn dilated(&self) -> bool {
        self.dilation_witness.is_some()
    }
}

pub fn structural_verdict(pat: &SparsityPattern) -> StructuralVerdict {
    StructuralVerdict::of_hypergraph(&build_hypergraph(pat))
}

/// Hyperedges whose head contains each system vertex, in input order.
fn head_incidence(h: &DirectedHypergraph) -> Vec<Vec<usize>> {
    let mut into = vec![Vec::new(); h.n()];
    for (idx, e) in h.edges().iter().enumerate() {
        for &v in e.head() {
            into[v].push(idx);
        }
    }
    into
}

/// Maximum matching of hyperedges to head vertices; dilated when it does
/// not saturate all `n` system vertices.
pub fn detect_dilation(h: &DirectedHypergraph) -> Dilation {
    let edges = h.edges();
    let n = h.n();
    let mut edge_match: Vec<Option<usize>> = vec![None; edges.len()];
    let mut vertex_match: Vec<Option<usize>> = vec![None; n];
    let mut stamp = vec![0usize; n];
    let mut size = 0;
    // stack of (hyperedge, next head position); parent vertex per level
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut via: Vec<usize> = Vec::new();

    for root in 0..edges.len() {
        if size == n {
            break;
        }
        let round = root + 1;
        stack.clear();
        stack.push((root, 0));
        via.clear();
        let mut found = false;
        while let Some(&mut (e, ref mut pos)) = stack.last_mut() {
            let head = edges[e].head();
            if *pos == head.len() {
                stack.pop();
                via.pop();
                continue;
            }
            let v = head[*pos];
            *pos += 1;
            if stamp[v] == round {
                continue;
            }
            stamp[v] = round;
            via.push(v);
            match vertex_match[v] {
                None => {
                    found = true;
                    break;
                }
                Some(next) => stack.push((next, 0)),
            }
        }
        if found {
            // stack[i].0 takes via[i]
            for (&(e, _), &v) in stack.iter().zip(&via) {
                edge_match[e] = Some(v);
                vertex_match[v] = Some(e);
            }
            size += 1;
        }
    }

    let matching: Vec<(usize, usize)> = edge_match
        .iter()
        .enumerate()
        .filter_map(|(e, v)| v.map(|v| (e, v)))
        .collect();

    let witness = (size < n).then(|| {
        let start = (0..n)
            .find(|&v| vertex_match[v].is_none())
            .expect("an unmatched vertex exists");
        hall_violator(&head_incidence(h), &edge_match, start)
    });

    Dilation {
        dilated: witness.is_some(),
        witness,
        matching,
    }
}

/// Vertices reachable from an unmatched vertex by alternating paths
/// (vertex -> any hyperedge heading into it -> that hyperedge's matched
/// vertex). Every hyperedge reached is matched inside the set, so the set
/// has exactly one more vertex than hyperedges heading into it.
fn hall_violator(into: &[Vec<usize>], edge_match: &[Option<usize>], start: usize) -> Vec<usize> {
    let mut in_set = BTreeSet::from([start]);
    let mut seen_edge = vec![false; edge_match.len()];
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &e in &into[v] {
            if std::mem::replace(&mut seen_edge[e], true) {
                continue;
            }
            let w = edge_match[e].expect("maximum matching leaves no augmenting path");
            if in_set.insert(w) {
                queue.push_back(w);
            }
        }
    }
    in_set.into_iter().collect()
}

/// Least fixed point of "fire every hyperedge whose tail support lies in
/// the accessible set", starting from the control vertices.
pub fn accessible_set(h: &DirectedHypergraph) -> BTreeSet<usize> {
    let total = h.vertex_count();
    let mut reached = vec![false; total];
    let mut waiting_on: Vec<Vec<usize>> = vec![Vec::new(); total];
    let mut missing: Vec<usize> = Vec::with_capacity(h.edges().len());
    let mut queue = VecDeque::new();

    reached[h.n()..].fill(true);
    for (idx, e) in h.edges().iter().enumerate() {
        let support = e.tail_support();
        let absent: Vec<usize> = support.into_iter().filter(|&v| !reached[v]).collect();
        missing.push(absent.len());
        if absent.is_empty() {
            queue.push_back(idx);
        }
        for v in absent {
            waiting_on[v].push(idx);
        }
    }
    while let Some(idx) = queue.pop_front() {
        for &v in h.edges()[idx].head() {
            if reached[v] {
                continue;
            }
            reached[v] = true;
            for &w in &waiting_on[v] {
                missing[w] -= 1;
                if missing[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
    }
    (0..total).filter(|&v| reached[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hyperedge;

    fn pat(
        order: usize,
        n: usize,
        m: usize,
        t: &[&[usize]],
        c: &[(usize, usize)],
    ) -> SparsityPattern {
        SparsityPattern::new(order, n, m, t.iter().map(|i| i.to_vec()), c.iter().copied()).unwrap()
    }

    fn heads_into(h: &DirectedHypergraph, s: &[usize]) -> usize {
        h.edges()
            .iter()
            .filter(|e| e.head().iter().any(|v| s.contains(v)))
            .count()
    }

    #[test]
    fn dilation_examples() {
        let dil = build_hypergraph(&pat(4, 2, 1, &[], &[(0, 0), (1, 0)]));
        let d = detect_dilation(&dil);
        assert!(d.dilated);
        assert_eq!(d.witness, Some(vec![0, 1]));

        let chain = build_hypergraph(&pat(2, 2, 1, &[&[0, 1]], &[(0, 0)]));
        let d = detect_dilation(&chain);
        assert!(!d.dilated);
        assert_eq!(d.matching, vec![(0, 0), (1, 1)]);

        let empty = DirectedHypergraph::new(3, 1, vec![]).unwrap();
        let d = detect_dilation(&empty);
        assert!(d.dilated);
        assert_eq!(d.witness.as_ref().map(Vec::len), Some(1));
    }

    #[test]
    fn witness_needs_augmenting_reassignment() {
        // e0 -> {1,2}, e1 -> {1}: greedy takes (e0,1) and must re-route
        let h = DirectedHypergraph::new(
            3,
            1,
            vec![
                Hyperedge::new(vec![3], [0, 1]),
                Hyperedge::new(vec![0, 0, 0], [0]),
                Hyperedge::new(vec![1, 1, 1], [0, 1]),
            ],
        )
        .unwrap();
        let d = detect_dilation(&h);
        assert!(d.dilated);
        assert_eq!(d.matching.len(), 2);
        let w = d.witness.unwrap();
        assert!(heads_into(&h, &w) < w.len());
        assert!(w.contains(&2));
    }

    #[test]
    fn accessibility_examples() {
        let inacc = build_hypergraph(&pat(4, 2, 1, &[&[0, 0, 0, 0]], &[(0, 0)]));
        assert_eq!(accessible_set(&inacc), BTreeSet::from([0, 2]));
        let chain = build_hypergraph(&pat(2, 2, 1, &[&[0, 1]], &[(0, 0)]));
        assert_eq!(accessible_set(&chain), BTreeSet::from([0, 1, 2]));
        let no_control = build_hypergraph(&pat(4, 2, 2, &[&[0, 0, 0, 1]], &[]));
        assert_eq!(accessible_set(&no_control), BTreeSet::from([2, 3]));
    }

    #[test]
    fn verdict_examples() {
        let v = structural_verdict(&pat(2, 2, 1, &[&[0, 1]], &[(0, 0)]));
        assert!(v.controllable);
        let v = structural_verdict(&pat(4, 2, 1, &[], &[(0, 0), (1, 0)]));
        assert!(!v.controllable);
        assert_eq!(v.dilation_witness, Some(vec![0, 1]));
        let v = structural_verdict(&pat(4, 2, 1, &[&[0, 0, 0, 0]], &[(0, 0)]));
        assert!(!v.controllable);
        assert_eq!(v.inaccessible, vec![1]);
        assert!(v.dilation_witness.is_some());
    }
}
