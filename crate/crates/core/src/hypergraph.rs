//! Directed hypergraph `H(A, B)` of a sparsity pattern and its star expansion.
//!
//! Vertices `0..n` are system vertices and `n..n+m` are control vertices.
//! Tails are multisets (a monomial like `x1^3` has tail `{v1, v1, v1}`),
//! heads are sets of system vertices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::system::SparsityPattern;
use crate::tensor::SparseTensor;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperedge {
    tail: Vec<usize>,
    head: Vec<usize>,
}

impl Hyperedge {
    /// Sorts the tail multiset and deduplicates the head set.
    pub fn new(mut tail: Vec<usize>, head: impl IntoIterator<Item = usize>) -> Self {
        tail.sort_unstable();
        let head: BTreeSet<usize> = head.into_iter().collect();
        Self {
            tail,
            head: head.into_iter().collect(),
        }
    }

    /// Sorted tail multiset.
    pub fn tail(&self) -> &[usize] {
        &self.tail
    }

    /// Sorted head set.
    pub fn head(&self) -> &[usize] {
        &self.head
    }

    /// Distinct vertices of the tail.
    pub fn tail_support(&self) -> Vec<usize> {
        self.tail.iter().copied().dedup().collect()
    }
}

impl fmt::Display for Hyperedge {
    /// `t1,t2,t3 -> h1,h2` with 1-based vertices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {}",
            self.tail.iter().map(|v| v + 1).join(","),
            self.head.iter().map(|v| v + 1).join(",")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedHypergraph {
    n: usize,
    m: usize,
    edges: Vec<Hyperedge>,
}

impl DirectedHypergraph {
    pub fn new(n: usize, m: usize, edges: Vec<Hyperedge>) -> Result<Self> {
        let total = n + m;
        for (idx, e) in edges.iter().enumerate() {
            if e.tail.is_empty() || e.head.is_empty() {
                return Err(Error::Hypergraph(format!(
                    "hyperedge {} has an empty side",
                    idx + 1
                )));
            }
            if let Some(&v) = e.tail.iter().find(|&&v| v >= total) {
                return Err(Error::Hypergraph(format!(
                    "tail vertex {} of hyperedge {} exceeds {total} vertices",
                    v + 1,
                    idx + 1
                )));
            }
            if let Some(&v) = e.head.iter().find(|&&v| v >= n) {
                return Err(Error::Hypergraph(format!(
                    "head vertex {} of hyperedge {} is not a system vertex",
                    v + 1,
                    idx + 1
                )));
            }
            if edges[..idx].iter().any(|earlier| earlier.tail == e.tail) {
                return Err(Error::Hypergraph(format!(
                    "hyperedge {} repeats an existing tail",
                    idx + 1
                )));
            }
        }
        Ok(Self { n, m, edges })
    }

    /// System vertex count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Control vertex count.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.n + self.m
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn is_control(&self, v: usize) -> bool {
        v >= self.n && v < self.n + self.m
    }

    /// Total head size `Σ|e^h|`.
    pub fn head_volume(&self) -> usize {
        self.edges.iter().map(|e| e.head.len()).sum()
    }

    /// Expands the hyperedges back into a sparsity pattern of tensor order
    /// `order`. Tails come back as sorted multi-indices.
    pub fn to_pattern(&self, order: usize) -> Result<SparsityPattern> {
        let mut tensor = Vec::new();
        let mut control = Vec::new();
        for e in &self.edges {
            let is_control_edge = e.tail.len() == 1 && self.is_control(e.tail[0]);
            if is_control_edge {
                let col = e.tail[0] - self.n;
                control.extend(e.head.iter().map(|&h| (h, col)));
            } else if e.tail.iter().any(|&v| v >= self.n) {
                return Err(Error::Hypergraph(format!(
                    "tail {{{}}} mixes control and system vertices",
                    e.tail.iter().map(|v| v + 1).join(",")
                )));
            } else if e.tail.len() + 1 != order {
                return Err(Error::Hypergraph(format!(
                    "tail of size {} does not fit tensor order {order}",
                    e.tail.len()
                )));
            } else {
                for &h in &e.head {
                    let mut index = e.tail.clone();
                    index.push(h);
                    tensor.push(index);
                }
            }
        }
        SparsityPattern::new(order, self.n, self.m, tensor, control)
    }
}

impl fmt::Display for DirectedHypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "hypergraph {} {}", self.n, self.m)?;
        for e in &self.edges {
            write!(f, "\n{e}")?;
        }
        Ok(())
    }
}

/// Builds `H(A, B)`: one control hyperedge per non-empty column of `B`
/// (tail = that control vertex), then one system hyperedge per distinct
/// tail multiset of the tensor support (head = all head indices sharing
/// it), in sorted tail order.
pub fn build_hypergraph(pat: &SparsityPattern) -> DirectedHypergraph {
    let n = pat.dim();
    let mut control_heads: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(i, j) in pat.control_support() {
        control_heads.entry(j).or_default().push(i);
    }
    let mut edges: Vec<Hyperedge> = control_heads
        .into_iter()
        .map(|(j, rows)| Hyperedge::new(vec![n + j], rows))
        .collect();

    let mut groups: BTreeMap<Vec<usize>, BTreeSet<usize>> = BTreeMap::new();
    let k = pat.order();
    for index in pat.tensor_support() {
        let mut tail = index[..k - 1].to_vec();
        tail.sort_unstable();
        groups.entry(tail).or_default().insert(index[k - 1]);
    }
    edges.extend(groups.into_iter().map(|(tail, head)| Hyperedge {
        tail,
        head: head.into_iter().collect(),
    }));
    DirectedHypergraph::new(n, pat.inputs(), edges).expect("construction keeps tails unique")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StarArc {
    /// `v -> e` for `v` in the tail of `e`.
    VertexToEdge { vertex: usize, edge: usize },
    /// `e -> v` for `v` in the head of `e`.
    EdgeToVertex { edge: usize, vertex: usize },
}

/// Directed bipartite star expansion `S(H)`: left side one node per
/// hyperedge, right side one node per original vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarGraph {
    edge_nodes: usize,
    vertex_nodes: usize,
    arcs: Vec<StarArc>,
}

impl StarGraph {
    pub fn edge_nodes(&self) -> usize {
        self.edge_nodes
    }

    pub fn vertex_nodes(&self) -> usize {
        self.vertex_nodes
    }

    pub fn arcs(&self) -> &[StarArc] {
        &self.arcs
    }

    pub fn in_degree_of_edge(&self, edge: usize) -> usize {
        self.arcs
            .iter()
            .filter(|a| matches!(a, StarArc::VertexToEdge { edge: e, .. } if *e == edge))
            .count()
    }

    pub fn out_degree_of_edge(&self, edge: usize) -> usize {
        self.arcs
            .iter()
            .filter(|a| matches!(a, StarArc::EdgeToVertex { edge: e, .. } if *e == edge))
            .count()
    }
}

pub fn star_expansion(h: &DirectedHypergraph) -> StarGraph {
    let mut arcs = Vec::new();
    for (idx, e) in h.edges.iter().enumerate() {
        arcs.extend(e.tail_support().into_iter().map(|v| StarArc::VertexToEdge {
            vertex: v,
            edge: idx,
        }));
        arcs.extend(e.head.iter().map(|&v| StarArc::EdgeToVertex {
            edge: idx,
            vertex: v,
        }));
    }
    StarGraph {
        edge_nodes: h.edges.len(),
        vertex_nodes: h.vertex_count(),
        arcs,
    }
}

/// Adjacency tensor of a `k`-uniform undirected hypergraph: `1/(k-1)!`
/// at every ordering of every edge's vertices.
pub fn uniform_adjacency_tensor(
    order: usize,
    dim: usize,
    edges: &[Vec<usize>],
) -> Result<SparseTensor> {
    let factorial: f64 = (1..order).map(|i| i as f64).product();
    let value = 1.0 / factorial;
    let mut entries = Vec::new();
    for (idx, e) in edges.iter().enumerate() {
        let distinct: BTreeSet<usize> = e.iter().copied().collect();
        if e.len() != order || distinct.len() != order {
            return Err(Error::Hypergraph(format!(
                "edge {} has {} distinct vertices, expected {order}",
                idx + 1,
                distinct.len()
            )));
        }
        entries.extend(e.iter().copied().permutations(order).map(|p| (p, value)));
    }
    SparseTensor::from_entries(order, dim, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(tail: &[usize], head: &[usize]) -> Hyperedge {
        Hyperedge::new(tail.to_vec(), head.iter().copied())
    }

    #[test]
    fn builds_cube_dil_and_shared_tail() {
        let cube = SparsityPattern::new(4, 2, 1, vec![vec![0, 0, 0, 1]], vec![(0, 0)]).unwrap();
        let h = build_hypergraph(&cube);
        assert_eq!(h.edges(), &[edge(&[2], &[0]), edge(&[0, 0, 0], &[1])]);

        let dil = SparsityPattern::new(4, 2, 1, vec![], vec![(0, 0), (1, 0)]).unwrap();
        assert_eq!(build_hypergraph(&dil).edges(), &[edge(&[2], &[0, 1])]);

        let shared = SparsityPattern::new(
            4,
            2,
            1,
            vec![vec![0, 0, 0, 0], vec![0, 0, 0, 1]],
            vec![(0, 0)],
        )
        .unwrap();
        assert_eq!(
            build_hypergraph(&shared).edges(),
            &[edge(&[2], &[0]), edge(&[0, 0, 0], &[0, 1])]
        );
    }

    #[test]
    fn grouping_uses_tail_multisets() {
        // (1,2,1,h) and (2,1,1,h') share the multiset {1,1,2}
        let pat = SparsityPattern::new(
            4,
            3,
            1,
            vec![vec![0, 1, 0, 2], vec![1, 0, 0, 1]],
            vec![(0, 0)],
        )
        .unwrap();
        let h = build_hypergraph(&pat);
        assert_eq!(h.edges().len(), 2);
        assert_eq!(h.edges()[1], edge(&[0, 0, 1], &[1, 2]));
    }

    #[test]
    fn star_expansion_examples() {
        let chain = SparsityPattern::new(2, 2, 1, vec![vec![0, 1]], vec![(0, 0)]).unwrap();
        let s = star_expansion(&build_hypergraph(&chain));
        assert_eq!(
            s.arcs(),
            &[
                StarArc::VertexToEdge { vertex: 2, edge: 0 },
                StarArc::EdgeToVertex { edge: 0, vertex: 0 },
                StarArc::VertexToEdge { vertex: 0, edge: 1 },
                StarArc::EdgeToVertex { edge: 1, vertex: 1 },
            ]
        );
        assert_eq!((s.edge_nodes(), s.vertex_nodes()), (2, 3));

        let dil = DirectedHypergraph::new(2, 1, vec![edge(&[2], &[0, 1])]).unwrap();
        assert_eq!(star_expansion(&dil).arcs().len(), 3);

        let cubic = DirectedHypergraph::new(2, 0, vec![edge(&[0, 0, 0], &[1])]).unwrap();
        let s = star_expansion(&cubic);
        assert_eq!(s.in_degree_of_edge(0), 1);
        assert_eq!(s.out_degree_of_edge(0), 1);
    }

    #[test]
    fn invariants_are_enforced() {
        assert!(DirectedHypergraph::new(2, 1, vec![edge(&[2], &[2])]).is_err());
        assert!(DirectedHypergraph::new(2, 1, vec![edge(&[0], &[1]), edge(&[0], &[0])]).is_err());
        assert!(DirectedHypergraph::new(2, 1, vec![edge(&[], &[1])]).is_err());
        assert!(DirectedHypergraph::new(2, 1, vec![edge(&[0], &[])]).is_err());
        assert!(DirectedHypergraph::new(2, 1, vec![edge(&[5], &[0])]).is_err());
    }

    #[test]
    fn adjacency_tensor_examples() {
        let t = uniform_adjacency_tensor(3, 3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(t.nnz(), 6);
        assert!(t.entries().all(|(_, v)| v == 0.5));
        assert!(uniform_adjacency_tensor(3, 3, &[]).unwrap().is_empty());
        let t = uniform_adjacency_tensor(3, 4, &[vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        assert_eq!(t.nnz(), 12);
        assert!(uniform_adjacency_tensor(3, 4, &[vec![0, 1]]).is_err());
        assert!(uniform_adjacency_tensor(3, 4, &[vec![0, 1, 1]]).is_err());
    }

    #[test]
    fn omnidirectional_edges_become_k_hyperedges() {
        let k = 4;
        let t = uniform_adjacency_tensor(k, 5, &[vec![0, 1, 2, 3]]).unwrap();
        let pat = crate::system::Polysystem::new(t, crate::tensor::DenseMatrix::zeros(5, 1))
            .sparsity_pattern();
        let h = build_hypergraph(&pat);
        assert_eq!(h.edges().len(), k);
        for e in h.edges() {
            assert_eq!(e.head().len(), 1);
            assert_eq!(e.tail_support().len(), k - 1);
            assert!(!e.tail().contains(&e.head()[0]));
        }
    }

    #[test]
    fn round_trip_to_pattern() {
        let pat = SparsityPattern::new(
            4,
            3,
            2,
            vec![vec![0, 0, 1, 2], vec![0, 0, 1, 0], vec![2, 2, 2, 1]],
            vec![(0, 0), (2, 1)],
        )
        .unwrap();
        let back = build_hypergraph(&pat).to_pattern(4).unwrap();
        assert_eq!(back, pat);
    }
}
