//! Sparse coefficient tensors and the dense matrices they unfold into.
//!
//! Indices are 0-based in memory. Mode `k` (the last one) is the head mode:
//! the polynomial `A x^{k-1}` contracts modes `1..k-1` and leaves mode `k`
//! as the output coordinate.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Default budget, in matrix cells, for unfoldings and Kronecker powers.
pub const DEFAULT_CAP: usize = 1 << 26;

fn check_cells(what: &'static str, rows: u128, cols: u128, cap: usize) -> Result<()> {
    let needed = rows.saturating_mul(cols);
    if needed > cap as u128 {
        return Err(Error::Capacity { what, needed, cap });
    }
    Ok(())
}

fn checked_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Row-major dense real matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                context: "dense matrix data",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend_from_slice(r.as_ref());
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// A single column vector.
    pub fn column_vector(v: &[f64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension {
                context: "matrix product",
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0.0 {
                    continue;
                }
                let src = &rhs.data[l * rhs.cols..(l + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension {
                context: "matrix-vector product",
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hcat(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::Dimension {
                context: "horizontal concatenation",
                expected: self.rows,
                found: rhs.rows,
            });
        }
        let cols = self.cols + rhs.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
            data.extend_from_slice(&rhs.data[i * rhs.cols..(i + 1) * rhs.cols]);
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols,
            data,
        })
    }

    pub fn scaled(&self, factor: f64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<f64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out[(i, j)] = m[(i, j)];
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

/// `k`-mode, `n`-dimensional sparse tensor. Stored support equals
/// structural support: exact zeros are rejected at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseTensor {
    order: usize,
    dim: usize,
    entries: BTreeMap<Vec<usize>, f64>,
}

impl SparseTensor {
    /// Builds a tensor from 0-based multi-indices.
    pub fn from_entries<I>(order: usize, dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, f64)>,
    {
        if order < 2 {
            return Err(Error::InvalidSystem(format!(
                "tensor order must be at least 2, got {order}"
            )));
        }
        if dim < 1 {
            return Err(Error::InvalidSystem(
                "tensor dimension must be at least 1".into(),
            ));
        }
        let mut map = BTreeMap::new();
        for (index, value) in entries {
            if index.len() != order {
                return Err(Error::IndexArity {
                    found: index.len(),
                    index,
                    order,
                });
            }
            if index.iter().any(|&i| i >= dim) {
                return Err(Error::IndexOutOfRange { index, dim });
            }
            if value == 0.0 {
                return Err(Error::ZeroCoefficient { index });
            }
            if map.contains_key(&index) {
                return Err(Error::DuplicateEntry { index });
            }
            map.insert(index, value);
        }
        Ok(Self {
            order,
            dim,
            entries: map,
        })
    }

    pub fn empty(order: usize, dim: usize) -> Result<Self> {
        Self::from_entries(order, dim, std::iter::empty())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in lexicographic multi-index order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        self.entries.iter().map(|(k, v)| (k.as_slice(), *v))
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.entries.get(index).copied().unwrap_or(0.0)
    }

    pub fn scaled(&self, factor: f64) -> SparseTensor {
        assert!(factor != 0.0, "scaling by zero would empty the support");
        SparseTensor {
            order: self.order,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
        }
    }

    /// Averages each coefficient over the distinct orderings of its tail
    /// modes. The polynomial `A x^{k-1}` is unchanged; mixed contractions
    /// with distinct vectors become order-independent.
    pub fn symmetrize_tail(&self) -> SparseTensor {
        let mut acc: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        let tail_len = self.order - 1;
        for (index, value) in &self.entries {
            let head = index[tail_len];
            let perms: Vec<Vec<usize>> = index[..tail_len]
                .iter()
                .copied()
                .permutations(tail_len)
                .unique()
                .collect();
            let share = value / perms.len() as f64;
            for mut p in perms {
                p.push(head);
                *acc.entry(p).or_insert(0.0) += share;
            }
        }
        acc.retain(|_, v| *v != 0.0);
        SparseTensor {
            order: self.order,
            dim: self.dim,
            entries: acc,
        }
    }
}

/// Mode-`k` unfolding with the default capacity.
pub fn unfold(t: &SparseTensor) -> Result<DenseMatrix> {
    unfold_with_cap(t, DEFAULT_CAP)
}

/// Mode-`k` unfolding: row = head index, column = tail multi-index read
/// with mode 1 slowest, so that `unfold(T) * x^{[k-1]} == contract(T, x)`.
pub fn unfold_with_cap(t: &SparseTensor, cap: usize) -> Result<DenseMatrix> {
    let cols = checked_pow(t.dim, t.order - 1);
    if cols > cap as u128 {
        return Err(Error::Capacity {
            what: "unfolding columns",
            needed: cols,
            cap,
        });
    }
    check_cells("unfolding", t.dim as u128, cols, cap)?;
    let mut out = DenseMatrix::zeros(t.dim, cols as usize);
    for (index, value) in t.entries() {
        let (tail, head) = index.split_at(t.order - 1);
        out[(head[0], tail_column(tail, t.dim))] = value;
    }
    Ok(out)
}

/// Column of the unfolding addressed by a tail multi-index.
pub fn tail_column(tail: &[usize], dim: usize) -> usize {
    tail.iter().fold(0, |acc, &i| acc * dim + i)
}

/// Evaluates the homogeneous polynomial `A x^{k-1}` on the sparse entries.
pub fn contract(t: &SparseTensor, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != t.dim {
        return Err(Error::Dimension {
            context: "contraction vector",
            expected: t.dim,
            found: x.len(),
        });
    }
    let mut out = vec![0.0; t.dim];
    for (index, value) in t.entries() {
        let (tail, head) = index.split_at(t.order - 1);
        out[head[0]] += value * tail.iter().map(|&i| x[i]).product::<f64>();
    }
    Ok(out)
}

/// Contracts tail mode `m` with `vectors[m]`.
pub fn contract_multi(t: &SparseTensor, vectors: &[&[f64]]) -> Result<Vec<f64>> {
    if vectors.len() != t.order - 1 {
        return Err(Error::Dimension {
            context: "contraction vector count",
            expected: t.order - 1,
            found: vectors.len(),
        });
    }
    if let Some(bad) = vectors.iter().find(|v| v.len() != t.dim) {
        return Err(Error::Dimension {
            context: "contraction vector",
            expected: t.dim,
            found: bad.len(),
        });
    }
    let mut out = vec![0.0; t.dim];
    for (index, value) in t.entries() {
        let (tail, head) = index.split_at(t.order - 1);
        out[head[0]] += value
            * tail
                .iter()
                .zip(vectors)
                .map(|(&i, v)| v[i])
                .product::<f64>();
    }
    Ok(out)
}

pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = DenseMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let s = a[(i, j)];
            if s == 0.0 {
                continue;
            }
            for p in 0..b.rows {
                for q in 0..b.cols {
                    out[(i * b.rows + p, j * b.cols + q)] = s * b[(p, q)];
                }
            }
        }
    }
    out
}

/// Kronecker power with the default capacity.
pub fn kron_power(m: &DenseMatrix, r: usize) -> Result<DenseMatrix> {
    kron_power_with_cap(m, r, DEFAULT_CAP)
}

/// `M ⊗ … ⊗ M` (`r` factors), first factor slowest-varying.
pub fn kron_power_with_cap(m: &DenseMatrix, r: usize, cap: usize) -> Result<DenseMatrix> {
    if r == 0 {
        return Err(Error::InvalidSystem(
            "Kronecker power must be at least 1".into(),
        ));
    }
    check_cells(
        "Kronecker power",
        checked_pow(m.rows, r),
        checked_pow(m.cols, r),
        cap,
    )?;
    let mut acc = m.clone();
    for _ in 1..r {
        acc = kron(&acc, m);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(order: usize, dim: usize, entries: &[(&[usize], f64)]) -> SparseTensor {
        SparseTensor::from_entries(order, dim, entries.iter().map(|(i, v)| (i.to_vec(), *v)))
            .unwrap()
    }

    #[test]
    fn unfold_places_head_as_row() {
        // A_{1,2,1} = 5 (1-based)
        let a = t(3, 2, &[(&[0, 1, 0], 5.0)]);
        let u = unfold(&a).unwrap();
        assert_eq!((u.rows(), u.cols()), (2, 4));
        assert_eq!(u[(0, 1)], 5.0);
        assert_eq!(u.as_slice().iter().filter(|v| **v != 0.0).count(), 1);
    }

    #[test]
    fn unfold_order_two_is_transpose_placement() {
        let a = t(2, 2, &[(&[0, 1], 1.0)]);
        let u = unfold(&a).unwrap();
        assert_eq!(u, DenseMatrix::from_rows(&[[0.0, 0.0], [1.0, 0.0]]));
    }

    #[test]
    fn unfold_order_four_matches_enumeration() {
        let a = t(4, 2, &[(&[0, 0, 0, 1], 1.0)]);
        let u = unfold(&a).unwrap();
        // enumerate every multi-index independently of tail_column
        let mut col = 0;
        for i1 in 0..2 {
            for i2 in 0..2 {
                for i3 in 0..2 {
                    for h in 0..2 {
                        assert_eq!(u[(h, col)], a.get(&[i1, i2, i3, h]));
                    }
                    col += 1;
                }
            }
        }
        assert_eq!(u[(1, 0)], 1.0);
    }

    #[test]
    fn unfold_capacity_error() {
        let a = t(4, 10, &[]);
        let err = unfold_with_cap(&a, 100).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn contract_examples() {
        let cube = t(4, 2, &[(&[0, 0, 0, 1], 1.0)]);
        assert_eq!(contract(&cube, &[2.0, 0.0]).unwrap(), vec![0.0, 8.0]);
        assert_eq!(contract(&cube, &[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        let a = t(3, 2, &[(&[0, 1, 0], 5.0)]);
        let x = [1.0, 1.0];
        let direct = contract(&a, &x).unwrap();
        assert_eq!(direct, vec![5.0, 0.0]);
        let via = unfold(&a)
            .unwrap()
            .matvec(
                kron_power(&DenseMatrix::column_vector(&x), 2)
                    .unwrap()
                    .as_slice(),
            )
            .unwrap();
        assert_eq!(via, direct);
        assert!(matches!(contract(&a, &[1.0]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn contract_multi_examples() {
        let e1 = [1.0, 0.0];
        let e2 = [0.0, 1.0];
        let cube = t(4, 2, &[(&[0, 0, 0, 1], 1.0)]);
        assert_eq!(
            contract_multi(&cube, &[&e1, &e1, &e1]).unwrap(),
            vec![0.0, 1.0]
        );
        assert_eq!(
            contract_multi(&cube, &[&e1, &e1, &e2]).unwrap(),
            vec![0.0, 0.0]
        );
        let a = t(3, 2, &[(&[0, 1, 0], 5.0)]);
        assert_eq!(contract_multi(&a, &[&e1, &e2]).unwrap(), vec![5.0, 0.0]);
        assert_eq!(contract_multi(&a, &[&e2, &e1]).unwrap(), vec![0.0, 0.0]);
        assert!(contract_multi(&a, &[&e1]).is_err());
        assert!(contract_multi(&a, &[&e1, &[1.0]]).is_err());
    }

    #[test]
    fn kron_power_examples() {
        let x = DenseMatrix::column_vector(&[1.0, 2.0]);
        assert_eq!(kron_power(&x, 2).unwrap().as_slice(), &[1.0, 2.0, 2.0, 4.0]);
        let m = DenseMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        assert_eq!(kron_power(&m, 1).unwrap(), m);
        assert_eq!(
            kron_power(&DenseMatrix::identity(2), 3).unwrap(),
            DenseMatrix::identity(8)
        );
        assert!(matches!(
            kron_power_with_cap(&m, 20, DEFAULT_CAP),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn construction_rejects_bad_entries() {
        let zero = SparseTensor::from_entries(2, 2, vec![(vec![0, 1], 0.0)]);
        assert!(matches!(zero, Err(Error::ZeroCoefficient { .. })));
        let dup = SparseTensor::from_entries(2, 2, vec![(vec![0, 1], 1.0), (vec![0, 1], 2.0)]);
        assert!(matches!(dup, Err(Error::DuplicateEntry { .. })));
        let oob = SparseTensor::from_entries(2, 2, vec![(vec![0, 2], 1.0)]);
        assert!(matches!(oob, Err(Error::IndexOutOfRange { .. })));
        let arity = SparseTensor::from_entries(3, 2, vec![(vec![0, 1], 1.0)]);
        assert!(matches!(arity, Err(Error::IndexArity { .. })));
    }

    #[test]
    fn symmetrize_preserves_polynomial() {
        let a = t(4, 3, &[(&[0, 1, 1, 2], 3.0), (&[2, 0, 0, 0], -1.5)]);
        let s = a.symmetrize_tail();
        assert_eq!(s.nnz(), 3 + 3);
        let x = [0.3, -1.2, 2.0];
        let p = contract(&a, &x).unwrap();
        let q = contract(&s, &x).unwrap();
        for (u, v) in p.iter().zip(&q) {
            assert!((u - v).abs() < 1e-12);
        }
        assert_eq!(s.get(&[1, 0, 1, 2]), 1.0);
    }
}
