//! Strong-controllability rank tests on a realization.
//!
//! The reduced controllability matrix is grown from `B` by repeatedly
//! appending `A_(k) (C ⊗ … ⊗ C)` and re-orthonormalizing through a thin
//! SVD, dropping singular values at or below `tol * σ_max`. The tensor is
//! first symmetrized over its tail modes: for an asymmetric tensor the
//! cross terms `c_a ⊗ c_b ⊗ c_c` would otherwise reach directions the
//! polynomial itself never produces.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::system::Polysystem;
use crate::tensor::{kron_power_with_cap, unfold_with_cap, DenseMatrix, SparseTensor, DEFAULT_CAP};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub n: usize,
    pub strongly_controllable: bool,
    pub iterations: usize,
    /// Relative singular-value cutoff actually applied in the last step.
    pub tol: f64,
    /// Rank after the initial `B` step and after each iteration.
    pub rank_history: Vec<usize>,
}

/// Output of the SVD reduction loop.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// Orthonormal basis of the reachable subspace, `n × rank`.
    pub basis: DenseMatrix,
    pub iterations: usize,
    pub tol: f64,
    pub rank_history: Vec<usize>,
}

/// Relative cutoff used when `tol == 0`.
pub fn auto_tolerance(rows: usize, cols: usize) -> f64 {
    rows.max(cols).max(1) as f64 * f64::EPSILON
}

/// Left singular vectors of `m` whose singular values exceed
/// `tol * σ_max` (`tol == 0` selects [`auto_tolerance`]).
pub fn orthonormal_range(m: &DenseMatrix, tol: f64) -> (DenseMatrix, f64) {
    let tol = if tol == 0.0 {
        auto_tolerance(m.rows(), m.cols())
    } else {
        tol
    };
    if m.rows() == 0 || m.cols() == 0 {
        return (DenseMatrix::zeros(m.rows(), 0), tol);
    }
    let svd = m.to_nalgebra().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sigma_max = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    let keep: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| sigma_max > 0.0 && s > tol * sigma_max)
        .map(|(i, _)| i)
        .collect();
    let mut out = DenseMatrix::zeros(m.rows(), keep.len());
    for (c, &i) in keep.iter().enumerate() {
        for r in 0..m.rows() {
            out[(r, c)] = u[(r, i)];
        }
    }
    (out, tol)
}

/// Numerical rank with a relative singular-value cutoff.
pub fn matrix_rank(m: &DenseMatrix, tol: f64) -> usize {
    orthonormal_range(m, tol).0.cols()
}

/// Rank after scaling every non-zero column to unit norm. Columns of
/// Krylov-type matrices differ in magnitude by powers of the coefficient
/// scale; equilibration keeps the relative cutoff from discarding whole
/// blocks. Exact zero columns are dropped.
pub fn equilibrated_rank(m: &DenseMatrix, tol: f64) -> usize {
    let columns: Vec<Vec<f64>> = (0..m.cols())
        .map(|j| m.column(j))
        .filter_map(|c| {
            let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            (norm > 0.0).then(|| c.iter().map(|x| x / norm).collect())
        })
        .collect();
    if columns.is_empty() {
        return 0;
    }
    let mut data = vec![0.0; m.rows() * columns.len()];
    for (j, c) in columns.iter().enumerate() {
        for (i, &x) in c.iter().enumerate() {
            data[i * columns.len() + j] = x;
        }
    }
    let scaled =
        DenseMatrix::from_row_major(m.rows(), columns.len(), data).expect("shape matches data");
    matrix_rank(&scaled, tol)
}

/// `A_(k) (C ⊗ … ⊗ C)` evaluated on the sparse entries, one column per
/// tuple of columns of `C` (first factor slowest).
fn kronecker_image(t: &SparseTensor, c: &DenseMatrix, cap: usize) -> Result<DenseMatrix> {
    let tail = t.order() - 1;
    let s = c.cols();
    let combos = (s as u128).checked_pow(tail as u32).unwrap_or(u128::MAX);
    let cells = combos.saturating_mul(t.dim() as u128);
    if cells > cap as u128 {
        return Err(Error::Capacity {
            what: "Kronecker image",
            needed: cells,
            cap,
        });
    }
    let combos = combos as usize;
    let mut out = DenseMatrix::zeros(t.dim(), combos);
    let mut pick = vec![0usize; tail];
    for col in 0..combos {
        let mut rest = col;
        for slot in (0..tail).rev() {
            pick[slot] = rest % s;
            rest /= s;
        }
        for (index, value) in t.entries() {
            let prod: f64 = index[..tail]
                .iter()
                .zip(&pick)
                .map(|(&i, &a)| c[(i, a)])
                .product();
            out[(index[tail], col)] += value * prod;
        }
    }
    Ok(out)
}

fn ensure_valid(p: &Polysystem, tol: f64) -> Result<()> {
    p.ensure_valid()?;
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::InvalidSystem(format!(
            "tolerance must be finite and >= 0, got {tol}"
        )));
    }
    Ok(())
}

/// SVD-reduced controllability matrix with full diagnostics.
pub fn reduce(p: &Polysystem, tol: f64, cap: usize) -> Result<Reduction> {
    ensure_valid(p, tol)?;
    let n = p.n();
    let sym = p.tensor().symmetrize_tail();
    let (mut basis, mut used) = orthonormal_range(p.control(), tol);
    let mut history = vec![basis.cols()];
    let mut iterations = 0;
    while iterations < n && basis.cols() < n {
        let image = kronecker_image(&sym, &basis, cap)?;
        let stacked = basis.hcat(&image)?;
        let (next, t) = orthonormal_range(&stacked, tol);
        used = t;
        iterations += 1;
        let grew = next.cols() > basis.cols();
        basis = next;
        history.push(basis.cols());
        if !grew {
            break;
        }
    }
    Ok(Reduction {
        basis,
        iterations,
        tol: used,
        rank_history: history,
    })
}

/// Orthonormal `C_r`, `n × rank`.
pub fn reduced_controllability_matrix(p: &Polysystem, tol: f64) -> Result<DenseMatrix> {
    Ok(reduce(p, tol, DEFAULT_CAP)?.basis)
}

pub fn strong_controllability(p: &Polysystem, tol: f64) -> Result<RankReport> {
    strong_controllability_with_cap(p, tol, DEFAULT_CAP)
}

pub fn strong_controllability_with_cap(p: &Polysystem, tol: f64, cap: usize) -> Result<RankReport> {
    let r = reduce(p, tol, cap)?;
    let rank = r.basis.cols();
    Ok(RankReport {
        rank,
        n: p.n(),
        strongly_controllable: rank == p.n(),
        iterations: r.iterations,
        tol: r.tol,
        rank_history: r.rank_history,
    })
}

/// Unreduced controllability matrix built from the dense unfolding and
/// literal Kronecker powers: `block_0 = B`, and `block_{i+1}` is
/// `A_(k)` applied to the `(k-1)`-th Kronecker power of all blocks so far.
/// Only usable at desk scale; the column count explodes.
pub fn explicit_controllability_matrix(p: &Polysystem, terms: usize) -> Result<DenseMatrix> {
    explicit_controllability_matrix_with_cap(p, terms, DEFAULT_CAP)
}

pub fn explicit_controllability_matrix_with_cap(
    p: &Polysystem,
    terms: usize,
    cap: usize,
) -> Result<DenseMatrix> {
    p.ensure_valid()?;
    if terms == 0 {
        return Err(Error::InvalidSystem("terms must be at least 1".into()));
    }
    let unfolded = unfold_with_cap(&p.tensor().symmetrize_tail(), cap)?;
    let mut acc = p.control().clone();
    for _ in 1..terms {
        let power = kron_power_with_cap(&acc, p.k() - 1, cap)?;
        let block = unfolded.matmul(&power)?;
        acc = acc.hcat(&block)?;
    }
    Ok(acc)
}
