//! The control pair `(A, B)` of `ẋ = A x^{k-1} + B u`, its sparsity
//! pattern, and seeded realizations of a pattern.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tensor::{DenseMatrix, SparseTensor};

/// Coefficient magnitudes of sampled realizations lie in this range.
pub const REALIZATION_MAGNITUDE: (f64, f64) = (0.5, 2.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Polysystem {
    tensor: SparseTensor,
    control: DenseMatrix,
}

/// A failed invariant of a [`Polysystem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Tensor order `k` is odd, so the polynomial degree `k-1` is even.
    Parity {
        order: usize,
    },
    /// Control matrix row count differs from the tensor dimension.
    Dimension {
        tensor_dim: usize,
        control_rows: usize,
    },
    NoInputs,
    NonFiniteCoefficient,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Parity { order } => write!(
                f,
                "parity: tensor order {order} gives an even-degree polynomial (order must be even)"
            ),
            Violation::Dimension {
                tensor_dim,
                control_rows,
            } => write!(
                f,
                "dimension: control matrix has {control_rows} rows, tensor dimension is {tensor_dim}"
            ),
            Violation::NoInputs => write!(f, "inputs: control matrix has no columns"),
            Violation::NonFiniteCoefficient => write!(f, "coefficients: non-finite value"),
        }
    }
}

impl Polysystem {
    /// Pairs a tensor with a control matrix without checking invariants;
    /// see [`Polysystem::validate`] and [`Polysystem::checked`].
    pub fn new(tensor: SparseTensor, control: DenseMatrix) -> Self {
        Self { tensor, control }
    }

    pub fn checked(tensor: SparseTensor, control: DenseMatrix) -> Result<Self> {
        let sys = Self::new(tensor, control);
        sys.ensure_valid()?;
        Ok(sys)
    }

    pub fn tensor(&self) -> &SparseTensor {
        &self.tensor
    }

    pub fn control(&self) -> &DenseMatrix {
        &self.control
    }

    /// State dimension `n`.
    pub fn n(&self) -> usize {
        self.tensor.dim()
    }

    /// Input count `m`.
    pub fn m(&self) -> usize {
        self.control.cols()
    }

    /// Tensor order `k`.
    pub fn k(&self) -> usize {
        self.tensor.order()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !self.k().is_multiple_of(2) {
            out.push(Violation::Parity { order: self.k() });
        }
        if self.control.rows() != self.n() {
            out.push(Violation::Dimension {
                tensor_dim: self.n(),
                control_rows: self.control.rows(),
            });
        }
        if self.control.cols() == 0 {
            out.push(Violation::NoInputs);
        }
        let finite = self.tensor.entries().all(|(_, v)| v.is_finite())
            && self.control.as_slice().iter().all(|v| v.is_finite());
        if !finite {
            out.push(Violation::NonFiniteCoefficient);
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSystem(
                violations
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("; "),
            ))
        }
    }

    pub fn sparsity_pattern(&self) -> SparsityPattern {
        let control_support = (0..self.control.rows())
            .flat_map(|i| (0..self.control.cols()).map(move |j| (i, j)))
            .filter(|&(i, j)| self.control[(i, j)] != 0.0)
            .collect();
        SparsityPattern {
            order: self.k(),
            dim: self.n(),
            inputs: self.m(),
            tensor_support: self.tensor.entries().map(|(i, _)| i.to_vec()).collect(),
            control_support,
        }
    }

    /// Every coefficient of `A` and `B` multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Polysystem {
        Polysystem {
            tensor: self.tensor.scaled(factor),
            control: self.control.scaled(factor),
        }
    }
}

/// Supports of `A` and `B`, i.e. the equivalence class of realizations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsityPattern {
    order: usize,
    dim: usize,
    inputs: usize,
    tensor_support: BTreeSet<Vec<usize>>,
    control_support: BTreeSet<(usize, usize)>,
}

impl SparsityPattern {
    pub fn new<T, C>(
        order: usize,
        dim: usize,
        inputs: usize,
        tensor_support: T,
        control_support: C,
    ) -> Result<Self>
    where
        T: IntoIterator<Item = Vec<usize>>,
        C: IntoIterator<Item = (usize, usize)>,
    {
        if order < 2 || dim < 1 {
            return Err(Error::InvalidSystem(format!(
                "pattern needs order >= 2 and dimension >= 1 (got {order}, {dim})"
            )));
        }
        let mut tensor = BTreeSet::new();
        for index in tensor_support {
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
            if !tensor.insert(index.clone()) {
                return Err(Error::DuplicateEntry { index });
            }
        }
        let mut control = BTreeSet::new();
        for (i, j) in control_support {
            if i >= dim || j >= inputs {
                return Err(Error::IndexOutOfRange {
                    index: vec![i, j],
                    dim: if i >= dim { dim } else { inputs },
                });
            }
            if !control.insert((i, j)) {
                return Err(Error::DuplicateEntry { index: vec![i, j] });
            }
        }
        Ok(Self {
            order,
            dim,
            inputs,
            tensor_support: tensor,
            control_support: control,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn tensor_support(&self) -> &BTreeSet<Vec<usize>> {
        &self.tensor_support
    }

    pub fn control_support(&self) -> &BTreeSet<(usize, usize)> {
        &self.control_support
    }

    /// Draws a realization: every supported coefficient is `s * u` with
    /// `s` uniform on `{-1, +1}` and `u` uniform on `[0.5, 2.0]`, in
    /// lexicographic support order (tensor first, then control).
    pub fn sample_realization(&self, seed: u64) -> Polysystem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = REALIZATION_MAGNITUDE;
        let mut draw = move || {
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            sign * rng.gen_range(lo..=hi)
        };
        let entries: Vec<(Vec<usize>, f64)> = self
            .tensor_support
            .iter()
            .map(|i| (i.clone(), draw()))
            .collect();
        let tensor = SparseTensor::from_entries(self.order, self.dim, entries)
            .expect("pattern indices were validated");
        let mut control = DenseMatrix::zeros(self.dim, self.inputs);
        for &(i, j) in &self.control_support {
            control[(i, j)] = draw();
        }
        Polysystem::new(tensor, control)
    }

    /// Realization with every supported coefficient equal to one.
    pub fn unit_realization(&self) -> Polysystem {
        let tensor = SparseTensor::from_entries(
            self.order,
            self.dim,
            self.tensor_support.iter().map(|i| (i.clone(), 1.0)),
        )
        .expect("pattern indices were validated");
        let mut control = DenseMatrix::zeros(self.dim, self.inputs);
        for &(i, j) in &self.control_support {
            control[(i, j)] = 1.0;
        }
        Polysystem::new(tensor, control)
    }
}
