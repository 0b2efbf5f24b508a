//! Structural controllability of odd homogeneous polynomial control systems
//! `ẋ = A x^{k-1} + B u`.
//!
//! A pair `(A, B)` is structurally controllable when its directed
//! hypergraph has no hyperedge dilation and no inaccessible vertex
//! ([`structural`]). The numeric rank tests in [`numeric`] and the
//! exhaustive/symbolic engines in [`oracle`] cross-check that verdict on
//! concrete realizations.

pub mod cli;
pub mod error;
pub mod family;
pub mod hypergraph;
pub mod numeric;
pub mod oracle;
pub mod structural;
pub mod system;
pub mod tensor;

pub use error::{Error, Result};
pub use hypergraph::{build_hypergraph, star_expansion, DirectedHypergraph, Hyperedge, StarGraph};
pub use numeric::{strong_controllability, RankReport};
pub use structural::{structural_verdict, StructuralVerdict};
pub use system::{Polysystem, SparsityPattern};
pub use tensor::{DenseMatrix, SparseTensor};
