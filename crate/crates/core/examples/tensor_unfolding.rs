//! Sparse tensors, the head-mode unfolding, and contraction with `x^{k-1}`.

use polyctrl::tensor::{contract, kron_power, unfold};
use polyctrl::{DenseMatrix, SparseTensor};

fn main() -> polyctrl::Result<()> {
    // x1' = x2^3, x2' = 2 x1 x2^2 (indices: three tail modes, then head)
    let a = SparseTensor::from_entries(4, 2, [(vec![1, 1, 1, 0], 1.0), (vec![0, 1, 1, 1], 2.0)])?;
    let unfolded = unfold(&a)?;
    println!("A_(4) is {} x {}:", unfolded.rows(), unfolded.cols());
    println!("{unfolded:?}");

    let x = [0.5, -1.5];
    let via_contraction = contract(&a, &x)?;
    let via_unfolding = unfolded.matmul(&kron_power(&DenseMatrix::column_vector(&x), 3)?)?;
    println!("A x^3 by contraction: {via_contraction:?}");
    println!("A x^3 by unfolding:   {:?}", via_unfolding.column(0));

    let sym = a.symmetrize_tail();
    println!("tail-symmetrized entries: {}", sym.nnz());
    Ok(())
}
