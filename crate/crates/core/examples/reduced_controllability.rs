//! Rank of the reduced controllability matrix, and the explicit matrix it
//! replaces.

use polyctrl::numeric::{equilibrated_rank, explicit_controllability_matrix, reduce};
use polyctrl::tensor::DEFAULT_CAP;
use polyctrl::{strong_controllability, DenseMatrix, Polysystem, SparseTensor};

fn main() -> polyctrl::Result<()> {
    // chain x1' = u, x2' = x1^3, x3' = x1^2 x2
    let tensor =
        SparseTensor::from_entries(4, 3, [(vec![0, 0, 0, 1], 1.0), (vec![0, 0, 1, 2], 1.5)])?;
    let system = Polysystem::checked(tensor, DenseMatrix::from_rows(&[[1.0], [0.0], [0.0]]))?;

    let report = strong_controllability(&system, 1e-10)?;
    println!(
        "rank {} of {} after {} iterations, history {:?}",
        report.rank, report.n, report.iterations, report.rank_history
    );

    let reduction = reduce(&system, 1e-10, DEFAULT_CAP)?;
    println!("orthonormal basis:\n{:?}", reduction.basis);

    let explicit = explicit_controllability_matrix(&system, system.n())?;
    println!(
        "explicit matrix: {} columns, rank {}",
        explicit.cols(),
        equilibrated_rank(&explicit, 1e-10)
    );
    Ok(())
}
