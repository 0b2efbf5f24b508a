//! Dynamics driven by the adjacency tensor of a 4-uniform hypergraph.

use polyctrl::hypergraph::uniform_adjacency_tensor;
use polyctrl::{
    build_hypergraph, strong_controllability, structural_verdict, DenseMatrix, Polysystem,
};

fn main() -> polyctrl::Result<()> {
    // two 4-vertex edges sharing vertices 3 and 4
    let tensor = uniform_adjacency_tensor(4, 6, &[vec![0, 1, 2, 3], vec![2, 3, 4, 5]])?;
    println!("adjacency tensor: {} non-zero entries", tensor.nnz());

    for inputs in [vec![0usize], vec![0, 1, 2], vec![0, 1, 2, 4]] {
        let mut b = DenseMatrix::zeros(6, inputs.len());
        for (j, &i) in inputs.iter().enumerate() {
            b[(i, j)] = 1.0;
        }
        let system = Polysystem::checked(tensor.clone(), b)?;
        let pattern = system.sparsity_pattern();
        let verdict = structural_verdict(&pattern);
        let rank = strong_controllability(&system, 1e-10)?;
        println!(
            "inputs at {:?}: {} hyperedges, structural {}, rank {}/6",
            inputs.iter().map(|i| i + 1).collect::<Vec<_>>(),
            build_hypergraph(&pattern).edges().len(),
            verdict.controllable,
            rank.rank
        );
    }
    Ok(())
}
