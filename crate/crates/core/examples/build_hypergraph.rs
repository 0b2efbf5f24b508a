//! Directed hypergraph of a sparsity pattern and its star expansion.

use polyctrl::hypergraph::StarArc;
use polyctrl::{build_hypergraph, star_expansion, SparsityPattern};

fn main() -> polyctrl::Result<()> {
    // x1' = u, x2' = x1^3, x3' = x1 x2^2 + x1^2 x2 (two tails, one head)
    let pattern = SparsityPattern::new(
        4,
        3,
        1,
        [vec![0, 0, 0, 1], vec![0, 1, 1, 2], vec![0, 0, 1, 2]],
        [(0, 0)],
    )?;
    let h = build_hypergraph(&pattern);
    println!("{h}");

    let star = star_expansion(&h);
    println!(
        "\nstar expansion: {} hyperedge nodes, {} vertex nodes",
        star.edge_nodes(),
        star.vertex_nodes()
    );
    for arc in star.arcs() {
        match *arc {
            StarArc::VertexToEdge { vertex, edge } => {
                println!("  v{} -> e{}", vertex + 1, edge + 1)
            }
            StarArc::EdgeToVertex { edge, vertex } => {
                println!("  e{} -> v{}", edge + 1, vertex + 1)
            }
        }
    }
    println!("\nround trip to a pattern: {}", h.to_pattern(4)? == pattern);
    Ok(())
}
