//! Hyperedge dilation by maximum matching, checked against subset enumeration.

use polyctrl::hypergraph::{DirectedHypergraph, Hyperedge};
use polyctrl::oracle::brute_force_dilation;
use polyctrl::structural::detect_dilation;

fn show(name: &str, h: &DirectedHypergraph) -> polyctrl::Result<()> {
    let d = detect_dilation(h);
    let brute = brute_force_dilation(h)?;
    let one = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
    println!("{name}");
    println!(
        "  matching (edge, vertex): {:?}",
        d.matching
            .iter()
            .map(|(e, v)| (e + 1, v + 1))
            .collect::<Vec<_>>()
    );
    println!(
        "  dilated: {}  witness: {:?}",
        d.dilated,
        d.witness.as_deref().map(one)
    );
    println!(
        "  brute force agrees: {}  smallest witness: {:?}",
        brute.dilated == d.dilated,
        brute.witness.as_deref().map(one)
    );
    Ok(())
}

fn main() -> polyctrl::Result<()> {
    // one input drives both states and nothing else does
    let fan = DirectedHypergraph::new(2, 1, vec![Hyperedge::new(vec![2], [0, 1])])?;
    show("single control edge into two states", &fan)?;

    // the greedy choice e1 -> v1 must be undone so that e2 can take v1
    let swap = DirectedHypergraph::new(
        2,
        1,
        vec![
            Hyperedge::new(vec![2], [0, 1]),
            Hyperedge::new(vec![0, 0, 0], [0]),
        ],
    )?;
    show("augmenting path needed", &swap)
}
