//! Accessibility: the flat fixed point versus strict walks with
//! union/difference closure.

use polyctrl::hypergraph::{DirectedHypergraph, Hyperedge};
use polyctrl::oracle::{individual_accessibility_closure, DEFAULT_CLOSURE_CAP};
use polyctrl::structural::accessible_set;

fn report(name: &str, h: &DirectedHypergraph) -> polyctrl::Result<()> {
    let flat: Vec<usize> = accessible_set(h)
        .into_iter()
        .filter(|&v| v < h.n())
        .map(|v| v + 1)
        .collect();
    let closure = individual_accessibility_closure(h, DEFAULT_CLOSURE_CAP)?;
    let one = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
    println!("{name}\n{h}");
    println!("  accessible (flat):          {flat:?}");
    println!(
        "  accessible (strict walks):  {:?}",
        one(&closure.walk_accessible)
    );
    println!(
        "  individually accessible:    {:?}",
        one(&closure.individually_accessible)
    );
    println!("  visited-set family size:    {}\n", closure.sets.len());
    Ok(())
}

fn main() -> polyctrl::Result<()> {
    let e = |t: &[usize], h: &[usize]| Hyperedge::new(t.to_vec(), h.iter().copied());
    report(
        "v2 is never reached",
        &DirectedHypergraph::new(2, 1, vec![e(&[2], &[0]), e(&[0, 0, 0], &[0])])?,
    )?;
    report(
        "heads {v1,v2} and {v1}: a difference isolates v2",
        &DirectedHypergraph::new(2, 2, vec![e(&[2], &[0, 1]), e(&[3], &[0])])?,
    )?;
    report(
        "tail {v1} never fires under strict walks",
        &DirectedHypergraph::new(2, 1, vec![e(&[2], &[0, 1]), e(&[0, 0, 0], &[0])])?,
    )
}
