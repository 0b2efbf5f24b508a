//! Structural controllability verdicts with witnesses.

use polyctrl::{structural_verdict, SparsityPattern};

fn main() -> polyctrl::Result<()> {
    let cases = [
        (
            "cube: x1' = u, x2' = x1^3",
            SparsityPattern::new(4, 2, 1, [vec![0, 0, 0, 1]], [(0, 0)])?,
        ),
        (
            "inaccessible: x1' = x1^3 + u, x2' = 0",
            SparsityPattern::new(4, 2, 1, [vec![0, 0, 0, 0]], [(0, 0)])?,
        ),
        (
            "dilated: x1' = u, x2' = u",
            SparsityPattern::new(4, 2, 1, Vec::<Vec<usize>>::new(), [(0, 0), (1, 0)])?,
        ),
    ];
    for (name, pattern) in &cases {
        let v = structural_verdict(pattern);
        let one = |s: &[usize]| s.iter().map(|x| x + 1).collect::<Vec<_>>();
        println!("{name}");
        println!("  controllable:     {}", v.controllable);
        println!(
            "  dilation witness: {:?}",
            v.dilation_witness.as_deref().map(one)
        );
        println!("  inaccessible:     {:?}", one(&v.inaccessible));
    }
    Ok(())
}
