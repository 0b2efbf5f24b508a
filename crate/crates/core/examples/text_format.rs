//! Reading and writing the plain-text system format.

use polyctrl::cli::{format_pattern, format_system, parse_system, ParsedInput};

fn main() -> polyctrl::Result<()> {
    let text = "# x2' = x1^3\ntensor 4 2\n1 1 1 2 1.0\nmatrix 2 1\n1 1 1.0\n";
    let ParsedInput::System(system) = parse_system(text)? else {
        unreachable!("values were given");
    };
    print!("system:\n{}", format_system(&system));
    print!("pattern:\n{}", format_pattern(&system.sparsity_pattern()));

    for bad in [
        "tensor 4 2\n1 1 1 3 1.0\nmatrix 2 1\n1 1 1.0\n",
        "tensor 3 2\nmatrix 2 1\n1 1\n",
        "tensor 4 2\n1 1 1 2\n1 1 1 2\nmatrix 2 1\n1 1\n",
    ] {
        println!("rejected: {}", parse_system(bad).unwrap_err());
    }
    Ok(())
}
