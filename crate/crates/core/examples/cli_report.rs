//! Running the command-line front end in memory.

use polyctrl::cli::run;

fn main() {
    let system = "tensor 4 2\nmatrix 2 1\n1 1 1.0\n2 1 1.0\n";
    for args in [
        vec!["polyctrl", "analyze", "--numeric"],
        vec!["polyctrl", "--json", "dilation"],
    ] {
        let out = run(&args, &mut system.as_bytes());
        println!("$ {} (exit {})\n{}", args.join(" "), out.code, out.stdout);
    }
    let generated = run(
        ["polyctrl", "gen", "--n", "3", "--seed", "7"],
        &mut std::io::empty(),
    );
    print!("$ polyctrl gen --n 3 --seed 7\n{}", generated.stdout);
}
