//! Lie algebra rank at the origin from symbolic brackets.

use polyctrl::oracle::{
    default_depth_cap, lie_algebra_rank_at_origin, lie_bracket, PolyVectorField,
};
use polyctrl::{strong_controllability, DenseMatrix, Polysystem, SparseTensor};

fn main() -> polyctrl::Result<()> {
    let tensor = SparseTensor::from_entries(4, 2, [(vec![0, 0, 0, 1], 1.0)])?;
    let cube = Polysystem::checked(tensor, DenseMatrix::from_rows(&[[1.0], [0.0]]))?;

    let f = PolyVectorField::drift(&cube);
    let b = PolyVectorField::constant(&[1.0, 0.0]);
    let once = lie_bracket(&b, &f)?;
    let twice = lie_bracket(&b, &once)?;
    let thrice = lie_bracket(&b, &twice)?;
    println!("[b, f] at (1, 0):           {:?}", once.eval(&[1.0, 0.0]));
    println!("[b, [b, [b, f]]] at origin: {:?}", thrice.eval(&[0.0, 0.0]));

    let cap = default_depth_cap(cube.n(), cube.k());
    let lie = lie_algebra_rank_at_origin(&cube, cap)?;
    let numeric = strong_controllability(&cube, 1e-10)?;
    println!(
        "Lie rank {} (saturated {}, depth {} of {}), numeric rank {}",
        lie.rank, lie.saturated, lie.depth, cap, numeric.rank
    );
    Ok(())
}
