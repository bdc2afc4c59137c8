//! Counting subspaces: Gaussian binomials, ball sizes and totals.

use subspace_bounds::cdc_lower::sphere_covering;
use subspace_bounds::qcalc::{gauss_binom, QField};

fn main() -> Result<(), subspace_bounds::Error> {
    println!("[6 choose 3]_2 = {}", gauss_binom(6, 3, 2)?);
    println!("[7 choose 3]_3 = {}", gauss_binom(7, 3, 3)?);

    let f = QField::new(2, 20)?;
    for n in 1..=8 {
        println!("F_2^{n}: {} points, {} subspaces in total", f.points(n), f.total_subspaces(n));
    }
    println!("covering lower bound for A_2(6,4;3): {}", sphere_covering(&f, 6, 4, 3));
    Ok(())
}
