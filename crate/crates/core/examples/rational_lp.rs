//! The exact simplex and branch and bound solvers on a small program.

use num_bigint::BigInt;
use subspace_bounds::qcalc::BigRat;
use subspace_bounds::ratlp::{branch_and_bound_max, simplex_max, LpOutcome, RationalLP};

fn main() {
    // max x + y  s.t.  2x + 3y <= 12,  3x + y <= 7
    let mut lp = RationalLP::new(2);
    lp.objective = vec![BigRat::from_integer(BigInt::from(1)); 2];
    lp.add_int_row(&[BigInt::from(2), BigInt::from(3)], &BigInt::from(12));
    lp.add_int_row(&[BigInt::from(3), BigInt::from(1)], &BigInt::from(7));
    if let LpOutcome::Optimal { value, solution } = simplex_max(&lp) {
        let xs: Vec<String> = solution.iter().map(|x| x.to_string()).collect();
        println!("relaxation: {value} at ({})", xs.join(", "));
    }
    println!("integer optimum: {:?}", branch_and_bound_max(&lp, 1000));
}
