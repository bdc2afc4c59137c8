//! Admissible sizes of q^r-divisible point multisets, the rounding used by
//! the improved Johnson bound, and its effect on A_2(9,6;4).

use num_bigint::BigInt;
use subspace_bounds::divisible::{denoms, feasible, frac_round, frobenius_number};

fn main() {
    let d = denoms(2, 3);
    println!("summands for q=2, r=3: {:?}", d.values);
    println!("largest excluded size: {}", frobenius_number(2, 3));
    let admissible: Vec<u32> = (0..60).filter(|m| feasible(2, 3, &BigInt::from(*m))).collect();
    println!("admissible sizes below 60: {admissible:?}");

    // 511 * A_2(8,6;3) = 511 * 34, rounded within the 2^3-divisible sizes before dividing by 15
    let a = BigInt::from(511 * 34);
    let (bound, _) = frac_round(&a, 2, 4);
    println!("plain Johnson: A_2(9,6;4) <= {}", &a / 15);
    println!("improved Johnson: A_2(9,6;4) <= {bound}");
}
