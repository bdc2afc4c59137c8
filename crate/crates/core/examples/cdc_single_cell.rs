//! Every lower and upper bound for one constant dimension cell, given the
//! values of the smaller cells it refers to.

use subspace_bounds::cdc_lower::cdc_lower_records;
use subspace_bounds::cdc_upper::{cdc_upper_records, mrd_containing_bound};
use subspace_bounds::lookup::FixedBounds;
use subspace_bounds::qcalc::QField;

fn main() -> Result<(), subspace_bounds::Error> {
    let f = QField::new(2, 20)?;
    // sub-cells consulted by the recursive bounds
    let mut view = FixedBounds::new(&[2]);
    view.set_cdc_exact(2, 5, 4, 2, 9).set_cdc_exact(2, 3, 2, 2, 7).set_cdc_exact(2, 4, 4, 2, 5);

    let (n, d, k) = (6, 4, 3);
    println!("lower bounds for A_2({n},{d};{k}):");
    for r in cdc_lower_records(&f, n, d, k, &view) {
        println!("  {:<36} {:<28} {}", r.constraint, r.parameter, r.value);
    }
    println!("upper bounds:");
    for r in cdc_upper_records(&f, n, d, k, &view) {
        println!("  {:<36} {:<28} {}", r.constraint, r.parameter, r.value);
    }
    if let Some(b) = mrd_containing_bound(&f, n, d, k, &view) {
        println!("codes containing a lifted MRD code have at most {b} codewords");
    }
    Ok(())
}
