//! Mixed dimension codes: closed forms, recursive bounds from constant
//! dimension cells, and the Etzion-Vardy program solved two ways.

use num_bigint::BigInt;
use subspace_bounds::engine::{fixpoint, Facts, GridConfig};
use subspace_bounds::mdc::{etzion_vardy, etzion_vardy_enumerate, mdc_closed_forms, small_n_polynomial, EvMode};

fn main() -> Result<(), subspace_bounds::Error> {
    let table = fixpoint(&GridConfig::new(vec![2, 3], 7), &Facts::empty())?;
    let f = table.field(2).expect("computed field");

    for r in mdc_closed_forms(f, 6, 6) {
        println!("A_2(6,6): {} {} {}", r.constraint, r.direction.as_str(), r.value);
    }
    if let Some((poly, id)) = small_n_polynomial(5, 3) {
        let values: Vec<BigInt> = [2, 3, 4].iter().map(|q| poly.eval(&BigInt::from(*q))).collect();
        println!("A_q(5,3) = {poly} ({id}), at q = 2, 3, 4: {values:?}");
    }
    for (n, d) in [(4, 3), (5, 3)] {
        let lp = etzion_vardy(f, n, d, &table, EvMode::Lp);
        let bb = etzion_vardy(f, n, d, &table, EvMode::BranchAndBound { max_nodes: 100_000 });
        let brute = etzion_vardy_enumerate(f, n, d, &table, 10_000_000);
        println!("Etzion-Vardy A_2({n},{d}): lp {lp:?}, branch and bound {bb:?}, enumeration {brute:?}");
    }
    let cell = table.lookup_mdc(3, 6, 3)?;
    println!("A_3(6,3) in {}..={}", cell.best_lower, cell.best_upper);
    Ok(())
}
