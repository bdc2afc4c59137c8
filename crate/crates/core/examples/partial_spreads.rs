//! Partial spreads (d = 2k): exact values, the upper-bound battery and the
//! deficiency with respect to the trivial bound.

use num_bigint::BigInt;
use subspace_bounds::qcalc::QField;
use subspace_bounds::spreads::{deficiency, spread_exact, spread_upper_battery};

fn main() -> Result<(), subspace_bounds::Error> {
    for q in [2, 3] {
        let f = QField::new(q, 20)?;
        for (n, k) in [(8, 3), (9, 4), (10, 4), (11, 4), (13, 5)] {
            let battery = spread_upper_battery(&f, n, k);
            let best: BigInt = battery.iter().map(|r| r.value.clone()).min().expect("battery is never empty");
            let exact = spread_exact(&f, n, k);
            let shown = exact.clone().unwrap_or(best.clone());
            println!(
                "A_{q}({n},{};{k}) {} {shown}  deficiency {}",
                2 * k,
                if exact.is_some() { "=" } else { "<=" },
                deficiency(&f, n, k, &shown)
            );
            for r in battery.iter().filter(|r| r.value == best) {
                println!("    attained by {} {}", r.constraint, r.parameter);
            }
        }
    }
    Ok(())
}
