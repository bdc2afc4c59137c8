//! Propagates all bounds over a small grid and prints tables in several views.

use subspace_bounds::engine::{fixpoint, render_cdc_table, render_mdc_table, Facts, GridConfig, TableView};

fn main() -> Result<(), subspace_bounds::Error> {
    let table = fixpoint(&GridConfig::new(vec![2], 9), &Facts::builtin())?;
    for view in [TableView::Short, TableView::Normal, TableView::RelativeGap, TableView::Density, TableView::AmountLiftedMrd] {
        print!("{}", render_cdc_table(&table, 2, 8, view)?);
        println!();
    }
    print!("{}", render_mdc_table(&table, 2, TableView::Normal)?);
    Ok(())
}
