//! Which constraints attain the best bounds most often.

use subspace_bounds::engine::{fixpoint, render_toplist, toplist, CodeKind, Facts, GridConfig};
use subspace_bounds::Direction;

fn main() -> Result<(), subspace_bounds::Error> {
    let table = fixpoint(&GridConfig::new(vec![2], 11), &Facts::builtin())?;
    for kind in [CodeKind::Cdc, CodeKind::Mdc] {
        for dir in [Direction::Lower, Direction::Upper] {
            println!("{kind:?} {}:", dir.as_str());
            let list = toplist(&table, kind, dir);
            print!("{}", render_toplist(&list[..list.len().min(8)]));
        }
    }
    Ok(())
}
