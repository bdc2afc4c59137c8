//! Multilevel construction: Ferrers diagrams of pivot profiles and the best
//! skeleton code for a cell.

use subspace_bounds::ef::{
    ef_dim_bound, ferrers_from_profile, skeleton_optimize_cdc, PivotProfile, SearchBudget, SkeletonMode,
};
use subspace_bounds::qcalc::QField;

fn main() -> Result<(), subspace_bounds::Error> {
    let f = QField::new(2, 20)?;
    let p = PivotProfile::from_pivots(6, &[0, 3, 4]);
    let fd = ferrers_from_profile(&p);
    println!("profile {} has {} dots, dimension bound {} at rank distance 2", p.bits(), fd.dots(), ef_dim_bound(&fd, 2));

    let budget = SearchBudget::default();
    for mode in [SkeletonMode::Exact, SkeletonMode::ShiftedBlocks, SkeletonMode::Greedy] {
        let r = skeleton_optimize_cdc(&f, 6, 4, 3, mode, &budget);
        let (id, param) = r.record_label();
        println!("{mode:?}: A_2(6,4;3) >= {} via {id} {param}", r.value);
    }
    let r = skeleton_optimize_cdc(&f, 8, 4, 4, SkeletonMode::Exact, &budget);
    println!("A_2(8,4;4) >= {} ({:?})", r.value, r.status);
    Ok(())
}
