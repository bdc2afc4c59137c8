use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;
use subspace_bounds::divisible::{feasible, feasible_by_digits, feasible_dp, frobenius_number};
use subspace_bounds::engine::{cache_text, fixpoint, parse_cache, BoundsTable, Facts, GridConfig, SweepOrder, LOWER_DOMINANCE, UPPER_DOMINANCE};
use subspace_bounds::lookup::{BoundsView, FixedBounds};
use subspace_bounds::mdc::{etzion_vardy, etzion_vardy_enumerate, EvMode};
use subspace_bounds::qcalc::{gauss_binom, gauss_poly_eval, BigRat, QField};
use subspace_bounds::ratlp::{branch_and_bound_max, simplex_max, BbOutcome, LpOutcome, RationalLP};
use subspace_bounds::Cell;

fn grid() -> &'static BoundsTable {
    static GRID: OnceLock<BoundsTable> = OnceLock::new();
    GRID.get_or_init(|| fixpoint(&GridConfig::new(vec![2, 3], 9), &Facts::builtin()).expect("grid converges"))
}

fn best(cell: &Cell, id: &str, upper: bool) -> Option<BigInt> {
    let values = cell.records.iter().filter(|r| r.constraint == id).map(|r| r.value.clone());
    if upper {
        values.min()
    } else {
        values.max()
    }
}

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

proptest! {
    #[test]
    fn gaussian_binomial_pascal_and_polynomial_agree(q in prop::sample::select(vec![2i64, 3, 4, 5, 7]), n in 1i64..14, k in 0i64..14) {
        prop_assume!(k <= n);
        let v = gauss_binom(n, k, q).unwrap();
        prop_assert_eq!(&v, &gauss_binom(n, n - k, q).unwrap());
        prop_assert_eq!(&v, &gauss_poly_eval(n, k, &int(q)));
        if k >= 1 && k < n {
            let pascal = gauss_binom(n - 1, k - 1, q).unwrap() + int(q).pow(k as u32) * gauss_binom(n - 1, k, q).unwrap();
            prop_assert_eq!(v, pascal);
        }
    }

    #[test]
    fn divisible_routes_agree(q in prop::sample::select(vec![2i64, 3, 4]), r in 1u32..4, m in 0usize..4000) {
        let big = BigInt::from(m);
        let dp = feasible_dp(q, r, m);
        prop_assert_eq!(dp, feasible_by_digits(q, r, &big));
        prop_assert_eq!(dp, feasible(q, r, &big));
        if big > frobenius_number(q, r) {
            prop_assert!(dp);
        }
    }

    #[test]
    fn integer_program_matches_enumeration(
        objective in prop::collection::vec(0i64..5, 3),
        rows in prop::collection::vec((prop::collection::vec(0i64..6, 3), 0i64..20), 1..4),
        caps in prop::collection::vec(0i64..6, 3),
    ) {
        let mut lp = RationalLP::new(3);
        lp.objective = objective.iter().map(|&c| BigRat::from_integer(int(c))).collect();
        lp.upper = caps.iter().map(|&u| Some(int(u))).collect();
        for (coeffs, rhs) in &rows {
            lp.add_int_row(&coeffs.iter().map(|&c| int(c)).collect::<Vec<_>>(), &int(*rhs));
        }
        let mut brute = 0i64;
        for x in 0..=caps[0] {
            for y in 0..=caps[1] {
                for z in 0..=caps[2] {
                    let p = [x, y, z];
                    let fits = rows.iter().all(|(c, rhs)| c.iter().zip(p).map(|(a, v)| a * v).sum::<i64>() <= *rhs);
                    if fits {
                        brute = brute.max(objective.iter().zip(p).map(|(a, v)| a * v).sum());
                    }
                }
            }
        }
        match branch_and_bound_max(&lp, 100_000) {
            BbOutcome::Optimal { value, .. } => prop_assert_eq!(value, int(brute)),
            other => prop_assert!(false, "unexpected outcome {:?}", other),
        }
        match simplex_max(&lp) {
            LpOutcome::Optimal { value, .. } => prop_assert!(value >= BigRat::from_integer(int(brute))),
            other => prop_assert!(false, "unexpected relaxation {:?}", other),
        }
    }

    #[test]
    fn cdc_lookups_respect_symmetry_and_odd_distance(q in prop::sample::select(vec![2i64, 3]), n in 1i64..11, d in 1i64..22, k in 0i64..11) {
        prop_assume!(k <= n);
        let t = grid();
        let v = t.cdc(q, n, d, k);
        prop_assert_eq!(&v, &t.cdc(q, n, d, n - k));
        if d % 2 == 1 {
            prop_assert_eq!(&v, &t.cdc(q, n, d + 1, k));
        }
        if let Some((lo, up)) = v {
            prop_assert!(lo <= up);
        }
    }

    #[test]
    fn dominance_pairs_hold(index in any::<prop::sample::Index>()) {
        let t = grid();
        let cell = t.cdc.values().nth(index.index(t.cdc.len())).unwrap();
        for (a, b) in UPPER_DOMINANCE {
            if let (Some(va), Some(vb)) = (best(cell, a, true), best(cell, b, true)) {
                prop_assert!(va <= vb, "{} {} > {} {}", a, va, b, vb);
            }
        }
        for (a, b) in LOWER_DOMINANCE {
            if let (Some(va), Some(vb)) = (best(cell, a, false), best(cell, b, false)) {
                prop_assert!(va >= vb, "{} {} < {} {}", a, va, b, vb);
            }
        }
        prop_assert!(cell.best_lower <= cell.best_upper);
    }

    #[test]
    fn packing_program_bb_matches_enumeration(
        n in 4i64..6,
        uppers in prop::collection::vec(0i64..12, 6),
    ) {
        let f = QField::new(2, 20).unwrap();
        let mut view = FixedBounds::new(&[2]);
        for k in 0..=n / 2 {
            let v = uppers[k as usize];
            view.set_cdc(2, n, 4, k, 0, v);
        }
        let bb = etzion_vardy(&f, n, 3, &view, EvMode::BranchAndBound { max_nodes: 1_000_000 });
        let brute = etzion_vardy_enumerate(&f, n, 3, &view, 1_000);
        prop_assert!(bb.is_some());
        prop_assert_eq!(bb, brute);
    }

    #[test]
    fn facts_round_trip(rows in prop::collection::vec(
        (prop::sample::select(vec![2i64, 3, 4]), 4i64..14, 2i64..8, prop::option::of(2i64..7), 1i64..1_000_000, prop::option::of(1i64..1000)),
        0..12,
    )) {
        let mut text = String::new();
        for (q, n, d, k, value, iso) in rows {
            let k = k.map_or("-".into(), |k| k.to_string());
            let iso = iso.map_or(String::new(), |c| c.to_string());
            text.push_str(&format!("{q}\t{n}\t{d}\t{k}\tclassification\t\texact\t{value}\tderived\t{iso}\n"));
        }
        let facts = Facts::parse(&text).unwrap();
        let again = Facts::parse(&facts.to_tsv()).unwrap();
        prop_assert_eq!(facts.to_tsv(), again.to_tsv());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn sweep_order_does_not_change_the_fixpoint(seed in any::<u64>()) {
        let ascending = GridConfig::new(vec![2], 8);
        let mut permuted = ascending.clone();
        permuted.order = SweepOrder::Permuted(seed);
        let a = fixpoint(&ascending, &Facts::builtin()).unwrap();
        let b = fixpoint(&permuted, &Facts::builtin()).unwrap();
        prop_assert_eq!(cache_text(&a), cache_text(&b));
    }
}

#[test]
fn cache_text_round_trips() {
    let t = grid();
    let text = cache_text(t);
    let back = parse_cache(&text).unwrap();
    assert_eq!(text, cache_text(&back));
    for (key, cell) in &t.cdc {
        let b = &back.cdc[key];
        assert_eq!((&cell.best_lower, &cell.best_upper), (&b.best_lower, &b.best_upper));
    }
}
