//! Upper bounds for constant dimension codes (the partial spread battery
//! lives in [`crate::spreads`]).
//!
//! Functions expect a canonical, non-degenerate cell and read best known
//! upper bounds of other cells through a [`BoundsView`].

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cdc_lower::ball_volume;
use crate::divisible;
use crate::lookup::BoundsView;
use crate::model::{BoundRecord, Direction};
use crate::qcalc::QField;

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

fn floor_ratio(a: &BigInt, b: &BigInt) -> BigInt {
    crate::qcalc::floor_div(a, b).expect("positive denominator")
}

fn best_upper(view: &dyn BoundsView, q: i64, n: i64, d: i64, k: i64) -> Option<BigInt> {
    view.cdc_upper(q, n, d, k)
}

pub fn all_subs(f: &QField, n: i64, k: i64) -> BigInt {
    f.gauss(n, k)
}

pub fn singleton(f: &QField, n: i64, d: i64, k: i64) -> BigInt {
    f.gauss(n - d / 2 + 1, k - d / 2 + 1)
}

pub fn sphere_packing(f: &QField, n: i64, d: i64, k: i64) -> BigInt {
    floor_ratio(&f.gauss(n, k), &ball_volume(f, n, k, (d / 2 - 1) / 2))
}

pub fn anticode(f: &QField, n: i64, d: i64, k: i64) -> BigInt {
    floor_ratio(&f.gauss(n, k), &f.gauss(n - k + d / 2 - 1, d / 2 - 1))
}

/// Applicable only when `d = 2 min(k, n-k)`.
pub fn xia_fu_johnson(f: &QField, n: i64, d: i64, k: i64) -> Option<BigInt> {
    let lo = k.min(n - k);
    (lo >= 1 && d == 2 * lo).then(|| floor_ratio(&(f.pow(n) - 1), &(f.pow(lo) - 1)))
}

pub fn johnson_1(f: &QField, n: i64, d: i64, k: i64, view: &dyn BoundsView) -> Option<BigInt> {
    let u = best_upper(view, f.q(), n - 1, d, k - 1)?;
    Some(floor_ratio(&((f.pow(n) - 1) * u), &(f.pow(k) - 1)))
}

pub fn johnson_2(f: &QField, n: i64, d: i64, k: i64, view: &dyn BoundsView) -> Option<BigInt> {
    let u = best_upper(view, f.q(), n - 1, d, k)?;
    Some(floor_ratio(&((f.pow(n) - 1) * u), &(f.pow(n - k) - 1)))
}

/// Records of the four combined-Johnson families, one per free parameter.
pub fn ilp_family(which: u8, f: &QField, n: i64, d: i64, k: i64, view: &dyn BoundsView) -> Vec<BoundRecord> {
    let q = f.q();
    let h = d / 2;
    let mut out = Vec::new();
    match which {
        1 => {
            for w in 1..=k - h {
                if let Some(u) = best_upper(view, q, n - w, d, k - w) {
                    out.push(BoundRecord::upper("ilp_1", floor_ratio(&(f.gauss(n, w) * u), &f.gauss(k, w))).with_param(w.to_string()));
                }
            }
        }
        2 => {
            for w in k - h + 1..k {
                out.push(BoundRecord::upper("ilp_2", floor_ratio(&f.gauss(n, w), &f.gauss(k, w))).with_param(w.to_string()));
            }
        }
        3 => {
            for a in k + 1..k + h {
                out.push(BoundRecord::upper("ilp_3", floor_ratio(&f.gauss(n, a), &f.gauss(n - k, a - k))).with_param(a.to_string()));
            }
        }
        4 => {
            for a in k + h..n {
                if let Some(u) = best_upper(view, q, a, d, k) {
                    let v = floor_ratio(&(f.gauss(n, a) * u), &f.gauss(n - k, a - k));
                    out.push(BoundRecord::upper("ilp_4", v).with_param(a.to_string()));
                }
            }
        }
        _ => panic!("no combined-Johnson family {which}"),
    }
    out
}

/// One instance of the Ahlswede-Aydinian bound; with `orth` it is applied
/// to the dual parameters `(n, d, n-k)`.
pub fn ahlswede_aydinian(f: &QField, n: i64, d: i64, k: i64, t: i64, m: i64, orth: bool, view: &dyn BoundsView) -> Option<BigInt> {
    let k = if orth { n - k } else { k };
    let r = d / 2;
    if t < 0 || t >= r || r > k || m < k - t || m > n - t || m >= n {
        return None;
    }
    let u = best_upper(view, f.q(), m, 2 * r - 2 * t, k - t)?;
    let den: BigInt = (0..=t).filter(|i| m + i >= k).map(|i| f.pow(i * (m + i - k)) * f.gauss(m, k - i) * f.gauss(n - m, i)).sum();
    if den.is_zero() {
        return None;
    }
    Some(floor_ratio(&(f.gauss(n, k) * u), &den))
}

/// All admissible `(t, m)` instances, plain orientation first.
pub fn ahlswede_aydinian_records(f: &QField, n: i64, d: i64, k: i64, view: &dyn BoundsView) -> Vec<BoundRecord> {
    let mut out = Vec::new();
    for orth in [false, true] {
        for t in 0..d / 2 {
            for m in 0..n {
                if let Some(v) = ahlswede_aydinian(f, n, d, k, t, m, orth, view) {
                    let p = if orth { format!("{t}, {m}, o") } else { format!("{t}, {m}") };
                    out.push(BoundRecord::upper("Ahlswede_Aydinian", v).with_param(p));
                }
            }
        }
    }
    out
}

/// Johnson bound with the divisible-multiset rounding.
pub fn improved_johnson(f: &QField, n: i64, d: i64, k: i64, view: &dyn BoundsView) -> Option<BigInt> {
    let a = f.points(n) * best_upper(view, f.q(), n - 1, d, k - 1)?;
    let (b, _) = divisible::frac_round_in(f, &a, k);
    Some(b)
}

/// Upper bound for codes containing a lifted MRD code: minimum over the
/// applicable cases.
pub fn mrd_containing_bound(f: &QField, n: i64, d: i64, k: i64, view: &dyn BoundsView) -> Option<BigInt> {
    let q = f.q();
    let h = d / 2;
    let mut cands: Vec<BigInt> = Vec::new();
    if d == 2 * (k - 1) && k >= 3 {
        if let Some(u) = best_upper(view, q, n - k, 2 * (k - 2), k - 1) {
            cands.push(f.pow(2 * (n - k)) + u);
        }
    }
    if d == 2 * k && n >= 2 * k {
        if let Some(u) = best_upper(view, q, n - 2 * k, 2 * k, k) {
            let frac = floor_ratio(&(f.gauss(n - 2 * k, k) * (f.pow(n) - f.pow(n - 2 * k))), &(f.pow(2 * k) - f.pow(k)));
            cands.push(f.pow((n - 2 * k) * (k + 1)) + frac + u);
        }
    }
    if 2 <= h && h <= k && k <= n - k {
        let lmrd = f.pow((n - k) * (k - h + 1));
        if k < d && 3 * d <= 2 * n {
            if let Some(u) = best_upper(view, q, n - k, 2 * (d - k), h) {
                cands.push(&lmrd + u);
            }
        }
        if k < d && 2 * n < 3 * d {
            cands.push(&lmrd + 1);
        }
        if d <= k && 2 * k < 3 * d {
            if let Some(u) = best_upper(view, q, n - k, 3 * d - 2 * k, d) {
                let extra = floor_ratio(
                    &(f.gauss(n - k, h) * f.gauss(k, d - 1) * f.pow((k - d + 1) * (n - k - h))),
                    &f.gauss(k - h, h - 1),
                );
                cands.push(&lmrd + u + extra);
            }
        }
    }
    cands.into_iter().min()
}

/// Exactly determined special cells and the separately published upper bound.
pub fn special_exact_cdc(q: i64, n: i64, d: i64, k: i64) -> Vec<(BigInt, Direction, &'static str)> {
    let (n, d, k) = crate::lookup::canonical_cdc(n, d, k);
    match (q, n, d, k) {
        (2, 6, 4, 3) => vec![(int(77), Direction::Exact, "classification")],
        (2, 8, 6, 4) => vec![(int(257), Direction::Exact, "classification"), (int(272), Direction::Upper, "special_case_2_8_6_4")],
        _ => Vec::new(),
    }
}

/// All upper-bound records of a canonical cell except the spread battery.
pub fn cdc_upper_records(f: &QField, n: i64, d: i64, k: i64, view: &dyn BoundsView) -> Vec<BoundRecord> {
    let mut out = vec![BoundRecord::upper("all_subs", all_subs(f, n, k)), BoundRecord::upper("singleton", singleton(f, n, d, k))];
    out.extend(ilp_family(2, f, n, d, k, view));
    out.extend(ilp_family(3, f, n, d, k, view));
    out.push(BoundRecord::upper("anticode", anticode(f, n, d, k)));
    out.push(BoundRecord::upper("sphere_packing", sphere_packing(f, n, d, k)));
    out.extend(ilp_family(1, f, n, d, k, view));
    out.extend(ilp_family(4, f, n, d, k, view));
    if let Some(v) = johnson_1(f, n, d, k, view) {
        out.push(BoundRecord::upper("johnson_1", v));
    }
    if let Some(v) = johnson_2(f, n, d, k, view) {
        out.push(BoundRecord::upper("johnson_2", v));
    }
    out.extend(ahlswede_aydinian_records(f, n, d, k, view));
    if let Some(v) = improved_johnson(f, n, d, k, view) {
        out.push(BoundRecord::upper("improved_johnson", v));
    }
    if let Some(v) = xia_fu_johnson(f, n, d, k) {
        out.push(BoundRecord::upper("XiaFuJohnson1", v));
    }
    for (v, dir, id) in special_exact_cdc(f.q(), n, d, k) {
        if dir == Direction::Upper {
            out.push(BoundRecord::new(id, "", v, dir));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lookup::FixedBounds;

    fn field(q: i64) -> QField {
        QField::new(q, 20).unwrap()
    }

    fn dump_view() -> FixedBounds {
        let mut v = FixedBounds::new(&[2]);
        v.set_cdc_exact(2, 5, 4, 2, 9);
        v
    }

    #[test]
    fn direct_values() {
        let f = field(2);
        assert_eq!(all_subs(&f, 6, 3), int(1395));
        assert_eq!(all_subs(&f, 6, 0), int(1));
        assert_eq!(all_subs(&field(3), 6, 3), int(33880));
        assert_eq!(singleton(&f, 6, 4, 3), int(155));
        assert_eq!(singleton(&f, 7, 4, 3), int(651));
        assert_eq!(sphere_packing(&f, 6, 4, 3), int(1395));
        assert_eq!(sphere_packing(&f, 6, 6, 3), int(14));
        assert_eq!(anticode(&f, 6, 4, 3), int(93));
        assert_eq!(anticode(&f, 7, 4, 3), int(381));
        assert_eq!(xia_fu_johnson(&f, 6, 6, 3), Some(int(9)));
        assert_eq!(xia_fu_johnson(&f, 8, 8, 4), Some(int(17)));
        assert_eq!(xia_fu_johnson(&f, 6, 4, 3), None);
    }

    #[test]
    fn dump_recursive_values() {
        let f = field(2);
        let v = dump_view();
        assert_eq!(johnson_1(&f, 6, 4, 3, &v), Some(int(81)));
        assert_eq!(johnson_2(&f, 6, 4, 3, &v), Some(int(81)));
        assert_eq!(improved_johnson(&f, 6, 4, 3, &v), Some(int(81)));
        let p = |recs: Vec<BoundRecord>| recs.into_iter().map(|r| (r.parameter, r.value)).collect::<Vec<_>>();
        assert_eq!(p(ilp_family(1, &f, 6, 4, 3, &v)), vec![("1".to_string(), int(81))]);
        assert_eq!(p(ilp_family(2, &f, 6, 4, 3, &v)), vec![("2".to_string(), int(93))]);
        assert_eq!(p(ilp_family(3, &f, 6, 4, 3, &v)), vec![("4".to_string(), int(93))]);
        assert_eq!(p(ilp_family(4, &f, 6, 4, 3, &v)), vec![("5".to_string(), int(81))]);
        let aa = p(ahlswede_aydinian_records(&f, 6, 4, 3, &v));
        let expected = [("0, 3", 1395), ("0, 4", 93), ("0, 5", 81), ("1, 2", 93), ("1, 3", 98), ("1, 4", 112), ("1, 5", 155)];
        let mut want: Vec<(String, BigInt)> = expected.iter().map(|(s, x)| (s.to_string(), int(*x))).collect();
        want.extend(expected.iter().map(|(s, x)| (format!("{s}, o"), int(*x))));
        assert_eq!(aa, want);
    }

    #[test]
    fn mrd_bound_cases() {
        let f = field(2);
        let v = FixedBounds::new(&[2]);
        assert_eq!(mrd_containing_bound(&f, 6, 4, 3, &v), Some(int(71)));
        assert_eq!(mrd_containing_bound(&f, 6, 4, 2, &v), Some(int(70)));
    }

    #[test]
    fn improved_johnson_footnote() {
        let f = field(2);
        let mut v = FixedBounds::new(&[2]);
        v.set_cdc_exact(2, 8, 6, 3, 34);
        assert_eq!(improved_johnson(&f, 9, 6, 4, &v), Some(int(1156)));
        assert_eq!(johnson_1(&f, 9, 6, 4, &v), Some(int(1158)));
    }

    #[test]
    fn special_cells() {
        assert_eq!(special_exact_cdc(2, 6, 4, 3).len(), 1);
        assert_eq!(special_exact_cdc(2, 8, 6, 4)[1].0, int(272));
        assert!(special_exact_cdc(3, 6, 4, 3).is_empty());
    }
}
