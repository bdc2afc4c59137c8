//! Admissible cardinalities of q^r-divisible multisets of points.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::qcalc::{self, QField};

/// Largest length answered by the memoised dynamic program.
const DP_LIMIT: usize = 1 << 20;

/// The summands `s_{i,r} = q^{r-i} (q^{i+1}-1)/(q-1)` for `i = 0..=r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibleDenoms {
    pub q: i64,
    pub r: u32,
    pub values: Vec<BigInt>,
}

pub fn denoms(q: i64, r: u32) -> DivisibleDenoms {
    let qb = BigInt::from(q);
    let values = (0..=r)
        .map(|i| qcalc::pow(&qb, r - i) * (qcalc::pow(&qb, i + 1) - 1) / (q - 1))
        .collect();
    DivisibleDenoms { q, r, values }
}

/// Whether `m` is a non-negative integer combination of `denoms(q, r)`.
///
/// Small lengths go through the memoised change-making table, larger ones
/// through [`feasible_by_digits`]; both are exact.
pub fn feasible(q: i64, r: u32, m: &BigInt) -> bool {
    if m.is_negative() {
        return false;
    }
    match m.to_usize() {
        Some(v) if v < DP_LIMIT => feasible_dp(q, r, v),
        _ => feasible_by_digits(q, r, m),
    }
}

/// Change-making dynamic program, memoised per `(q, r)`.
pub fn feasible_dp(q: i64, r: u32, m: usize) -> bool {
    static MEMO: OnceLock<Mutex<HashMap<(i64, u32), Vec<bool>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = memo.lock().expect("divisibility memo poisoned");
    let reach = guard.entry((q, r)).or_insert_with(|| vec![true]);
    if reach.len() <= m {
        let coins: Vec<usize> = denoms(q, r).values.iter().map(|v| v.to_usize().unwrap_or(usize::MAX)).collect();
        let target = (m + 1).next_power_of_two().max(64);
        let start = reach.len();
        reach.resize(target, false);
        for x in start..target {
            reach[x] = coins.iter().any(|&c| c <= x && reach[x - c]);
        }
    }
    reach[m]
}

/// Digit criterion: peel off the forced multiplicities of `s_r, ..., s_1`
/// (each determined modulo q by the base-q digits of the remainder) and
/// accept iff what is left for `s_0 = q^r` is non-negative.
pub fn feasible_by_digits(q: i64, r: u32, m: &BigInt) -> bool {
    if m.is_negative() {
        return false;
    }
    let qb = BigInt::from(q);
    let s = denoms(q, r).values;
    let mut rem = m.clone();
    for i in (1..=r).rev() {
        let lo = qcalc::pow(&qb, r - i);
        let hi = &lo * &qb;
        let digit = rem.mod_floor(&hi) / &lo;
        rem -= digit * &s[i as usize];
    }
    !rem.is_negative()
}

/// Largest length that is not representable.
pub fn frobenius_number(q: i64, r: u32) -> BigInt {
    let qb = BigInt::from(q);
    let s = denoms(q, r).values;
    let mut top = -qcalc::pow(&qb, r);
    for si in s.iter().skip(1) {
        top += si * (q - 1);
    }
    top
}

/// The rounding operator of the improved Johnson bound: the largest `b`
/// such that `a - b [k]_q` is an admissible q^{k-1}-divisible length.
///
/// Returns `(0, true)` when no such `b` exists.
pub fn frac_round(a: &BigInt, q: i64, k: u32) -> (BigInt, bool) {
    assert!(k >= 1, "dimension must be positive");
    let g = (qcalc::pow(&BigInt::from(q), k) - 1) / (q - 1);
    if a.is_negative() {
        return (BigInt::zero(), true);
    }
    let mut b = a.div_floor(&g);
    let mut rem = a - &b * &g;
    loop {
        if feasible(q, k - 1, &rem) {
            return (b, false);
        }
        if b.is_zero() {
            return (BigInt::zero(), true);
        }
        b -= 1;
        rem += &g;
    }
}

/// Same as [`frac_round`] with a cached field.
pub fn frac_round_in(f: &QField, a: &BigInt, k: i64) -> (BigInt, bool) {
    frac_round(a, f.q(), k as u32)
}

/// The two auxiliary quantities `(h, g2)` of the fourth-identity criterion.
pub fn fourth_identity_terms(q: i64, delta: &BigInt, n: &BigInt, t: i64) -> (BigInt, BigInt) {
    let q = BigInt::from(q);
    let t = BigInt::from(t);
    let d = delta;
    let q2 = &q * &q;
    let h = d * d * &q2 * &t * &t + d * d * &q2 * &t - 2 * d * n * &q2 * &t - d * n * &q2 + 2 * d * n * &q * &t
        + n * n * &q2
        + d * n * &q
        - 2 * n * n * &q
        + n * n
        + n * &q
        - n;
    let g2 = &h - (2 * d * &q * &t + d * &q - 2 * n * &q + 2 * n + &q - 2);
    (h, g2)
}

/// Whether the fourth MacWilliams identity rules out a `q^r`-divisible
/// *set* of `m` points.
///
/// Diagnostic only: the criterion concerns sets, so it can exclude lengths
/// that are realisable by multisets (for instance 34 for q=2, r=3).
pub fn fourth_identity_excludes(q: i64, r: u32, m: &BigInt) -> bool {
    if !m.is_positive() {
        return false;
    }
    let delta = qcalc::pow(&BigInt::from(q), r);
    let upper = (m / &delta).to_i64().unwrap_or(i64::MAX - 4) + 2;
    for t in -2..=upper {
        let lo = &delta * t;
        let hi = &delta * (t + 1);
        if m >= &lo && m <= &hi {
            continue;
        }
        let (h, g2) = fourth_identity_terms(q, &delta, m, t);
        if !h.is_negative() && g2.is_negative() {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn denominators() {
        assert_eq!(denoms(2, 3).values, vec![b(8), b(12), b(14), b(15)]);
        assert_eq!(denoms(2, 2).values, vec![b(4), b(6), b(7)]);
        assert_eq!(denoms(5, 0).values, vec![b(1)]);
    }

    #[test]
    fn footnote_lengths() {
        assert!(!feasible(2, 3, &b(4)));
        assert!(!feasible(2, 3, &b(19)));
        assert!(feasible(2, 3, &b(34)));
        assert!(feasible(7, 4, &b(0)));
    }

    #[test]
    fn rounding_operator() {
        assert_eq!(frac_round(&b(17374), 2, 4), (b(1156), false));
        assert_eq!(frac_round(&b(17374 - 15), 2, 4), (b(1155), false));
        assert_eq!(frac_round(&b(150), 2, 4), (b(10), false));
        assert_eq!(frac_round(&b(4), 2, 4), (b(0), true));
    }

    #[test]
    fn digits_agree_with_dp() {
        for q in [2, 3, 4, 5, 7] {
            for r in 0..=4u32 {
                for m in 0..3000usize {
                    assert_eq!(feasible_dp(q, r, m), feasible_by_digits(q, r, &b(m as i64)), "q={q} r={r} m={m}");
                }
            }
        }
    }

    #[test]
    fn frobenius_formula_matches_dp() {
        for q in [2, 3, 4, 5] {
            for r in 0..=3u32 {
                let f = frobenius_number(q, r);
                let fu = f.to_i64().unwrap();
                if fu >= 0 {
                    assert!(!feasible_dp(q, r, fu as usize));
                }
                let s0 = denoms(q, r).values[0].to_usize().unwrap();
                let start = (fu + 1).max(0) as usize;
                for m in start..start + s0 + 5 {
                    assert!(feasible_dp(q, r, m), "q={q} r={r} m={m}");
                }
            }
        }
        for q in [2, 3, 4, 5, 7, 8, 9] {
            for r in 0..=6u32 {
                let f = frobenius_number(q, r);
                assert!(!feasible_by_digits(q, r, &f) || f.is_negative());
                assert!(feasible_by_digits(q, r, &(&f + 1)));
            }
        }
    }

    #[test]
    fn fourth_identity_h_value() {
        let (h, _) = fourth_identity_terms(2, &b(4), &b(5), 0);
        assert_eq!(h, b(-10));
    }

    #[test]
    fn fourth_identity_never_excludes_set_lengths() {
        for q in [2i64, 3] {
            for r in 1..=4u32 {
                let sub = (q.pow(r + 1) - 1) / (q - 1);
                let aff = q.pow(r + 1);
                for a in 0..40i64 {
                    for c in 0..40i64 {
                        let m = a * sub + c * aff;
                        if m == 0 || m > 2000 {
                            continue;
                        }
                        assert!(!fourth_identity_excludes(q, r, &b(m)), "q={q} r={r} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn fourth_identity_is_about_sets() {
        assert!(feasible(2, 3, &b(34)));
        assert!(fourth_identity_excludes(2, 3, &b(34)));
    }
}
