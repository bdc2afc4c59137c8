//! Partial spreads: cells with `d = 2k`.
//!
//! Notation: `n = t*k + r` with `0 <= r < k`, `t` the number of blocks.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::model::BoundRecord;
use crate::qcalc::{self, QField};

fn div_exact(a: BigInt, b: BigInt) -> BigInt {
    debug_assert!((&a % &b) == BigInt::from(0), "inexact division");
    a / b
}

/// `l = (q^{n-k} - q^r) / (q^k - 1)`.
fn ell(f: &QField, n: i64, k: i64) -> BigInt {
    div_exact(f.pow(n - k) - f.pow(n % k), f.pow(k) - 1)
}

/// Exact value when one of the exactness theorems applies, with its id.
pub fn spread_exact_records(f: &QField, n: i64, k: i64) -> Vec<BoundRecord> {
    let q = f.q();
    let (t, r) = (n / k, n % k);
    let mut out = Vec::new();
    if k < 1 || t < 1 {
        return out;
    }
    let qn = f.pow(n);
    let qk = f.pow(k);
    if r == 0 {
        out.push(BoundRecord::exact("spread", div_exact(&qn - 1, &qk - 1)));
    }
    if r == 1 && t >= 2 {
        out.push(BoundRecord::exact("partial_spread_2", div_exact(&qn - f.pow(k + 1) + &qk - 1, &qk - 1)));
    }
    if q == 2 && k == 3 && t >= 2 {
        let c = [1, 9, 18][r as usize];
        out.push(BoundRecord::exact("partial_spread_1", div_exact(&qn - c, BigInt::from(7))));
    }
    if q == 2 && r == 2 && k >= 4 && t >= 2 {
        out.push(BoundRecord::exact("partial_spread_kurz_q2", div_exact(&qn - 3 * &qk - 1, &qk - 1)));
    }
    if t >= 2 && BigInt::from(k) > f.points(r) {
        out.push(BoundRecord::exact("partial_spread_NS", div_exact(&qn - f.pow(k + r), &qk - 1) + 1));
    }
    out
}

/// Best exact value, if any theorem determines the cell.
pub fn spread_exact(f: &QField, n: i64, k: i64) -> Option<BigInt> {
    spread_exact_records(f, n, k).into_iter().map(|r| r.value).min()
}

/// Literal rows `(q, k, r, c)` of the divisible-code table: for `t >= 2`,
/// `A_q(tk+r, 2k; k) <= l q^k + c`.
pub const KURZ16_ADDITIONAL: [(i64, i64, i64, i64); 21] = [
    (2, 4, 3, 4),
    (2, 6, 4, 8),
    (2, 6, 5, 18),
    (3, 4, 3, 14),
    (3, 5, 3, 13),
    (3, 5, 4, 44),
    (3, 6, 4, 41),
    (3, 6, 5, 133),
    (3, 7, 4, 40),
    (4, 5, 3, 32),
    (4, 6, 3, 30),
    (4, 6, 5, 548),
    (4, 7, 4, 128),
    (5, 5, 2, 7),
    (5, 5, 4, 329),
    (7, 5, 4, 1246),
    (8, 4, 3, 264),
    (8, 5, 2, 25),
    (8, 6, 2, 21),
    (9, 3, 2, 41),
    (9, 5, 3, 365),
];

fn drake_freeman(f: &QField, n: i64, k: i64) -> Option<BigInt> {
    let (t, r) = (n / k, n % k);
    if r == 0 || t < 2 {
        return None;
    }
    let qk = f.pow(k);
    let qr = f.pow(r);
    let disc = 1 + 4 * &qk * (&qk - &qr);
    let c = 2 * &qk - 2 * &qr + 1;
    let theta = qcalc::floor_div(&(qcalc::isqrt(&disc)? - c), &BigInt::from(2)).ok()?;
    Some(&qr * div_exact(f.pow(k * t) - 1, &qk - 1) - theta - 1)
}

/// Upper bounds of the battery, one record per applicable bound.
pub fn spread_upper_battery(f: &QField, n: i64, k: i64) -> Vec<BoundRecord> {
    let q = f.q();
    let (t, r) = (n / k, n % k);
    let mut out = Vec::new();
    if k < 1 || t < 1 {
        return out;
    }
    let qn = f.pow(n);
    let qk = f.pow(k);
    let trivial: BigInt = (&qn - 1) / (&qk - 1);
    out.push(BoundRecord::upper("spread_bound", trivial.clone()));
    if r != 0 {
        out.push(BoundRecord::upper("partial_spread_5", &trivial - 1));
    }
    if let Some(v) = drake_freeman(f, n, k) {
        out.push(BoundRecord::upper("DrakeFreeman", v));
    }
    let gr = f.points(r);
    if r >= 2 && BigInt::from(k) == gr && k < n && t >= 2 {
        let tail = f.pow(r).min((f.pow(r) + 1) / 2).min(BigInt::from(q));
        out.push(BoundRecord::upper("partial_spread_NS_upper_bound", ell(f, n, k) * &qk + tail));
    }
    if r >= 2 && r < k && BigInt::from(k) <= gr && t >= 1 {
        let c1 = (2 - k).rem_euclid(q);
        let s = (q - 1) * (k - 2) + c1;
        let c2 = if s % (q * q) == 0 { q } else { 0 };
        let v = div_exact(&qn - f.pow(k + r), &qk - 1) + f.pow(r) - (q - 1) * (k - 2) - c1 + c2;
        out.push(BoundRecord::upper("partial_spread_NS_2_Theorem6", v));
    }
    if q == 2 && r >= 2 && r < k && k < (1 << r) && t >= 1 {
        let c = if (k - 1) % 4 == 0 { 1 } else { 0 };
        let v = div_exact(&qn - f.pow(k + r), &qk - 1) + f.pow(r) - k + 1 + c;
        out.push(BoundRecord::upper("partial_spread_NS_2_Theorem7", v));
    }
    if r >= 1 && t >= 2 && k > r {
        let z: BigInt = (&gr + BigInt::from(1 - k)).max(BigInt::from(0));
        let v = ell(f, n, k) * &qk + 1 + &z * (q - 1);
        out.push(BoundRecord::upper("partial_spread_kurz16_28", v).with_param(z.to_string()));
    }
    if r >= 1 && t >= 2 && k > r {
        let z: BigInt = &gr + BigInt::from(1 - k);
        if !z.is_negative() {
            let base = ell(f, n, k) * &qk;
            let mut best: Option<(BigInt, i64)> = None;
            for y in r.max(2)..=k {
                let u = f.pow(y);
                let disc = 1 + 4 * &u * (&u - (&z + y - 1) * (q - 1) - 1);
                let Some(s) = qcalc::isqrt(&disc) else { continue };
                // ceil((2u - 1 - sqrt(disc)) / 2)
                let c = -qcalc::floor_div(&(s - 2 * &u + 1), &BigInt::from(2)).expect("positive divisor");
                let v = &base + c;
                if best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((v, y));
                }
            }
            if let Some((v, y)) = best {
                out.push(BoundRecord::upper("partial_spread_HKK16_T10", v).with_param(y.to_string()));
            }
        }
    }
    if q == 3 && r == 2 && k >= 4 && t >= 2 {
        out.push(BoundRecord::upper("partial_spread_kurz_q3", div_exact(&qn - 9, &qk - 1) - 5));
    }
    for (rq, rk, rr, c) in KURZ16_ADDITIONAL {
        if rq == q && rk == k && rr == r && t >= 2 {
            out.push(BoundRecord::upper("partial_spread_kurz16_additional", ell(f, n, k) * &qk + c));
        }
    }
    out
}

/// Distance from the trivial bound: `floor((q^n-1)/(q^k-1)) - upper`.
pub fn deficiency(f: &QField, n: i64, k: i64, upper: &BigInt) -> BigInt {
    (f.pow(n) - 1) / (f.pow(k) - 1) - upper
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: i64) -> QField {
        QField::new(q, 20).unwrap()
    }

    fn best(q: i64, n: i64, k: i64) -> BigInt {
        spread_upper_battery(&field(q), n, k).into_iter().map(|r| r.value).min().unwrap()
    }

    fn named(q: i64, n: i64, k: i64, id: &str) -> Option<BigInt> {
        spread_upper_battery(&field(q), n, k).into_iter().find(|r| r.constraint == id).map(|r| r.value)
    }

    #[test]
    fn exact_values() {
        let f = field(2);
        assert_eq!(spread_exact(&f, 8, 4), Some(BigInt::from(17)));
        assert_eq!(spread_exact(&f, 8, 3), Some(BigInt::from(34)));
        assert_eq!(spread_exact(&f, 9, 4), Some(BigInt::from(33)));
        assert_eq!(spread_exact(&f, 10, 4), Some(BigInt::from(65)));
        assert_eq!(spread_exact(&f, 7, 3), Some(BigInt::from(17)));
        assert_eq!(spread_exact(&field(3), 6, 3), Some(BigInt::from(28)));
        assert_eq!(spread_exact(&field(3), 8, 3), None);
    }

    #[test]
    fn battery_examples() {
        assert_eq!(named(2, 7, 3, "DrakeFreeman"), Some(BigInt::from(17)));
        assert_eq!(named(2, 8, 3, "partial_spread_kurz16_28"), Some(BigInt::from(34)));
        assert_eq!(named(2, 5, 2, "partial_spread_HKK16_T10"), Some(BigInt::from(9)));
    }

    #[test]
    fn table_values() {
        assert_eq!(best(3, 8, 3), BigInt::from(248));
        assert_eq!(best(3, 10, 4), BigInt::from(732));
        assert_eq!(best(4, 8, 3), BigInt::from(1033));
        assert_eq!(best(4, 10, 4), BigInt::from(4102));
        assert_eq!(best(4, 11, 4), BigInt::from(16418));
        assert_eq!(best(3, 11, 4), BigInt::from(2201));
        assert_eq!(best(2, 11, 4), BigInt::from(132));
        assert_eq!(best(2, 13, 5), BigInt::from(260));
    }

    #[test]
    fn deficiency_examples() {
        let f = field(2);
        assert_eq!(deficiency(&f, 8, 3, &BigInt::from(34)), BigInt::from(2));
        assert_eq!(deficiency(&f, 9, 3, &spread_exact(&f, 9, 3).unwrap()), BigInt::from(0));
        let f3 = field(3);
        assert_eq!(deficiency(&f3, 7, 3, &spread_exact(&f3, 7, 3).unwrap()), BigInt::from(2));
    }
}
