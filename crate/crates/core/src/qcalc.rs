//! Exact integer and rational helpers plus q-analog combinatorics.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Arbitrary precision rational used for every intermediate quotient.
pub type BigRat = BigRational;

/// Gaussian binomial coefficient `[n choose k]_q`.
///
/// Zero outside `0 <= k <= n`; `q < 2` is rejected.
pub fn gauss_binom(n: i64, k: i64, q: i64) -> Result<BigInt, Error> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("field size q={q} must be at least 2")));
    }
    if n < 0 {
        return Err(Error::InvalidParameter(format!("n={n} must be non-negative")));
    }
    Ok(gauss_product(n, k, &BigInt::from(q)))
}

/// Telescoping product; each partial product is itself a Gaussian binomial,
/// so the division at every step is exact.
pub(crate) fn gauss_product(n: i64, k: i64, q: &BigInt) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        let num = pow(q, (n - i) as u32) - 1u32;
        let den = pow(q, (i + 1) as u32) - 1u32;
        acc = acc * num / den;
    }
    acc
}

/// Gaussian binomial evaluated as a polynomial in an arbitrary integer `q`,
/// via the q-Pascal recurrence (no divisions, valid for q <= 1 as well).
pub fn gauss_poly_eval(n: i64, k: i64, q: &BigInt) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k as usize;
    // row[j] = [m choose j]_q for the current m
    let mut row = vec![BigInt::zero(); k + 1];
    row[0] = BigInt::one();
    for _m in 1..=n {
        for j in (1..=k).rev() {
            let left = row[j - 1].clone();
            let right = &row[j] * pow(q, j as u32);
            row[j] = left + right;
        }
    }
    row[k].clone()
}

pub fn pow(base: &BigInt, exp: u32) -> BigInt {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn floor_div(a: &BigInt, b: &BigInt) -> Result<BigInt, Error> {
    if !b.is_positive() {
        return Err(Error::InvalidParameter(format!("divisor {b} must be positive")));
    }
    Ok(a.div_floor(b))
}

pub fn ceil_div(a: &BigInt, b: &BigInt) -> Result<BigInt, Error> {
    if !b.is_positive() {
        return Err(Error::InvalidParameter(format!("divisor {b} must be positive")));
    }
    Ok(a.div_ceil(b))
}

pub fn rat_floor(r: &BigRat) -> BigInt {
    r.floor().to_integer()
}

pub fn rat_ceil(r: &BigRat) -> BigInt {
    r.ceil().to_integer()
}

/// Floor of the square root of a non-negative integer; `None` when negative.
pub fn isqrt(x: &BigInt) -> Option<BigInt> {
    if x.is_negative() {
        None
    } else {
        Some(x.sqrt())
    }
}

/// Whether `q` is one of the field sizes handled by the bound tables.
pub fn is_grid_field(q: i64) -> bool {
    matches!(q, 2 | 3 | 4 | 5 | 7 | 8 | 9)
}

/// Whether `q` is a prime power.
pub fn is_prime_power(q: i64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut m = q;
            while m % p == 0 {
                m /= p;
            }
            return m == 1;
        }
        p += 1;
    }
    true
}

/// Cached powers and Gaussian binomials for a fixed field size.
///
/// Every constraint evaluates dozens of Gaussian binomials; recomputing the
/// products dominated runtime before this table existed.
#[derive(Clone, Debug)]
pub struct QField {
    q: i64,
    qb: BigInt,
    pows: Vec<BigInt>,
    gauss: Vec<Vec<BigInt>>,
}

impl QField {
    /// Builds tables for ambient dimensions up to `nmax`.
    pub fn new(q: i64, nmax: usize) -> Result<Self, Error> {
        if q < 2 {
            return Err(Error::InvalidParameter(format!("field size q={q} must be at least 2")));
        }
        let qb = BigInt::from(q);
        let cap = 2 * nmax + 4;
        let mut pows = Vec::with_capacity(cap * cap + 1);
        let mut p = BigInt::one();
        for _ in 0..=(cap * cap) {
            pows.push(p.clone());
            p *= q;
        }
        let mut gauss: Vec<Vec<BigInt>> = Vec::with_capacity(cap + 1);
        for n in 0..=cap {
            let mut row = Vec::with_capacity(n + 1);
            for k in 0..=n {
                if k == 0 || k == n {
                    row.push(BigInt::one());
                } else {
                    let prev: &Vec<BigInt> = &gauss[n - 1];
                    row.push(&prev[k - 1] + &pows[k] * &prev[k]);
                }
            }
            gauss.push(row);
        }
        Ok(QField { q, qb, pows, gauss })
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn q_big(&self) -> &BigInt {
        &self.qb
    }

    /// `q^e` for a non-negative exponent.
    pub fn pow(&self, e: i64) -> BigInt {
        assert!(e >= 0, "negative exponent {e}");
        match self.pows.get(e as usize) {
            Some(v) => v.clone(),
            None => pow(&self.qb, e as u32),
        }
    }

    /// `[n choose k]_q`, zero outside the admissible range.
    pub fn gauss(&self, n: i64, k: i64) -> BigInt {
        if n < 0 || k < 0 || k > n {
            return BigInt::zero();
        }
        match self.gauss.get(n as usize) {
            Some(row) => row[k as usize].clone(),
            None => gauss_product(n, k, &self.qb),
        }
    }

    /// Number of points `[n choose 1]_q`.
    pub fn points(&self, n: i64) -> BigInt {
        self.gauss(n, 1)
    }

    /// Total number of subspaces of `F_q^n`.
    pub fn total_subspaces(&self, n: i64) -> BigInt {
        (0..=n).map(|k| self.gauss(n, k)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn gauss_reference_values() {
        assert_eq!(gauss_binom(6, 3, 2).unwrap(), b(1395));
        assert_eq!(gauss_binom(5, 2, 2).unwrap(), b(155));
        assert_eq!(gauss_binom(7, 0, 3).unwrap(), b(1));
        assert_eq!(gauss_binom(7, -1, 3).unwrap(), b(0));
        assert_eq!(gauss_binom(7, 8, 3).unwrap(), b(0));
        assert!(gauss_binom(4, 2, 1).is_err());
    }

    #[test]
    fn division_helpers() {
        assert_eq!(floor_div(&b(1395), &b(15)).unwrap(), b(93));
        assert_eq!(ceil_div(&b(1395), &b(63)).unwrap(), b(23));
        assert_eq!(floor_div(&b(0), &b(7)).unwrap(), b(0));
        assert_eq!(floor_div(&b(-7), &b(2)).unwrap(), b(-4));
        assert!(floor_div(&b(3), &b(0)).is_err());
        assert!(ceil_div(&b(3), &b(-1)).is_err());
    }

    #[test]
    fn table_matches_product() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = QField::new(q, 19).unwrap();
            for n in 0..=22 {
                for k in -1..=n + 1 {
                    assert_eq!(f.gauss(n, k), gauss_binom(n, k, q).unwrap());
                }
            }
        }
    }

    #[test]
    fn polynomial_evaluation_agrees_and_handles_small_q() {
        for q in 2..=9 {
            for n in 0..10 {
                for k in 0..=n {
                    assert_eq!(gauss_poly_eval(n, k, &b(q)), gauss_binom(n, k, q).unwrap());
                }
            }
        }
        // q = 1 gives ordinary binomials, q = -1 the signed variant
        assert_eq!(gauss_poly_eval(6, 3, &b(1)), b(20));
        assert_eq!(gauss_poly_eval(4, 2, &b(-1)), b(2));
    }

    #[test]
    fn prime_powers() {
        let pp: Vec<i64> = (0..30).filter(|&q| is_prime_power(q)).collect();
        assert_eq!(pp, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]);
        assert!(!is_grid_field(6));
        assert!(is_grid_field(9));
    }

    #[test]
    fn isqrt_floor() {
        assert_eq!(isqrt(&b(193)).unwrap(), b(13));
        assert_eq!(isqrt(&b(196)).unwrap(), b(14));
        assert!(isqrt(&b(-1)).is_none());
    }
}
