//! Read access to the current best bounds, as consumed by recursive constraints.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::qcalc::QField;

/// Best known `(lower, upper)` pairs for sub-problems.
///
/// Implementations must resolve symmetric and odd-distance aliases and the
/// degenerate cells themselves; see [`degenerate_cdc`].
pub trait BoundsView: Sync {
    fn cdc(&self, q: i64, n: i64, d: i64, k: i64) -> Option<(BigInt, BigInt)>;
    fn mdc(&self, q: i64, n: i64, d: i64) -> Option<(BigInt, BigInt)>;

    fn cdc_lower(&self, q: i64, n: i64, d: i64, k: i64) -> Option<BigInt> {
        self.cdc(q, n, d, k).map(|b| b.0)
    }

    fn cdc_upper(&self, q: i64, n: i64, d: i64, k: i64) -> Option<BigInt> {
        self.cdc(q, n, d, k).map(|b| b.1)
    }
}

/// Canonical key `(n, d, k)` with `k <= n-k` and even `d`.
pub fn canonical_cdc(n: i64, d: i64, k: i64) -> (i64, i64, i64) {
    let k = k.min(n - k);
    let d = if d % 2 == 1 { d + 1 } else { d };
    (n, d, k)
}

/// Value of a degenerate constant dimension cell, or `None` if the cell is
/// a genuine optimisation problem.
pub fn degenerate_cdc(f: &QField, n: i64, d: i64, k: i64) -> Option<BigInt> {
    if n < 0 {
        return None;
    }
    if k < 0 || k > n {
        return Some(BigInt::from(0));
    }
    let (n, d, k) = canonical_cdc(n, d, k);
    if k == 0 || d > 2 * k {
        Some(BigInt::one())
    } else if d <= 2 {
        Some(f.gauss(n, k))
    } else {
        None
    }
}

/// A fixed set of bounds, mostly for tests and examples.
#[derive(Clone, Debug, Default)]
pub struct FixedBounds {
    fields: HashMap<i64, QField>,
    cdc: HashMap<(i64, i64, i64, i64), (BigInt, BigInt)>,
    mdc: HashMap<(i64, i64, i64), (BigInt, BigInt)>,
}

impl FixedBounds {
    pub fn new(qs: &[i64]) -> Self {
        let fields = qs.iter().map(|&q| (q, QField::new(q, 20).expect("valid field"))).collect();
        FixedBounds { fields, ..Default::default() }
    }

    /// Registers bounds for a cell; any alias of it resolves to the same entry.
    pub fn set_cdc(&mut self, q: i64, n: i64, d: i64, k: i64, lower: i64, upper: i64) -> &mut Self {
        let (n, d, k) = canonical_cdc(n, d, k);
        self.cdc.insert((q, n, d, k), (BigInt::from(lower), BigInt::from(upper)));
        self
    }

    pub fn set_cdc_exact(&mut self, q: i64, n: i64, d: i64, k: i64, value: i64) -> &mut Self {
        self.set_cdc(q, n, d, k, value, value)
    }

    pub fn set_mdc(&mut self, q: i64, n: i64, d: i64, lower: i64, upper: i64) -> &mut Self {
        self.mdc.insert((q, n, d), (BigInt::from(lower), BigInt::from(upper)));
        self
    }
}

impl BoundsView for FixedBounds {
    fn cdc(&self, q: i64, n: i64, d: i64, k: i64) -> Option<(BigInt, BigInt)> {
        if let Some(f) = self.fields.get(&q) {
            if let Some(v) = degenerate_cdc(f, n, d, k) {
                return Some((v.clone(), v));
            }
        }
        let (n, d, k) = canonical_cdc(n, d, k);
        self.cdc.get(&(q, n, d, k)).cloned()
    }

    fn mdc(&self, q: i64, n: i64, d: i64) -> Option<(BigInt, BigInt)> {
        self.mdc.get(&(q, n, d)).cloned()
    }
}
