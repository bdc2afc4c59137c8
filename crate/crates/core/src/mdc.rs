//! Bounds for mixed dimension codes `A_q(n,d)`.
//!
//! Constant dimension sub-problems are read through a [`BoundsView`]; an odd
//! distance there means the next even one.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::lookup::BoundsView;
use crate::model::{BoundRecord, Direction};
use crate::qcalc::{self, BigRat, QField};
use crate::ratlp::{self, BbOutcome, LpOutcome, RationalLP};

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

fn half_up(d: i64) -> i64 {
    (d + 1) / 2
}

/// `A_2(n,d) <=` values from the semidefinite relaxation.
pub const SDP_UPPER_Q2: [(i64, i64, i64); 22] = [
    (4, 3, 6),
    (5, 3, 20),
    (6, 3, 124),
    (7, 3, 776),
    (7, 5, 35),
    (8, 3, 9268),
    (8, 5, 360),
    (9, 3, 107419),
    (9, 5, 2485),
    (10, 3, 2532929),
    (10, 5, 49394),
    (10, 7, 1223),
    (11, 5, 660285),
    (11, 7, 8990),
    (12, 7, 323374),
    (12, 9, 4487),
    (13, 7, 4691980),
    (13, 9, 34306),
    (14, 9, 2334086),
    (14, 11, 17159),
    (15, 11, 134095),
    (16, 13, 67079),
];

pub fn gilbert_varshamov(f: &QField, n: i64, d: i64) -> BigInt {
    let total = f.total_subspaces(n);
    let mut den = BigInt::zero();
    for k in 0..=n {
        let mut ball = BigInt::zero();
        for j in 0..d {
            for i in 0..=j {
                ball += f.gauss(k, i) * f.gauss(n - k, j - i) * f.pow(i * (j - i));
            }
        }
        den += f.gauss(n, k) * ball;
    }
    qcalc::ceil_div(&(&total * &total), &den).expect("positive ball volume")
}

fn layer_lower(view: &dyn BoundsView, q: i64, n: i64, d: i64, k: i64) -> Option<BigInt> {
    view.cdc_lower(q, n, 2 * half_up(d), k)
}

fn layer_upper(view: &dyn BoundsView, q: i64, n: i64, d: i64, k: i64) -> Option<BigInt> {
    view.cdc_upper(q, n, 2 * half_up(d), k)
}

/// Best union of constant dimension layers whose dimensions are `d` apart.
pub fn layer_construction(f: &QField, n: i64, d: i64, view: &dyn BoundsView) -> Option<BigInt> {
    let mut best: Vec<BigInt> = Vec::with_capacity(n as usize + 1);
    for big_n in 0..=n {
        let skip = if big_n > 0 { best[big_n as usize - 1].clone() } else { BigInt::zero() };
        let prev = if big_n >= d { best[(big_n - d) as usize].clone() } else { BigInt::zero() };
        let take = prev + layer_lower(view, f.q(), n, d, big_n)?;
        best.push(skip.max(take));
    }
    best.pop()
}

pub fn improved_cdc_lower(f: &QField, n: i64, d: i64, view: &dyn BoundsView) -> Option<BigInt> {
    let mut sum = BigInt::zero();
    for k in (0..=n).filter(|k| (k - n / 2).rem_euclid(d) == 0) {
        sum += layer_lower(view, f.q(), n, d, k)?;
    }
    Some(sum)
}

pub fn improved_cdc_upper(f: &QField, n: i64, d: i64, view: &dyn BoundsView) -> Option<BigInt> {
    let h = half_up(d);
    let mut sum = int(2);
    for k in h..=n - h {
        sum += layer_upper(view, f.q(), n, d, k)?;
    }
    Some(sum)
}

pub fn cdc_projection_bounds(f: &QField, n: i64, d: i64, view: &dyn BoundsView) -> Option<(BigInt, BigInt)> {
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    for k in 0..=n {
        lo = lo.max(layer_lower(view, f.q(), n, d, k)?);
        hi += layer_upper(view, f.q(), n, d, k)?;
    }
    Some((lo, hi))
}

/// Absent when the cells at `n + 1` are unknown to the view.
pub fn cdc_average_argument(f: &QField, n: i64, d: i64, view: &dyn BoundsView) -> Option<BigInt> {
    let den: BigInt = f.pow(n + 1) - 1;
    let mut best: Option<BigRat> = None;
    for k in 0..=n {
        let a = view.cdc_lower(f.q(), n + 1, d + 1, k)?;
        let v = BigRat::new((f.pow(n + 1 - k) + f.pow(k) - 2) * a, den.clone());
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    best.map(|b| qcalc::rat_ceil(&b))
}

/// Number of `k`-subspaces in a ball of radius `e` around an `i`-subspace.
pub fn ball_layer_count(f: &QField, n: i64, i: i64, k: i64, e: i64) -> BigInt {
    let lo = qcalc::ceil_div(&int(i + k - e), &int(2)).expect("nonzero").max(int(0));
    let lo = i64::try_from(lo).expect("small");
    let mut sum = BigInt::zero();
    for j in lo..=k.min(i) {
        sum += f.gauss(i, j) * f.gauss(n - i, k - j) * f.pow((i - j) * (k - j));
    }
    sum
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvMode {
    Lp,
    BranchAndBound { max_nodes: u64 },
}

fn ev_program(f: &QField, n: i64, d: i64, view: &dyn BoundsView) -> Option<RationalLP> {
    if d % 2 == 0 {
        return None;
    }
    let e = (d - 1) / 2;
    let nv = (n + 1) as usize;
    let mut lp = RationalLP::new(nv);
    for i in 0..nv {
        lp.objective[i] = BigRat::one();
        lp.upper[i] = Some(view.cdc_upper(f.q(), n, 2 * e + 2, i as i64)?);
    }
    for k in 0..=n {
        let row: Vec<BigInt> = (0..=n).map(|i| ball_layer_count(f, n, i, k, e)).collect();
        lp.add_int_row(&row, &f.gauss(n, k));
    }
    Some(lp)
}

/// Upper bound from the packing program over per-dimension counts.
///
/// In branch-and-bound mode an exhausted budget falls back to the root
/// relaxation bound.
pub fn etzion_vardy(f: &QField, n: i64, d: i64, view: &dyn BoundsView, mode: EvMode) -> Option<BigInt> {
    let lp = ev_program(f, n, d, view)?;
    match mode {
        EvMode::Lp => match ratlp::simplex_max(&lp) {
            LpOutcome::Optimal { value, .. } => Some(qcalc::rat_floor(&value)),
            _ => None,
        },
        EvMode::BranchAndBound { max_nodes } => match ratlp::branch_and_bound_max(&lp, max_nodes) {
            BbOutcome::Optimal { value, .. } => Some(value),
            BbOutcome::BudgetExceeded { bound, .. } => Some(bound),
            _ => None,
        },
    }
}

/// Optimum of the same program by exhaustive depth-first enumeration.
///
/// Returns `None` when a variable bound exceeds `cap`.
pub fn etzion_vardy_enumerate(f: &QField, n: i64, d: i64, view: &dyn BoundsView, cap: u64) -> Option<BigInt> {
    let lp = ev_program(f, n, d, view)?;
    let nv = lp.num_vars();
    let mut ub = Vec::with_capacity(nv);
    for u in &lp.upper {
        let u = u.as_ref()?;
        if u > &BigInt::from(cap) {
            return None;
        }
        ub.push(u64::try_from(u).ok()?);
    }
    let rows: Vec<Vec<BigInt>> = lp.rows.iter().map(|r| r.iter().map(|c| c.to_integer()).collect()).collect();
    let rhs: Vec<BigInt> = lp.rhs.iter().map(|c| c.to_integer()).collect();

    fn walk(i: usize, ub: &[u64], rows: &[Vec<BigInt>], slack: &mut Vec<BigInt>, total: u64, best: &mut u64) {
        if i == ub.len() {
            *best = (*best).max(total);
            return;
        }
        let rest: u64 = ub[i..].iter().sum();
        if total + rest <= *best {
            return;
        }
        for v in (0..=ub[i]).rev() {
            let fits = rows.iter().zip(slack.iter()).all(|(r, s)| &r[i] * v <= *s);
            if !fits {
                continue;
            }
            for (r, s) in rows.iter().zip(slack.iter_mut()) {
                *s -= &r[i] * v;
            }
            walk(i + 1, ub, rows, slack, total + v, best);
            for (r, s) in rows.iter().zip(slack.iter_mut()) {
                *s += &r[i] * v;
            }
        }
    }

    let mut slack = rhs;
    let mut best = 0u64;
    walk(0, &ub, &rows, &mut slack, 0, &mut best);
    Some(BigInt::from(best))
}

/// `A_q(v,2)`: the layers of one parity class.
pub fn d2_value(f: &QField, n: i64) -> BigInt {
    (0..=n).filter(|i| (i - n / 2) % 2 == 0).map(|i| f.gauss(n, i)).sum()
}

/// Non-recursive closed forms that apply to a cell.
pub fn mdc_closed_forms(f: &QField, n: i64, d: i64) -> Vec<BoundRecord> {
    let q = f.q();
    let mut out = Vec::new();
    out.push(BoundRecord::lower("trivial_2", BigInt::zero()));
    if n >= 1 && d <= 2 * n {
        out.push(BoundRecord::lower("trivial_4", int(2)));
    }
    out.push(BoundRecord::upper("trivial_3", f.total_subspaces(n)));
    if d <= 1 {
        out.push(BoundRecord::exact("trivial_dle1", f.total_subspaces(n)));
    }
    if d == 2 {
        out.push(BoundRecord::exact("d2", d2_value(f, n)));
    }
    if d == n && n % 2 == 0 && n >= 2 {
        out.push(BoundRecord::exact("neqdeven", f.pow(n / 2) + 1));
    }
    if d == n && n % 2 == 1 && n >= 3 {
        out.push(BoundRecord::upper("nodd_deqn", int(2)));
    }
    if d == n - 1 && n % 2 == 0 && n >= 4 {
        out.push(BoundRecord::exact("neven_deqnm1", f.pow(n / 2) + 1));
    }
    if d == n - 1 && n % 2 == 1 && n >= 5 {
        out.push(BoundRecord::exact("nodd_deqnm1", f.pow(n / 2 + 1) + 1));
    }
    if d == n - 2 && n % 2 == 1 && n >= 5 {
        let k = n / 2;
        out.push(BoundRecord::lower("nodd_deqnm2_l", 2 * f.pow(k + 1) + 1));
        out.push(BoundRecord::upper("nodd_deqnm2_u", 2 * f.pow(k + 1) + 2));
    }
    if (q, n, d) == (2, 7, 5) {
        out.push(BoundRecord::exact("nodd_deqnm2_e", int(34)));
    }
    if (n, d) == (5, 3) {
        out.push(BoundRecord::exact("n5_d3_CPS", 2 * f.pow(3) + 2));
    }
    if q == 2 {
        if let Some(&(_, _, v)) = SDP_UPPER_Q2.iter().find(|(a, b, _)| (*a, *b) == (n, d)) {
            out.push(BoundRecord::upper("semidefinite_programming", int(v)));
        }
    }
    if (q, n, d) == (2, 6, 3) {
        out.push(BoundRecord::upper("special_cases_upper_notderived", int(118)));
    }
    if d >= 3 && d <= n {
        out.push(BoundRecord::lower("gilbert_varshamov", gilbert_varshamov(f, n, d)));
    }
    out
}

/// Recursive records of a cell, given the current view of all other cells.
pub fn mdc_recursive_records(f: &QField, n: i64, d: i64, view: &dyn BoundsView, ev: Option<EvMode>) -> Vec<BoundRecord> {
    let mut out = Vec::new();
    if let Some(v) = cdc_average_argument(f, n, d, view) {
        out.push(BoundRecord::lower("cdc_average_argument", v));
    }
    if let Some((lo, hi)) = cdc_projection_bounds(f, n, d, view) {
        out.push(BoundRecord::lower("cdc_lower_bound", lo));
        out.push(BoundRecord::upper("cdc_upper_bound", hi));
    }
    if let Some(v) = improved_cdc_lower(f, n, d, view) {
        out.push(BoundRecord::lower("improved_cdc_lower_bound", v));
    }
    if let Some(v) = layer_construction(f, n, d, view) {
        out.push(BoundRecord::lower("layer_construction", v));
    }
    if let Some(v) = improved_cdc_upper(f, n, d, view) {
        out.push(BoundRecord::upper("improved_cdc_upper_bound", v));
    }
    if let Some(mode) = ev {
        if d % 2 == 1 && d >= 3 {
            if let Some(v) = etzion_vardy(f, n, d, view, mode) {
                out.push(BoundRecord::upper("Etzion_Vardy_ilp", v));
            }
        }
    }
    if d % 2 == 1 && d >= 3 {
        if let Some((_, hi)) = view.mdc(f.q(), n, d - 1) {
            out.push(BoundRecord::upper("relax_d", hi));
        }
    }
    out
}

/// Polynomial in `q` with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<BigInt>);

impl QPoly {
    fn constant(c: i64) -> Self {
        QPoly(vec![int(c)])
    }

    fn monomial(c: i64, e: usize) -> Self {
        let mut v = vec![BigInt::zero(); e + 1];
        v[e] = int(c);
        QPoly(v)
    }

    fn add(&self, o: &QPoly) -> QPoly {
        let len = self.0.len().max(o.0.len());
        let get = |p: &QPoly, i: usize| p.0.get(i).cloned().unwrap_or_default();
        QPoly((0..len).map(|i| get(self, i) + get(o, i)).collect()).trimmed()
    }

    fn shift(&self, e: usize) -> QPoly {
        let mut v = vec![BigInt::zero(); e];
        v.extend(self.0.iter().cloned());
        QPoly(v)
    }

    fn trimmed(mut self) -> QPoly {
        while self.0.len() > 1 && self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    /// Gaussian binomial coefficient as a polynomial.
    pub fn gauss(n: i64, k: i64) -> QPoly {
        if k < 0 || k > n {
            return QPoly::constant(0);
        }
        let n = n as usize;
        let k = k as usize;
        // rows[j] = [m, j] for the current m
        let mut rows = vec![QPoly::constant(1)];
        for m in 1..=n {
            let mut next = Vec::with_capacity(m + 1);
            for j in 0..=m.min(k) {
                let a = if j >= 1 { rows[j - 1].clone() } else { QPoly::constant(0) };
                let b = if j < rows.len() { rows[j].shift(j) } else { QPoly::constant(0) };
                next.push(a.add(&b));
            }
            rows = next;
        }
        rows[k].clone()
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let coef = if mag.is_one() && e > 0 { String::new() } else { mag.to_string() };
            let var = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{e}"),
            };
            write!(f, "{sign}{coef}{var}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Exact value of `A_q(n,d)` for `n <= 5` as a polynomial in `q`, with the
/// id that determines it.
pub fn small_n_polynomial(n: i64, d: i64) -> Option<(QPoly, &'static str)> {
    if !(1..=5).contains(&n) || !(1..=n).contains(&d) {
        return None;
    }
    let sum_layers = |pred: &dyn Fn(i64) -> bool| (0..=n).filter(|i| pred(*i)).fold(QPoly::constant(0), |acc, i| acc.add(&QPoly::gauss(n, i)));
    let v = if d == 1 {
        (sum_layers(&|_| true), "trivial_dle1")
    } else if d == 2 {
        (sum_layers(&|i| (i - n / 2) % 2 == 0), "d2")
    } else if d == n && n % 2 == 0 {
        (QPoly::monomial(1, (n / 2) as usize).add(&QPoly::constant(1)), "neqdeven")
    } else if d == n {
        (QPoly::constant(2), "nodd_deqn")
    } else if d == n - 1 && n % 2 == 0 {
        (QPoly::monomial(1, (n / 2) as usize).add(&QPoly::constant(1)), "neven_deqnm1")
    } else if d == n - 1 {
        (QPoly::monomial(1, (n / 2 + 1) as usize).add(&QPoly::constant(1)), "nodd_deqnm1")
    } else if (n, d) == (5, 3) {
        (QPoly::monomial(2, 3).add(&QPoly::constant(2)), "n5_d3_CPS")
    } else {
        return None;
    };
    Some(v)
}

/// Evaluates the small-`n` table at any integer `q`, including values that
/// are not field sizes.
pub fn small_n_value(q: &BigInt, n: i64, d: i64) -> Option<BigInt> {
    small_n_polynomial(n, d).map(|(p, _)| p.eval(q))
}

/// Direction of a closed-form id when it applies at `(q, n, d)`.
pub fn mdc_closed_form(id: &str, f: &QField, n: i64, d: i64) -> Option<(BigInt, Direction)> {
    mdc_closed_forms(f, n, d).into_iter().find(|r| r.constraint == id).map(|r| (r.value, r.direction))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lookup::FixedBounds;

    fn field(q: i64) -> QField {
        QField::new(q, 20).unwrap()
    }

    /// Best bounds of the q=2 cells the examples below need.
    fn view_q2() -> FixedBounds {
        let mut v = FixedBounds::new(&[2]);
        v.set_cdc_exact(2, 5, 4, 2, 9)
            .set_cdc_exact(2, 6, 4, 2, 21)
            .set_cdc_exact(2, 6, 4, 3, 77)
            .set_cdc_exact(2, 6, 6, 3, 9)
            .set_cdc_exact(2, 7, 6, 3, 17)
            .set_cdc_exact(2, 4, 4, 2, 5)
            .set_cdc(2, 5, 6, 2, 1, 1);
        v
    }

    #[test]
    fn gilbert_varshamov_values() {
        let f = field(2);
        assert_eq!(gilbert_varshamov(&f, 4, 1), int(67));
        let v = gilbert_varshamov(&f, 4, 3);
        assert!(v >= int(1) && v <= int(5));
        assert!(gilbert_varshamov(&f, 5, 2) <= int(187));
    }

    #[test]
    fn layered_lowers() {
        let f = field(2);
        let v = view_q2();
        assert_eq!(layer_construction(&f, 6, 3, &v), Some(int(79)));
        assert_eq!(improved_cdc_lower(&f, 6, 3, &v), Some(int(79)));
        assert_eq!(layer_construction(&f, 7, 5, &v), Some(int(17)));
        assert_eq!(cdc_projection_bounds(&f, 6, 4, &v).unwrap().0, int(77));
        let all: BigInt = (0..=6).map(|k| f.gauss(6, k)).sum();
        assert_eq!(layer_construction(&f, 6, 1, &v), Some(all));
    }

    #[test]
    fn layered_uppers() {
        let f = field(2);
        let v = view_q2();
        assert_eq!(improved_cdc_upper(&f, 7, 5, &v), Some(int(36)));
        assert_eq!(improved_cdc_upper(&f, 5, 1, &v), Some(f.total_subspaces(5)));
    }

    #[test]
    fn average_argument() {
        let f = field(2);
        let v = view_q2();
        assert_eq!(cdc_average_argument(&f, 5, 3, &v), Some(int(18)));
        assert_eq!(cdc_average_argument(&f, 4, 3, &v), Some(int(3)));
        assert_eq!(cdc_average_argument(&f, 19, 3, &v), None);
    }

    #[test]
    fn ball_counts() {
        let f = field(3);
        for k in 0..=5 {
            assert_eq!(ball_layer_count(&f, 5, k, k, 0), int(1));
        }
        let f2 = field(2);
        // radius one around a 2-space in F_2^4: its three points and three 3-spaces on it
        assert_eq!(ball_layer_count(&f2, 4, 2, 1, 1), int(3));
        assert_eq!(ball_layer_count(&f2, 4, 2, 3, 1), int(3));
    }

    #[test]
    fn etzion_vardy_modes() {
        let f = field(2);
        let v = view_q2();
        let bb = etzion_vardy(&f, 4, 3, &v, EvMode::BranchAndBound { max_nodes: 10_000 }).unwrap();
        assert_eq!(bb, int(6));
        assert_eq!(etzion_vardy_enumerate(&f, 4, 3, &v, 1_000_000), Some(int(6)));
        let lp = etzion_vardy(&f, 4, 3, &v, EvMode::Lp).unwrap();
        assert!(lp >= bb);
        let bb5 = etzion_vardy(&f, 5, 3, &v, EvMode::BranchAndBound { max_nodes: 10_000 }).unwrap();
        assert_eq!(Some(bb5), etzion_vardy_enumerate(&f, 5, 3, &v, 1_000_000));
    }

    #[test]
    fn closed_forms() {
        let f = field(2);
        assert_eq!(mdc_closed_form("d2", &f, 4, 2), Some((int(37), Direction::Exact)));
        assert_eq!(mdc_closed_form("nodd_deqnm1", &f, 7, 6), Some((int(17), Direction::Exact)));
        assert_eq!(mdc_closed_form("neqdeven", &f, 6, 6), Some((int(9), Direction::Exact)));
        assert_eq!(mdc_closed_form("semidefinite_programming", &f, 6, 3), Some((int(124), Direction::Upper)));
        for (q, want) in [(2, 18), (3, 56), (4, 130)] {
            assert_eq!(mdc_closed_form("n5_d3_CPS", &field(q), 5, 3), Some((int(want), Direction::Exact)));
        }
    }

    #[test]
    fn small_n_polynomials() {
        assert_eq!(small_n_polynomial(5, 3).unwrap().0.to_string(), "2q^3+2");
        assert_eq!(small_n_polynomial(4, 2).unwrap().0.to_string(), "q^4+q^3+2q^2+q+3");
        assert_eq!(small_n_value(&int(2), 4, 2), Some(int(37)));
        assert_eq!(small_n_value(&int(-1), 5, 3), Some(int(0)));
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = field(q);
            for n in 1..=5 {
                for d in 1..=n {
                    let exact: Vec<BigInt> = mdc_closed_forms(&f, n, d)
                        .into_iter()
                        .filter(|r| r.direction == Direction::Exact)
                        .map(|r| r.value)
                        .collect();
                    let poly = small_n_value(f.q_big(), n, d).unwrap();
                    assert!(exact.iter().all(|e| *e == poly), "q={q} n={n} d={d}");
                }
            }
        }
    }
}
