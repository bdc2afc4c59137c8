//! Exact rational simplex and a depth-first branch and bound on top of it.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::qcalc::{rat_floor, BigRat};

/// `max c.x` subject to `A x <= b`, `0 <= x`, and optional `x_j <= u_j`.
#[derive(Clone, Debug, Default)]
pub struct RationalLP {
    pub objective: Vec<BigRat>,
    pub rows: Vec<Vec<BigRat>>,
    pub rhs: Vec<BigRat>,
    pub upper: Vec<Option<BigInt>>,
}

impl RationalLP {
    pub fn new(num_vars: usize) -> Self {
        RationalLP {
            objective: vec![BigRat::zero(); num_vars],
            rows: Vec::new(),
            rhs: Vec::new(),
            upper: vec![None; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds `coeffs . x <= rhs`.
    pub fn add_row(&mut self, coeffs: Vec<BigRat>, rhs: BigRat) {
        assert_eq!(coeffs.len(), self.num_vars(), "row width mismatch");
        self.rows.push(coeffs);
        self.rhs.push(rhs);
    }

    /// Adds a row from integer coefficients.
    pub fn add_int_row(&mut self, coeffs: &[BigInt], rhs: &BigInt) {
        self.add_row(coeffs.iter().cloned().map(BigRat::from_integer).collect(), BigRat::from_integer(rhs.clone()));
    }

    fn objective_is_integral(&self) -> bool {
        self.objective.iter().all(|c| c.is_integer())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: BigRat, solution: Vec<BigRat> },
    Unbounded,
    Infeasible,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&BigRat> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

struct Tableau {
    // rows 0..m are constraints, row m is the objective (reduced costs)
    t: Vec<Vec<BigRat>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn m(&self) -> usize {
        self.basis.len()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col].clone();
        for v in self.t[row].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (x, pr) in r.iter_mut().zip(pivot_row.iter()) {
                if !pr.is_zero() {
                    *x = &*x - &factor * pr;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs Bland's rule on columns `< active`; returns false when unbounded.
    fn optimize(&mut self, active: usize) -> bool {
        let m = self.m();
        loop {
            let entering = (0..active).find(|&j| self.t[m][j].is_negative());
            let Some(col) = entering else { return true };
            let mut best: Option<(usize, BigRat)> = None;
            for i in 0..m {
                let a = &self.t[i][col];
                if a.is_positive() {
                    let ratio = &self.t[i][self.cols] / a;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return false,
                Some((row, _)) => self.pivot(row, col),
            }
        }
    }
}

/// Solves the program exactly with two-phase simplex and Bland's rule.
pub fn simplex_max(lp: &RationalLP) -> LpOutcome {
    let nv = lp.num_vars();
    let mut rows: Vec<Vec<BigRat>> = lp.rows.clone();
    let mut rhs: Vec<BigRat> = lp.rhs.clone();
    for (j, u) in lp.upper.iter().enumerate() {
        if let Some(u) = u {
            let mut r = vec![BigRat::zero(); nv];
            r[j] = BigRat::one();
            rows.push(r);
            rhs.push(BigRat::from_integer(u.clone()));
        }
    }
    let m = rows.len();
    let negative: Vec<usize> = (0..m).filter(|&i| rhs[i].is_negative()).collect();
    let n_art = negative.len();
    let cols = nv + m + n_art;
    let mut t = vec![vec![BigRat::zero(); cols + 1]; m + 1];
    let mut basis = vec![0; m];
    let mut art_of_row = vec![None; m];
    for (a, &i) in negative.iter().enumerate() {
        art_of_row[i] = Some(nv + m + a);
    }
    for i in 0..m {
        let sign = if art_of_row[i].is_some() { -BigRat::one() } else { BigRat::one() };
        for j in 0..nv {
            t[i][j] = &rows[i][j] * &sign;
        }
        t[i][nv + i] = sign.clone();
        t[i][cols] = &rhs[i] * &sign;
        match art_of_row[i] {
            Some(a) => {
                t[i][a] = BigRat::one();
                basis[i] = a;
            }
            None => basis[i] = nv + i,
        }
    }
    let mut tab = Tableau { t, basis, cols };

    if n_art > 0 {
        // phase one: maximise -sum(artificials)
        for j in nv + m..cols {
            tab.t[m][j] = BigRat::one();
        }
        for i in 0..m {
            if art_of_row[i].is_some() {
                let row = tab.t[i].clone();
                for (x, r) in tab.t[m].iter_mut().zip(row.iter()) {
                    *x = &*x - r;
                }
            }
        }
        tab.optimize(cols);
        if tab.t[m][cols].is_negative() {
            return LpOutcome::Infeasible;
        }
        // drive remaining artificials out of the basis
        let mut i = 0;
        while i < tab.m() {
            if tab.basis[i] >= nv + m {
                match (0..nv + m).find(|&j| !tab.t[i][j].is_zero()) {
                    Some(j) => {
                        tab.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        tab.t.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        // drop artificial columns
        let keep = nv + m;
        for r in tab.t.iter_mut() {
            let last = r[cols].clone();
            r.truncate(keep);
            r.push(last);
        }
        tab.cols = keep;
    }

    let mrows = tab.m();
    let cols = tab.cols;
    let mut obj = vec![BigRat::zero(); cols + 1];
    for j in 0..nv {
        obj[j] = -lp.objective[j].clone();
    }
    for i in 0..mrows {
        let b = tab.basis[i];
        if !obj[b].is_zero() {
            let f = obj[b].clone();
            for (x, r) in obj.iter_mut().zip(tab.t[i].iter()) {
                *x = &*x - &f * r;
            }
        }
    }
    tab.t[mrows] = obj;
    if !tab.optimize(cols) {
        return LpOutcome::Unbounded;
    }
    let mut solution = vec![BigRat::zero(); nv];
    for i in 0..mrows {
        if tab.basis[i] < nv {
            solution[tab.basis[i]] = tab.t[i][cols].clone();
        }
    }
    LpOutcome::Optimal { value: tab.t[mrows][cols].clone(), solution }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BbOutcome {
    Optimal { value: BigInt, solution: Vec<BigInt> },
    /// Budget exhausted: the incumbent (if any) and a valid upper bound.
    BudgetExceeded { best: Option<(BigInt, Vec<BigInt>)>, bound: BigInt },
    Infeasible,
    Unbounded,
}

/// Integer optimum of an all-integer program by depth-first branch and bound.
///
/// Branches on the first fractional variable of the relaxation, exploring
/// the rounded-up side first. `max_nodes` caps the number of LP solves.
pub fn branch_and_bound_max(lp: &RationalLP, max_nodes: u64) -> BbOutcome {
    let integral_obj = lp.objective_is_integral();
    let nv = lp.num_vars();
    let root = simplex_max(lp);
    let root_bound = match &root {
        LpOutcome::Infeasible => return BbOutcome::Infeasible,
        LpOutcome::Unbounded => return BbOutcome::Unbounded,
        LpOutcome::Optimal { value, .. } => rat_floor(value),
    };
    // each node: per-variable (lower, upper) overrides
    type Node = Vec<(Option<BigInt>, Option<BigInt>)>;
    let mut stack: Vec<Node> = vec![vec![(None, None); nv]];
    let mut best: Option<(BigRat, Vec<BigInt>)> = None;
    let mut nodes = 0u64;
    while let Some(node) = stack.pop() {
        if nodes >= max_nodes {
            return BbOutcome::BudgetExceeded {
                best: best.map(|(v, s)| (rat_floor(&v), s)),
                bound: root_bound,
            };
        }
        nodes += 1;
        let mut sub = lp.clone();
        for (j, (lo, hi)) in node.iter().enumerate() {
            if let Some(hi) = hi {
                sub.upper[j] = Some(match &sub.upper[j] {
                    Some(u) if u < hi => u.clone(),
                    _ => hi.clone(),
                });
            }
            if let Some(lo) = lo {
                let mut r = vec![BigRat::zero(); nv];
                r[j] = -BigRat::one();
                sub.add_row(r, BigRat::from_integer(-lo.clone()));
            }
        }
        let (value, solution) = match simplex_max(&sub) {
            LpOutcome::Optimal { value, solution } => (value, solution),
            LpOutcome::Infeasible => continue,
            LpOutcome::Unbounded => return BbOutcome::Unbounded,
        };
        if let Some((bv, _)) = &best {
            let prune = if integral_obj { rat_floor(&value) <= rat_floor(bv) } else { value <= *bv };
            if prune {
                continue;
            }
        }
        match solution.iter().position(|x| !x.is_integer()) {
            None => {
                let ints = solution.iter().map(|x| x.to_integer()).collect();
                best = Some((value, ints));
            }
            Some(j) => {
                let fl = rat_floor(&solution[j]);
                let mut down = node.clone();
                down[j].1 = Some(fl.clone());
                let mut up = node;
                up[j].0 = Some(fl + 1);
                stack.push(down);
                stack.push(up);
            }
        }
    }
    match best {
        Some((v, s)) => BbOutcome::Optimal { value: v.to_integer(), solution: s },
        None => BbOutcome::Infeasible,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRat {
        BigRat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn single_variable() {
        let mut lp = RationalLP::new(1);
        lp.objective[0] = r(1, 1);
        lp.add_row(vec![r(1, 1)], r(7, 2));
        assert_eq!(simplex_max(&lp).value(), Some(&r(7, 2)));
        assert_eq!(branch_and_bound_max(&lp, 100), BbOutcome::Optimal { value: BigInt::from(3), solution: vec![BigInt::from(3)] });
    }

    #[test]
    fn unbounded_and_infeasible() {
        let mut lp = RationalLP::new(2);
        lp.objective = vec![r(1, 1), r(1, 1)];
        lp.add_row(vec![r(1, 1), r(-1, 1)], r(1, 1));
        assert_eq!(simplex_max(&lp), LpOutcome::Unbounded);

        let mut lp = RationalLP::new(1);
        lp.objective[0] = r(1, 1);
        lp.add_row(vec![r(1, 1)], r(2, 1));
        lp.add_row(vec![r(-1, 1)], r(-3, 1));
        assert_eq!(simplex_max(&lp), LpOutcome::Infeasible);
        assert_eq!(branch_and_bound_max(&lp, 10), BbOutcome::Infeasible);
    }

    #[test]
    fn classic_two_dimensional() {
        // max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3
        let mut lp = RationalLP::new(2);
        lp.objective = vec![r(3, 1), r(2, 1)];
        lp.add_row(vec![r(1, 1), r(1, 1)], r(4, 1));
        lp.add_row(vec![r(1, 1), r(3, 1)], r(6, 1));
        lp.upper[0] = Some(BigInt::from(3));
        match simplex_max(&lp) {
            LpOutcome::Optimal { value, solution } => {
                assert_eq!(value, r(11, 1));
                assert_eq!(solution, vec![r(3, 1), r(1, 1)]);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn fractional_relaxation_branches() {
        // max x + y, 2x + 2y <= 3 -> LP 3/2, integer 1
        let mut lp = RationalLP::new(2);
        lp.objective = vec![r(1, 1), r(1, 1)];
        lp.add_row(vec![r(2, 1), r(2, 1)], r(3, 1));
        assert_eq!(simplex_max(&lp).value(), Some(&r(3, 2)));
        match branch_and_bound_max(&lp, 100) {
            BbOutcome::Optimal { value, .. } => assert_eq!(value, BigInt::from(1)),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn budget_reports_bound() {
        let mut lp = RationalLP::new(3);
        lp.objective = vec![r(1, 1), r(1, 1), r(1, 1)];
        lp.add_row(vec![r(2, 1), r(2, 1), r(2, 1)], r(5, 1));
        match branch_and_bound_max(&lp, 1) {
            BbOutcome::BudgetExceeded { bound, .. } => assert_eq!(bound, BigInt::from(2)),
            o => panic!("{o:?}"),
        }
    }
}
