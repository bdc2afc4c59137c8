//! Echelon-Ferrers construction: pivot profiles, Ferrers diagrams, and the
//! search for good skeleton codes.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::qcalc::{rat_floor, BigRat, QField};
use crate::ratlp::{self, RationalLP};

/// Pivot positions of a reduced echelon form, as a bit mask over columns
/// `0..n` (bit `i` set means column `i` is a pivot column).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PivotProfile {
    pub n: u32,
    pub mask: u32,
}

impl PivotProfile {
    pub fn new(n: u32, mask: u32) -> Self {
        assert!(n <= 31 && (n == 31 || mask < (1 << n)), "profile does not fit");
        PivotProfile { n, mask }
    }

    pub fn from_pivots(n: u32, pivots: &[u32]) -> Self {
        Self::new(n, pivots.iter().fold(0, |m, &p| m | (1 << p)))
    }

    pub fn weight(&self) -> u32 {
        self.mask.count_ones()
    }

    /// Pivot columns, ascending, 0-based.
    pub fn pivots(&self) -> Vec<u32> {
        (0..self.n).filter(|&i| self.mask & (1 << i) != 0).collect()
    }

    pub fn distance(&self, other: &PivotProfile) -> u32 {
        (self.mask ^ other.mask).count_ones()
    }

    /// Mirror image (column `i` becomes column `n-1-i`).
    pub fn reversed(&self) -> Self {
        let mut m = 0;
        for i in 0..self.n {
            if self.mask & (1 << i) != 0 {
                m |= 1 << (self.n - 1 - i);
            }
        }
        PivotProfile { n: self.n, mask: m }
    }

    /// 0/1 string, leftmost column first.
    pub fn bits(&self) -> String {
        (0..self.n).map(|i| if self.mask & (1 << i) != 0 { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for PivotProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.pivots().iter().map(|x| x.to_string()).collect();
        if p.len() == 1 {
            write!(f, "({},)", p[0])
        } else {
            write!(f, "({})", p.join(", "))
        }
    }
}

/// Formats a skeleton the way records carry it, e.g. `[(0, 1, 2), (0, 3, 4)]`.
pub fn skeleton_string(profiles: &[PivotProfile]) -> String {
    let parts: Vec<String> = profiles.iter().map(|p| p.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Right-aligned dot counts, one row per pivot from top to bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FerrersDiagram {
    pub rows: Vec<u32>,
}

impl FerrersDiagram {
    pub fn dots(&self) -> u32 {
        self.rows.iter().sum()
    }
}

pub fn ferrers_from_profile(v: &PivotProfile) -> FerrersDiagram {
    let free: Vec<u32> = (0..v.n).filter(|&i| v.mask & (1 << i) == 0).collect();
    let rows = v.pivots().iter().map(|&p| free.iter().filter(|&&c| c > p).count() as u32).collect();
    FerrersDiagram { rows }
}

/// Upper bound on the dimension of a linear rank-metric code with minimum
/// rank distance `delta` whose matrices are supported on the diagram:
/// the minimum over `i < delta` of the dots left after deleting the top
/// `i` rows and the rightmost `delta-1-i` columns.
pub fn ef_dim_bound(f: &FerrersDiagram, delta: u32) -> u32 {
    assert!(delta >= 1, "rank distance must be positive");
    (0..delta)
        .map(|i| {
            let cut = delta - 1 - i;
            f.rows.iter().skip(i as usize).map(|&r| r.saturating_sub(cut)).sum::<u32>()
        })
        .min()
        .expect("delta >= 1")
}

/// Exponent of the size of a component with the given profile.
pub fn profile_exponent(v: &PivotProfile, delta: u32) -> u32 {
    ef_dim_bound(&ferrers_from_profile(v), delta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkeletonMode {
    /// Exact maximum (falls back to greedy beyond the vertex cap).
    Exact,
    Greedy,
    /// Blocks of consecutive pivots shifted by `d/2` columns.
    ShiftedBlocks,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkeletonStatus {
    Optimal,
    /// The search exceeded the vertex cap; greedy value.
    Greedy,
    /// The search ran out of budget; best skeleton found.
    Incumbent,
    Blocks,
}

#[derive(Clone, Debug)]
pub struct SearchBudget {
    pub vertex_cap: usize,
    pub max_nodes: u64,
    pub time_limit: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { vertex_cap: 400, max_nodes: 2_000_000, time_limit: None }
    }
}

#[derive(Clone, Debug)]
pub struct SkeletonResult {
    pub value: BigInt,
    pub profiles: Vec<PivotProfile>,
    pub status: SkeletonStatus,
}

impl SkeletonResult {
    /// Record name and parameter string for this outcome.
    pub fn record_label(&self) -> (&'static str, String) {
        match self.status {
            SkeletonStatus::Optimal => ("ef_computation", skeleton_string(&self.profiles)),
            SkeletonStatus::Greedy => ("greedy_multicomponent", String::new()),
            SkeletonStatus::Incumbent => ("echelon_ferrers", "bb-incumbent".to_string()),
            SkeletonStatus::Blocks => ("multicomponent", String::new()),
        }
    }
}

/// All profiles of length `n` and weight `k`, in lexicographic pivot order.
pub fn profiles_of_weight(n: u32, k: u32) -> Vec<PivotProfile> {
    let mut out: Vec<PivotProfile> =
        (0u32..(1u32 << n)).filter(|m| m.count_ones() == k).map(|m| PivotProfile::new(n, m)).collect();
    out.sort_by_key(|p| p.pivots());
    out
}

fn all_profiles(n: u32) -> Vec<PivotProfile> {
    let mut out: Vec<PivotProfile> = (0u32..(1u32 << n)).map(|m| PivotProfile::new(n, m)).collect();
    out.sort_by_key(|p| (p.weight(), p.pivots()));
    out
}

/// Shifted-block skeleton: pivots `s..s+k` for `s = 0, d/2, 2d/2, ...`.
pub fn shifted_blocks(n: u32, d: u32, k: u32) -> Vec<PivotProfile> {
    let step = (d / 2).max(1);
    let mut out = Vec::new();
    let mut s = 0;
    while s + k <= n {
        let mask = ((1u32 << k) - 1) << s;
        out.push(PivotProfile::new(n, mask));
        if k == 0 {
            break;
        }
        s += step;
    }
    out
}

/// Best skeleton of weight-`k` profiles with pairwise Hamming distance at
/// least `d`, each component priced `q^ef_dim_bound(v, d/2)`.
pub fn skeleton_optimize_cdc(f: &QField, n: u32, d: u32, k: u32, mode: SkeletonMode, budget: &SearchBudget) -> SkeletonResult {
    let delta = d / 2;
    if mode == SkeletonMode::ShiftedBlocks {
        let profiles = shifted_blocks(n, d, k);
        let value = profiles.iter().map(|p| f.pow(profile_exponent(p, delta) as i64)).sum();
        return SkeletonResult { value, profiles, status: SkeletonStatus::Blocks };
    }
    optimize(f, profiles_of_weight(n, k), d, delta, mode, budget)
}

/// Same search for mixed dimension codes: every profile is a candidate and
/// the rank distance inside a component is `ceil(d/2)`.
pub fn skeleton_optimize_mdc(f: &QField, n: u32, d: u32, mode: SkeletonMode, budget: &SearchBudget) -> SkeletonResult {
    optimize(f, all_profiles(n), d, d.div_ceil(2).max(1), mode, budget)
}

fn optimize(f: &QField, profiles: Vec<PivotProfile>, d: u32, delta: u32, mode: SkeletonMode, budget: &SearchBudget) -> SkeletonResult {
    let mut items: Vec<(u32, PivotProfile)> = profiles.into_iter().map(|p| (profile_exponent(&p, delta), p)).collect();
    // heaviest first; ties by pivot sequence
    items.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.pivots().cmp(&b.1.pivots())));
    let conflict = |a: &PivotProfile, b: &PivotProfile| a.distance(b) < d;

    let greedy = if items.len() <= 2000 {
        let mut chosen: Vec<usize> = Vec::new();
        for i in 0..items.len() {
            if chosen.iter().all(|&j| !conflict(&items[i].1, &items[j].1)) {
                chosen.push(i);
            }
        }
        chosen
    } else {
        greedy_by_balls(&items, d)
    };
    let price = |sel: &[usize]| -> BigInt { sel.iter().map(|&i| f.pow(items[i].0 as i64)).sum() };
    let finish = |sel: Vec<usize>, status| {
        let mut profiles: Vec<PivotProfile> = sel.iter().map(|&i| items[i].1).collect();
        profiles.sort_by_key(|p| p.pivots());
        SkeletonResult { value: price(&sel), profiles, status }
    };

    if mode == SkeletonMode::Greedy {
        return finish(greedy, SkeletonStatus::Greedy);
    }
    let total: BigInt = items.iter().map(|(e, _)| f.pow(*e as i64)).sum();
    let fits = total.bits() < 120;
    if items.len() > budget.vertex_cap || !fits {
        return finish(greedy, SkeletonStatus::Greedy);
    }
    let weights: Vec<u128> = items.iter().map(|(e, _)| f.pow(*e as i64).to_u128().expect("checked size")).collect();
    let adjacency: Vec<Vec<bool>> =
        (0..items.len()).map(|i| (0..items.len()).map(|j| i != j && conflict(&items[i].1, &items[j].1)).collect()).collect();
    let out = max_weight_independent_set(&weights, &adjacency, &greedy, budget);
    let status = if out.complete { SkeletonStatus::Optimal } else { SkeletonStatus::Incumbent };
    finish(out.chosen, status)
}

/// Same picks as the pairwise greedy scan, marking the Hamming ball of
/// radius `d-1` around every chosen mask instead of rescanning the chosen set.
fn greedy_by_balls(items: &[(u32, PivotProfile)], d: u32) -> Vec<usize> {
    let n = items.first().map_or(0, |(_, p)| p.n);
    let mut blocked = vec![false; 1usize << n];
    let mut chosen = Vec::new();

    fn mark(mask: u32, from: u32, n: u32, left: u32, blocked: &mut [bool]) {
        blocked[mask as usize] = true;
        if left == 0 {
            return;
        }
        for bit in from..n {
            mark(mask ^ (1 << bit), bit + 1, n, left - 1, blocked);
        }
    }

    for (i, (_, p)) in items.iter().enumerate() {
        if !blocked[p.mask as usize] {
            chosen.push(i);
            mark(p.mask, 0, n, d.saturating_sub(1), &mut blocked);
        }
    }
    chosen
}

/// Outcome of [`max_weight_independent_set`].
#[derive(Clone, Debug)]
pub struct MwisOutcome {
    pub value: u128,
    pub chosen: Vec<usize>,
    /// False when the node or time budget stopped the search early.
    pub complete: bool,
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn full(n: usize) -> Self {
        let mut b = Self::empty(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }
    fn first(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
    fn and_not(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + t)
                }
            })
        })
    }
}

struct Search<'a> {
    w: &'a [u128],
    adj: Vec<Bits>,
    best: u128,
    best_set: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    aborted: bool,
}

impl Search<'_> {
    /// Greedy clique cover of the candidates; the heaviest vertex of each
    /// clique bounds what an independent set can take from it.
    fn bound(&self, cand: &Bits) -> u128 {
        let mut cliques: Vec<(u128, Bits)> = Vec::new();
        for v in cand.iter() {
            match cliques.iter_mut().find(|(_, common)| common.get(v)) {
                Some((_, common)) => *common = common.and(&self.adj[v]),
                None => cliques.push((self.w[v], self.adj[v].clone())),
            }
        }
        cliques.iter().map(|(w, _)| *w).sum()
    }

    fn run(&mut self, cand: Bits, cur: u128, chosen: &mut Vec<usize>) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes || (self.nodes.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() > d)) {
            self.aborted = true;
            return;
        }
        let Some(v) = cand.first() else {
            if cur > self.best {
                self.best = cur;
                self.best_set = chosen.clone();
            }
            return;
        };
        if cur + self.bound(&cand) <= self.best {
            return;
        }
        let mut without = cand.clone();
        without.clear(v);
        chosen.push(v);
        let with = without.and_not(&self.adj[v]);
        self.run(with, cur + self.w[v], chosen);
        chosen.pop();
        self.run(without, cur, chosen);
    }
}

/// Exact maximum-weight independent set by branch and bound.
///
/// Vertices should be ordered heaviest first; `start` is an independent set
/// used as the initial incumbent.
pub fn max_weight_independent_set(weights: &[u128], adjacency: &[Vec<bool>], start: &[usize], budget: &SearchBudget) -> MwisOutcome {
    let n = weights.len();
    let adj: Vec<Bits> = adjacency
        .iter()
        .map(|row| {
            let mut b = Bits::empty(n);
            for (j, &c) in row.iter().enumerate() {
                if c {
                    b.set(j);
                }
            }
            b
        })
        .collect();
    let start_value: u128 = start.iter().map(|&i| weights[i]).sum();
    let mut s = Search {
        w: weights,
        adj,
        best: start_value,
        best_set: start.to_vec(),
        nodes: 0,
        max_nodes: budget.max_nodes,
        deadline: budget.time_limit.map(|t| Instant::now() + t),
        aborted: false,
    };
    let mut chosen = Vec::new();
    s.run(Bits::full(n), 0, &mut chosen);
    let mut chosen = s.best_set;
    chosen.sort_unstable();
    MwisOutcome { value: s.best, chosen, complete: !s.aborted }
}

/// Linear relaxation of the skeleton program (edge formulation): an upper
/// bound on what any skeleton for these parameters can reach.
pub fn ef_lp_relaxation(f: &QField, n: u32, d: u32, k: u32) -> BigRat {
    let profiles = profiles_of_weight(n, k);
    let mut lp = RationalLP::new(profiles.len());
    for (i, p) in profiles.iter().enumerate() {
        lp.objective[i] = BigRat::from_integer(f.pow(profile_exponent(p, d / 2) as i64));
        lp.upper[i] = Some(BigInt::from(1));
    }
    for i in 0..profiles.len() {
        for j in i + 1..profiles.len() {
            if profiles[i].distance(&profiles[j]) < d {
                let mut row = vec![BigRat::zero(); profiles.len()];
                row[i] = BigRat::from_integer(BigInt::from(1));
                row[j] = BigRat::from_integer(BigInt::from(1));
                lp.add_row(row, BigRat::from_integer(BigInt::from(1)));
            }
        }
    }
    match ratlp::simplex_max(&lp) {
        ratlp::LpOutcome::Optimal { value, .. } => value,
        other => unreachable!("bounded feasible program, got {other:?}"),
    }
}

/// Integer program of the skeleton search, solved with the generic
/// branch and bound; an independent route to the same optimum.
pub fn ef_ilp_value(f: &QField, n: u32, d: u32, k: u32, max_nodes: u64) -> Option<BigInt> {
    let profiles = profiles_of_weight(n, k);
    let mut lp = RationalLP::new(profiles.len());
    for (i, p) in profiles.iter().enumerate() {
        lp.objective[i] = BigRat::from_integer(f.pow(profile_exponent(p, d / 2) as i64));
        lp.upper[i] = Some(BigInt::from(1));
    }
    for i in 0..profiles.len() {
        for j in i + 1..profiles.len() {
            if profiles[i].distance(&profiles[j]) < d {
                let mut row = vec![BigRat::zero(); profiles.len()];
                row[i] = BigRat::from_integer(BigInt::from(1));
                row[j] = BigRat::from_integer(BigInt::from(1));
                lp.add_row(row, BigRat::from_integer(BigInt::from(1)));
            }
        }
    }
    match ratlp::branch_and_bound_max(&lp, max_nodes) {
        ratlp::BbOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    }
}

/// Floor of [`ef_lp_relaxation`].
pub fn ef_lp_bound(f: &QField, n: u32, d: u32, k: u32) -> BigInt {
    rat_floor(&ef_lp_relaxation(f, n, d, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(bits: &str) -> PivotProfile {
        let n = bits.len() as u32;
        let mask = bits.chars().enumerate().fold(0, |m, (i, c)| if c == '1' { m | (1 << i) } else { m });
        PivotProfile::new(n, mask)
    }

    #[test]
    fn diagrams() {
        assert_eq!(ferrers_from_profile(&p("111000")).rows, vec![3, 3, 3]);
        assert_eq!(ferrers_from_profile(&p("001110")).rows, vec![1, 1, 1]);
        assert_eq!(ferrers_from_profile(&p("110100")).rows, vec![3, 3, 2]);
    }

    #[test]
    fn dimension_bound() {
        let rect = FerrersDiagram { rows: vec![3, 3, 3] };
        assert_eq!(ef_dim_bound(&rect, 2), 6);
        assert_eq!(ef_dim_bound(&FerrersDiagram { rows: vec![1, 1, 1] }, 2), 0);
        let f = ferrers_from_profile(&p("110100"));
        assert_eq!(ef_dim_bound(&f, 1), f.dots());
    }

    #[test]
    fn dump_skeleton() {
        let f = QField::new(2, 8).unwrap();
        let r = skeleton_optimize_cdc(&f, 6, 4, 3, SkeletonMode::Exact, &SearchBudget::default());
        assert_eq!(r.value, BigInt::from(71));
        assert_eq!(r.status, SkeletonStatus::Optimal);
        assert_eq!(skeleton_string(&r.profiles), "[(0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 4, 5)]");
        let blocks = skeleton_optimize_cdc(&f, 6, 4, 3, SkeletonMode::ShiftedBlocks, &SearchBudget::default());
        assert_eq!(blocks.value, BigInt::from(65));
    }

    #[test]
    fn lp_and_ilp_routes() {
        let f = QField::new(2, 8).unwrap();
        assert!(ef_lp_bound(&f, 6, 4, 3) >= BigInt::from(71));
        assert_eq!(ef_ilp_value(&f, 6, 4, 3, 100_000), Some(BigInt::from(71)));
    }

    #[test]
    fn spread_skeleton() {
        for q in [2, 3] {
            let f = QField::new(q, 10).unwrap();
            for k in 2..=4u32 {
                let r = skeleton_optimize_cdc(&f, 2 * k, 2 * k, k, SkeletonMode::Exact, &SearchBudget::default());
                assert_eq!(r.value, f.pow(k as i64) + 1);
            }
        }
    }

    #[test]
    fn mdc_distance_one_takes_everything() {
        let f = QField::new(2, 8).unwrap();
        let r = skeleton_optimize_mdc(&f, 4, 1, SkeletonMode::Exact, &SearchBudget::default());
        assert_eq!(r.value, f.total_subspaces(4));
    }

    #[test]
    fn ball_greedy_matches_pairwise_scan() {
        for (n, d) in [(9u32, 3u32), (10, 4), (8, 5)] {
            let items: Vec<(u32, PivotProfile)> =
                all_profiles(n).into_iter().map(|p| (profile_exponent(&p, d.div_ceil(2)), p)).collect();
            let mut pairwise: Vec<usize> = Vec::new();
            for i in 0..items.len() {
                if pairwise.iter().all(|&j| items[i].1.distance(&items[j].1) >= d) {
                    pairwise.push(i);
                }
            }
            assert_eq!(greedy_by_balls(&items, d), pairwise);
        }
    }

    #[test]
    fn greedy_mdc_within_table() {
        let f = QField::new(2, 8).unwrap();
        let r = skeleton_optimize_mdc(&f, 4, 3, SkeletonMode::Greedy, &SearchBudget::default());
        assert!(r.value <= BigInt::from(6));
        assert!(r.value >= BigInt::from(1));
    }

    #[test]
    fn display_formats() {
        assert_eq!(p("100").to_string(), "(0,)");
        assert_eq!(skeleton_string(&[p("110"), p("011")]), "[(0, 1), (1, 2)]");
        assert_eq!(p("110100").reversed().bits(), "001011");
    }
}
