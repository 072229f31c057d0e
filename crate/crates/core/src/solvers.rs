//! Problem instances and their exact single-objective weighted-sum oracles.
//!
//! Every instance is kept in a canonical minimization form whose outcomes
//! are strictly positive integer vectors. Assignment costs are shifted by one
//! when a zero cost is present; knapsack profits `y_k` are mapped to
//! `U_k - y_k` with `U_k = 1 + sum_i c^k_i`.

use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::engine::RunStats;
use crate::error::{Error, Result};
use crate::numerics::Weight;

/// Largest knapsack capacity accepted by the dynamic program.
pub const MAX_CAPACITY: i64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemKind {
    Assignment,
    Knapsack,
}

/// A problem as written in an instance file, in its original sense:
/// assignment costs are minimized, knapsack profits maximized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RawProblem {
    Assignment {
        /// `costs[k][i][j]`
        costs: Vec<Vec<Vec<i64>>>,
    },
    Knapsack {
        capacity: i64,
        weights: Vec<i64>,
        /// `profits[k][i]`
        profits: Vec<Vec<i64>>,
    },
}

impl RawProblem {
    pub fn kind(&self) -> ProblemKind {
        match self {
            RawProblem::Assignment { .. } => ProblemKind::Assignment,
            RawProblem::Knapsack { .. } => ProblemKind::Knapsack,
        }
    }

    pub fn num_objectives(&self) -> usize {
        match self {
            RawProblem::Assignment { costs } => costs.len(),
            RawProblem::Knapsack { profits, .. } => profits.len(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            RawProblem::Assignment { costs } => costs.first().map_or(0, Vec::len),
            RawProblem::Knapsack { weights, .. } => weights.len(),
        }
    }
}

/// A feasible solution: a permutation (row -> column) or an item subset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Solution {
    Permutation(Vec<usize>),
    Subset(Vec<bool>),
}

/// Image of a feasible solution in canonical minimization space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OutcomePoint {
    pub y: Vec<i64>,
    pub solution: Option<Solution>,
}

impl OutcomePoint {
    pub fn new(y: Vec<i64>) -> Self {
        OutcomePoint { y, solution: None }
    }

    pub fn with_solution(y: Vec<i64>, solution: Solution) -> Self {
        OutcomePoint {
            y,
            solution: Some(solution),
        }
    }

    /// `self` weakly improves on `other` everywhere and strictly somewhere.
    pub fn dominates(&self, other: &OutcomePoint) -> bool {
        dominates(&self.y, &other.y)
    }
}

pub fn dominates(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a != b
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Canonical {
    Assignment {
        costs: Vec<Vec<Vec<i64>>>,
        shift: i64,
    },
    Knapsack {
        capacity: i64,
        weights: Vec<i64>,
        profits: Vec<Vec<i64>>,
        upper: Vec<i64>,
    },
}

/// A validated instance in canonical minimization form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    raw: RawProblem,
    canonical: Canonical,
    p: usize,
    n: usize,
}

/// Exact solver for min λᵀz over a fixed feasible set.
///
/// Outcomes must be strictly positive integer vectors in minimization sense.
pub trait WeightedSumOracle: Sync {
    fn num_objectives(&self) -> usize;

    /// Upper bound on any canonical objective value.
    fn objective_bound(&self) -> i64;

    /// Solve min λᵀz. Implementations bump `stats.solver_calls` and, when a
    /// float computation is used, `stats.float_calls`.
    fn solve(&self, weight: &Weight, stats: &mut RunStats) -> Result<OutcomePoint>;

    /// Map a canonical outcome back to the problem's original sense.
    fn to_original(&self, y: &[i64]) -> Vec<i64> {
        y.to_vec()
    }
}

impl Instance {
    /// Validate `raw` and bring it into canonical minimization form.
    pub fn canonicalize(raw: RawProblem) -> Result<Self> {
        let p = raw.num_objectives();
        let n = raw.size();
        if p < 1 {
            return Err(Error::InvalidInstance("no objectives".into()));
        }
        if n < 1 {
            return Err(Error::InvalidInstance("empty instance".into()));
        }
        let canonical = match &raw {
            RawProblem::Assignment { costs } => {
                for (k, c) in costs.iter().enumerate() {
                    if c.len() != n || c.iter().any(|row| row.len() != n) {
                        return Err(Error::InvalidInstance(format!(
                            "cost matrix {} is not {n}x{n}",
                            k + 1
                        )));
                    }
                    if c.iter().flatten().any(|&v| v < 0) {
                        return Err(Error::InvalidInstance(format!(
                            "cost matrix {} has a negative entry",
                            k + 1
                        )));
                    }
                }
                let shift = i64::from(costs.iter().flatten().flatten().any(|&v| v == 0));
                let costs = costs
                    .iter()
                    .map(|c| {
                        c.iter()
                            .map(|row| row.iter().map(|v| v + shift).collect())
                            .collect()
                    })
                    .collect();
                Canonical::Assignment { costs, shift }
            }
            RawProblem::Knapsack {
                capacity,
                weights,
                profits,
            } => {
                if profits.iter().any(|c| c.len() != n) {
                    return Err(Error::InvalidInstance(
                        "profit vectors differ in length from weights".into(),
                    ));
                }
                if profits.iter().flatten().any(|&v| v < 0) {
                    return Err(Error::InvalidInstance("negative profit".into()));
                }
                if weights.iter().any(|&w| w < 1) {
                    return Err(Error::InvalidInstance("item weights must be >= 1".into()));
                }
                if *capacity < 1 || *capacity > MAX_CAPACITY {
                    return Err(Error::InvalidInstance(format!(
                        "capacity must lie in 1..={MAX_CAPACITY}"
                    )));
                }
                let upper = profits.iter().map(|c| 1 + c.iter().sum::<i64>()).collect();
                Canonical::Knapsack {
                    capacity: *capacity,
                    weights: weights.clone(),
                    profits: profits.clone(),
                    upper,
                }
            }
        };
        Ok(Instance { raw, canonical, p, n })
    }

    pub fn raw(&self) -> &RawProblem {
        &self.raw
    }

    pub fn kind(&self) -> ProblemKind {
        self.raw.kind()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Canonical outcome of a feasible solution.
    pub fn evaluate(&self, solution: &Solution) -> Result<Vec<i64>> {
        match (&self.canonical, solution) {
            (Canonical::Assignment { costs, .. }, Solution::Permutation(perm)) => {
                let mut seen = vec![false; self.n];
                if perm.len() != self.n || perm.iter().any(|&j| j >= self.n || std::mem::replace(&mut seen[j], true)) {
                    return Err(Error::InvalidArgument("not a permutation".into()));
                }
                Ok(costs
                    .iter()
                    .map(|c| perm.iter().enumerate().map(|(i, &j)| c[i][j]).sum())
                    .collect())
            }
            (
                Canonical::Knapsack {
                    capacity,
                    weights,
                    profits,
                    upper,
                },
                Solution::Subset(take),
            ) => {
                if take.len() != self.n {
                    return Err(Error::InvalidArgument("subset has wrong length".into()));
                }
                let load: i64 = weights.iter().zip(take).filter(|(_, &t)| t).map(|(w, _)| w).sum();
                if load > *capacity {
                    return Err(Error::InvalidArgument("subset exceeds capacity".into()));
                }
                Ok(profits
                    .iter()
                    .zip(upper)
                    .map(|(c, u)| u - c.iter().zip(take).filter(|(_, &t)| t).map(|(v, _)| v).sum::<i64>())
                    .collect())
            }
            _ => Err(Error::InvalidArgument(
                "solution kind does not match the instance".into(),
            )),
        }
    }

    /// Largest canonical cost (assignment) or the largest `U_k` (knapsack).
    pub fn upper_bound(&self) -> i64 {
        match &self.canonical {
            Canonical::Assignment { costs, .. } => {
                let max = costs.iter().flatten().flatten().copied().max().unwrap_or(0);
                self.n as i64 * max
            }
            Canonical::Knapsack { upper, .. } => upper.iter().copied().max().unwrap_or(1),
        }
    }

    /// Inverse of the canonical transform.
    pub fn original_outcome(&self, y: &[i64]) -> Vec<i64> {
        match &self.canonical {
            Canonical::Assignment { shift, .. } => {
                y.iter().map(|v| v - shift * self.n as i64).collect()
            }
            Canonical::Knapsack { upper, .. } => y.iter().zip(upper).map(|(v, u)| u - v).collect(),
        }
    }

    /// Inverse of [`Instance::original_outcome`].
    pub fn canonical_outcome(&self, original: &[i64]) -> Vec<i64> {
        match &self.canonical {
            Canonical::Assignment { shift, .. } => {
                original.iter().map(|v| v + shift * self.n as i64).collect()
            }
            Canonical::Knapsack { upper, .. } => {
                original.iter().zip(upper).map(|(v, u)| u - v).collect()
            }
        }
    }

    /// Solve min λᵀz over the feasible set.
    ///
    /// Exact weights aggregate in arbitrary precision and run the solver on
    /// machine integers when the aggregated data fits, on big integers
    /// otherwise. Float weights always take the float path.
    pub fn weighted_sum_solve(&self, weight: &Weight, stats: &mut RunStats) -> Result<OutcomePoint> {
        if weight.len() != self.p {
            return Err(Error::InvalidArgument(format!(
                "weight has {} components, instance has {} objectives",
                weight.len(),
                self.p
            )));
        }
        stats.solver_calls += 1;
        let solution = match (&self.canonical, weight) {
            (Canonical::Assignment { costs, .. }, Weight::Exact(w)) => {
                let agg = aggregate_matrix(costs, w);
                let bound = max_abs(agg.iter().flatten()) * BigInt::from(4 * self.n as i64 + 4);
                match to_i64_matrix(&agg, &bound) {
                    Some(m) => Solution::Permutation(hungarian(&m)),
                    None => Solution::Permutation(hungarian(&agg)),
                }
            }
            (Canonical::Assignment { costs, .. }, Weight::Float(w)) => {
                stats.float_calls += 1;
                let agg: Vec<Vec<f64>> = (0..self.n)
                    .map(|i| {
                        (0..self.n)
                            .map(|j| costs.iter().zip(w).map(|(c, l)| l * c[i][j] as f64).sum())
                            .collect()
                    })
                    .collect();
                Solution::Permutation(hungarian(&agg))
            }
            (
                Canonical::Knapsack {
                    capacity,
                    weights,
                    profits,
                    ..
                },
                Weight::Exact(w),
            ) => {
                let agg: Vec<BigInt> = (0..self.n)
                    .map(|i| profits.iter().zip(w).map(|(c, l)| l * BigInt::from(c[i])).sum())
                    .collect();
                let bound = max_abs(agg.iter()) * BigInt::from(self.n as i64 + 1);
                let take = match to_i64_vec(&agg, &bound) {
                    Some(v) => knapsack(&v, weights, *capacity),
                    None => knapsack(&agg, weights, *capacity),
                };
                Solution::Subset(take)
            }
            (
                Canonical::Knapsack {
                    capacity,
                    weights,
                    profits,
                    ..
                },
                Weight::Float(w),
            ) => {
                stats.float_calls += 1;
                let agg: Vec<f64> = (0..self.n)
                    .map(|i| profits.iter().zip(w).map(|(c, l)| l * c[i] as f64).sum())
                    .collect();
                Solution::Subset(knapsack(&agg, weights, *capacity))
            }
        };
        let y = self.evaluate(&solution)?;
        Ok(OutcomePoint::with_solution(y, solution))
    }
}

impl WeightedSumOracle for Instance {
    fn num_objectives(&self) -> usize {
        self.p
    }

    fn objective_bound(&self) -> i64 {
        self.upper_bound()
    }

    fn solve(&self, weight: &Weight, stats: &mut RunStats) -> Result<OutcomePoint> {
        self.weighted_sum_solve(weight, stats)
    }

    fn to_original(&self, y: &[i64]) -> Vec<i64> {
        self.original_outcome(y)
    }
}

fn aggregate_matrix(costs: &[Vec<Vec<i64>>], w: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = costs[0].len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| costs.iter().zip(w).map(|(c, l)| l * BigInt::from(c[i][j])).sum())
                .collect()
        })
        .collect()
}

fn max_abs<'a>(it: impl Iterator<Item = &'a BigInt>) -> BigInt {
    it.map(|v| v.abs()).max().unwrap_or_else(BigInt::zero)
}

fn fits_i64(bound: &BigInt) -> bool {
    *bound < BigInt::from(i64::MAX / 4)
}

fn to_i64_matrix(m: &[Vec<BigInt>], bound: &BigInt) -> Option<Vec<Vec<i64>>> {
    if !fits_i64(bound) {
        return None;
    }
    m.iter()
        .map(|row| row.iter().map(ToPrimitive::to_i64).collect())
        .collect()
}

fn to_i64_vec(v: &[BigInt], bound: &BigInt) -> Option<Vec<i64>> {
    if !fits_i64(bound) {
        return None;
    }
    v.iter().map(ToPrimitive::to_i64).collect()
}

/// Numeric type accepted by the assignment and knapsack solvers.
pub trait Cost: Clone + PartialOrd + Zero + Add<Output = Self> + Sub<Output = Self> {}

impl<T: Clone + PartialOrd + Zero + Add<Output = T> + Sub<Output = T>> Cost for T {}

/// Minimum-cost perfect assignment of a square matrix (Hungarian method with
/// potentials, O(n^3)). Entries may be negative. Returns `row -> column`.
pub fn hungarian<T: Cost>(a: &[Vec<T>]) -> Vec<usize> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    // 1-based potentials; column 0 is a sentinel.
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<T>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta: Option<T> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = a[i0 - 1][j - 1].clone() - u[i0].clone() - v[j].clone();
                if minv[j].as_ref().is_none_or(|m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().unwrap();
                if delta.as_ref().is_none_or(|d| *mj < *d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] = u[owner[j]].clone() + delta.clone();
                    v[j] = v[j].clone() - delta.clone();
                } else if let Some(m) = minv[j].as_mut() {
                    *m = m.clone() - delta.clone();
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    assignment
}

/// 0-1 knapsack maximizing `sum profit_i x_i` over capacities `0..=capacity`.
/// Items with non-positive profit are never taken.
pub fn knapsack<T: Cost>(profit: &[T], weights: &[i64], capacity: i64) -> Vec<bool> {
    let n = profit.len();
    let cap = capacity.max(0) as usize;
    let mut best = vec![T::zero(); cap + 1];
    let mut keep: Vec<Vec<bool>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = vec![false; cap + 1];
        let w = weights[i] as usize;
        if profit[i] > T::zero() && w <= cap {
            for c in (w..=cap).rev() {
                let cand = best[c - w].clone() + profit[i].clone();
                if cand > best[c] {
                    best[c] = cand;
                    row[c] = true;
                }
            }
        }
        keep.push(row);
    }
    let mut take = vec![false; n];
    let mut c = cap;
    for i in (0..n).rev() {
        if keep[i][c] {
            take[i] = true;
            c -= weights[i] as usize;
        }
    }
    take
}

/// Big-M factor used by composite weights for a weight `lambda_sub` on a
/// subset of objectives: `1 + max|λ| * p * B`.
pub fn composite_factor(lambda_sub: &[BigInt], p: usize, bound: i64) -> BigInt {
    let max = lambda_sub.iter().map(|l| l.abs()).max().unwrap_or_else(BigInt::one);
    BigInt::one() + max * BigInt::from(p) * BigInt::from(bound)
}

/// Full weight reproducing "minimize `lambda_sub` on `subset`, then each
/// objective of `free_order` in turn".
///
/// Objectives in `subset` get `λ_k M^r`, the j-th free objective gets
/// `M^(r-1-j)` where `r = free_order.len()`. Objectives in neither list get
/// weight zero.
pub fn subproblem_weight(
    lambda_sub: &[BigInt],
    subset: &[usize],
    free_order: &[usize],
    p: usize,
    bound: i64,
) -> Result<Weight> {
    if lambda_sub.len() != subset.len() || subset.is_empty() {
        return Err(Error::InvalidArgument(
            "subset weight does not match the subset".into(),
        ));
    }
    let m = composite_factor(lambda_sub, p, bound);
    let r = free_order.len();
    let mut w = vec![BigInt::zero(); p];
    let top = num_traits::pow(m.clone(), r);
    for (l, &k) in lambda_sub.iter().zip(subset) {
        w[k] = l * &top;
    }
    for (j, &k) in free_order.iter().enumerate() {
        w[k] = num_traits::pow(m.clone(), r - 1 - j);
    }
    Ok(Weight::Exact(crate::numerics::gcd_reduce(&w)?))
}

/// Float counterpart of [`subproblem_weight`]. The subset weight is rescaled
/// so its smallest nonzero component has magnitude one. Returns the weight
/// and whether any component exceeds 2^52.
pub fn subproblem_weight_float(
    lambda_sub: &[f64],
    subset: &[usize],
    free_order: &[usize],
    p: usize,
    bound: i64,
) -> Result<(Weight, bool)> {
    if lambda_sub.len() != subset.len() || subset.is_empty() {
        return Err(Error::InvalidArgument(
            "subset weight does not match the subset".into(),
        ));
    }
    let min = lambda_sub
        .iter()
        .map(|l| l.abs())
        .filter(|&l| l > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !min.is_finite() {
        return Err(Error::DegenerateNormal);
    }
    let scaled: Vec<f64> = lambda_sub.iter().map(|l| l / min).collect();
    let max = scaled.iter().fold(0.0_f64, |a, l| a.max(l.abs()));
    let m = 1.0 + max * p as f64 * bound as f64;
    let r = free_order.len();
    let mut w = vec![0.0; p];
    for (l, &k) in scaled.iter().zip(subset) {
        w[k] = l * m.powi(r as i32);
    }
    for (j, &k) in free_order.iter().enumerate() {
        w[k] = m.powi((r - 1 - j) as i32);
    }
    let unreliable = w.iter().any(|c| c.abs() > 2f64.powi(52));
    Ok((Weight::Float(w), unreliable))
}
