//! Brute-force ground truth for small instances.
//!
//! Outcomes are enumerated exhaustively from the raw problem data, the
//! nondominated set is obtained by pairwise filtering, and each
//! nondominated point is tested for membership in Y_SN1 by an exact linear
//! feasibility problem: `y` is a nondominated extreme point iff some
//! `λ >= 1` satisfies `λᵀ(y' - y) >= 1` for every other nondominated `y'`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::solvers::{Instance, OutcomePoint, RawProblem, Solution};

pub const MAX_AP_SIZE: usize = 8;
pub const MAX_KP_SIZE: usize = 20;
const PIVOT_LIMIT: usize = 100_000;

/// All distinct canonical outcomes, each with one preimage, sorted by outcome.
pub fn enumerate_outcomes(inst: &Instance) -> Result<Vec<OutcomePoint>> {
    let mut found: BTreeMap<Vec<i64>, Solution> = BTreeMap::new();
    match inst.raw() {
        RawProblem::Assignment { costs } => {
            let n = inst.n();
            if n > MAX_AP_SIZE {
                return Err(Error::TooLarge(format!("assignment size {n} > {MAX_AP_SIZE}")));
            }
            let mut perm: Vec<usize> = (0..n).collect();
            loop {
                let y: Vec<i64> = costs
                    .iter()
                    .map(|c| perm.iter().enumerate().map(|(i, &j)| c[i][j]).sum())
                    .collect();
                found
                    .entry(inst.canonical_outcome(&y))
                    .or_insert_with(|| Solution::Permutation(perm.clone()));
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
        RawProblem::Knapsack {
            capacity,
            weights,
            profits,
        } => {
            let n = inst.n();
            if n > MAX_KP_SIZE {
                return Err(Error::TooLarge(format!("knapsack size {n} > {MAX_KP_SIZE}")));
            }
            for mask in 0u32..(1u32 << n) {
                let take: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                let load: i64 = (0..n).filter(|&i| take[i]).map(|i| weights[i]).sum();
                if load > *capacity {
                    continue;
                }
                let y: Vec<i64> = profits
                    .iter()
                    .map(|c| (0..n).filter(|&i| take[i]).map(|i| c[i]).sum())
                    .collect();
                found
                    .entry(inst.canonical_outcome(&y))
                    .or_insert(Solution::Subset(take));
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|(y, s)| OutcomePoint::with_solution(y, s))
        .collect())
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Nondominated subset, sorted lexicographically.
///
/// After a lexicographic sort a point can only be dominated by an earlier
/// one, and by transitivity by an earlier kept one.
pub fn pareto_filter(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut sorted = points.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut kept: Vec<Vec<i64>> = Vec::new();
    for y in sorted {
        let dominated = kept
            .iter()
            .any(|k| k.iter().zip(&y).all(|(a, b)| a <= b));
        if !dominated {
            kept.push(y);
        }
    }
    kept
}

/// `λ >= 1`, `λᵀ(y' - y) >= 1` for the listed `y'`.
#[derive(Clone, Debug)]
pub struct FeasibilityProgram {
    pub p: usize,
    /// Rows `y' - y`.
    pub rows: Vec<Vec<i64>>,
}

impl FeasibilityProgram {
    pub fn new(y: &[i64], others: &[Vec<i64>]) -> Self {
        FeasibilityProgram {
            p: y.len(),
            rows: others
                .iter()
                .filter(|o| o.as_slice() != y)
                .map(|o| o.iter().zip(y).map(|(a, b)| a - b).collect())
                .collect(),
        }
    }

    fn slack(&self, row: &[i64], lambda: &[BigInt]) -> BigInt {
        row.iter().zip(lambda).map(|(a, l)| BigInt::from(*a) * l).sum::<BigInt>() - 1
    }

    /// True iff `lambda` satisfies every constraint.
    pub fn satisfied_by(&self, lambda: &[BigInt]) -> bool {
        lambda.len() == self.p
            && lambda.iter().all(|l| *l >= BigInt::one())
            && self.rows.iter().all(|r| !self.slack(r, lambda).is_negative())
    }

    /// An integer solution, or `None` if the program is infeasible.
    ///
    /// Constraints are added lazily: a small subset is solved exactly, then
    /// the most violated remaining rows join it until none is violated. An
    /// infeasible subset proves the whole program infeasible.
    pub fn solve(&self) -> Result<Option<Vec<BigInt>>> {
        if self.rows.is_empty() {
            return Ok(Some(vec![BigInt::one(); self.p]));
        }
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| (self.rows[i].iter().sum::<i64>(), i));
        let batch = 4 * self.p;
        let mut active: Vec<usize> = order.iter().take(batch).copied().collect();
        loop {
            let rows: Vec<&[i64]> = active.iter().map(|&i| self.rows[i].as_slice()).collect();
            let Some(lambda) = dual_simplex(self.p, &rows)? else {
                return Ok(None);
            };
            let mut violated: Vec<(BigInt, usize)> = (0..self.rows.len())
                .filter_map(|i| {
                    let s = self.slack(&self.rows[i], &lambda);
                    s.is_negative().then_some((s, i))
                })
                .collect();
            if violated.is_empty() {
                return Ok(Some(lambda));
            }
            violated.sort();
            active.extend(violated.iter().take(batch).map(|&(_, i)| i));
        }
    }
}

/// Minimize `Σ μ` subject to `a_i·μ >= 1 - Σ a_i`, `μ >= 0`, where `λ = μ + 1`.
/// Dual simplex on a dense rational tableau with Bland's rule. Returns the
/// optimal `λ` scaled by the lcm of its denominators.
fn dual_simplex(p: usize, rows: &[&[i64]]) -> Result<Option<Vec<BigInt>>> {
    let m = rows.len();
    let cols = p + m;
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    // Row i: s_i - a_i·μ = -b_i with b_i = 1 - Σ a_i.
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(m);
    for (i, a) in rows.iter().enumerate() {
        let mut row = vec![BigRational::zero(); cols];
        for j in 0..p {
            row[j] = q(-a[j]);
        }
        row[p + i] = BigRational::one();
        t.push(row);
        let b = 1 - a.iter().sum::<i64>();
        rhs.push(q(-b));
    }
    let mut cost: Vec<BigRational> = (0..cols).map(|j| if j < p { q(1) } else { q(0) }).collect();
    let mut basis: Vec<usize> = (p..cols).collect();

    for _ in 0..PIVOT_LIMIT {
        let leave = (0..m)
            .filter(|&i| rhs[i].is_negative())
            .min_by_key(|&i| basis[i]);
        let Some(r) = leave else {
            let mut mu = vec![BigRational::zero(); p];
            for (i, &b) in basis.iter().enumerate() {
                if b < p {
                    mu[b] = rhs[i].clone();
                }
            }
            let lambda: Vec<BigRational> = mu.into_iter().map(|v| v + BigRational::one()).collect();
            let lcm = lambda
                .iter()
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            return Ok(Some(
                lambda
                    .iter()
                    .map(|v| (v * BigRational::from_integer(lcm.clone())).to_integer())
                    .collect(),
            ));
        };
        let mut enter: Option<(BigRational, usize)> = None;
        for j in 0..cols {
            if !t[r][j].is_negative() || basis.contains(&j) {
                continue;
            }
            let ratio = &cost[j] / -&t[r][j];
            if enter.as_ref().is_none_or(|(best, _)| ratio < *best) {
                enter = Some((ratio, j));
            }
        }
        let Some((_, e)) = enter else {
            return Ok(None);
        };
        let piv = t[r][e].clone();
        for v in t[r].iter_mut() {
            *v = &*v / &piv;
        }
        rhs[r] = &rhs[r] / &piv;
        let prow = t[r].clone();
        let prhs = rhs[r].clone();
        for i in 0..m {
            if i == r || t[i][e].is_zero() {
                continue;
            }
            let f = t[i][e].clone();
            for j in 0..cols {
                if !prow[j].is_zero() {
                    t[i][j] = &t[i][j] - &f * &prow[j];
                }
            }
            rhs[i] = &rhs[i] - &f * &prhs;
        }
        if !cost[e].is_zero() {
            let f = cost[e].clone();
            for j in 0..cols {
                if !prow[j].is_zero() {
                    cost[j] = &cost[j] - &f * &prow[j];
                }
            }
        }
        basis[r] = e;
    }
    Err(Error::PivotLimit(PIVOT_LIMIT))
}

/// A nondominated extreme point with a weight making it the unique optimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certified {
    pub y: Vec<i64>,
    pub lambda: Vec<BigInt>,
}

/// Y_SN1 of a finite outcome set, each point with an integer certificate.
pub fn oracle_ysn1(points: &[Vec<i64>]) -> Result<Vec<Certified>> {
    let front = pareto_filter(points);
    let tested: Vec<Result<Option<Certified>>> = front
        .par_iter()
        .map(|y| {
            let program = FeasibilityProgram::new(y, &front);
            Ok(program.solve()?.map(|lambda| Certified { y: y.clone(), lambda }))
        })
        .collect();
    let mut out = Vec::new();
    for r in tested {
        if let Some(c) = r? {
            out.push(c);
        }
    }
    Ok(out)
}

/// Y_SN1 of an instance by full enumeration.
pub fn instance_ysn1(inst: &Instance) -> Result<Vec<Vec<i64>>> {
    let outcomes: Vec<Vec<i64>> = enumerate_outcomes(inst)?.into_iter().map(|o| o.y).collect();
    Ok(oracle_ysn1(&outcomes)?.into_iter().map(|c| c.y).collect())
}
