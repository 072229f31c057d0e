//! Dichotomic search over the facets of an incremental hull.
//!
//! All three algorithms share one loop: take the oldest unexplored facet,
//! solve the weighted-sum problem with its inward normal, and either confirm
//! the facet (the optimum lies on its hyperplane) or insert the optimum,
//! which is then strictly beyond it. They differ in how the hull is seeded
//! and in which facets they are willing to solve.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConvexHull, InsertOutcome, Tolerances};
use crate::numerics::{rank_exact, Scalar, Weight};
use crate::solvers::{dominates, subproblem_weight, subproblem_weight_float, OutcomePoint, Solution, WeightedSumOracle};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub solver_calls: u64,
    pub float_calls: u64,
    /// Calls spent on initialization (objective subsets for `bd`, seeds otherwise).
    pub init_solver_calls: u64,
    pub extreme_points_found: usize,
    pub confirmed_facets: u64,
    /// Facets whose weight had already been confirmed on a coplanar triangle.
    pub duplicate_weights: u64,
    pub skipped_dummy_facets: u64,
    pub skipped_nonpositive_facets: u64,
    /// Float-mode steps where the solver disagreed with the hull and the
    /// facet was confirmed to guarantee progress.
    pub numerical_warnings: u64,
    /// Objective subsets solved by the dummy fallback because their
    /// initialization was not full-dimensional.
    pub fallbacks: u64,
    /// A float composite weight exceeded 2^52.
    pub reduced_reliability: bool,
    pub wall_time: f64,
}

impl RunStats {
    pub fn merge(&mut self, other: &RunStats) {
        self.solver_calls += other.solver_calls;
        self.float_calls += other.float_calls;
        self.init_solver_calls += other.init_solver_calls;
        self.confirmed_facets += other.confirmed_facets;
        self.duplicate_weights += other.duplicate_weights;
        self.skipped_dummy_facets += other.skipped_dummy_facets;
        self.skipped_nonpositive_facets += other.skipped_nonpositive_facets;
        self.numerical_warnings += other.numerical_warnings;
        self.fallbacks += other.fallbacks;
        self.reduced_reliability |= other.reduced_reliability;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    Dummy,
    Bd,
    Balloon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arithmetic {
    Exact,
    Float,
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub arithmetic: Arithmetic,
    pub tolerances: Tolerances,
    /// Solve the independent objective subsets of one size concurrently.
    pub parallel: bool,
    /// Record every weight solved in a main loop.
    pub record_trace: bool,
    /// Upper bound on processed facets, guarding float runs against cycling.
    pub max_iterations: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            arithmetic: Arithmetic::Exact,
            tolerances: Tolerances::default(),
            parallel: false,
            record_trace: false,
            max_iterations: 10_000_000,
        }
    }
}

impl EngineConfig {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn float() -> Self {
        EngineConfig {
            arithmetic: Arithmetic::Float,
            ..Self::default()
        }
    }
}

/// A weight confirmed optimal on a facet, with the optimal value it attains.
#[derive(Clone, Debug, PartialEq)]
pub struct FacetCertificate {
    pub weight: Weight,
    pub point: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct FrontierResult {
    /// Canonical outcomes, sorted lexicographically.
    pub points: Vec<OutcomePoint>,
    pub stats: RunStats,
    pub certificates: Vec<FacetCertificate>,
    /// Weights solved in the main loops, if requested.
    pub trace: Vec<Weight>,
}

impl FrontierResult {
    pub fn outcomes(&self) -> Vec<Vec<i64>> {
        self.points.iter().map(|p| p.y.clone()).collect()
    }

    /// Outcomes in the original problem sense, sorted lexicographically.
    pub fn original_outcomes(&self, oracle: &dyn WeightedSumOracle) -> Vec<Vec<i64>> {
        let mut v: Vec<Vec<i64>> = self.points.iter().map(|p| oracle.to_original(&p.y)).collect();
        v.sort();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DummyConfig {
    pub m: BigInt,
    pub dummy_points: Vec<Vec<BigInt>>,
}

/// Big-M of the dummy points.
///
/// With `B` bounding every canonical objective value, every facet normal of
/// the working hull is a vector of cofactors bounded by
/// `R = B^(p-1) (p-1)^ceil((p-1)/2)`, and `M = 1 + p^2 B R` keeps every
/// facet through a dummy point strictly nondominated. `M` also exceeds the
/// coordinate sum of `y0`.
pub fn dummy_bound(p: usize, bound: i64, y0: &[i64]) -> BigInt {
    let b = BigInt::from(bound.max(1));
    let q = p.saturating_sub(1);
    let r = num_traits::pow(b.clone(), q) * num_traits::pow(BigInt::from(q.max(1)), q.div_ceil(2));
    let m = BigInt::one() + BigInt::from(p * p) * &b * r;
    let sum: BigInt = y0.iter().map(|&v| BigInt::from(v)).sum::<BigInt>() + 1;
    m.max(sum)
}

/// Largest dummy coordinate used with float hulls. Beyond this, rounding
/// erases the real points from the normals of facets through dummies.
pub const FLOAT_DUMMY_CAP: i64 = 1 << 32;

/// [`dummy_bound`] for exact hulls. Float hulls cap it at
/// [`FLOAT_DUMMY_CAP`] but never go below `1 + (p+1) B` or the coordinate
/// sum of `y0`.
pub fn working_dummy_bound(arithmetic: Arithmetic, p: usize, bound: i64, y0: &[i64]) -> BigInt {
    let safe = dummy_bound(p, bound, y0);
    match arithmetic {
        Arithmetic::Exact => safe,
        Arithmetic::Float => {
            let floor = BigInt::from(1 + (p as i64 + 1) * bound.max(1))
                .max(y0.iter().map(|&v| BigInt::from(v)).sum::<BigInt>() + 1);
            safe.min(BigInt::from(FLOAT_DUMMY_CAP).max(floor))
        }
    }
}

pub fn make_dummies(oracle: &dyn WeightedSumOracle, y0: &[i64]) -> DummyConfig {
    let p = oracle.num_objectives();
    let m = dummy_bound(p, oracle.objective_bound(), y0);
    DummyConfig {
        dummy_points: unit_multiples(p, &m),
        m,
    }
}

fn unit_multiples(p: usize, m: &BigInt) -> Vec<Vec<BigInt>> {
    (0..p)
        .map(|q| {
            let mut v = vec![BigInt::zero(); p];
            v[q] = m.clone();
            v
        })
        .collect()
}

fn to_big(y: &[i64]) -> Vec<BigInt> {
    y.iter().map(|&v| BigInt::from(v)).collect()
}

fn from_big(y: &[BigInt]) -> Vec<i64> {
    y.iter()
        .map(|v| i64::try_from(v).expect("outcome coordinates fit in i64"))
        .collect()
}

/// Points of `set` not dominated by another member; duplicates collapse.
pub fn nondominated(set: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut unique: Vec<Vec<i64>> = set.to_vec();
    unique.sort();
    unique.dedup();
    let keep: Vec<Vec<i64>> = unique
        .iter()
        .filter(|y| !unique.iter().any(|z| dominates(z, y)))
        .cloned()
        .collect();
    keep
}

/// Keep exactly the nondominated extreme points of a finite set.
///
/// The set is translated into the positive orthant and its hull is rebuilt
/// together with the dummies `M e_q`, with `M` from [`dummy_bound`] for the
/// largest translated coordinate. Every facet through a non-dummy vertex
/// then has a strictly positive normal, so the non-dummy vertices are the
/// points that are unique minimizers for some positive weight. The
/// dominance pass is a safeguard for degenerate inputs.
pub fn final_filter(points: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    let d = first.len();
    if points.iter().any(|y| y.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: points.iter().map(Vec::len).find(|&l| l != d).unwrap_or(d),
        });
    }
    let mut unique = points.to_vec();
    unique.sort();
    unique.dedup();
    if d == 1 {
        return Ok(vec![unique.into_iter().min().expect("nonempty")]);
    }
    if unique.len() == 1 {
        return Ok(unique);
    }
    let shift: Vec<i64> = (0..d)
        .map(|k| 1 - unique.iter().map(|y| y[k]).min().expect("nonempty"))
        .collect();
    let shifted: Vec<Vec<BigInt>> = unique
        .iter()
        .map(|y| y.iter().zip(&shift).map(|(v, s)| BigInt::from(v + s)).collect())
        .collect();
    let max_coord = unique
        .iter()
        .map(|y| y.iter().zip(&shift).map(|(v, s)| v + s).max().expect("d >= 2"))
        .max()
        .expect("nonempty");
    let max_sum = shifted.iter().map(|y| y.iter().sum::<BigInt>()).max().expect("nonempty");
    let m = dummy_bound(d, max_coord, &[]).max(max_sum + 1);
    let mut hull = ConvexHull::<BigInt>::new(d)?;
    for dummy in unit_multiples(d, &m) {
        hull.insert_big(dummy, None)?;
    }
    for y in &shifted {
        hull.insert_big(y.clone(), None)?;
    }
    let kept: Vec<Vec<i64>> = hull
        .vertex_ids()
        .into_iter()
        .filter(|&id| id >= d)
        .map(|id| {
            from_big(&hull.point(id).raw)
                .iter()
                .zip(&shift)
                .map(|(v, s)| v - s)
                .collect()
        })
        .collect();
    let mut out = nondominated(&kept);
    out.sort();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Policy {
    /// Skip the all-dummy facet; every other facet must be nondominated.
    Dummy,
    /// Solve only facets with strictly positive weights.
    Positive,
    /// Solve every facet.
    All,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum WeightKey {
    Exact(Vec<BigInt>),
    Float(Vec<i64>),
}

fn weight_key(w: &Weight) -> WeightKey {
    match w {
        Weight::Exact(v) => WeightKey::Exact(v.clone()),
        Weight::Float(v) => WeightKey::Float(v.iter().map(|c| (c * 1e9).round() as i64).collect()),
    }
}

/// Mutable state shared by the engine loops of one run.
struct Ctx<'a> {
    oracle: &'a dyn WeightedSumOracle,
    cfg: &'a EngineConfig,
    stats: RunStats,
    certificates: Vec<FacetCertificate>,
    trace: Vec<Weight>,
    solutions: HashMap<Vec<i64>, Solution>,
}

impl<'a> Ctx<'a> {
    fn new(oracle: &'a dyn WeightedSumOracle, cfg: &'a EngineConfig) -> Self {
        Ctx {
            oracle,
            cfg,
            stats: RunStats::default(),
            certificates: Vec::new(),
            trace: Vec::new(),
            solutions: HashMap::new(),
        }
    }

    fn child(&self) -> Self {
        Ctx::new(self.oracle, self.cfg)
    }

    fn absorb(&mut self, other: Ctx<'a>) {
        self.stats.merge(&other.stats);
        self.certificates.extend(other.certificates);
        self.trace.extend(other.trace);
        for (y, s) in other.solutions {
            self.solutions.entry(y).or_insert(s);
        }
    }

    fn p(&self) -> usize {
        self.oracle.num_objectives()
    }

    fn solve_full(&mut self, w: &Weight, main_loop: bool) -> Result<Vec<i64>> {
        if main_loop && self.cfg.record_trace {
            self.trace.push(w.clone());
        }
        let point = self.oracle.solve(w, &mut self.stats)?;
        if let Some(s) = point.solution {
            self.solutions.entry(point.y.clone()).or_insert(s);
        }
        Ok(point.y)
    }

    /// Solve "`lambda` on `subset`, then `free` lexicographically". `lambda`
    /// must match the arithmetic mode.
    fn solve_sub(&mut self, lambda: &Weight, subset: &[usize], free: &[usize], main_loop: bool) -> Result<Vec<i64>> {
        let p = self.p();
        let bound = self.oracle.objective_bound();
        let w = match lambda {
            Weight::Exact(l) => subproblem_weight(l, subset, free, p, bound)?,
            Weight::Float(l) => {
                let (w, unreliable) = subproblem_weight_float(l, subset, free, p, bound)?;
                self.stats.reduced_reliability |= unreliable;
                w
            }
        };
        self.solve_full(&w, main_loop)
    }

    fn unit_weight(&self, len: usize) -> Weight {
        match self.cfg.arithmetic {
            Arithmetic::Exact => Weight::Exact(vec![BigInt::one(); len]),
            Arithmetic::Float => Weight::Float(vec![1.0; len]),
        }
    }

    /// Lexicographic minimum for the objective order `order`.
    fn lex_min(&mut self, order: &[usize]) -> Result<Vec<i64>> {
        let w = self.unit_weight(1);
        self.solve_sub(&w, &order[..1], &order[1..], false)
    }

    fn finish(self, points: Vec<Vec<i64>>, started: Instant) -> FrontierResult {
        let mut stats = self.stats;
        let mut points = points;
        points.sort();
        stats.extreme_points_found = points.len();
        stats.wall_time = started.elapsed().as_secs_f64();
        let points = points
            .into_iter()
            .map(|y| OutcomePoint {
                solution: self.solutions.get(&y).cloned(),
                y,
            })
            .collect();
        FrontierResult {
            points,
            stats,
            certificates: self.certificates,
            trace: self.trace,
        }
    }
}

/// The shared facet loop. `solve` maps a hull-space weight to a hull-space
/// outcome; `lift` maps a hull point to the full outcome for certificates.
fn explore<S: Scalar>(
    ctx: &mut Ctx<'_>,
    hull: &mut ConvexHull<S>,
    dummies: &HashSet<usize>,
    policy: Policy,
    solve: &mut dyn FnMut(&mut Ctx<'_>, &Weight) -> Result<Vec<i64>>,
) -> Result<()> {
    let tol = hull.tolerances();
    let mut confirmed: HashMap<WeightKey, Vec<BigInt>> = HashMap::new();
    let mut iterations = 0u64;
    while let Some(fid) = hull.next_unexplored() {
        iterations += 1;
        if iterations > ctx.cfg.max_iterations {
            return Err(Error::InvalidArgument(format!(
                "facet exploration exceeded {} iterations",
                ctx.cfg.max_iterations
            )));
        }
        hull.mark_explored(fid);
        let facet = hull.facet(fid).expect("unexplored facets are alive");
        let vertices = facet.vertex_ids.clone();
        if policy == Policy::Dummy && vertices.iter().all(|v| dummies.contains(v)) {
            ctx.stats.skipped_dummy_facets += 1;
            continue;
        }
        let weight = hull.facet_weight(fid)?;
        if policy != Policy::All && !weight.is_strictly_positive(tol.positivity) {
            if policy == Policy::Dummy && weight.is_exact() {
                return Err(Error::DominatedFacet { weight, vertices });
            }
            ctx.stats.skipped_nonpositive_facets += 1;
            continue;
        }
        let reference = hull.point(vertices[0]).raw.clone();
        let key = weight_key(&weight);
        if let Some(value_point) = confirmed.get(&key) {
            if weight.compare(&reference, value_point, tol.equality) == Ordering::Equal {
                ctx.stats.duplicate_weights += 1;
                continue;
            }
        }
        let y = solve(ctx, &weight)?;
        let yb = to_big(&y);
        match weight.compare(&yb, &reference, tol.equality) {
            Ordering::Less => match hull.insert_big(yb, Some(fid))? {
                (_, InsertOutcome::NewVertex) => {}
                _ => {
                    log::warn!("optimum for {weight} did not extend the hull; confirming facet");
                    ctx.stats.numerical_warnings += 1;
                    confirmed.insert(key, reference);
                }
            },
            order => {
                if order == Ordering::Greater {
                    log::warn!("solver value above facet value for {weight}; confirming facet");
                    ctx.stats.numerical_warnings += 1;
                }
                ctx.stats.confirmed_facets += 1;
                ctx.certificates.push(FacetCertificate {
                    weight: weight.clone(),
                    point: y,
                });
                confirmed.insert(key, reference);
            }
        }
    }
    Ok(())
}

/// Hull of `seeds` plus dummies, explored with the dummy policy. Points are
/// in hull space; `solve` maps hull weights to hull outcomes. Returns the
/// non-dummy extreme points.
fn dummy_run<S: Scalar>(
    ctx: &mut Ctx<'_>,
    seeds: &[Vec<i64>],
    m: &BigInt,
    solve: &mut dyn FnMut(&mut Ctx<'_>, &Weight) -> Result<Vec<i64>>,
) -> Result<Vec<Vec<i64>>> {
    let d = seeds[0].len();
    let mut hull = ConvexHull::<S>::with_tolerances(d, ctx.cfg.tolerances)?;
    let mut dummies = HashSet::new();
    for dummy in unit_multiples(d, m) {
        let (id, _) = hull.insert_big(dummy, None)?;
        dummies.insert(id);
    }
    for y in seeds {
        hull.insert_big(to_big(y), None)?;
    }
    explore(ctx, &mut hull, &dummies, Policy::Dummy, solve)?;
    let found: Vec<Vec<i64>> = hull
        .vertex_ids()
        .into_iter()
        .filter(|id| !dummies.contains(id))
        .map(|id| from_big(&hull.point(id).raw))
        .collect();
    Ok(nondominated(&found))
}

/// Algorithm with dummy points `M e_q`: every facet of the working hull
/// other than the all-dummy one has a strictly positive normal.
pub fn dummy_dichotomy(oracle: &dyn WeightedSumOracle, cfg: &EngineConfig) -> Result<FrontierResult> {
    let started = Instant::now();
    let mut ctx = Ctx::new(oracle, cfg);
    let p = ctx.p();
    let w = ctx.unit_weight(p);
    let y0 = ctx.solve_full(&w, false)?;
    ctx.stats.init_solver_calls = ctx.stats.solver_calls;
    if p == 1 {
        return Ok(ctx.finish(vec![y0], started));
    }
    check_dimension(p)?;
    let m = working_dummy_bound(cfg.arithmetic, p, oracle.objective_bound(), &y0);
    let mut solve = |c: &mut Ctx<'_>, w: &Weight| c.solve_full(w, true);
    let seeds = [y0];
    let found = match cfg.arithmetic {
        Arithmetic::Exact => dummy_run::<BigInt>(&mut ctx, &seeds, &m, &mut solve)?,
        Arithmetic::Float => dummy_run::<f64>(&mut ctx, &seeds, &m, &mut solve)?,
    };
    Ok(ctx.finish(found, started))
}

fn check_dimension(p: usize) -> Result<()> {
    if p > 5 {
        return Err(Error::UnsupportedDimension(p));
    }
    Ok(())
}

/// Starting from `init`, explore every facet of the hull of the outcome set,
/// whatever the sign of its normal. Returns every vertex of conv Y reached.
pub fn inflate_balloon(
    oracle: &dyn WeightedSumOracle,
    init: &[Vec<i64>],
    cfg: &EngineConfig,
) -> Result<FrontierResult> {
    let started = Instant::now();
    let p = oracle.num_objectives();
    check_dimension(p)?;
    if p < 2 {
        return Err(Error::UnsupportedDimension(p));
    }
    let mut ctx = Ctx::new(oracle, cfg);
    let found = match cfg.arithmetic {
        Arithmetic::Exact => balloon_run::<BigInt>(&mut ctx, init)?,
        Arithmetic::Float => balloon_run::<f64>(&mut ctx, init)?,
    };
    Ok(ctx.finish(found, started))
}

fn balloon_run<S: Scalar>(ctx: &mut Ctx<'_>, init: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let p = ctx.p();
    let mut hull = ConvexHull::<S>::with_tolerances(p, ctx.cfg.tolerances)?;
    for y in init {
        hull.insert_big(to_big(y), None)?;
    }
    if !hull.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            dim: p,
            affine_dim: hull.affine_dim(),
        });
    }
    explore(ctx, &mut hull, &HashSet::new(), Policy::All, &mut |c, w| c.solve_full(w, true))?;
    Ok(hull
        .vertex_ids()
        .into_iter()
        .map(|id| from_big(&hull.point(id).raw))
        .collect())
}

/// Seeds for [`inflate_balloon`]: the lexicographic minima for every cyclic
/// objective order and the optimum for the all-ones weight, plus the
/// lexicographic maxima when `with_maxima` is set.
pub fn balloon_seeds(oracle: &dyn WeightedSumOracle, cfg: &EngineConfig, with_maxima: bool) -> Result<(Vec<Vec<i64>>, RunStats)> {
    let mut ctx = Ctx::new(oracle, cfg);
    let p = ctx.p();
    let mut seeds = Vec::new();
    for k in 0..p {
        let order: Vec<usize> = (0..p).map(|j| (k + j) % p).collect();
        seeds.push(ctx.lex_min(&order)?);
        if with_maxima {
            let w = match ctx.unit_weight(1) {
                Weight::Exact(_) => {
                    let Weight::Exact(v) = subproblem_weight(&[BigInt::one()], &order[..1], &order[1..], p, oracle.objective_bound())? else {
                        unreachable!()
                    };
                    Weight::Exact(v.into_iter().map(|c| -c).collect())
                }
                Weight::Float(_) => {
                    let (w, _) = subproblem_weight_float(&[1.0], &order[..1], &order[1..], p, oracle.objective_bound())?;
                    Weight::Float(w.to_f64().into_iter().map(|c| -c).collect())
                }
            };
            seeds.push(ctx.solve_full(&w, false)?);
        }
    }
    let w = ctx.unit_weight(p);
    seeds.push(ctx.solve_full(&w, false)?);
    let mut stats = ctx.stats;
    stats.init_solver_calls = stats.solver_calls;
    Ok((seeds, stats))
}

/// Seeds with [`balloon_seeds`], then runs [`inflate_balloon`]. The
/// lexicographic maxima are added whenever the minima alone do not span.
pub fn balloon_from_seeds(oracle: &dyn WeightedSumOracle, cfg: &EngineConfig, with_maxima: bool) -> Result<FrontierResult> {
    let started = Instant::now();
    let (mut seeds, mut seed_stats) = balloon_seeds(oracle, cfg, with_maxima)?;
    if !with_maxima && affine_rank(&seeds) < oracle.num_objectives() {
        (seeds, seed_stats) = balloon_seeds(oracle, cfg, true)?;
    }
    let mut result = inflate_balloon(oracle, &seeds, cfg)?;
    result.stats.merge(&seed_stats);
    result.stats.wall_time = started.elapsed().as_secs_f64();
    Ok(result)
}

fn affine_rank(points: &[Vec<i64>]) -> usize {
    let Some(o) = points.first() else {
        return 0;
    };
    let rows: Vec<Vec<BigInt>> = points[1..]
        .iter()
        .map(|y| y.iter().zip(o).map(|(a, b)| BigInt::from(a - b)).collect())
        .collect();
    rank_exact(&rows)
}

fn project(y: &[i64], subset: &[usize]) -> Vec<i64> {
    subset.iter().map(|&k| y[k]).collect()
}

fn combinations(p: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, p: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for k in start..p {
            cur.push(k);
            rec(k + 1, p, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, p, size, &mut Vec::with_capacity(size), &mut out);
    out
}

/// Algorithm initialized from the boundary subproblems.
///
/// Every objective subset of size 2..p is solved in increasing size order;
/// a subset's problem is seeded with the results of its subsets one size
/// smaller, and only strictly positive facets of its hull are explored.
/// Subset results are full outcome vectors optimized lexicographically on
/// the remaining objectives in index order.
pub fn bd_dichotomy(oracle: &dyn WeightedSumOracle, cfg: &EngineConfig) -> Result<FrontierResult> {
    let started = Instant::now();
    let mut ctx = Ctx::new(oracle, cfg);
    let p = ctx.p();
    check_dimension(p)?;
    if p == 1 {
        let y = ctx.lex_min(&[0])?;
        ctx.stats.init_solver_calls = ctx.stats.solver_calls;
        return Ok(ctx.finish(vec![y], started));
    }
    let mut memo: BTreeMap<Vec<usize>, Vec<Vec<i64>>> = BTreeMap::new();
    for size in 2..=p {
        let subsets = combinations(p, size);
        let solve_one = |subset: &Vec<usize>, memo: &BTreeMap<Vec<usize>, Vec<Vec<i64>>>| {
            let mut child = ctx.child();
            let r = solve_subset(&mut child, subset, memo, size == p);
            (r, child)
        };
        let results: Vec<(Result<Vec<Vec<i64>>>, Ctx<'_>)> = if cfg.parallel && subsets.len() > 1 {
            subsets.par_iter().map(|s| solve_one(s, &memo)).collect()
        } else {
            subsets.iter().map(|s| solve_one(s, &memo)).collect()
        };
        for (subset, (r, child)) in subsets.into_iter().zip(results) {
            let is_main = size == p;
            let calls = child.stats.solver_calls;
            ctx.absorb(child);
            if !is_main {
                ctx.stats.init_solver_calls += calls;
            }
            memo.insert(subset, r?);
        }
    }
    let points = memo.remove(&(0..p).collect::<Vec<_>>()).expect("full subset solved");
    Ok(ctx.finish(points, started))
}

/// Full-space outcomes whose projection on `subset` are the nondominated
/// extreme points of the projected problem.
fn solve_subset(
    ctx: &mut Ctx<'_>,
    subset: &[usize],
    memo: &BTreeMap<Vec<usize>, Vec<Vec<i64>>>,
    is_main: bool,
) -> Result<Vec<Vec<i64>>> {
    let p = ctx.p();
    let free: Vec<usize> = (0..p).filter(|k| !subset.contains(k)).collect();
    let mut lifted: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
    let found = if subset.len() == 2 {
        dichotomy_2d(ctx, subset, &free, &mut lifted, is_main)?
    } else {
        let mut init: Vec<Vec<i64>> = Vec::new();
        for leave in 0..subset.len() {
            let mut sub = subset.to_vec();
            sub.remove(leave);
            for y in &memo[&sub] {
                let proj = project(y, subset);
                if !lifted.contains_key(&proj) {
                    lifted.insert(proj.clone(), y.clone());
                    init.push(proj);
                }
            }
        }
        let mut solve = |c: &mut Ctx<'_>, w: &Weight| -> Result<Vec<i64>> {
            let y = c.solve_sub(w, subset, &free, is_main)?;
            let proj = project(&y, subset);
            lifted.entry(proj.clone()).or_insert(y);
            Ok(proj)
        };
        match ctx.cfg.arithmetic {
            Arithmetic::Exact => positive_run::<BigInt>(ctx, &init, &mut solve)?,
            Arithmetic::Float => positive_run::<f64>(ctx, &init, &mut solve)?,
        }
    };
    let filtered = final_filter(&found)?;
    Ok(filtered.into_iter().map(|proj| lifted[&proj].clone()).collect())
}

/// Hull of `init` explored on strictly positive facets only; falls back to
/// dummy points when `init` does not span the space.
fn positive_run<S: Scalar>(
    ctx: &mut Ctx<'_>,
    init: &[Vec<i64>],
    solve: &mut dyn FnMut(&mut Ctx<'_>, &Weight) -> Result<Vec<i64>>,
) -> Result<Vec<Vec<i64>>> {
    let d = init[0].len();
    let mut hull = ConvexHull::<S>::with_tolerances(d, ctx.cfg.tolerances)?;
    for y in init {
        hull.insert_big(to_big(y), None)?;
    }
    if !hull.is_full_dimensional() {
        log::warn!(
            "initial points of a {d}-objective subproblem span only {} dimensions; using dummy points",
            hull.affine_dim()
        );
        ctx.stats.fallbacks += 1;
        let max_sum = init.iter().map(|y| y.iter().sum::<i64>()).max().unwrap_or(0);
        let m = working_dummy_bound(ctx.cfg.arithmetic, d, ctx.oracle.objective_bound(), &[max_sum]);
        return dummy_run::<S>(ctx, init, &m, solve);
    }
    explore(ctx, &mut hull, &HashSet::new(), Policy::Positive, solve)?;
    Ok(hull
        .boundary_vertex_ids()
        .into_iter()
        .map(|id| from_big(&hull.point(id).raw))
        .collect())
}

/// Classic bi-objective dichotomy on objectives `pair`, ties broken on
/// `free`. Returns projected outcomes and records their lifts.
fn dichotomy_2d(
    ctx: &mut Ctx<'_>,
    pair: &[usize],
    free: &[usize],
    lifted: &mut HashMap<Vec<i64>, Vec<i64>>,
    is_main: bool,
) -> Result<Vec<Vec<i64>>> {
    let (a, b) = (pair[0], pair[1]);
    let mut order_a = vec![a, b];
    order_a.extend_from_slice(free);
    let mut order_b = vec![b, a];
    order_b.extend_from_slice(free);
    let ya = ctx.lex_min(&order_a)?;
    let yb = ctx.lex_min(&order_b)?;
    if is_main {
        ctx.stats.init_solver_calls += 2;
    }
    let mut found = Vec::new();
    for y in [ya, yb] {
        let proj = project(&y, pair);
        lifted.entry(proj.clone()).or_insert(y);
        found.push(proj);
    }
    let mut stack = vec![(found[0].clone(), found[1].clone())];
    while let Some((r, s)) = stack.pop() {
        if r == s {
            continue;
        }
        let (l0, l1) = (r[1] - s[1], s[0] - r[0]);
        if l0 <= 0 || l1 <= 0 {
            continue;
        }
        let lambda = match ctx.cfg.arithmetic {
            Arithmetic::Exact => Weight::Exact(vec![BigInt::from(l0), BigInt::from(l1)]),
            Arithmetic::Float => Weight::Float(vec![l0 as f64, l1 as f64]),
        };
        let y = ctx.solve_sub(&lambda, pair, free, is_main)?;
        let proj = project(&y, pair);
        let value = |z: &[i64]| i128::from(l0) * i128::from(z[0]) + i128::from(l1) * i128::from(z[1]);
        if value(&proj) < value(&r) {
            lifted.entry(proj.clone()).or_insert(y);
            found.push(proj.clone());
            stack.push((r, proj.clone()));
            stack.push((proj, s));
        } else {
            ctx.stats.confirmed_facets += 1;
            ctx.certificates.push(FacetCertificate { weight: lambda, point: y });
        }
    }
    Ok(found)
}

/// Run `algorithm` with its default initialization.
pub fn run(oracle: &dyn WeightedSumOracle, algorithm: Algorithm, cfg: &EngineConfig, init_from_lex: bool) -> Result<FrontierResult> {
    match algorithm {
        Algorithm::Dummy => dummy_dichotomy(oracle, cfg),
        Algorithm::Bd => bd_dichotomy(oracle, cfg),
        Algorithm::Balloon => balloon_from_seeds(oracle, cfg, init_from_lex),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{enumerate_outcomes, instance_ysn1};
    use crate::solvers::{Instance, RawProblem};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn example1_costs() -> Vec<Vec<Vec<i64>>> {
        vec![
            vec![vec![3, 6, 4, 5], vec![2, 3, 5, 4], vec![3, 5, 4, 2], vec![4, 5, 3, 6]],
            vec![vec![2, 3, 5, 4], vec![5, 3, 4, 3], vec![5, 2, 6, 4], vec![4, 5, 2, 5]],
            vec![vec![4, 2, 4, 2], vec![4, 2, 4, 6], vec![4, 2, 6, 3], vec![2, 4, 5, 3]],
        ]
    }

    fn example1() -> Instance {
        Instance::canonicalize(RawProblem::Assignment { costs: example1_costs() }).unwrap()
    }

    fn expected() -> Vec<Vec<i64>> {
        vec![vec![11, 11, 14], vec![13, 16, 11], vec![15, 9, 17], vec![19, 14, 10]]
    }

    fn random_ap(rng: &mut ChaCha8Rng, p: usize, n: usize) -> Instance {
        let costs = (0..p)
            .map(|_| (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=20)).collect()).collect())
            .collect();
        Instance::canonicalize(RawProblem::Assignment { costs }).unwrap()
    }

    fn random_kp(rng: &mut ChaCha8Rng, p: usize, n: usize) -> Instance {
        let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=100)).collect();
        let capacity = (weights.iter().sum::<i64>() + 1) / 2;
        let profits = (0..p).map(|_| (0..n).map(|_| rng.gen_range(1..=100)).collect()).collect();
        Instance::canonicalize(RawProblem::Knapsack { capacity, weights, profits }).unwrap()
    }

    #[test]
    fn dummy_bound_for_example1() {
        let m = dummy_bound(3, 24, &[13, 16, 11]);
        assert_eq!(m, BigInt::from(248_833));
        assert!(m >= BigInt::from(97));
        let d = make_dummies(&example1(), &[13, 16, 11]);
        for (q, v) in d.dummy_points.iter().enumerate() {
            assert_eq!(v.iter().filter(|c| !c.is_zero()).count(), 1);
            assert_eq!(v[q], d.m);
        }
        assert!(dummy_bound(2, 1, &[50, 60]) > BigInt::from(110));
        assert_eq!(working_dummy_bound(Arithmetic::Exact, 3, 24, &[13, 16, 11]), m);
        assert_eq!(working_dummy_bound(Arithmetic::Float, 3, 24, &[13, 16, 11]), m);
        let capped = working_dummy_bound(Arithmetic::Float, 5, 1400, &[1, 1, 1, 1, 1]);
        assert_eq!(capped, BigInt::from(FLOAT_DUMMY_CAP));
    }

    #[test]
    fn example1_dummy_and_bd() {
        let inst = example1();
        for cfg in [EngineConfig::exact(), EngineConfig::float()] {
            let d = dummy_dichotomy(&inst, &cfg).unwrap();
            assert_eq!(d.outcomes(), expected());
            let b = bd_dichotomy(&inst, &cfg).unwrap();
            assert_eq!(b.outcomes(), expected());
        }
        let d = dummy_dichotomy(&inst, &EngineConfig::exact()).unwrap();
        assert_eq!(d.stats.float_calls, 0);
        assert_eq!(d.stats.init_solver_calls, 1);
        assert_eq!(d.stats.extreme_points_found, 4);
        for p in &d.points {
            assert_eq!(inst.evaluate(p.solution.as_ref().unwrap()).unwrap(), p.y);
        }
    }

    #[test]
    fn example1_balloon_reaches_every_hull_vertex() {
        let inst = example1();
        let init = vec![vec![11, 11, 14], vec![15, 9, 17], vec![19, 14, 10], vec![16, 20, 16]];
        let r = inflate_balloon(&inst, &init, &EngineConfig::exact()).unwrap();
        let got = r.outcomes();
        assert!(got.contains(&vec![13, 16, 11]));
        let all: Vec<Vec<i64>> = enumerate_outcomes(&inst).unwrap().into_iter().map(|o| o.y).collect();
        let mut hull = ConvexHull::<BigInt>::new(3).unwrap();
        for y in &all {
            hull.insert(y).unwrap();
        }
        let mut vertices: Vec<Vec<i64>> = hull.vertex_ids().into_iter().map(|id| from_big(&hull.point(id).raw)).collect();
        vertices.sort();
        assert_eq!(got, vertices);
    }

    #[test]
    fn balloon_from_default_seeds() {
        let inst = example1();
        let plain = balloon_from_seeds(&inst, &EngineConfig::exact(), false).unwrap();
        let lex = balloon_from_seeds(&inst, &EngineConfig::exact(), true).unwrap();
        assert_eq!(plain.outcomes(), lex.outcomes());
        for y in expected() {
            assert!(lex.outcomes().contains(&y));
        }
        assert!(lex.stats.init_solver_calls >= 7);
    }

    #[test]
    fn balloon_rejects_degenerate_start() {
        let inst = example1();
        let init = vec![vec![11, 11, 14]; 4];
        assert!(matches!(
            inflate_balloon(&inst, &init, &EngineConfig::exact()),
            Err(Error::NotFullDimensional { .. })
        ));
    }

    /// Bi-objective dichotomy written directly on the enumerated outcomes.
    fn classic_2d(points: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let lex = |a: usize, b: usize| -> Vec<i64> {
            points.iter().min_by_key(|y| (y[a], y[b])).unwrap().clone()
        };
        let mut out = vec![lex(0, 1), lex(1, 0)];
        let mut stack = vec![(out[0].clone(), out[1].clone())];
        while let Some((r, s)) = stack.pop() {
            if r == s {
                continue;
            }
            let (l0, l1) = (r[1] - s[1], s[0] - r[0]);
            let value = |y: &Vec<i64>| l0 * y[0] + l1 * y[1];
            let y = points.iter().min_by_key(|y| (value(y), y[0])).unwrap().clone();
            if value(&y) < value(&r) {
                out.push(y.clone());
                stack.push((r, y.clone()));
                stack.push((y, s));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn two_objectives_match_classic_dichotomy() {
        let costs: Vec<Vec<Vec<i64>>> = example1_costs().into_iter().take(2).collect();
        let inst = Instance::canonicalize(RawProblem::Assignment { costs }).unwrap();
        let all: Vec<Vec<i64>> = enumerate_outcomes(&inst).unwrap().into_iter().map(|o| o.y).collect();
        let want = classic_2d(&all);
        assert_eq!(dummy_dichotomy(&inst, &EngineConfig::exact()).unwrap().outcomes(), want);
        assert_eq!(bd_dichotomy(&inst, &EngineConfig::exact()).unwrap().outcomes(), want);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let inst = random_kp(&mut rng, 2, 10);
            let all: Vec<Vec<i64>> = enumerate_outcomes(&inst).unwrap().into_iter().map(|o| o.y).collect();
            let want = classic_2d(&all);
            assert_eq!(dummy_dichotomy(&inst, &EngineConfig::exact()).unwrap().outcomes(), want);
            assert_eq!(bd_dichotomy(&inst, &EngineConfig::exact()).unwrap().outcomes(), want);
        }
    }

    #[test]
    fn single_outcome_instance() {
        let inst = Instance::canonicalize(RawProblem::Assignment {
            costs: vec![vec![vec![2, 2], vec![2, 2]]; 3],
        })
        .unwrap();
        let r = dummy_dichotomy(&inst, &EngineConfig::exact()).unwrap();
        assert_eq!(r.outcomes(), vec![vec![4, 4, 4]]);
        assert!(r.stats.solver_calls <= 5);
        assert_eq!(bd_dichotomy(&inst, &EngineConfig::exact()).unwrap().outcomes(), vec![vec![4, 4, 4]]);
    }

    #[test]
    fn final_filter_examples() {
        let mut with_yd = expected();
        with_yd.push(vec![16, 20, 16]);
        assert_eq!(final_filter(&with_yd).unwrap(), expected());
        let pts = vec![vec![1, 5], vec![3, 3], vec![5, 1], vec![2, 9]];
        assert_eq!(final_filter(&pts).unwrap(), vec![vec![1, 5], vec![5, 1]]);
        let once = final_filter(&with_yd).unwrap();
        assert_eq!(final_filter(&once).unwrap(), once);
        assert_eq!(
            final_filter(&[vec![-3, 7], vec![0, 0], vec![1, 1]]).unwrap(),
            vec![vec![-3, 7], vec![0, 0]]
        );
        assert!(final_filter(&[]).unwrap().is_empty());
    }

    #[test]
    fn main_loop_weights_are_positive() {
        let cfg = EngineConfig {
            record_trace: true,
            ..EngineConfig::exact()
        };
        for r in [dummy_dichotomy(&example1(), &cfg).unwrap(), bd_dichotomy(&example1(), &cfg).unwrap()] {
            assert!(!r.trace.is_empty());
            assert!(r.trace.iter().all(|w| w.is_strictly_positive(0.0)));
        }
    }

    #[test]
    fn random_instances_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..16 {
            let inst = match trial % 4 {
                0 => random_ap(&mut rng, 3, 5),
                1 => random_ap(&mut rng, 4, 4),
                2 => random_kp(&mut rng, 3, 10),
                _ => random_kp(&mut rng, 4, 9),
            };
            let want = instance_ysn1(&inst).unwrap();
            let d = dummy_dichotomy(&inst, &EngineConfig::exact()).unwrap();
            assert_eq!(d.outcomes(), want, "dummy, trial {trial}");
            let b = bd_dichotomy(&inst, &EngineConfig::exact()).unwrap();
            assert_eq!(b.outcomes(), want, "bd, trial {trial}");
            let parallel = EngineConfig {
                parallel: true,
                ..EngineConfig::exact()
            };
            assert_eq!(bd_dichotomy(&inst, &parallel).unwrap().outcomes(), want);
        }
    }

    #[test]
    fn knapsack_results_report_profits() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let inst = random_kp(&mut rng, 3, 8);
        let r = dummy_dichotomy(&inst, &EngineConfig::exact()).unwrap();
        for (orig, p) in r.original_outcomes(&inst).iter().zip({
            let mut v: Vec<Vec<i64>> = r.points.iter().map(|p| inst.original_outcome(&p.y)).collect();
            v.sort();
            v
        }) {
            assert_eq!(orig, &p);
        }
        let bound = 1 + 100 * 8;
        assert!(r.original_outcomes(&inst).iter().flatten().all(|&v| (0..bound).contains(&v)));
    }
}
