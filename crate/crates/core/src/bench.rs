//! Random instance generation and the benchmark harness.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{self, Algorithm, Arithmetic, EngineConfig, RunStats};
use crate::error::{Error, Result};
use crate::solvers::{Instance, ProblemKind, RawProblem};

/// Draw a random instance. AP costs are uniform in [0,20]; KP weights and
/// profits in [1,100], capacity `ceil(sum w / 2)`, raised to the largest
/// weight when needed so every item fits on its own.
pub fn generate(kind: ProblemKind, p: usize, n: usize, seed: u64) -> Result<RawProblem> {
    if !(2..=5).contains(&p) {
        return Err(Error::InvalidArgument(format!("p must lie in 2..=5, got {p}")));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match kind {
        ProblemKind::Assignment => RawProblem::Assignment {
            costs: (0..p)
                .map(|_| (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=20)).collect()).collect())
                .collect(),
        },
        ProblemKind::Knapsack => {
            let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=100)).collect();
            let profits = (0..p)
                .map(|_| (0..n).map(|_| rng.gen_range(1..=100)).collect())
                .collect();
            let half = (weights.iter().sum::<i64>() + 1) / 2;
            let capacity = half.max(*weights.iter().max().expect("n >= 2"));
            RawProblem::Knapsack {
                capacity,
                weights,
                profits,
            }
        }
    })
}

/// Implementation variants: dummy (`v1`) or boundary (`v2`) initialization,
/// exact (`ex`) or float (`fl`) arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    V1Ex,
    V2Ex,
    V1Fl,
    V2Fl,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::V1Ex, Variant::V2Ex, Variant::V1Fl, Variant::V2Fl];

    pub fn label(self) -> &'static str {
        match self {
            Variant::V1Ex => "v1_ex",
            Variant::V2Ex => "v2_ex",
            Variant::V1Fl => "v1_fl",
            Variant::V2Fl => "v2_fl",
        }
    }

    pub fn algorithm(self) -> Algorithm {
        match self {
            Variant::V1Ex | Variant::V1Fl => Algorithm::Dummy,
            Variant::V2Ex | Variant::V2Fl => Algorithm::Bd,
        }
    }

    pub fn arithmetic(self) -> Arithmetic {
        match self {
            Variant::V1Ex | Variant::V2Ex => Arithmetic::Exact,
            Variant::V1Fl | Variant::V2Fl => Arithmetic::Float,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub kind: ProblemKind,
    pub p: usize,
    pub sizes: Vec<usize>,
    pub instances: usize,
    pub seed_base: u64,
}

impl BenchSpec {
    /// Seed of instance `i` of size `n`.
    pub fn seed(&self, n: usize, i: usize) -> u64 {
        self.seed_base
            .wrapping_add((n as u64).wrapping_mul(1_000_003))
            .wrapping_add(i as u64)
    }
}

/// Means over the successful runs of one variant at one size; `None` when
/// every run failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub series: String,
    pub size: usize,
    pub instances: usize,
    pub failures: usize,
    pub ysn1: Option<f64>,
    pub solver_calls: Option<f64>,
    pub float_percent: Option<f64>,
    pub init_calls: Option<f64>,
    pub time_s: Option<f64>,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn summarize(series: &str, size: usize, runs: &[Option<RunStats>]) -> BenchRow {
    let ok: Vec<&RunStats> = runs.iter().flatten().collect();
    let col = |f: &dyn Fn(&RunStats) -> f64| -> Option<f64> {
        (!ok.is_empty()).then(|| mean(&ok.iter().map(|s| f(s)).collect::<Vec<_>>()))
    };
    BenchRow {
        series: series.to_string(),
        size,
        instances: runs.len(),
        failures: runs.len() - ok.len(),
        ysn1: col(&|s| s.extreme_points_found as f64),
        solver_calls: col(&|s| s.solver_calls as f64),
        float_percent: col(&|s| {
            if s.solver_calls == 0 {
                0.0
            } else {
                100.0 * s.float_calls as f64 / s.solver_calls as f64
            }
        }),
        init_calls: col(&|s| s.init_solver_calls as f64),
        time_s: col(&|s| s.wall_time),
    }
}

/// Run every variant on every instance of the series.
pub fn run_bench(spec: &BenchSpec, variants: &[Variant], parallel: bool) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &n in &spec.sizes {
        let instances: Vec<Instance> = (0..spec.instances)
            .map(|i| Instance::canonicalize(generate(spec.kind, spec.p, n, spec.seed(n, i))?))
            .collect::<Result<_>>()?;
        for &v in variants {
            let cfg = EngineConfig {
                arithmetic: v.arithmetic(),
                ..EngineConfig::default()
            };
            let one = |inst: &Instance| -> Option<RunStats> {
                match engine::run(inst, v.algorithm(), &cfg, false) {
                    Ok(r) => Some(r.stats),
                    Err(e) => {
                        log::warn!("{} failed on a size-{n} instance: {e}", v.label());
                        None
                    }
                }
            };
            let runs: Vec<Option<RunStats>> = if parallel {
                instances.par_iter().map(one).collect()
            } else {
                instances.iter().map(one).collect()
            };
            rows.push(summarize(v.label(), n, &runs));
        }
    }
    Ok(rows)
}

fn size_label(kind: ProblemKind, n: usize) -> String {
    match kind {
        ProblemKind::Assignment => format!("{n}x{n}"),
        ProblemKind::Knapsack => format!("{n}"),
    }
}

/// Text table. Calls carry the float-call percentage in brackets, and the
/// boundary variants the initialization calls; missing cells print as `×`.
pub fn format_table(kind: ProblemKind, rows: &[BenchRow]) -> String {
    let cell = |v: Option<f64>, prec: usize| v.map_or("×".to_string(), |x| format!("{x:.prec$}"));
    let mut out = String::new();
    writeln!(
        out,
        "{:<7} {:>7} {:>8} {:>20} {:>10} {:>10}",
        "series", "size", "|Y_SN1|", "calls [float%]", "init", "time_s"
    )
    .unwrap();
    for r in rows {
        let calls = match (r.solver_calls, r.float_percent) {
            (Some(c), Some(f)) => format!("{c:.1} [{f:.1}]"),
            _ => "×".to_string(),
        };
        let init = if r.series.starts_with("v2") {
            format!("[{}]", cell(r.init_calls, 1))
        } else {
            "".to_string()
        };
        writeln!(
            out,
            "{:<7} {:>7} {:>8} {:>20} {:>10} {:>10}",
            r.series,
            size_label(kind, r.size),
            cell(r.ysn1, 1),
            calls,
            init,
            cell(r.time_s, 3)
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let a = generate(ProblemKind::Assignment, 3, 10, 1).unwrap();
        let b = generate(ProblemKind::Assignment, 3, 10, 1).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate(ProblemKind::Assignment, 3, 10, 2).unwrap());
    }

    #[test]
    fn generated_ranges() {
        for seed in 0..50 {
            let RawProblem::Assignment { costs } = generate(ProblemKind::Assignment, 3, 6, seed).unwrap() else {
                unreachable!()
            };
            assert!(costs.iter().flatten().flatten().all(|c| (0..=20).contains(c)));
            let RawProblem::Knapsack {
                capacity,
                weights,
                profits,
            } = generate(ProblemKind::Knapsack, 4, 2 + seed as usize % 10, seed).unwrap()
            else {
                unreachable!()
            };
            assert!(weights.iter().chain(profits.iter().flatten()).all(|c| (1..=100).contains(c)));
            assert!(capacity >= *weights.iter().max().unwrap());
            assert!(capacity >= (weights.iter().sum::<i64>() + 1) / 2);
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(generate(ProblemKind::Assignment, 1, 5, 0).is_err());
        assert!(generate(ProblemKind::Assignment, 6, 5, 0).is_err());
        assert!(generate(ProblemKind::Knapsack, 3, 1, 0).is_err());
    }

    #[test]
    fn small_bench() {
        let spec = BenchSpec {
            kind: ProblemKind::Assignment,
            p: 3,
            sizes: vec![4, 5],
            instances: 2,
            seed_base: 9,
        };
        let rows = run_bench(&spec, &Variant::ALL, false).unwrap();
        assert_eq!(rows.len(), 8);
        for r in &rows {
            assert_eq!(r.failures, 0);
            let f = r.float_percent.unwrap();
            assert!((0.0..=100.0).contains(&f));
            if r.series.ends_with("ex") {
                assert_eq!(f, 0.0);
            }
        }
        let table = format_table(spec.kind, &rows);
        assert_eq!(table.lines().count(), 9);
        assert!(table.contains("4x4"));
        let empty = BenchSpec { sizes: vec![], ..spec };
        assert!(run_bench(&empty, &Variant::ALL, false).unwrap().is_empty());
    }

    #[test]
    fn missing_cells_render_as_cross() {
        let row = summarize("v1_fl", 10, &[None, None]);
        assert_eq!(row.failures, 2);
        assert!(row.ysn1.is_none());
        assert!(format_table(ProblemKind::Assignment, &[row]).contains('×'));
    }
}
