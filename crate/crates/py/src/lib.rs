//! Python bindings: `import dicho`.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use dicho_core::engine::{self, Algorithm, EngineConfig};
use dicho_core::geometry::{self, InsertOutcome};
use dicho_core::solvers::{ProblemKind, Solution};
use dicho_core::{bench, io, oracle, RawProblem, RunStats, Weight, WeightedSumOracle};

fn err(e: dicho_core::Error) -> PyErr {
    match e {
        dicho_core::Error::Parse { .. }
        | dicho_core::Error::InvalidInstance(_)
        | dicho_core::Error::InvalidArgument(_)
        | dicho_core::Error::TooLarge(_)
        | dicho_core::Error::DimensionMismatch { .. }
        | dicho_core::Error::UnsupportedDimension(_)
        | dicho_core::Error::NotFullDimensional { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn kind_from_str(kind: &str) -> PyResult<ProblemKind> {
    match kind {
        "ap" => Ok(ProblemKind::Assignment),
        "kp" => Ok(ProblemKind::Knapsack),
        other => Err(PyValueError::new_err(format!("unknown problem kind '{other}', expected 'ap' or 'kp'"))),
    }
}

/// A multi-objective assignment or knapsack instance.
#[pyclass(frozen)]
struct Instance {
    inner: dicho_core::Instance,
}

fn wrap(raw: RawProblem) -> PyResult<Instance> {
    Ok(Instance {
        inner: dicho_core::Instance::canonicalize(raw).map_err(err)?,
    })
}

#[pymethods]
impl Instance {
    /// Parse the `MOAP`/`MOKP` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        wrap(io::parse_instance(text).map_err(err)?)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| PyValueError::new_err(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    #[staticmethod]
    #[pyo3(signature = (kind, p, n, seed=1))]
    fn generate(kind: &str, p: usize, n: usize, seed: u64) -> PyResult<Self> {
        wrap(bench::generate(kind_from_str(kind)?, p, n, seed).map_err(err)?)
    }

    /// `costs[k][i][j]`: cost of assigning row i to column j under objective k.
    #[staticmethod]
    fn assignment(costs: Vec<Vec<Vec<i64>>>) -> PyResult<Self> {
        wrap(RawProblem::Assignment { costs })
    }

    #[staticmethod]
    fn knapsack(capacity: i64, weights: Vec<i64>, profits: Vec<Vec<i64>>) -> PyResult<Self> {
        wrap(RawProblem::Knapsack {
            capacity,
            weights,
            profits,
        })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.kind() {
            ProblemKind::Assignment => "ap",
            ProblemKind::Knapsack => "kp",
        }
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn to_text(&self) -> String {
        io::write_instance(self.inner.raw())
    }

    /// Minimize the weighted sum `lambda · y` in canonical space. Returns the
    /// original outcome and the solution (a permutation or item mask).
    fn weighted_sum(&self, py: Python<'_>, lambda: Vec<BigInt>) -> PyResult<(Vec<i64>, Py<PyAny>)> {
        let w = Weight::Exact(lambda);
        let mut stats = RunStats::default();
        let best = self.inner.solve(&w, &mut stats).map_err(err)?;
        let solution = match best.solution {
            Some(Solution::Permutation(perm)) => perm.into_pyobject(py)?.into_any().unbind(),
            Some(Solution::Subset(mask)) => mask.into_pyobject(py)?.into_any().unbind(),
            None => py.None(),
        };
        Ok((self.inner.to_original(&best.y), solution))
    }

    fn __repr__(&self) -> String {
        format!("Instance(kind='{}', p={}, n={})", self.kind(), self.p(), self.n())
    }
}

fn stats_dict<'py>(py: Python<'py>, s: &RunStats) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("ysn1", s.extreme_points_found)?;
    d.set_item("solver_calls", s.solver_calls)?;
    d.set_item("float_calls", s.float_calls)?;
    d.set_item("init_calls", s.init_solver_calls)?;
    d.set_item("confirmed_facets", s.confirmed_facets)?;
    d.set_item("numerical_warnings", s.numerical_warnings)?;
    d.set_item("fallbacks", s.fallbacks)?;
    d.set_item("reduced_reliability", s.reduced_reliability)?;
    d.set_item("time_s", s.wall_time)?;
    Ok(d)
}

/// Nondominated extreme points in the original problem sense, plus run
/// statistics.
#[pyfunction]
#[pyo3(signature = (instance, algorithm="dummy", arithmetic="exact", parallel=false, init_from_lex=false, tolerance=None))]
fn solve<'py>(
    py: Python<'py>,
    instance: &Instance,
    algorithm: &str,
    arithmetic: &str,
    parallel: bool,
    init_from_lex: bool,
    tolerance: Option<f64>,
) -> PyResult<(Vec<Vec<i64>>, Bound<'py, PyDict>)> {
    let algorithm = match algorithm {
        "dummy" => Algorithm::Dummy,
        "bd" => Algorithm::Bd,
        "balloon" => Algorithm::Balloon,
        other => return Err(PyValueError::new_err(format!("unknown algorithm '{other}'"))),
    };
    let mut cfg = match arithmetic {
        "exact" => EngineConfig::exact(),
        "float" => EngineConfig::float(),
        other => return Err(PyValueError::new_err(format!("unknown arithmetic '{other}'"))),
    };
    cfg.parallel = parallel;
    if let Some(t) = tolerance {
        cfg.tolerances.equality = t;
    }
    let inner = &instance.inner;
    let result = py
        .detach(|| engine::run(inner, algorithm, &cfg, init_from_lex))
        .map_err(err)?;
    Ok((result.original_outcomes(inner), stats_dict(py, &result.stats)?))
}

/// Nondominated extreme points by brute-force enumeration (small instances only).
#[pyfunction]
fn enumerate_ysn1(py: Python<'_>, instance: &Instance) -> PyResult<Vec<Vec<i64>>> {
    let inner = &instance.inner;
    let canon = py.detach(|| oracle::instance_ysn1(inner)).map_err(err)?;
    let mut v: Vec<Vec<i64>> = canon.iter().map(|y| inner.to_original(y)).collect();
    v.sort();
    Ok(v)
}

/// Nondominated extreme points of an explicit point set (minimization).
#[pyfunction]
fn final_filter(points: Vec<Vec<i64>>) -> PyResult<Vec<Vec<i64>>> {
    engine::final_filter(&points).map_err(err)
}

/// Exact incremental convex hull of integer points in dimension 2..=5.
#[pyclass]
struct ConvexHull {
    inner: geometry::ConvexHull<BigInt>,
}

#[pymethods]
impl ConvexHull {
    #[new]
    fn new(dim: usize) -> PyResult<Self> {
        Ok(ConvexHull {
            inner: geometry::ConvexHull::new(dim).map_err(err)?,
        })
    }

    /// Insert a point; returns "vertex", "inside" or "pending".
    fn insert(&mut self, point: Vec<BigInt>) -> PyResult<&'static str> {
        let (_, outcome) = self.inner.insert_big(point, None).map_err(err)?;
        Ok(match outcome {
            InsertOutcome::NewVertex => "vertex",
            InsertOutcome::InteriorOrBoundary => "inside",
            InsertOutcome::Pending => "pending",
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn is_full_dimensional(&self) -> bool {
        self.inner.is_full_dimensional()
    }

    /// Extreme points, sorted.
    fn vertices(&self) -> Vec<Vec<BigInt>> {
        let mut v: Vec<Vec<BigInt>> = self
            .inner
            .vertex_ids()
            .into_iter()
            .map(|id| self.inner.point(id).raw.clone())
            .collect();
        v.sort();
        v
    }

    /// `(inward_normal, offset)` per facet; the hull satisfies `normal · x >= offset`.
    fn facets(&self) -> Vec<(Vec<BigInt>, BigInt)> {
        self.inner
            .facets()
            .map(|f| (f.inward_normal.clone(), f.offset.clone()))
            .collect()
    }

    fn num_facets(&self) -> usize {
        self.inner.num_facets()
    }

    fn __len__(&self) -> usize {
        self.inner.points().len()
    }
}

#[pymodule]
fn dicho(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Instance>()?;
    m.add_class::<ConvexHull>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_ysn1, m)?)?;
    m.add_function(wrap_pyfunction!(final_filter, m)?)?;
    Ok(())
}
