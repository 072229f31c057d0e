//! Enumeration of the nondominated extreme points of multi-objective integer
//! linear programs by generalized dichotomic search over an incremental
//! convex hull of the outcome set.

pub mod bench;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod io;
pub mod numerics;
pub mod oracle;
pub mod solvers;

pub use engine::{Algorithm, Arithmetic, EngineConfig, FrontierResult, RunStats};
pub use error::{Error, Result};
pub use numerics::Weight;
pub use solvers::{Instance, OutcomePoint, RawProblem, WeightedSumOracle};
