//! Design and optimization of Walker-Delta LEO constellations for IoT
//! backhaul: orbit propagation, grid coverage, uplink capacity analytics,
//! deployment cost and constrained metaheuristic search.

pub mod cost;
pub mod coverage;
pub mod design;
pub mod error;
pub mod fitness;
pub mod geo;
pub mod link;
pub mod optim;
pub mod problem;

pub use design::{Bounds, DesignVector};
pub use error::{Error, Result};
pub use fitness::EvaluationRecord;
pub use optim::{optimize, Algorithm, OptimizationResult, OptimizerConfig};
pub use problem::{ConstellationProblem, Evaluator, SurrogateProblem};
