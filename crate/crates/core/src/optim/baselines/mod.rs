//! Baseline metaheuristics scored with the fixed-weight penalty.

mod classical_ga;
mod gwo;
mod pso;
mod sca;
mod tabu;

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::fitness::{classical_penalty, EvaluationRecord};
use crate::problem::Evaluator;

use super::{Algorithm, OptimizationResult, OptimizerConfig};

/// Runs one of the baseline algorithms. `Algorithm::Improved` is rejected.
pub fn run_baseline<E: Evaluator + ?Sized>(
    kind: Algorithm,
    evaluator: &E,
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    config.validate()?;
    match kind {
        Algorithm::ClassicalGa => classical_ga::run(evaluator, config),
        Algorithm::Pso => pso::run(evaluator, config),
        Algorithm::Sca => sca::run(evaluator, config),
        Algorithm::Gwo => gwo::run(evaluator, config),
        Algorithm::Tabu => tabu::run(evaluator, config),
        Algorithm::Improved => Err(Error::param("algorithm", "`improved` is not a baseline")),
    }
}

fn score(r: &EvaluationRecord, config: &OptimizerConfig) -> f64 {
    classical_penalty(r.objective, &r.violations, config.rho1, config.rho2)
}

fn by_score(config: &OptimizerConfig) -> impl Fn(&EvaluationRecord, &EvaluationRecord) -> Ordering + '_ {
    move |a, b| score(a, config).total_cmp(&score(b, config))
}

/// Index of the lowest-scoring record; the first one on ties.
fn argmin(records: &[EvaluationRecord], config: &OptimizerConfig) -> usize {
    let cmp = by_score(config);
    let mut best = 0;
    for (k, r) in records.iter().enumerate().skip(1) {
        if cmp(r, &records[best]) == Ordering::Less {
            best = k;
        }
    }
    best
}
