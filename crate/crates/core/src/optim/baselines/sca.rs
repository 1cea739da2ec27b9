//! Sine cosine algorithm.

use std::f64::consts::TAU;

use rand::Rng;

use crate::design::{DesignVector, GENES};
use crate::error::Result;
use crate::optim::ga::initialize_population;
use crate::optim::{stream_rng, Algorithm, OptimizationResult, OptimizerConfig, OptimizerState, Stream};
use crate::problem::Evaluator;

use super::{argmin, score};

pub(super) fn run<E: Evaluator + ?Sized>(evaluator: &E, config: &OptimizerConfig) -> Result<OptimizationResult> {
    let bounds = evaluator.bounds();
    let seed = config.seed;
    let sweeps = 2 * config.iterations;

    let mut state = OptimizerState::new(evaluator, config);
    let mut current = state.evaluate(&initialize_population(&bounds, config.population, seed)?)?;
    let mut destination = current[argmin(&current, config)];

    for s in 1..=sweeps {
        let amplitude = config.baselines.sca_amplitude * (1.0 - f64::from(s - 1) / f64::from(sweeps));
        let dest = destination.design.genes();
        let moved: Vec<DesignVector> = current
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let mut rng = stream_rng(seed, Stream::Move, s, k);
                let x = r.design.genes();
                let next: [f64; GENES] = std::array::from_fn(|j| {
                    let r2 = rng.random_range(0.0..TAU);
                    let r3 = rng.random_range(0.0..2.0);
                    let r4: f64 = rng.random();
                    let wave = if r4 < 0.5 { r2.sin() } else { r2.cos() };
                    x[j] + amplitude * wave * (r3 * dest[j] - x[j]).abs()
                });
                bounds.clamp(&DesignVector::from_genes(next))
            })
            .collect();
        current = state.evaluate(&moved)?;
        let best = current[argmin(&current, config)];
        if score(&best, config) < score(&destination, config) {
            destination = best;
        }
        if s % 2 == 0 {
            state.record(s / 2, &current);
        }
    }
    Ok(state.finish(Algorithm::Sca, seed))
}
