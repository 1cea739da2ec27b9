//! Inertia-weight particle swarm.

use rand::Rng;

use crate::design::{DesignVector, GENES};
use crate::error::Result;
use crate::optim::ga::initialize_population;
use crate::optim::{stream_rng, Algorithm, OptimizationResult, OptimizerConfig, OptimizerState, Stream};
use crate::problem::Evaluator;

use super::{argmin, score};

pub(super) fn run<E: Evaluator + ?Sized>(evaluator: &E, config: &OptimizerConfig) -> Result<OptimizationResult> {
    let bounds = evaluator.bounds();
    let p = &config.baselines;
    let seed = config.seed;
    let vmax = bounds.width().map(|w| w * p.pso_velocity_limit);
    let sweeps = 2 * config.iterations;

    let mut state = OptimizerState::new(evaluator, config);
    let mut current = state.evaluate(&initialize_population(&bounds, config.population, seed)?)?;
    let mut personal = current.clone();
    let mut global = current[argmin(&current, config)];
    let mut velocity = vec![[0.0; GENES]; current.len()];

    for s in 1..=sweeps {
        let progress = f64::from(s - 1) / f64::from((sweeps - 1).max(1));
        let inertia = p.pso_inertia_start + (p.pso_inertia_end - p.pso_inertia_start) * progress;
        let moved: Vec<DesignVector> = current
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let mut rng = stream_rng(seed, Stream::Move, s, k);
                let (x, pb, gb) = (r.design.genes(), personal[k].design.genes(), global.design.genes());
                let v = &mut velocity[k];
                for j in 0..GENES {
                    let (r1, r2): (f64, f64) = (rng.random(), rng.random());
                    v[j] = (inertia * v[j] + p.pso_cognitive * r1 * (pb[j] - x[j]) + p.pso_social * r2 * (gb[j] - x[j]))
                        .clamp(-vmax[j], vmax[j]);
                }
                bounds.clamp(&DesignVector::from_genes(std::array::from_fn(|j| x[j] + v[j])))
            })
            .collect();
        current = state.evaluate(&moved)?;
        for (k, r) in current.iter().enumerate() {
            if score(r, config) < score(&personal[k], config) {
                personal[k] = *r;
            }
        }
        let best = personal[argmin(&personal, config)];
        if score(&best, config) < score(&global, config) {
            global = best;
        }
        if s % 2 == 0 {
            state.record(s / 2, &current);
        }
    }
    Ok(state.finish(Algorithm::Pso, seed))
}
