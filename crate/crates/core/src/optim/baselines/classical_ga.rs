//! Real-coded GA with binary tournaments, arithmetic crossover between two
//! parents, constant-scale Gaussian mutation and elitist replacement.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::design::DesignVector;
use crate::error::Result;
use crate::optim::ga::initialize_population;
use crate::optim::{stream_rng, Algorithm, OptimizationResult, OptimizerConfig, OptimizerState, Stream};
use crate::problem::Evaluator;

use super::score;

pub(super) fn run<E: Evaluator + ?Sized>(evaluator: &E, config: &OptimizerConfig) -> Result<OptimizationResult> {
    let bounds = evaluator.bounds();
    let size = config.population;
    let seed = config.seed;
    let sigma = bounds.width().map(|w| w * config.baselines.classical_mutation_scale);

    let mut state = OptimizerState::new(evaluator, config);
    let mut population = state.evaluate(&initialize_population(&bounds, size, seed)?)?;

    for it in 1..=config.iterations {
        let scores: Vec<f64> = population.iter().map(|r| score(r, config)).collect();
        let mut sel = stream_rng(seed, Stream::Select, it, 0);
        let tournament = |rng: &mut rand_chacha::ChaCha8Rng| {
            let a = rng.random_range(0..size);
            let b = rng.random_range(0..size);
            if scores[b] < scores[a] {
                b
            } else {
                a
            }
        };

        let mut children = Vec::with_capacity(size + 1);
        let mut pair = 0;
        while children.len() < size {
            let (a, b) = (tournament(&mut sel), tournament(&mut sel));
            let mut rng = stream_rng(seed, Stream::Crossover, it, pair);
            let r: f64 = rng.random();
            let (ga, gb) = (population[a].design.genes(), population[b].design.genes());
            children.push(DesignVector::from_genes(std::array::from_fn(|k| r * ga[k] + (1.0 - r) * gb[k])));
            children.push(DesignVector::from_genes(std::array::from_fn(|k| (1.0 - r) * ga[k] + r * gb[k])));
            pair += 1;
        }
        children.truncate(size);

        let mutants: Vec<DesignVector> = children
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mut rng = stream_rng(seed, Stream::Mutate, it, k);
                let g = c.genes();
                let moved = std::array::from_fn(|j| g[j] + Normal::new(0.0, sigma[j]).map_or(0.0, |d| d.sample(&mut rng)));
                bounds.clamp(&DesignVector::from_genes(moved))
            })
            .collect();

        let offspring: Vec<DesignVector> = children.into_iter().chain(mutants).collect();
        let mut pool = population;
        pool.extend(state.evaluate(&offspring)?);
        let mut idx: Vec<usize> = (0..pool.len()).collect();
        idx.sort_by(|&a, &b| score(&pool[a], config).total_cmp(&score(&pool[b], config)).then(a.cmp(&b)));
        population = idx[..size].iter().map(|&k| pool[k]).collect();
        state.record(it, &population);
    }
    Ok(state.finish(Algorithm::ClassicalGa, seed))
}
