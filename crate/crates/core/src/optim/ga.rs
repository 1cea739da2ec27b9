//! The improved genetic algorithm: adaptive-penalty fitness, roulette-wheel
//! parents, crossover pulled toward the current best, and a mutation that
//! moves from Gaussian exploration to shrinking box steps.

use std::cmp::Ordering;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::design::{Bounds, DesignVector, GENES};
use crate::error::{Error, Result};
use crate::fitness::{adaptive_fitness_all, EvaluationRecord};
use crate::problem::Evaluator;

use super::{stream_rng, Algorithm, OptimizationResult, OptimizerConfig, OptimizerState, Stream};

/// `count` designs, each gene uniform on its bounds.
pub fn initialize_population(bounds: &Bounds, count: usize, seed: u64) -> Result<Vec<DesignVector>> {
    bounds.validate()?;
    let (l, u) = (bounds.lower.genes(), bounds.upper.genes());
    Ok((0..count)
        .map(|k| {
            let mut rng = stream_rng(seed, Stream::Init, 0, k);
            DesignVector::from_genes(std::array::from_fn(|g| {
                if l[g] == u[g] {
                    l[g]
                } else {
                    rng.random_range(l[g]..=u[g])
                }
            }))
        })
        .collect())
}

fn convex_combination(weights: [f64; 3], points: [&DesignVector; 3]) -> DesignVector {
    let sum: f64 = weights.iter().sum();
    let w = if sum > 0.0 { weights.map(|x| x / sum) } else { [1.0 / 3.0; 3] };
    let g = points.map(|p| p.genes());
    DesignVector::from_genes(std::array::from_fn(|k| w[0] * g[0][k] + w[1] * g[1][k] + w[2] * g[2][k]))
}

/// Two children, each a random convex combination of both parents and the
/// current best.
pub fn best_guided_crossover<R: Rng + ?Sized>(
    p1: &DesignVector,
    p2: &DesignVector,
    best: &DesignVector,
    rng: &mut R,
) -> (DesignVector, DesignVector) {
    let mut draw = || -> [f64; 3] { std::array::from_fn(|_| rng.random::<f64>()) };
    let (w1, w2) = (draw(), draw());
    (convex_combination(w1, [p1, p2, best]), convex_combination(w2, [p1, p2, best]))
}

/// Gaussian perturbation with probability `(1/(n+1) + 1)·threshold`,
/// otherwise a random box step of up to `range/n` per gene. Clamped to bounds.
pub fn dual_mode_mutation<R: Rng + ?Sized>(
    x: &DesignVector,
    iteration: u32,
    bounds: &Bounds,
    threshold: f64,
    scales: &[f64; GENES],
    rng: &mut R,
) -> DesignVector {
    let n = f64::from(iteration.max(1));
    let indicator: f64 = rng.random();
    let g = x.genes();
    let width = bounds.width();
    let moved: [f64; GENES] = if indicator <= (1.0 / (n + 1.0) + 1.0) * threshold {
        std::array::from_fn(|k| {
            let step = Normal::new(0.0, scales[k]).map_or(0.0, |d| d.sample(rng));
            g[k] + step
        })
    } else {
        std::array::from_fn(|k| {
            let r3: f64 = rng.random();
            let r4: f64 = rng.random();
            let step = r3 / n * width[k];
            if r4 < 0.5 {
                g[k] + step
            } else {
                g[k] - step
            }
        })
    };
    bounds.clamp(&DesignVector::from_genes(moved))
}

/// Draws `count` indices with probability proportional to `fitness + 1e-12`.
pub fn roulette_wheel<R: Rng + ?Sized>(fitness: &[f64], count: usize, rng: &mut R) -> Vec<usize> {
    let mut cumulative = Vec::with_capacity(fitness.len());
    let mut acc = 0.0;
    for f in fitness {
        acc += f.max(0.0) + 1e-12;
        cumulative.push(acc);
    }
    (0..count)
        .map(|_| {
            let t = rng.random::<f64>() * acc;
            cumulative.partition_point(|&c| c <= t).min(fitness.len() - 1)
        })
        .collect()
}

fn rank(a: (usize, &EvaluationRecord, f64), b: (usize, &EvaluationRecord, f64)) -> Ordering {
    b.2.total_cmp(&a.2)
        .then(a.1.objective.total_cmp(&b.1.objective))
        .then(a.1.violations.total().total_cmp(&b.1.violations.total()))
        .then(a.0.cmp(&b.0))
}

/// Indices of the `count` fittest pool members, best first.
///
/// Ties on fitness go to lower cost, then lower total violation, then the
/// earlier member.
pub fn elite_selection(pool: &[EvaluationRecord], fitness: &[f64], count: usize) -> Result<Vec<usize>> {
    if pool.len() != fitness.len() {
        return Err(Error::param("fitness", "one value per pool member required"));
    }
    if pool.len() < count {
        return Err(Error::PoolTooSmall {
            available: pool.len(),
            requested: count,
        });
    }
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    idx.sort_by(|&a, &b| rank((a, &pool[a], fitness[a]), (b, &pool[b], fitness[b])));
    idx.truncate(count);
    Ok(idx)
}

pub fn run_improved_ga<E: Evaluator + ?Sized>(evaluator: &E, config: &OptimizerConfig) -> Result<OptimizationResult> {
    config.validate()?;
    let bounds = evaluator.bounds();
    let size = config.population;
    let parents_per_gen = config.parent_pool.unwrap_or(size);
    let scales = config.mutation_scales_for(&bounds);
    let seed = config.seed;

    let mut state = OptimizerState::new(evaluator, config);
    let mut population = state.evaluate(&initialize_population(&bounds, size, seed)?)?;

    for it in 1..=config.iterations {
        let fitness = adaptive_fitness_all(&population, it, config.alpha1, config.alpha2)?;
        let best_idx = elite_selection(&population, &fitness, 1)?[0];
        let best = population[best_idx].design;

        let mut rng = stream_rng(seed, Stream::Select, it, 0);
        let parents = roulette_wheel(&fitness, parents_per_gen.max(2), &mut rng);

        let mut children = Vec::with_capacity(size + 1);
        let mut pair = 0;
        while children.len() < size {
            let a = parents[(2 * pair) % parents.len()];
            let b = parents[(2 * pair + 1) % parents.len()];
            let mut rng = stream_rng(seed, Stream::Crossover, it, pair);
            let (c1, c2) = best_guided_crossover(&population[a].design, &population[b].design, &best, &mut rng);
            children.push(c1);
            children.push(c2);
            pair += 1;
        }
        children.truncate(size);

        let mutants: Vec<DesignVector> = children
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mut rng = stream_rng(seed, Stream::Mutate, it, k);
                dual_mode_mutation(c, it, &bounds, config.mutation_threshold, &scales, &mut rng)
            })
            .collect();

        let offspring: Vec<DesignVector> = children.into_iter().chain(mutants).collect();
        let evaluated = state.evaluate(&offspring)?;

        let mut pool = population;
        pool.extend(evaluated);
        let pool_fitness = adaptive_fitness_all(&pool, it, config.alpha1, config.alpha2)?;
        let keep = elite_selection(&pool, &pool_fitness, size)?;
        population = keep.into_iter().map(|k| pool[k]).collect();
        state.record(it, &population);
    }
    Ok(state.finish(Algorithm::Improved, seed))
}
