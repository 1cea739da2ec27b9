//! Tabu search on a lattice: integer plane and satellite counts, altitude and
//! inclination quantized to configurable steps.

use std::collections::VecDeque;

use rand::Rng;

use crate::design::{Bounds, DesignVector};
use crate::error::Result;
use crate::optim::ga::initialize_population;
use crate::optim::{stream_rng, Algorithm, BaselineParams, OptimizationResult, OptimizerConfig, OptimizerState, Stream};
use crate::problem::Evaluator;

use super::{argmin, score};

type Key = [i64; 4];

struct Lattice {
    bounds: Bounds,
    steps: [f64; 4],
}

impl Lattice {
    fn new(bounds: Bounds, p: &BaselineParams) -> Self {
        Self {
            bounds,
            steps: [p.tabu_altitude_step, 1.0, 1.0, p.tabu_inclination_step],
        }
    }

    fn key(&self, x: &DesignVector) -> Key {
        let (g, l) = (x.genes(), self.bounds.lower.genes());
        std::array::from_fn(|k| ((g[k] - l[k]) / self.steps[k]).round() as i64)
    }

    fn snap(&self, x: &DesignVector) -> DesignVector {
        let (key, l) = (self.key(x), self.bounds.lower.genes());
        let on_grid = DesignVector::from_genes(std::array::from_fn(|k| l[k] + key[k] as f64 * self.steps[k]));
        self.bounds.clamp(&on_grid)
    }
}

pub(super) fn run<E: Evaluator + ?Sized>(evaluator: &E, config: &OptimizerConfig) -> Result<OptimizationResult> {
    let bounds = evaluator.bounds();
    let params = &config.baselines;
    let lattice = Lattice::new(bounds, params);
    let seed = config.seed;
    let steps = 2 * config.iterations;

    let mut state = OptimizerState::new(evaluator, config);
    let start: Vec<DesignVector> = initialize_population(&bounds, config.population, seed)?
        .iter()
        .map(|x| lattice.snap(x))
        .collect();
    let initial = state.evaluate(&start)?;
    let mut current = initial[argmin(&initial, config)];
    let mut best_score = score(&current, config);
    let mut tabu: VecDeque<Key> = VecDeque::from([lattice.key(&current.design)]);

    for s in 1..=steps {
        let neighbours: Vec<DesignVector> = (0..config.population)
            .map(|k| {
                let mut rng = stream_rng(seed, Stream::Move, s, k);
                let mut g = current.design.genes();
                let gene = rng.random_range(0..4);
                let m = f64::from(rng.random_range(1..=params.tabu_max_steps));
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                g[gene] += sign * m * lattice.steps[gene];
                lattice.snap(&DesignVector::from_genes(g))
            })
            .collect();
        let batch = state.evaluate(&neighbours)?;

        let mut chosen: Option<usize> = None;
        for (k, r) in batch.iter().enumerate() {
            let sc = score(r, config);
            let allowed = !tabu.contains(&lattice.key(&r.design)) || sc < best_score;
            if allowed && chosen.is_none_or(|c| sc < score(&batch[c], config)) {
                chosen = Some(k);
            }
        }
        let next = batch[chosen.unwrap_or_else(|| argmin(&batch, config))];
        current = next;
        best_score = best_score.min(score(&current, config));
        tabu.push_back(lattice.key(&current.design));
        while tabu.len() > params.tabu_tenure.max(1) {
            tabu.pop_front();
        }
        if s % 2 == 0 {
            state.record(s / 2, &batch);
        }
    }
    Ok(state.finish(Algorithm::Tabu, seed))
}
