//! Grey wolf optimizer led by the three best positions found so far.

use rand::Rng;

use crate::design::{DesignVector, GENES};
use crate::error::Result;
use crate::fitness::EvaluationRecord;
use crate::optim::ga::initialize_population;
use crate::optim::{stream_rng, Algorithm, OptimizationResult, OptimizerConfig, OptimizerState, Stream};
use crate::problem::Evaluator;

use super::score;

fn update_leaders(leaders: &mut Vec<EvaluationRecord>, pack: &[EvaluationRecord], config: &OptimizerConfig) {
    for r in pack {
        let pos = leaders.partition_point(|l| score(l, config) <= score(r, config));
        if pos < 3 {
            leaders.insert(pos, *r);
            leaders.truncate(3);
        }
    }
}

pub(super) fn run<E: Evaluator + ?Sized>(evaluator: &E, config: &OptimizerConfig) -> Result<OptimizationResult> {
    let bounds = evaluator.bounds();
    let seed = config.seed;
    let sweeps = 2 * config.iterations;

    let mut state = OptimizerState::new(evaluator, config);
    let mut pack = state.evaluate(&initialize_population(&bounds, config.population, seed)?)?;
    let mut leaders = Vec::with_capacity(4);
    update_leaders(&mut leaders, &pack, config);

    for s in 1..=sweeps {
        let a = config.baselines.gwo_a_start * (1.0 - f64::from(s - 1) / f64::from(sweeps));
        let lead: Vec<[f64; GENES]> = leaders.iter().map(|l| l.design.genes()).collect();
        let moved: Vec<DesignVector> = pack
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let mut rng = stream_rng(seed, Stream::Move, s, k);
                let x = r.design.genes();
                let next: [f64; GENES] = std::array::from_fn(|j| {
                    let mut sum = 0.0;
                    for l in &lead {
                        let (r1, r2): (f64, f64) = (rng.random(), rng.random());
                        let big_a = 2.0 * a * r1 - a;
                        let c = 2.0 * r2;
                        sum += l[j] - big_a * (c * l[j] - x[j]).abs();
                    }
                    sum / lead.len() as f64
                });
                bounds.clamp(&DesignVector::from_genes(next))
            })
            .collect();
        pack = state.evaluate(&moved)?;
        update_leaders(&mut leaders, &pack, config);
        if s % 2 == 0 {
            state.record(s / 2, &pack);
        }
    }
    Ok(state.finish(Algorithm::Gwo, seed))
}
