//! Constellation search: the improved genetic algorithm and five baselines.
//!
//! Every algorithm spends the same number of evaluator calls,
//! `population · (1 + 2 · iterations)`: one initial population plus two
//! population-sized batches per iteration. The GAs evaluate their crossover
//! and mutation offspring each generation; the swarm methods perform two
//! sweeps per reported iteration; tabu search evaluates two neighbourhoods.

pub mod baselines;
pub mod ga;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::design::{Bounds, DesignVector, GENES};
use crate::error::{Error, Result};
use crate::fitness::EvaluationRecord;
use crate::problem::Evaluator;

pub use baselines::run_baseline;
pub use ga::{
    best_guided_crossover, dual_mode_mutation, elite_selection, initialize_population, roulette_wheel,
    run_improved_ga,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Improved,
    ClassicalGa,
    Pso,
    Sca,
    Gwo,
    Tabu,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Improved,
        Algorithm::ClassicalGa,
        Algorithm::Pso,
        Algorithm::Sca,
        Algorithm::Gwo,
        Algorithm::Tabu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Improved => "improved",
            Algorithm::ClassicalGa => "classical-ga",
            Algorithm::Pso => "pso",
            Algorithm::Sca => "sca",
            Algorithm::Gwo => "gwo",
            Algorithm::Tabu => "tabu",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::param("algorithm", format!("unknown kind `{s}`")))
    }
}

/// Parameters of the baseline metaheuristics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineParams {
    pub pso_inertia_start: f64,
    pub pso_inertia_end: f64,
    pub pso_cognitive: f64,
    pub pso_social: f64,
    /// Velocity limit as a fraction of each gene's range.
    pub pso_velocity_limit: f64,
    /// Initial amplitude of the sine-cosine step, decayed linearly to zero.
    pub sca_amplitude: f64,
    /// Initial value of the wolf `a` coefficient, decayed linearly to zero.
    pub gwo_a_start: f64,
    pub tabu_tenure: usize,
    /// Lattice spacing of the altitude gene (m).
    pub tabu_altitude_step: f64,
    /// Lattice spacing of the inclination gene (rad).
    pub tabu_inclination_step: f64,
    /// Largest move along one gene, in lattice steps.
    pub tabu_max_steps: u32,
    /// Gaussian scale of the classical GA mutation as a fraction of range.
    pub classical_mutation_scale: f64,
}

impl Default for BaselineParams {
    fn default() -> Self {
        Self {
            pso_inertia_start: 0.9,
            pso_inertia_end: 0.4,
            pso_cognitive: 2.0,
            pso_social: 2.0,
            pso_velocity_limit: 0.2,
            sca_amplitude: 2.0,
            gwo_a_start: 2.0,
            tabu_tenure: 10,
            tabu_altitude_step: 10e3,
            tabu_inclination_step: 1f64.to_radians(),
            tabu_max_steps: 10,
            classical_mutation_scale: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub population: usize,
    pub iterations: u32,
    /// Mutation threshold `ς` in `[0, 1]`.
    pub mutation_threshold: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    /// Gaussian mutation scales per gene; `None` uses a tenth of each range.
    pub mutation_scales: Option<[f64; GENES]>,
    /// Parents drawn per generation; `None` uses the population size.
    pub parent_pool: Option<usize>,
    pub rho1: f64,
    pub rho2: f64,
    pub seed: u64,
    /// Evaluate each batch on the rayon pool. Results do not depend on it.
    pub parallel: bool,
    pub baselines: BaselineParams,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            population: 30,
            iterations: 50,
            mutation_threshold: 0.3,
            alpha1: 2.0,
            alpha2: 1.0,
            mutation_scales: None,
            parent_pool: None,
            rho1: 1000.0,
            rho2: 1000.0,
            seed: 1,
            parallel: true,
            baselines: BaselineParams::default(),
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::param("population", "must be at least 2"));
        }
        if self.population >= 1 << 24 {
            return Err(Error::param("population", "too large"));
        }
        if self.iterations == 0 {
            return Err(Error::param("iterations", "must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.mutation_threshold) {
            return Err(Error::param("mutation_threshold", "must lie in [0, 1]"));
        }
        if !(self.alpha1 >= self.alpha2.max(0.0)) {
            return Err(Error::param("alpha1", "must be at least max(alpha2, 0)"));
        }
        if let Some(s) = self.mutation_scales {
            if s.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
                return Err(Error::param("mutation_scales", "must be finite and nonnegative"));
            }
        }
        if self.parent_pool == Some(0) {
            return Err(Error::param("parent_pool", "must be positive"));
        }
        if !(self.rho1 >= 0.0) || !(self.rho2 >= 0.0) {
            return Err(Error::param("rho", "penalty factors must be nonnegative"));
        }
        let b = &self.baselines;
        if b.tabu_max_steps == 0 || !(b.tabu_altitude_step > 0.0) || !(b.tabu_inclination_step > 0.0) {
            return Err(Error::param("tabu", "lattice steps must be positive"));
        }
        Ok(())
    }

    /// Evaluator calls every algorithm makes under this configuration.
    pub fn evaluation_budget(&self) -> usize {
        self.population * (1 + 2 * self.iterations as usize)
    }

    pub fn mutation_scales_for(&self, bounds: &Bounds) -> [f64; GENES] {
        self.mutation_scales.unwrap_or_else(|| bounds.width().map(|w| w / 10.0))
    }
}

/// Best feasible design seen, plus the least-violating one as a fallback.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Archive {
    pub incumbent: Option<EvaluationRecord>,
    pub least_violating: Option<EvaluationRecord>,
}

impl Archive {
    pub fn offer(&mut self, r: &EvaluationRecord) {
        if r.feasible && self.incumbent.is_none_or(|inc| r.objective < inc.objective) {
            self.incumbent = Some(*r);
        }
        let better = |cur: &EvaluationRecord| {
            let (a, b) = (r.violations.total(), cur.violations.total());
            a < b || (a == b && r.objective < cur.objective)
        };
        if self.least_violating.as_ref().is_none_or(better) {
            self.least_violating = Some(*r);
        }
    }

    /// The incumbent if one exists, otherwise the least-violating design.
    pub fn best(&self) -> Option<&EvaluationRecord> {
        self.incumbent.as_ref().or(self.least_violating.as_ref())
    }
}

/// One row per reported iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: u32,
    /// Cost of the archive's best design so far.
    pub best_cost: f64,
    pub incumbent_cost: Option<f64>,
    /// Feasible members of the current population.
    pub feasible_count: usize,
    pub eta_min_best: f64,
    pub nvis_min_best: u32,
    pub best_design: DesignVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Incumbent, or the least-violating design when nothing was feasible.
    pub best: EvaluationRecord,
    pub feasible: bool,
    pub trace: Vec<TraceRow>,
    pub evaluations: usize,
}

/// Runs `algorithm` on `evaluator`.
pub fn optimize<E: Evaluator + ?Sized>(
    algorithm: Algorithm,
    evaluator: &E,
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    match algorithm {
        Algorithm::Improved => run_improved_ga(evaluator, config),
        kind => run_baseline(kind, evaluator, config),
    }
}

#[derive(Debug, Clone, Copy)]
#[repr(u8)]
pub(crate) enum Stream {
    Init = 1,
    Select = 2,
    Crossover = 3,
    Mutate = 4,
    Move = 5,
}

/// Independent generator for one (purpose, iteration, individual) triple.
pub(crate) fn stream_rng(seed: u64, purpose: Stream, iteration: u32, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((purpose as u64) << 56) | (u64::from(iteration) << 24) | (index as u64 & 0xff_ffff));
    rng
}

/// Bookkeeping shared by all algorithms: evaluation, archive and trace.
#[derive(Debug, Clone)]
pub struct OptimizerState<'a, E: ?Sized> {
    evaluator: &'a E,
    parallel: bool,
    pub archive: Archive,
    pub trace: Vec<TraceRow>,
    pub evaluations: usize,
}

impl<'a, E: Evaluator + ?Sized> OptimizerState<'a, E> {
    pub fn new(evaluator: &'a E, config: &OptimizerConfig) -> Self {
        Self {
            evaluator,
            parallel: config.parallel,
            archive: Archive::default(),
            trace: Vec::with_capacity(config.iterations as usize),
            evaluations: 0,
        }
    }

    /// Evaluates a batch in order and folds it into the archive.
    pub fn evaluate(&mut self, designs: &[DesignVector]) -> Result<Vec<EvaluationRecord>> {
        let ev = self.evaluator;
        let records: Vec<EvaluationRecord> = if self.parallel {
            designs.par_iter().map(|d| ev.evaluate(d)).collect::<Result<_>>()?
        } else {
            designs.iter().map(|d| ev.evaluate(d)).collect::<Result<_>>()?
        };
        self.evaluations += records.len();
        for r in &records {
            self.archive.offer(r);
        }
        Ok(records)
    }

    pub fn record(&mut self, iteration: u32, population: &[EvaluationRecord]) {
        let best = self.archive.best().expect("trace recorded before any evaluation");
        self.trace.push(TraceRow {
            iteration,
            best_cost: best.objective,
            incumbent_cost: self.archive.incumbent.map(|r| r.objective),
            feasible_count: population.iter().filter(|r| r.feasible).count(),
            eta_min_best: best.eta_min,
            nvis_min_best: best.min_visible,
            best_design: best.design,
        });
    }

    pub fn finish(self, algorithm: Algorithm, seed: u64) -> OptimizationResult {
        let best = *self.archive.best().expect("finished before any evaluation");
        OptimizationResult {
            algorithm,
            seed,
            best,
            feasible: self.archive.incumbent.is_some(),
            trace: self.trace,
            evaluations: self.evaluations,
        }
    }
}
