//! Constraint violations and the two fitness formulations.
//!
//! The adaptive fitness normalizes the objective and each constraint violation
//! against the current population's extremes and multiplies them, with an
//! exponent that grows with the share of infeasible designs and with the
//! iteration count. Higher is better. The classical penalty is a fixed-weight
//! sum where lower is better; it scores the baselines.

use serde::{Deserialize, Serialize};

use crate::design::DesignVector;
use crate::error::{Error, Result};

/// Degree of violation of the coverage and capacity constraints; zero means
/// satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Violations {
    pub coverage: f64,
    pub capacity: f64,
}

impl Violations {
    pub fn total(&self) -> f64 {
        self.coverage + self.capacity
    }

    pub fn is_zero(&self) -> bool {
        self.coverage == 0.0 && self.capacity == 0.0
    }
}

/// `p₁ = max(η_th − η_min, 0)`, `p₂ = max(N̄_th − N̄_min, 0)`.
pub fn constraint_violations(eta_min: f64, eta_threshold: f64, min_visible: u32, required_count: f64) -> Violations {
    Violations {
        coverage: (eta_threshold - eta_min).max(0.0),
        capacity: (required_count - f64::from(min_visible)).max(0.0),
    }
}

/// Outcome of evaluating one design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub design: DesignVector,
    /// Constellation cost.
    pub objective: f64,
    pub violations: Violations,
    pub eta_min: f64,
    pub min_visible: u32,
    pub required_count: f64,
    pub feasible: bool,
}

impl EvaluationRecord {
    pub fn new(
        design: DesignVector,
        objective: f64,
        eta_min: f64,
        eta_threshold: f64,
        min_visible: u32,
        required_count: f64,
    ) -> Self {
        let violations = constraint_violations(eta_min, eta_threshold, min_visible, required_count);
        Self {
            design,
            objective,
            violations,
            eta_min,
            min_visible,
            required_count,
            feasible: violations.is_zero(),
        }
    }
}

/// Population extremes and infeasibility share used to normalize fitness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationStats {
    pub objective_min: f64,
    pub objective_max: f64,
    pub coverage_violation_max: f64,
    pub capacity_violation_max: f64,
    pub infeasible: usize,
    pub population: usize,
    /// 1-based iteration index.
    pub iteration: u32,
}

impl PopulationStats {
    pub fn from_records<'a, I>(records: I, iteration: u32) -> Result<Self>
    where
        I: IntoIterator<Item = &'a EvaluationRecord>,
    {
        if iteration == 0 {
            return Err(Error::param("iteration", "is 1-based"));
        }
        let mut stats = Self {
            objective_min: f64::INFINITY,
            objective_max: f64::NEG_INFINITY,
            coverage_violation_max: 0.0,
            capacity_violation_max: 0.0,
            infeasible: 0,
            population: 0,
            iteration,
        };
        for r in records {
            stats.objective_min = stats.objective_min.min(r.objective);
            stats.objective_max = stats.objective_max.max(r.objective);
            stats.coverage_violation_max = stats.coverage_violation_max.max(r.violations.coverage);
            stats.capacity_violation_max = stats.capacity_violation_max.max(r.violations.capacity);
            stats.infeasible += usize::from(!r.feasible);
            stats.population += 1;
        }
        if stats.population == 0 {
            return Err(Error::param("population", "cannot compute statistics of an empty population"));
        }
        Ok(stats)
    }

    pub fn infeasible_share(&self) -> f64 {
        self.infeasible as f64 / self.population as f64
    }
}

/// Objective and constraint satisfactions, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Satisfaction {
    pub objective: f64,
    pub coverage: f64,
    pub capacity: f64,
}

fn constraint_satisfaction(violation: f64, max: f64) -> f64 {
    if max > 0.0 {
        ((max - violation) / max).clamp(0.0, 1.0)
    } else {
        1.0
    }
}

pub fn satisfaction_scores(record: &EvaluationRecord, stats: &PopulationStats) -> Satisfaction {
    let spread = stats.objective_max - stats.objective_min;
    let objective = if spread > 0.0 {
        ((stats.objective_max - record.objective) / spread).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Satisfaction {
        objective,
        coverage: constraint_satisfaction(record.violations.coverage, stats.coverage_violation_max),
        capacity: constraint_satisfaction(record.violations.capacity, stats.capacity_violation_max),
    }
}

/// `(m_fe / N_totp) · (α₁ − α₂ / n_it)`.
pub fn penalty_exponent(stats: &PopulationStats, alpha1: f64, alpha2: f64) -> f64 {
    stats.infeasible_share() * (alpha1 - alpha2 / f64::from(stats.iteration))
}

/// `f_s1 · (p_s1 · p_s2)^e`; higher is better.
pub fn adaptive_fitness(s: &Satisfaction, stats: &PopulationStats, alpha1: f64, alpha2: f64) -> f64 {
    let e = penalty_exponent(stats, alpha1, alpha2);
    let product = s.coverage * s.capacity;
    if e == 0.0 {
        s.objective
    } else {
        s.objective * product.powf(e)
    }
}

/// Adaptive fitness of every record against the stats of the whole slice.
pub fn adaptive_fitness_all(records: &[EvaluationRecord], iteration: u32, alpha1: f64, alpha2: f64) -> Result<Vec<f64>> {
    let stats = PopulationStats::from_records(records, iteration)?;
    Ok(records
        .iter()
        .map(|r| adaptive_fitness(&satisfaction_scores(r, &stats), &stats, alpha1, alpha2))
        .collect())
}

/// `f₁ + ρ₁·p₁ + ρ₂·p₂`; lower is better.
pub fn classical_penalty(objective: f64, violations: &Violations, rho1: f64, rho2: f64) -> f64 {
    objective + rho1 * violations.coverage + rho2 * violations.capacity
}
