//! Evaluation reports, optimization runs and multi-seed comparisons.

use std::fs;
use std::path::Path;
use std::time::Instant;

use leo_constellation::cost::CostBreakdown;
use leo_constellation::design::DesignVector;
use leo_constellation::optim::{optimize, Algorithm, OptimizationResult, TraceRow};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// Everything known about one design under a configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub altitude_km: f64,
    pub planes: u32,
    pub sats_per_plane: u32,
    pub inclination_deg: f64,
    pub phase_factor: u32,
    pub min_elevation_deg: f64,
    pub angular_radius_deg: f64,
    pub eta_per_slot: Vec<f64>,
    pub eta_min: f64,
    pub eta_max: f64,
    pub mean_eta: f64,
    pub min_visible: u32,
    pub mean_interference_w: f64,
    pub psi: f64,
    pub spectral_efficiency: f64,
    /// bits/s through one serving satellite
    pub mean_rate_bps: f64,
    /// bits/s through the guaranteed number of visible satellites
    pub mean_capacity_bps: f64,
    pub required_count: f64,
    pub cost: CostBreakdown,
    pub eta_threshold: f64,
    pub capacity_target_bps: f64,
    pub coverage_violation: f64,
    pub capacity_violation: f64,
    pub feasible: bool,
    /// Human-readable remarks, such as which requirement is missed.
    pub notes: Vec<String>,
}

/// Full report for `design`, which must lie inside the configured bounds.
pub fn evaluate_design(config: &ExperimentConfig, design: &DesignVector) -> Result<EvaluationReport, CliError> {
    let problem = config.problem()?;
    if !problem.bounds.contains(&design.with_rounded_counts()) {
        return Err(CliError::Parameter(format!(
            "design h={} km, P={}, N={}, i={} deg lies outside the configured bounds",
            design.altitude / 1e3,
            design.planes,
            design.sats_per_plane,
            design.inclination.to_degrees()
        )));
    }
    let r = problem.report(design)?;
    let mut notes = Vec::new();
    if r.record.violations.coverage > 0.0 {
        notes.push(format!(
            "minimum coverage ratio {} is below the requirement {}",
            r.coverage.eta_min, problem.eta_threshold
        ));
    }
    if r.record.violations.capacity > 0.0 {
        notes.push(format!(
            "{} satellites are guaranteed in view but {} are needed for the capacity target",
            r.coverage.min_visible_count, r.capacity.required_count
        ));
    }
    Ok(EvaluationReport {
        altitude_km: r.design.altitude / 1e3,
        planes: r.design.planes,
        sats_per_plane: r.design.sats_per_plane,
        inclination_deg: r.design.inclination.to_degrees(),
        phase_factor: problem.phase_factor,
        min_elevation_deg: r.footprint.min_elevation.to_degrees(),
        angular_radius_deg: r.footprint.angular_radius.to_degrees(),
        eta_min: r.coverage.eta_min,
        eta_max: r.coverage.eta_max,
        mean_eta: r.coverage.mean_eta,
        min_visible: r.coverage.min_visible_count,
        eta_per_slot: r.coverage.eta_per_slot,
        mean_interference_w: r.capacity.mean_interference,
        psi: r.capacity.psi,
        spectral_efficiency: r.capacity.xi,
        mean_rate_bps: r.capacity.mean_rate,
        mean_capacity_bps: r.capacity.mean_capacity,
        required_count: r.capacity.required_count,
        cost: r.cost,
        eta_threshold: problem.eta_threshold,
        capacity_target_bps: problem.capacity_target,
        coverage_violation: r.record.violations.coverage,
        capacity_violation: r.record.violations.capacity,
        feasible: r.record.feasible,
        notes,
    })
}

/// Trace row as written to `trace.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: u32,
    pub best_cost: f64,
    pub incumbent_cost: Option<f64>,
    pub feasible_count: usize,
    pub eta_min_best: f64,
    pub nvis_min_best: u32,
    pub best_altitude_km: f64,
    pub best_planes: f64,
    pub best_sats_per_plane: f64,
    pub best_inclination_deg: f64,
}

impl From<&TraceRow> for TraceRecord {
    fn from(t: &TraceRow) -> Self {
        Self {
            iteration: t.iteration,
            best_cost: t.best_cost,
            incumbent_cost: t.incumbent_cost,
            feasible_count: t.feasible_count,
            eta_min_best: t.eta_min_best,
            nvis_min_best: t.nvis_min_best,
            best_altitude_km: t.best_design.altitude / 1e3,
            best_planes: t.best_design.planes,
            best_sats_per_plane: t.best_design.sats_per_plane,
            best_inclination_deg: t.best_design.inclination.to_degrees(),
        }
    }
}

/// Final record of one optimization run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Whether any feasible design was found; otherwise `design` is the
    /// least-violating one.
    pub feasible: bool,
    pub evaluations: usize,
    pub best_cost: f64,
    pub best_genes: DesignVector,
    pub design: EvaluationReport,
    pub wall_clock_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArtifact {
    /// Fully expanded configuration the run used, seed included.
    pub config: String,
    pub trace: Vec<TraceRecord>,
    pub result: RunResult,
    #[serde(skip)]
    pub optimization: Option<OptimizationResult>,
}

impl RunArtifact {
    /// Writes `config.toml`, `trace.csv` and `result.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let path = dir.join("config.toml");
        fs::write(&path, &self.config).map_err(|e| CliError::io(&path, e))?;

        let path = dir.join("trace.csv");
        let mut w = csv::Writer::from_path(&path).map_err(|e| csv_io(&path, e))?;
        for row in &self.trace {
            w.serialize(row).map_err(|e| csv_io(&path, e))?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;

        let path = dir.join("result.json");
        let json = serde_json::to_string_pretty(&self.result).map_err(|e| CliError::Parameter(e.to_string()))?;
        fs::write(&path, json + "\n").map_err(|e| CliError::io(&path, e))?;
        Ok(())
    }
}

fn csv_io(path: &Path, e: csv::Error) -> CliError {
    let kind = match e.kind() {
        csv::ErrorKind::Io(io) => io.kind(),
        _ => std::io::ErrorKind::Other,
    };
    CliError::io(path, std::io::Error::new(kind, e.to_string()))
}

/// Runs `algorithm` with `seed` on the configured problem, in memory.
pub fn execute(config: &ExperimentConfig, algorithm: Algorithm, seed: u64) -> Result<RunArtifact, CliError> {
    let mut snapshot = config.clone();
    snapshot.experiment.seed = seed;
    let problem = snapshot.problem()?;
    let started = Instant::now();
    let result = optimize(algorithm, &problem, &snapshot.optimizer_config(seed))?;
    let design = evaluate_design(&snapshot, &result.best.design)?;
    Ok(RunArtifact {
        config: snapshot.to_toml_string(),
        trace: result.trace.iter().map(TraceRecord::from).collect(),
        result: RunResult {
            algorithm,
            seed,
            feasible: result.feasible,
            evaluations: result.evaluations,
            best_cost: result.best.objective,
            best_genes: result.best.design,
            design,
            wall_clock_s: started.elapsed().as_secs_f64(),
        },
        optimization: Some(result),
    })
}

/// Runs one optimization and writes its artifact to `out`.
pub fn run_experiment(
    config: &ExperimentConfig,
    algorithm: Algorithm,
    seed: u64,
    out: &Path,
) -> Result<RunArtifact, CliError> {
    let artifact = execute(config, algorithm, seed)?;
    artifact.write(out)?;
    Ok(artifact)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub algorithm: Algorithm,
    pub runs: usize,
    pub feasible_runs: usize,
    pub mean_final_cost: f64,
    pub std_final_cost: f64,
    /// Final cost per seed, in seed-list order.
    pub final_costs: Vec<f64>,
}

/// Per-seed wins of `algorithm` over the first algorithm in the comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedCount {
    pub algorithm: Algorithm,
    pub versus: Algorithm,
    pub wins: usize,
    pub losses: usize,
    pub ties: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub seeds: Vec<u64>,
    pub rows: Vec<ComparisonRow>,
    /// Mean over seeds of each iteration's best cost, per algorithm.
    pub curves: Vec<(Algorithm, Vec<f64>)>,
    pub paired: Vec<PairedCount>,
    /// Every run's final record, algorithm-major then seed order.
    pub results: Vec<RunResult>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Runs every (algorithm, seed) pair on the same problem. Per-run artifacts
/// and the aggregate tables are written under `out` when given.
pub fn compare_trials(
    config: &ExperimentConfig,
    algorithms: &[Algorithm],
    seeds: &[u64],
    out: Option<&Path>,
) -> Result<Comparison, CliError> {
    if algorithms.is_empty() || seeds.is_empty() {
        return Err(CliError::Parameter("need at least one algorithm and one seed".into()));
    }
    let jobs: Vec<(Algorithm, u64)> = algorithms.iter().flat_map(|&a| seeds.iter().map(move |&s| (a, s))).collect();
    let runs: Vec<RunArtifact> = jobs
        .par_iter()
        .map(|&(a, s)| execute(config, a, s))
        .collect::<Result<_, _>>()?;

    let mut rows = Vec::new();
    let mut curves = Vec::new();
    for (k, &a) in algorithms.iter().enumerate() {
        let mine = &runs[k * seeds.len()..(k + 1) * seeds.len()];
        let finals: Vec<f64> = mine.iter().map(|r| r.result.best_cost).collect();
        let (mean, std) = mean_std(&finals);
        rows.push(ComparisonRow {
            algorithm: a,
            runs: mine.len(),
            feasible_runs: mine.iter().filter(|r| r.result.feasible).count(),
            mean_final_cost: mean,
            std_final_cost: std,
            final_costs: finals,
        });
        let len = mine.iter().map(|r| r.trace.len()).min().unwrap_or(0);
        let curve = (0..len)
            .map(|i| mine.iter().map(|r| r.trace[i].best_cost).sum::<f64>() / mine.len() as f64)
            .collect();
        curves.push((a, curve));
    }
    let reference = &rows[0];
    let paired = rows[1..]
        .iter()
        .map(|row| {
            let pairs = row.final_costs.iter().zip(&reference.final_costs);
            PairedCount {
                algorithm: row.algorithm,
                versus: reference.algorithm,
                wins: pairs.clone().filter(|(a, b)| a < b).count(),
                losses: pairs.clone().filter(|(a, b)| a > b).count(),
                ties: pairs.filter(|(a, b)| a == b).count(),
            }
        })
        .collect();
    let comparison = Comparison {
        seeds: seeds.to_vec(),
        rows,
        curves,
        paired,
        results: runs.iter().map(|r| r.result.clone()).collect(),
    };

    if let Some(dir) = out {
        for r in &runs {
            r.write(&dir.join(format!("{}-seed{}", r.result.algorithm, r.result.seed)))?;
        }
        comparison.write(dir)?;
    }
    Ok(comparison)
}

impl Comparison {
    /// Writes `comparison.csv`, `curves.csv` and `comparison.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let path = dir.join("comparison.csv");
        let mut w = csv::Writer::from_path(&path).map_err(|e| csv_io(&path, e))?;
        w.write_record(["algorithm", "runs", "feasible_runs", "mean_final_cost", "std_final_cost"])
            .map_err(|e| csv_io(&path, e))?;
        for r in &self.rows {
            w.write_record([
                r.algorithm.to_string(),
                r.runs.to_string(),
                r.feasible_runs.to_string(),
                r.mean_final_cost.to_string(),
                r.std_final_cost.to_string(),
            ])
            .map_err(|e| csv_io(&path, e))?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;

        let path = dir.join("curves.csv");
        let mut w = csv::Writer::from_path(&path).map_err(|e| csv_io(&path, e))?;
        let header: Vec<String> = std::iter::once("iteration".to_string())
            .chain(self.curves.iter().map(|(a, _)| a.to_string()))
            .collect();
        w.write_record(&header).map_err(|e| csv_io(&path, e))?;
        let len = self.curves.iter().map(|c| c.1.len()).min().unwrap_or(0);
        for i in 0..len {
            let row: Vec<String> = std::iter::once((i + 1).to_string())
                .chain(self.curves.iter().map(|c| c.1[i].to_string()))
                .collect();
            w.write_record(&row).map_err(|e| csv_io(&path, e))?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;

        let path = dir.join("comparison.json");
        let json = serde_json::to_string_pretty(self).map_err(|e| CliError::Parameter(e.to_string()))?;
        fs::write(&path, json + "\n").map_err(|e| CliError::io(&path, e))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Profile;

    pub(crate) fn tiny() -> ExperimentConfig {
        let mut c = ExperimentConfig::for_profile(Profile::Desk);
        c.optimizer.iterations = 2;
        c.optimizer.population = 4;
        c.coverage.time_step_s = 3600.0;
        c.coverage.duration_s = 86_400.0 - 3600.0;
        c
    }

    fn paper_design() -> DesignVector {
        DesignVector::new(1589e3, 6.0, 8.0, 41f64.to_radians())
    }

    #[test]
    fn report_is_pure_and_costed() {
        let c = tiny();
        let a = evaluate_design(&c, &paper_design()).unwrap();
        let b = evaluate_design(&c, &paper_design()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!((a.cost.constellation_total - 66.3).abs() < 0.05);
        assert_eq!(a.eta_per_slot.len(), 24);
        assert_eq!(a.feasible, a.notes.is_empty());
    }

    #[test]
    fn out_of_bounds_design_is_a_parameter_error() {
        let d = DesignVector::new(1589e3, 6.0, 0.0, 0.7);
        let e = evaluate_design(&tiny(), &d).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn too_wide_cone_is_infeasible_geometry() {
        let mut c = tiny();
        c.coverage.angle_deg = 170.0;
        let e = evaluate_design(&c, &paper_design()).unwrap_err();
        assert_eq!(e.exit_code(), 4, "{e}");
    }

    #[test]
    fn single_run_aggregates_to_itself() {
        let c = tiny();
        let cmp = compare_trials(&c, &[Algorithm::Improved], &[5], None).unwrap();
        let run = execute(&c, Algorithm::Improved, 5).unwrap();
        assert_eq!(cmp.rows.len(), 1);
        assert_eq!(cmp.rows[0].mean_final_cost, run.result.best_cost);
        assert_eq!(cmp.rows[0].std_final_cost, 0.0);
        assert_eq!(cmp.curves[0].1.len(), 2);
    }

    #[test]
    fn mean_and_sample_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
