//! Experiment configuration: a TOML file with flat dotted keys in
//! engineering units (dB, km, degrees), merged over a named profile.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use leo_constellation::coverage::{GridSpec, Timeline};
use leo_constellation::cost::CostModel;
use leo_constellation::design::{Bounds, DesignVector};
use leo_constellation::link::{db_to_linear, InterferenceMonteCarlo, LinkEnvironment};
use leo_constellation::optim::{Algorithm, BaselineParams, OptimizerConfig};
use leo_constellation::problem::ConstellationProblem;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// 10 deg grid, 60 s slots over one day.
    Paper,
    /// 30 deg grid, 600 s slots over one day.
    Desk,
}

impl FromStr for Profile {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "paper" => Ok(Profile::Paper),
            "desk" => Ok(Profile::Desk),
            _ => Err(CliError::Parameter(format!("unknown profile `{s}` (expected paper or desk)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSection {
    pub carrier_frequency_hz: f64,
    pub bandwidth_hz: f64,
    pub sat_gain_dbi: f64,
    pub dev_gain_dbi: f64,
    pub rain_loss_db: f64,
    pub rician_factor_db: f64,
    pub antennas: u32,
    pub sequence_length: u32,
    pub activity: f64,
    pub device_density_per_km2: f64,
    pub tx_power_dbw: f64,
    pub noise_power_dbm: f64,
    pub array_diameter_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageSection {
    pub angle_deg: f64,
    pub lat_min_deg: f64,
    pub lat_max_deg: f64,
    pub grid_step_deg: f64,
    pub start_s: f64,
    pub duration_s: f64,
    pub time_step_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QosSection {
    pub eta_threshold: f64,
    pub capacity_bps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostSection {
    pub satellite_mass_kg: f64,
    pub insurance_ratio: f64,
    pub manufacture_coeff: f64,
    pub launch_coeff: f64,
    pub launch_exponent: f64,
    pub launch_altitude_divisor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSection {
    pub altitude_min_km: f64,
    pub altitude_max_km: f64,
    pub planes_min: f64,
    pub planes_max: f64,
    pub sats_per_plane_min: f64,
    pub sats_per_plane_max: f64,
    pub inclination_min_deg: f64,
    pub inclination_max_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSection {
    pub population: usize,
    pub iterations: u32,
    pub mutation_threshold: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    /// Gaussian mutation scale as a fraction of each gene's range.
    pub mutation_scale_fraction: f64,
    /// 0 means "same as the population".
    pub parent_pool: usize,
    pub rho1: f64,
    pub rho2: f64,
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselinesSection {
    pub pso_inertia_start: f64,
    pub pso_inertia_end: f64,
    pub pso_cognitive: f64,
    pub pso_social: f64,
    pub pso_velocity_limit: f64,
    pub sca_amplitude: f64,
    pub gwo_a_start: f64,
    pub tabu_tenure: usize,
    pub tabu_altitude_step_km: f64,
    pub tabu_inclination_step_deg: f64,
    pub tabu_max_steps: u32,
    pub classical_mutation_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloSection {
    pub realizations: usize,
    pub devices_per_realization: f64,
    pub sample_fading: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub phase_factor: u32,
    pub seed: u64,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
    pub output_dir: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub profile: Profile,
    pub link: LinkSection,
    pub coverage: CoverageSection,
    pub qos: QosSection,
    pub cost: CostSection,
    pub bounds: BoundsSection,
    pub optimizer: OptimizerSection,
    pub baselines: BaselinesSection,
    pub monte_carlo: MonteCarloSection,
    pub experiment: ExperimentSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::for_profile(Profile::Paper)
    }
}

impl ExperimentConfig {
    pub fn for_profile(profile: Profile) -> Self {
        let (grid_step_deg, time_step_s) = match profile {
            Profile::Paper => (10.0, 60.0),
            Profile::Desk => (30.0, 600.0),
        };
        let b = BaselineParams::default();
        let o = OptimizerConfig::default();
        let c = CostModel::default();
        let mc = InterferenceMonteCarlo::default();
        Self {
            profile,
            link: LinkSection {
                carrier_frequency_hz: 5e9,
                bandwidth_hz: 250e6,
                sat_gain_dbi: 17.0,
                dev_gain_dbi: 3.0,
                rain_loss_db: 2.6,
                rician_factor_db: 10.0,
                antennas: 16,
                sequence_length: 100,
                activity: 0.005,
                device_density_per_km2: 8e-5,
                tx_power_dbw: 3.0,
                noise_power_dbm: -106.0,
                array_diameter_m: 0.5,
            },
            coverage: CoverageSection {
                angle_deg: 45.0,
                lat_min_deg: -60.0,
                lat_max_deg: 60.0,
                grid_step_deg,
                start_s: 0.0,
                // one day, last slot one step before the next midnight
                duration_s: 86_400.0 - time_step_s,
                time_step_s,
            },
            qos: QosSection {
                eta_threshold: 0.9,
                capacity_bps: 80e6,
            },
            cost: CostSection {
                satellite_mass_kg: c.satellite_mass,
                insurance_ratio: c.insurance_ratio,
                manufacture_coeff: c.manufacture_coeff,
                launch_coeff: c.launch_coeff,
                launch_exponent: c.launch_exponent,
                launch_altitude_divisor: c.launch_altitude_divisor,
            },
            bounds: BoundsSection {
                altitude_min_km: 500.0,
                altitude_max_km: 1800.0,
                planes_min: 4.0,
                planes_max: 20.0,
                sats_per_plane_min: 4.0,
                sats_per_plane_max: 20.0,
                inclination_min_deg: 20.0,
                inclination_max_deg: 60.0,
            },
            optimizer: OptimizerSection {
                population: o.population,
                iterations: o.iterations,
                mutation_threshold: o.mutation_threshold,
                alpha1: o.alpha1,
                alpha2: o.alpha2,
                mutation_scale_fraction: 0.1,
                parent_pool: 0,
                rho1: o.rho1,
                rho2: o.rho2,
                parallel: true,
            },
            baselines: BaselinesSection {
                pso_inertia_start: b.pso_inertia_start,
                pso_inertia_end: b.pso_inertia_end,
                pso_cognitive: b.pso_cognitive,
                pso_social: b.pso_social,
                pso_velocity_limit: b.pso_velocity_limit,
                sca_amplitude: b.sca_amplitude,
                gwo_a_start: b.gwo_a_start,
                tabu_tenure: b.tabu_tenure,
                tabu_altitude_step_km: 10.0,
                tabu_inclination_step_deg: 1.0,
                tabu_max_steps: b.tabu_max_steps,
                classical_mutation_scale: b.classical_mutation_scale,
            },
            monte_carlo: MonteCarloSection {
                realizations: mc.realizations,
                devices_per_realization: mc.devices_per_realization,
                sample_fading: mc.sample_fading,
                seed: mc.seed,
            },
            experiment: ExperimentSection {
                phase_factor: 1,
                seed: 1,
                seeds: (1..=20).collect(),
                algorithms: vec![Algorithm::Improved, Algorithm::ClassicalGa],
                output_dir: "runs".into(),
            },
        }
    }

    /// Parses `text` over the defaults of `profile`, or of the profile the
    /// text names, or of the paper profile.
    pub fn from_toml_str(text: &str, profile: Option<Profile>) -> Result<Self, CliError> {
        let overrides: toml::Table = text.parse().map_err(|e| CliError::Parameter(format!("config: {e}")))?;
        let named = match overrides.get("profile") {
            Some(toml::Value::String(s)) => Some(s.parse::<Profile>()?),
            Some(_) => return Err(CliError::Parameter("config: `profile` must be a string".into())),
            None => None,
        };
        let profile = profile.or(named).unwrap_or(Profile::Paper);
        let mut base = toml::Table::try_from(Self::for_profile(profile))
            .map_err(|e| CliError::Parameter(format!("config: {e}")))?;
        merge(&mut base, overrides);
        base.insert("profile".into(), toml::Value::String(profile_name(profile).into()));
        let cfg: Self = base.try_into().map_err(|e| CliError::Parameter(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, profile: Option<Profile>) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml_str(&text, profile)
    }

    /// Every key on its own `section.key = value` line.
    pub fn to_toml_string(&self) -> String {
        let table = toml::Table::try_from(self).expect("config serializes to a table");
        let mut out = String::new();
        flatten("", &table, &mut out);
        out
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.problem()?;
        self.optimizer_config(self.experiment.seed).validate()?;
        self.link_environment().validate()?;
        if self.experiment.seeds.is_empty() {
            return Err(CliError::Parameter("experiment.seeds must not be empty".into()));
        }
        if self.experiment.algorithms.is_empty() {
            return Err(CliError::Parameter("experiment.algorithms must not be empty".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec {
            lat_min: self.coverage.lat_min_deg,
            lat_max: self.coverage.lat_max_deg,
            step: self.coverage.grid_step_deg,
        }
    }

    pub fn timeline(&self) -> Timeline {
        Timeline {
            start: self.coverage.start_s,
            duration: self.coverage.duration_s,
            step: self.coverage.time_step_s,
        }
    }

    /// Linear SI radio parameters; geometry is filled in per design.
    pub fn link_environment(&self) -> LinkEnvironment {
        let l = &self.link;
        LinkEnvironment {
            carrier_frequency: l.carrier_frequency_hz,
            bandwidth: l.bandwidth_hz,
            sat_gain: db_to_linear(l.sat_gain_dbi),
            dev_gain: db_to_linear(l.dev_gain_dbi),
            rain_loss: db_to_linear(-l.rain_loss_db),
            rician_factor: db_to_linear(l.rician_factor_db),
            antennas: l.antennas,
            sequence_length: l.sequence_length,
            activity: l.activity,
            device_density: l.device_density_per_km2 / 1e6,
            tx_power: db_to_linear(l.tx_power_dbw),
            noise_var: db_to_linear(l.noise_power_dbm) * 1e-3,
            altitude: 1000e3,
            min_elevation: 0.0,
            array_diameter: l.array_diameter_m,
        }
    }

    pub fn cost_model(&self) -> CostModel {
        let c = &self.cost;
        CostModel {
            manufacture_coeff: c.manufacture_coeff,
            launch_coeff: c.launch_coeff,
            launch_exponent: c.launch_exponent,
            launch_altitude_divisor: c.launch_altitude_divisor,
            insurance_ratio: c.insurance_ratio,
            satellite_mass: c.satellite_mass_kg,
        }
    }

    pub fn design_bounds(&self) -> Result<Bounds, CliError> {
        let b = &self.bounds;
        Ok(Bounds::new(
            DesignVector::new(
                b.altitude_min_km * 1e3,
                b.planes_min,
                b.sats_per_plane_min,
                b.inclination_min_deg.to_radians(),
            ),
            DesignVector::new(
                b.altitude_max_km * 1e3,
                b.planes_max,
                b.sats_per_plane_max,
                b.inclination_max_deg.to_radians(),
            ),
        )?)
    }

    pub fn problem(&self) -> Result<ConstellationProblem, CliError> {
        let p = ConstellationProblem {
            grid: self.grid(),
            timeline: self.timeline(),
            link: self.link_environment(),
            coverage_angle: self.coverage.angle_deg.to_radians(),
            eta_threshold: self.qos.eta_threshold,
            capacity_target: self.qos.capacity_bps,
            cost: self.cost_model(),
            phase_factor: self.experiment.phase_factor,
            bounds: self.design_bounds()?,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn optimizer_config(&self, seed: u64) -> OptimizerConfig {
        let o = &self.optimizer;
        let b = &self.baselines;
        let widths = self.design_bounds().map(|b| b.width()).unwrap_or([0.0; 4]);
        OptimizerConfig {
            population: o.population,
            iterations: o.iterations,
            mutation_threshold: o.mutation_threshold,
            alpha1: o.alpha1,
            alpha2: o.alpha2,
            mutation_scales: Some(widths.map(|w| w * o.mutation_scale_fraction)),
            parent_pool: (o.parent_pool > 0).then_some(o.parent_pool),
            rho1: o.rho1,
            rho2: o.rho2,
            seed,
            parallel: o.parallel,
            baselines: BaselineParams {
                pso_inertia_start: b.pso_inertia_start,
                pso_inertia_end: b.pso_inertia_end,
                pso_cognitive: b.pso_cognitive,
                pso_social: b.pso_social,
                pso_velocity_limit: b.pso_velocity_limit,
                sca_amplitude: b.sca_amplitude,
                gwo_a_start: b.gwo_a_start,
                tabu_tenure: b.tabu_tenure,
                tabu_altitude_step: b.tabu_altitude_step_km * 1e3,
                tabu_inclination_step: b.tabu_inclination_step_deg.to_radians(),
                tabu_max_steps: b.tabu_max_steps,
                classical_mutation_scale: b.classical_mutation_scale,
            },
        }
    }

    pub fn monte_carlo(&self) -> InterferenceMonteCarlo {
        let m = &self.monte_carlo;
        InterferenceMonteCarlo {
            realizations: m.realizations,
            devices_per_realization: m.devices_per_realization,
            sample_fading: m.sample_fading,
            seed: m.seed,
        }
    }
}

fn profile_name(p: Profile) -> &'static str {
    match p {
        Profile::Paper => "paper",
        Profile::Desk => "desk",
    }
}

fn merge(base: &mut toml::Table, overrides: toml::Table) {
    for (k, v) in overrides {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut String) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            toml::Value::Table(t) => flatten(&key, t, out),
            v => {
                let _ = writeln!(out, "{key} = {v}");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_tables() {
        let c = ExperimentConfig::default();
        assert_eq!(c.qos.eta_threshold, 0.9);
        assert_eq!(c.qos.capacity_bps, 80e6);
        assert_eq!((c.bounds.altitude_min_km, c.bounds.altitude_max_km), (500.0, 1800.0));
        assert_eq!((c.optimizer.population, c.optimizer.iterations), (30, 50));
        assert_eq!(c.optimizer.mutation_threshold, 0.3);
        assert_eq!((c.optimizer.alpha1, c.optimizer.alpha2), (2.0, 1.0));
        assert_eq!((c.optimizer.rho1, c.optimizer.rho2), (1000.0, 1000.0));
        assert_eq!(c.timeline().slots().unwrap().len(), 1440);
        assert_eq!(c.grid().points().unwrap().len(), 432);
        let env = c.link_environment();
        assert!((env.rain_loss - 0.5495).abs() < 1e-4);
        assert_eq!(env, LinkEnvironment::reference(1000e3, 0.0));
    }

    #[test]
    fn round_trip() {
        for p in [Profile::Paper, Profile::Desk] {
            let c = ExperimentConfig::for_profile(p);
            let text = c.to_toml_string();
            assert!(text.lines().all(|l| l.contains(" = ")));
            assert!(text.contains("link.carrier_frequency_hz = "));
            assert_eq!(ExperimentConfig::from_toml_str(&text, None).unwrap(), c);
        }
        let mut c = ExperimentConfig::for_profile(Profile::Desk);
        c.link.tx_power_dbw = 0.1 + 0.2;
        c.experiment.seeds = vec![7, 3];
        assert_eq!(ExperimentConfig::from_toml_str(&c.to_toml_string(), None).unwrap(), c);
    }

    #[test]
    fn overrides_merge_over_profile() {
        let c = ExperimentConfig::from_toml_str("profile = \"desk\"\noptimizer.iterations = 7\n", None).unwrap();
        assert_eq!(c.coverage.grid_step_deg, 30.0);
        assert_eq!(c.optimizer.iterations, 7);
        let c = ExperimentConfig::from_toml_str("[qos]\neta_threshold = 0.8\n", Some(Profile::Desk)).unwrap();
        assert_eq!(c.profile, Profile::Desk);
        assert_eq!(c.qos.eta_threshold, 0.8);
        assert_eq!(c.qos.capacity_bps, 80e6);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ExperimentConfig::from_toml_str("link.carrier_frequency = 5e9", None).is_err());
        assert!(ExperimentConfig::from_toml_str("profile = \"fast\"", None).is_err());
        assert!(ExperimentConfig::from_toml_str("bounds.planes_min = 30.0", None).is_err());
        assert!(ExperimentConfig::from_toml_str("optimizer.population = 1", None).is_err());
        assert!(ExperimentConfig::from_toml_str("experiment.algorithms = [\"anneal\"]", None).is_err());
        assert!(ExperimentConfig::from_toml_str("coverage.time_step_s = 0.0", None).is_err());
    }
}
