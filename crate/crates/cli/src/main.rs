use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use leo_constellation::coverage::FootprintGeometry;
use leo_constellation::design::DesignVector;
use leo_constellation::link::{capacity_analysis, simulate_interference};
use leo_constellation::optim::Algorithm;
use leocon::{compare_trials, evaluate_design, run_experiment, CliError, ExperimentConfig, Profile};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "leocon", version, about = "LEO IoT constellation design and optimization")]
struct Cli {
    /// TOML configuration with dotted keys, merged over the profile defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Fidelity profile: paper (10 deg grid, 60 s) or desk (30 deg grid, 600 s).
    #[arg(long, global = true)]
    profile: Option<Profile>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for run artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct DesignArgs {
    #[arg(long, default_value_t = 1589.0)]
    altitude_km: f64,
    #[arg(long, default_value_t = 6)]
    planes: u32,
    #[arg(long, default_value_t = 8)]
    sats_per_plane: u32,
    #[arg(long, default_value_t = 41.0)]
    inclination_deg: f64,
}

impl DesignArgs {
    fn design(&self) -> DesignVector {
        DesignVector::new(
            self.altitude_km * 1e3,
            f64::from(self.planes),
            f64::from(self.sats_per_plane),
            self.inclination_deg.to_radians(),
        )
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full coverage, capacity and cost report for one design.
    Evaluate(DesignArgs),
    /// Run one optimizer and write config, trace and result.
    Optimize {
        #[arg(long, default_value = "improved")]
        algorithm: Algorithm,
    },
    /// Run several optimizers over the configured seed list.
    Compare {
        /// Comma-separated algorithm names; defaults to the configured list.
        #[arg(long, value_delimiter = ',')]
        algorithms: Vec<Algorithm>,
        /// Comma-separated seeds; defaults to the configured list.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
    },
    /// Coverage ratio per slot for one design.
    Coverage(DesignArgs),
    /// Link analytics at one altitude, optionally checked by simulation.
    Linkbudget {
        #[arg(long, default_value_t = 1589.0)]
        altitude_km: f64,
        /// Also run the interference simulation.
        #[arg(long)]
        monte_carlo: bool,
    },
}

#[derive(Serialize)]
struct CoverageOutput {
    eta_per_slot: Vec<f64>,
    eta_min: f64,
    eta_max: f64,
    mean_eta: f64,
    min_visible: u32,
}

#[derive(Serialize)]
struct LinkOutput {
    altitude_km: f64,
    min_elevation_deg: f64,
    angular_radius_deg: f64,
    footprint_area_km2: f64,
    mean_interference_w: f64,
    psi: f64,
    spectral_efficiency: f64,
    mean_rate_bps: f64,
    required_count: f64,
    simulated_interference_w: Option<f64>,
    simulated_std_error_w: Option<f64>,
}

fn emit<T: Serialize>(value: &T, out: Option<&PathBuf>, name: &str) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(value).map_err(|e| CliError::Parameter(e.to_string()))? + "\n";
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let path = dir.join(name);
        std::fs::write(&path, &json).map_err(|e| CliError::io(&path, e))?;
    }
    print!("{json}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => ExperimentConfig::load(path, cli.profile)?,
        None => {
            let c = ExperimentConfig::for_profile(cli.profile.unwrap_or(Profile::Paper));
            c.validate()?;
            c
        }
    };
    let seed = cli.seed.unwrap_or(config.experiment.seed);
    let out = cli.out.clone();

    match cli.command {
        Command::Evaluate(d) => emit(&evaluate_design(&config, &d.design())?, out.as_ref(), "report.json"),
        Command::Coverage(d) => {
            let r = evaluate_design(&config, &d.design())?;
            let c = CoverageOutput {
                eta_per_slot: r.eta_per_slot,
                eta_min: r.eta_min,
                eta_max: r.eta_max,
                mean_eta: r.mean_eta,
                min_visible: r.min_visible,
            };
            emit(&c, out.as_ref(), "coverage.json")
        }
        Command::Linkbudget { altitude_km, monte_carlo } => {
            let h = altitude_km * 1e3;
            let fp = FootprintGeometry::from_coverage_angle(h, config.coverage.angle_deg.to_radians())?;
            let env = config.link_environment().with_geometry(h, fp.min_elevation);
            let cap = capacity_analysis(&env, config.qos.capacity_bps, 1.0)?;
            let sim = if monte_carlo {
                Some(simulate_interference(&env, &config.monte_carlo())?)
            } else {
                None
            };
            let o = LinkOutput {
                altitude_km,
                min_elevation_deg: fp.min_elevation.to_degrees(),
                angular_radius_deg: fp.angular_radius.to_degrees(),
                footprint_area_km2: fp.area / 1e6,
                mean_interference_w: cap.mean_interference,
                psi: cap.psi,
                spectral_efficiency: cap.xi,
                mean_rate_bps: cap.mean_rate,
                required_count: cap.required_count,
                simulated_interference_w: sim.map(|s| s.mean),
                simulated_std_error_w: sim.map(|s| s.std_error),
            };
            emit(&o, out.as_ref(), "linkbudget.json")
        }
        Command::Optimize { algorithm } => {
            let dir = out.unwrap_or_else(|| PathBuf::from(&config.experiment.output_dir).join(format!("{algorithm}-seed{seed}")));
            let a = run_experiment(&config, algorithm, seed, &dir)?;
            let r = &a.result;
            println!("algorithm      {algorithm}");
            println!("seed           {seed}");
            println!("evaluations    {}", r.evaluations);
            println!("feasible       {}", r.feasible);
            println!("best cost      {}", r.best_cost);
            println!(
                "design         h={} km P={} N={} i={} deg",
                r.design.altitude_km, r.design.planes, r.design.sats_per_plane, r.design.inclination_deg
            );
            println!("eta_min        {}", r.design.eta_min);
            println!("min visible    {} (need {})", r.design.min_visible, r.design.required_count);
            println!("artifacts      {}", dir.display());
            Ok(())
        }
        Command::Compare { algorithms, seeds } => {
            let algorithms = if algorithms.is_empty() { config.experiment.algorithms.clone() } else { algorithms };
            let seeds = if seeds.is_empty() { config.experiment.seeds.clone() } else { seeds };
            let dir = out.unwrap_or_else(|| PathBuf::from(&config.experiment.output_dir).join("compare"));
            let cmp = compare_trials(&config, &algorithms, &seeds, Some(&dir))?;
            println!("algorithm,runs,feasible_runs,mean_final_cost,std_final_cost");
            for r in &cmp.rows {
                println!("{},{},{},{},{}", r.algorithm, r.runs, r.feasible_runs, r.mean_final_cost, r.std_final_cost);
            }
            for p in &cmp.paired {
                println!("# {} vs {}: {} wins, {} losses, {} ties", p.algorithm, p.versus, p.wins, p.losses, p.ties);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("leocon: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
