//! Experiment runner for LEO constellation design: configuration files,
//! single-design reports, optimization runs and multi-seed comparisons.

pub mod config;
pub mod error;
pub mod experiment;

pub use config::{ExperimentConfig, Profile};
pub use error::CliError;
pub use experiment::{compare_trials, evaluate_design, run_experiment, Comparison, EvaluationReport, RunArtifact};
