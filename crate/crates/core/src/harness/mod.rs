//! Experiment runner: configuration, metrics, per-seed runs and CSV output.

pub mod config;
pub mod metrics;
pub mod run;

pub use config::{parse_overrides, parse_pairs, Algorithm, EnvConfig, ExperimentConfig};
pub use metrics::{fa_value_snapshot, running_return, value_error};
pub use run::{aggregate, drive, run, run_seed, write_outputs, EpisodicLearner};
