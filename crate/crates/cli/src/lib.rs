//! Experiment runner for the relay outage library: configuration parsing,
//! point and sweep runs, figure presets, and the acceptance self-test.

pub mod config;
pub mod error;
pub mod figures;
pub mod output;
pub mod run;
pub mod selftest;

pub use config::{ConfigBuilder, ConfigError, ExperimentConfig, Format};
pub use error::{CliError, CliResult};
pub use output::{Row, Table};
