//! Experiment harness around `spinchain-core`: JSON configuration, the
//! `evolve`, `sweep`, `compare-schemes` and `verify` jobs, and their CSV
//! output.

pub mod config;
pub mod csv;
pub mod experiments;

pub use config::{ConfigError, ExperimentConfig, Mode, NoiseConfig, SchemeName};
pub use csv::CsvTable;
pub use experiments::{run_compare_schemes, run_disorder_sweep, run_evolve, run_verify};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] spinchain_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
