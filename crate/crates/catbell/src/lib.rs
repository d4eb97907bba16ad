//! Batch runner around `catbell-core`: configuration, protocols, result
//! files and golden fixtures.

pub mod config;
pub mod describe;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod protocols;
pub mod record;

pub use config::{ExperimentConfig, OutputFormat, Protocol};
pub use error::{CliError, Result};
pub use record::ResultRecord;

use std::path::{Path, PathBuf};

/// Command-line overrides for `run`.
#[derive(Debug, Clone, Default)]
pub struct RunOverrides {
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
}

/// Loads, runs and writes one experiment. Returns the record and the path
/// written.
pub fn run_file(config_path: &Path, overrides: &RunOverrides) -> Result<(ResultRecord, PathBuf)> {
    let mut config = ExperimentConfig::load(config_path)?;
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    if let Some(dir) = &overrides.output_dir {
        config.output.dir = dir.clone();
    }
    run_config(&config)
}

/// Runs a parsed configuration and writes `{dir}/{protocol}.{ext}`.
pub fn run_config(config: &ExperimentConfig) -> Result<(ResultRecord, PathBuf)> {
    let record = protocols::run_protocol(config)?;
    let ext = config.output.format.extension();
    let path = record::output_path(&config.output.dir, config.protocol.name(), ext);
    let contents = match config.output.format {
        OutputFormat::Csv => record.to_csv(),
        OutputFormat::Json => record.to_json(),
    };
    record::write_atomic(&path, &contents)?;
    Ok((record, path))
}
