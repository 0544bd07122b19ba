//! Batch execution: configuration, dispatch and report emission.

mod config;
mod dispatch;
mod emit;

pub use config::{default_runs, Format, Overrides, RunConfig, EXPERIMENTS};
pub use dispatch::dispatch;
pub use emit::{emit_report, render};

use std::path::PathBuf;

/// Name of the environment variable that caps ensemble workers.
pub const THREADS_ENV: &str = "COLLAPSE_LAB_THREADS";

/// Worker count from [`THREADS_ENV`]; `None` when unset.
pub fn threads_from_env() -> crate::Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(crate::Error::config(THREADS_ENV, format!("`{v}` is not a positive integer"))),
        },
    }
}

/// Loads the config (or starts from an empty document), applies the
/// command-line overrides, runs and emits.
pub fn run(config_path: Option<&PathBuf>, overrides: &Overrides) -> crate::Result<()> {
    let config = match config_path {
        Some(p) => RunConfig::load(p, overrides)?,
        None => RunConfig::parse_with("", overrides)?,
    };
    log::info!(
        "running {} with seed {} and {} runs (fingerprint {})",
        config.experiment(),
        config.seed(),
        config.runs(),
        config.fingerprint()
    );
    let report = dispatch(&config)?;
    emit_report(&report, config.format(), config.output_path().as_deref())
}
