//! Experiment runner behind the `wco` binary: configuration, pipelines,
//! presets, sweeps and their CSV/JSON outputs.

pub mod commands;
pub mod config;
pub mod output;
pub mod pipeline;
pub mod presets;
pub mod sweep;

pub use commands::{run, run_command, Cli, Command};
pub use config::ExperimentConfig;
