pub mod commands;
pub mod config;
pub mod envelope;
pub mod error;

pub use commands::{run_command, Command};
pub use config::{parse_config, RunConfig};
pub use envelope::{emit_plot_data, PlotKind, ResultEnvelope};
pub use error::CliError;
