//! Configuration files, result files and the command-line driver for
//! `alnet-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use cli::{run_cli, run_config};
pub use config::{Experiment, RunConfig};
pub use error::CliError;
pub use output::{write_outputs, Manifest, Report};
pub use run::execute;
