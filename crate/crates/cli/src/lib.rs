//! Batch driver: a [`RunConfig`] selects a command, its geometry and node
//! counts; reports are written as CSV/JSON into the output directory.

pub mod commands;
pub mod config;
pub mod error;

pub use commands::run;
pub use config::{Command, Data, Geometry, RunConfig, Tolerances};
pub use error::{CliError, CliResult};
