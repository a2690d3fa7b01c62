//! Command-line front end: config parsing and subcommands.

pub mod commands;
pub mod config;

pub use commands::{run, Cli, CSV_HEADER};
pub use config::RunConfig;
