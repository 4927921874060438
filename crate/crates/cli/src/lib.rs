//! Command-line front end: configuration, CSV/JSON output and the three subcommands.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;

pub use args::{Cli, Command, RunArgs};
pub use commands::{run, Outcome};
pub use error::{CliError, CliResult};
