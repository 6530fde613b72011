//! Command-line front end for `divisor-maxcut`: argument parsing, parallel
//! drivers, artifact formats and the end-to-end reports.

pub mod config;
pub mod drivers;
pub mod formats;
pub mod run;

pub use config::{Cli, CommandKind, OutputFormat, RunConfig, Target};
pub use run::{run, CliError, Outcome};
