//! Command-line front end: argument parsing, command drivers and run reports.

pub mod args;
pub mod commands;
pub mod report;

pub use args::{Cli, Command, GlobalArgs, Mode};
pub use commands::run;
pub use report::{RunReport, Status};
