//! Text pulse programs and the `pulsecli` command surface.

pub mod cli;
pub mod commands;
pub mod config;
pub mod program;
pub mod report;

pub use cli::Cli;
pub use commands::{execute, CliError, Report};
pub use program::{parse, serialize, ParseError};
