//! Front end for the `fewroots` binary: argument definitions, the six
//! subcommands and SVG rendering. Every subcommand emits one JSON report.

pub mod args;
pub mod commands;
pub mod error;
pub mod svg;

pub use args::Cli;
pub use commands::{run, Outcome};
pub use error::CliError;
