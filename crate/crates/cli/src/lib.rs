//! Library side of the `consensus` command-line tool: input parsing,
//! subcommand execution and report serialization.

pub mod commands;
pub mod error;
pub mod input;
pub mod report;

pub use commands::{execute, verify_builtin, Command, Flags, Outcome};
pub use error::CliError;
pub use input::{load_input, parse_input, InputDocument};
