//! File formats and the command-line frontend for `stochord-core`.
//!
//! The binary is a thin wrapper around [`cli::main_with`]; the parsers in
//! [`formats`] are usable on their own.

pub mod cli;
pub mod error;
pub mod formats;

pub use error::{CliError, CliResult};
