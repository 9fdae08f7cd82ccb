//! File formats, benchmark harness and command line for `fml-core`.

pub mod bench;
pub mod cli;
pub mod error;
pub mod family;
pub mod format;
pub mod runner;

pub use error::{CliError, CliResult};
