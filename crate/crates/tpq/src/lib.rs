//! File formats, counterexample search and the `tpq` command-line tool on
//! top of [`tpq_core`].

pub mod cli;
pub mod error;
pub mod format;
pub mod locate;
pub mod probe;

pub use error::{CliError, CliResult};
