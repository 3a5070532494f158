//! File formats, a parallel pipeline runner and the `evalign` command line
//! on top of [`evalign_core`].

pub mod catalog;
pub mod cli;
mod error;
pub mod formats;
pub mod parallel;

pub use error::{CliError, ExitCode};
