//! File formats, run configuration, reports and the command implementations
//! behind the `polylap` binary.
//!
//! Every command returns an [`commands::Outcome`] holding the exit code and
//! the text that the binary prints, so the commands can be driven from tests
//! without spawning a process.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
mod error;
pub mod graph_file;
pub mod report;
pub mod solution_file;

pub use commands::{exit, Outcome};
pub use error::{CliError, Result};
pub use report::Format;
