//! Library side of the `stablegov` binary, split out so tests can drive
//! the commands without spawning a process.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod format;

pub use config::RunConfig;
pub use error::{CliError, Status};
